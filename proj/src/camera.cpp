#include "nbv/camera.hpp"

#include <cmath>
#include <numeric>

#include "nbv/errors.hpp"
#include "nbv/rng.hpp"

namespace nbv {

Camera Camera::looking_at_origin(const Vec3& position, double fov_deg, int res) {
  if (!(norm(position) > 1e-12))
    throw DomainError("camera position must be away from the origin");
  if (!(fov_deg > 0.0 && fov_deg < 180.0))
    throw DomainError("camera fov must be in (0, 180) degrees");
  if (res < 1) throw DomainError("camera resolution must be >= 1");

  Camera cam;
  cam.position = position;
  cam.forward = normalized(-position);
  const Vec3 world_up{0, 0, 1};
  Vec3 up = world_up - cam.forward * dot(world_up, cam.forward);
  if (norm(up) < 1e-9) {
    // Pole-on view: world up is parallel to the axis.
    const Vec3 fallback{1, 0, 0};
    up = fallback - cam.forward * dot(fallback, cam.forward);
  }
  cam.up = normalized(up);
  cam.right = normalized(cross(cam.forward, cam.up));
  cam.fov_deg = fov_deg;
  cam.res = res;
  return cam;
}

Ray pixel_ray(const Camera& cam, int px, int py) {
  const double half_tan = std::tan(cam.fov_deg * M_PI / 360.0);
  const double u = ((px + 0.5) / cam.res * 2.0 - 1.0) * half_tan;
  const double v = ((py + 0.5) / cam.res * 2.0 - 1.0) * half_tan;

  Ray ray;
  ray.origin = cam.position;
  ray.dir = normalized(cam.forward + cam.right * u + cam.up * v);
  const double dist = norm(cam.position);
  ray.t_near = std::max(dist - std::sqrt(3.0), 0.05);
  ray.t_far = dist + std::sqrt(3.0);
  return ray;
}

std::vector<Ray> pixel_rays(const Camera& cam) {
  std::vector<Ray> rays;
  rays.reserve(static_cast<std::size_t>(cam.res) * cam.res);
  for (int py = 0; py < cam.res; ++py)
    for (int px = 0; px < cam.res; ++px) rays.push_back(pixel_ray(cam, px, py));
  return rays;
}

std::vector<Ray> sample_rays(const Camera& cam, int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_rays needs n >= 1");
  const std::int64_t total = static_cast<std::int64_t>(cam.res) * cam.res;
  Rng rng(seed);
  std::vector<Ray> rays;
  rays.reserve(n);

  if (n > total) {
    for (int i = 0; i < n; ++i) {
      const std::int64_t id = static_cast<std::int64_t>(rng.below(total));
      rays.push_back(pixel_ray(cam, static_cast<int>(id % cam.res),
                               static_cast<int>(id / cam.res)));
    }
    return rays;
  }

  // Partial Fisher-Yates: the first n entries are a uniform sample without
  // replacement.
  std::vector<std::int32_t> ids(total);
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < n; ++i) {
    const std::int64_t j = i + static_cast<std::int64_t>(rng.below(total - i));
    std::swap(ids[i], ids[j]);
    rays.push_back(pixel_ray(cam, static_cast<int>(ids[i] % cam.res),
                             static_cast<int>(ids[i] / cam.res)));
  }
  return rays;
}

}  // namespace nbv
