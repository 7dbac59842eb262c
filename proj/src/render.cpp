#include "nbv/render.hpp"

#include <cmath>

#include "nbv/errors.hpp"
#include "nbv/parallel.hpp"

namespace nbv {

RayQuadrature quadrature(const OccupancyField& field, const Ray& ray,
                         int n_samples) {
  if (n_samples < 3) throw DomainError("quadrature needs n_samples >= 3");
  if (!(ray.t_near > 0.0 && ray.t_near < ray.t_far))
    throw DomainError("quadrature needs 0 < t_near < t_far");

  RayQuadrature q;
  q.ray = ray;
  q.dt = (ray.t_far - ray.t_near) / n_samples;
  q.ts.resize(n_samples);
  q.occupancy.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    q.ts[i] = ray.t_near + (i + 0.5) * q.dt;
    q.occupancy[i] = field.occupancy_at(ray.at(q.ts[i]));
  }
  return q;
}

std::vector<double> transmittance(const RayQuadrature& q) {
  std::vector<double> T(q.size());
  double acc = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    T[i] = std::exp(-acc);
    acc += q.occupancy[i] * q.dt;
  }
  return T;
}

double final_transmittance(const RayQuadrature& q) {
  double acc = 0.0;
  for (int i = 0; i < q.size(); ++i) acc += q.occupancy[i] * q.dt;
  return std::exp(-acc);
}

Vec3 composite_colour(const OccupancyField& field, const RayQuadrature& q) {
  Vec3 c_out;
  double acc = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    const double o = q.occupancy[i];
    if (o > 0.0) {
      const double w = std::exp(-acc) * o * q.dt;
      c_out += field.colour_at(q.position(i)) * w;
    }
    acc += o * q.dt;
  }
  return clamp01(c_out);
}

Vec3 composite_colour(const OccupancyField& field, const Ray& ray,
                      int n_samples) {
  return composite_colour(field, quadrature(field, ray, n_samples));
}

double silhouette(const RayQuadrature& q) { return 1.0 - final_transmittance(q); }

double silhouette(const OccupancyField& field, const Ray& ray, int n_samples) {
  return silhouette(quadrature(field, ray, n_samples));
}

namespace {

Image render_impl(const OccupancyField& field, const Camera& cam, int n_samples,
                  bool parallel) {
  Image img;
  img.res = cam.res;
  img.rgb.assign(static_cast<std::size_t>(cam.res) * cam.res * 3, 0.0f);
  img.sil.assign(static_cast<std::size_t>(cam.res) * cam.res, 0.0f);

  const int threads = parallel ? worker_count() : 1;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int py = 0; py < cam.res; ++py) {
    for (int px = 0; px < cam.res; ++px) {
      const RayQuadrature q = quadrature(field, pixel_ray(cam, px, py), n_samples);
      const Vec3 c = composite_colour(field, q);
      float* out = img.pixel(px, py);
      out[0] = static_cast<float>(c.x);
      out[1] = static_cast<float>(c.y);
      out[2] = static_cast<float>(c.z);
      img.sil[static_cast<std::size_t>(py) * cam.res + px] =
          static_cast<float>(silhouette(q));
    }
  }
  return img;
}

}  // namespace

Image render_image(const OccupancyField& field, const Camera& cam, int n_samples) {
  return render_impl(field, cam, n_samples, true);
}

Image render_image_serial(const OccupancyField& field, const Camera& cam,
                          int n_samples) {
  return render_impl(field, cam, n_samples, false);
}

}  // namespace nbv
