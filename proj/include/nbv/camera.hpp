#pragma once

#include <cstdint>
#include <vector>

#include "nbv/geometry.hpp"

namespace nbv {

// Pinhole camera looking at the origin. Search-space cameras sit on the
// sphere of radius kCameraRadius; gradient-policy probes may be slightly
// off it, so construction accepts any nonzero position.
struct Camera {
  Vec3 position{0, 0, kCameraRadius};
  Vec3 forward{0, 0, -1};
  Vec3 up{0, 1, 0};
  Vec3 right{1, 0, 0};
  double fov_deg = 60.0;
  int res = 128;

  static Camera looking_at_origin(const Vec3& position, double fov_deg = 60.0,
                                  int res = 128);
};

struct Ray {
  Vec3 origin;
  Vec3 dir;  // unit length
  double t_near = 0.0;
  double t_far = 1.0;

  Vec3 at(double t) const { return origin + dir * t; }
};

// Ray through the center of pixel (px, py); px is the column, py the row.
// The integration span covers the bounding sphere of the canonical box:
// t in [|cam| - sqrt(3), |cam| + sqrt(3)], with t_near floored at 0.05.
Ray pixel_ray(const Camera& cam, int px, int py);

// One ray per pixel, row-major.
std::vector<Ray> pixel_rays(const Camera& cam);

// n pixel rays sampled uniformly without replacement (with replacement when
// n exceeds the pixel count). Deterministic per seed.
std::vector<Ray> sample_rays(const Camera& cam, int n, std::uint64_t seed);

}  // namespace nbv
