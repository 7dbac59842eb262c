#pragma once

#include <vector>

#include "nbv/camera.hpp"
#include "nbv/field.hpp"

namespace nbv {

// Midpoint samples along [t_near, t_far]: ts[i] = t_near + (i + 0.5) * dt.
struct RayQuadrature {
  Ray ray;
  std::vector<double> ts;
  std::vector<double> occupancy;
  double dt = 0.0;

  int size() const { return static_cast<int>(ts.size()); }
  Vec3 position(int i) const { return ray.at(ts[i]); }
};

RayQuadrature quadrature(const OccupancyField& field, const Ray& ray,
                         int n_samples = 128);

// T_i = exp(-sum_{j<i} o_j * dt); T_0 = 1. Left-Riemann discretisation of
// the occupancy integral, so colour accumulates up to occlusions.
std::vector<double> transmittance(const RayQuadrature& q);

// Transmittance after the last sample.
double final_transmittance(const RayQuadrature& q);

// C = sum_i T_i * o_i * c_i * dt, componentwise, clamped to [0,1].
Vec3 composite_colour(const OccupancyField& field, const Ray& ray,
                      int n_samples = 128);
Vec3 composite_colour(const OccupancyField& field, const RayQuadrature& q);

// s(r) = 1 - T(t_far): probability the ray hits anything.
double silhouette(const RayQuadrature& q);
double silhouette(const OccupancyField& field, const Ray& ray,
                  int n_samples = 128);

struct Image {
  int res = 0;
  std::vector<float> rgb;  // res*res*3, row-major
  std::vector<float> sil;  // res*res

  float* pixel(int px, int py) { return &rgb[(static_cast<std::size_t>(py) * res + px) * 3]; }
  const float* pixel(int px, int py) const {
    return &rgb[(static_cast<std::size_t>(py) * res + px) * 3];
  }
};

// Per-pixel composite colour + silhouette. The parallel kernel writes
// disjoint pixels, so its output is bit-identical to the serial reference.
Image render_image(const OccupancyField& field, const Camera& cam,
                   int n_samples = 128);
Image render_image_serial(const OccupancyField& field, const Camera& cam,
                          int n_samples = 128);

}  // namespace nbv
