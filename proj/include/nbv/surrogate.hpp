#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "nbv/camera.hpp"
#include "nbv/field.hpp"
#include "nbv/voxel_grid.hpp"

namespace nbv {

// How the prior (the "not yet reconstructed" guess) is corrupted away from
// ground truth: blur over a fixed low-discrepancy point set, an exponential
// probability warp, and smooth value noise blended in.
struct PriorSpec {
  double blur_radius = 0.1;       // world units; 0 disables the blur
  double noise_amplitude = 0.5;   // eta in [0,1]
  double noise_scale = 0.45;      // world units per noise lattice cell
  double corruption_beta = 1.6;   // warp exponent, > 0

  void validate() const;
};

// Deterministic smooth value noise in [0,1]: trilinear blend of hashed
// lattice values with a smoothstep fade.
double value_noise(const Vec3& p, double scale, std::uint64_t seed);

// o_prior(p) = clamp((1 - eta) * recalibrate(blur(o_gt)(p), gamma)
//                    + eta * noise(p)).
// Pure in (gt, spec, seed); identity when eta = 0, blur_radius = 0, gamma = 1.
std::shared_ptr<const OccupancyField> make_prior(
    std::shared_ptr<const OccupancyField> gt, const PriorSpec& spec,
    std::uint64_t seed);

// Stand-in for a learned multi-view reconstructor: a confidence grid W
// starts at zero and is raised to 1 along acquired view frusta up to the
// first ground-truth surface crossing (occlusion-aware). The predicted
// field blends prior toward ground truth by the interpolated confidence.
//
// acquire_view mutates state and needs exclusive access; predicted_field
// queries are safe concurrently between acquisitions.
class SurrogateReconstructor {
 public:
  SurrogateReconstructor(std::shared_ptr<const OccupancyField> gt,
                         const PriorSpec& prior_spec, std::uint64_t seed,
                         int res_W = 64, int res_acq = 64);

  // Camera must sit on the search sphere within 1e-6.
  void acquire_view(const Camera& cam);
  void acquire_view_serial(const Camera& cam);

  // o_pred(p) = w(p) * o_gt(p) + (1 - w(p)) * o_prior(p), w = trilinear W.
  std::shared_ptr<const OccupancyField> predicted_field() const;

  const VoxelGrid& confidence() const { return *confidence_; }
  const std::vector<Camera>& acquired() const { return acquired_; }
  const OccupancyField& ground_truth() const { return *gt_; }
  int acquisition_resolution() const { return res_acq_; }

 private:
  void acquire_impl(const Camera& cam, bool parallel);

  std::shared_ptr<const OccupancyField> gt_;
  std::shared_ptr<const OccupancyField> prior_;
  std::shared_ptr<VoxelGrid> confidence_;
  std::vector<Camera> acquired_;
  int res_acq_;
};

}  // namespace nbv
