#pragma once

#include <cstdint>
#include <vector>

#include "nbv/field.hpp"
#include "nbv/render.hpp"

namespace nbv {

// Voxelise both fields at res, binarise at threshold, intersection over
// union. Returns 1 when both are empty.
double iou(const OccupancyField& pred, const OccupancyField& gt, int res = 64,
           double threshold = 0.5);

// 10 * log10(1 / MSE) over all rgb channels; identical images return the
// 99 dB cap so CSV output stays numeric.
inline constexpr double kPsnrCap = 99.0;
double psnr(const Image& a, const Image& b);

struct EvalReport {
  double iou = 0.0;
  double psnr_mean = 0.0;
  std::vector<double> psnr_per_view;
  int n_eval_views = 0;
  std::uint64_t eval_seed = 0;
};

// Renders both fields from n_views seeded uniform sphere cameras; per-view
// PSNR plus mean. Deterministic per seed.
EvalReport eval_views_psnr(const OccupancyField& pred, const OccupancyField& gt,
                           int n_views = 20, std::uint64_t seed = 0,
                           int render_res = 64, int n_samples = 128);

}  // namespace nbv
