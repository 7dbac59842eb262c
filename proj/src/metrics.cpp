#include "nbv/metrics.hpp"

#include <cmath>

#include "nbv/errors.hpp"
#include "nbv/rng.hpp"
#include "nbv/voxel_grid.hpp"

namespace nbv {

double iou(const OccupancyField& pred, const OccupancyField& gt, int res,
           double threshold) {
  const VoxelGrid a = voxelize(pred, res);
  const VoxelGrid b = voxelize(gt, res);
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const bool pa = a.values[i] > threshold;
    const bool pb = b.values[i] > threshold;
    inter += pa && pb;
    uni += pa || pb;
  }
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double psnr(const Image& a, const Image& b) {
  if (a.res != b.res || a.rgb.size() != b.rgb.size())
    throw DomainError("psnr needs images of identical shape");
  double se = 0.0;
  for (std::size_t i = 0; i < a.rgb.size(); ++i) {
    const double d = static_cast<double>(a.rgb[i]) - b.rgb[i];
    se += d * d;
  }
  const double mse = se / a.rgb.size();
  if (mse <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

EvalReport eval_views_psnr(const OccupancyField& pred, const OccupancyField& gt,
                           int n_views, std::uint64_t seed, int render_res,
                           int n_samples) {
  if (n_views < 1) throw DomainError("eval_views_psnr needs n_views >= 1");
  EvalReport rep;
  rep.n_eval_views = n_views;
  rep.eval_seed = seed;

  Rng rng(seed);
  double acc = 0.0;
  for (int v = 0; v < n_views; ++v) {
    const Camera cam =
        Camera::looking_at_origin(rng.on_sphere(kCameraRadius), 60.0, render_res);
    const Image ia = render_image(pred, cam, n_samples);
    const Image ib = render_image(gt, cam, n_samples);
    const double p = psnr(ia, ib);
    rep.psnr_per_view.push_back(p);
    acc += p;
  }
  rep.psnr_mean = acc / n_views;
  return rep;
}

}  // namespace nbv
