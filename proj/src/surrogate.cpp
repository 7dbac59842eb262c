#include "nbv/surrogate.hpp"

#include <atomic>
#include <cmath>

#include "nbv/errors.hpp"
#include "nbv/parallel.hpp"
#include "nbv/render.hpp"
#include "nbv/rng.hpp"
#include "nbv/uncertainty.hpp"

namespace nbv {

void PriorSpec::validate() const {
  if (!(blur_radius >= 0.0) || !std::isfinite(blur_radius))
    throw DomainError("prior blur_radius must be >= 0");
  if (!(noise_amplitude >= 0.0 && noise_amplitude <= 1.0))
    throw DomainError("prior noise_amplitude must be in [0,1]");
  if (!(noise_scale > 0.0) || !std::isfinite(noise_scale))
    throw DomainError("prior noise_scale must be > 0");
  if (!(corruption_beta > 0.0) || !std::isfinite(corruption_beta))
    throw DomainError("prior corruption_beta must be > 0");
}

namespace {

double lattice_value(std::int64_t ix, std::int64_t iy, std::int64_t iz,
                     std::uint64_t seed) {
  std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(ix)));
  h = mix64(h ^ mix64(static_cast<std::uint64_t>(iy)));
  h = mix64(h ^ mix64(static_cast<std::uint64_t>(iz)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double fade(double t) { return t * t * (3.0 - 2.0 * t); }

}  // namespace

double value_noise(const Vec3& p, double scale, std::uint64_t seed) {
  const double gx = p.x / scale, gy = p.y / scale, gz = p.z / scale;
  const double fx = std::floor(gx), fy = std::floor(gy), fz = std::floor(gz);
  const std::int64_t ix = static_cast<std::int64_t>(fx);
  const std::int64_t iy = static_cast<std::int64_t>(fy);
  const std::int64_t iz = static_cast<std::int64_t>(fz);
  const double tx = fade(gx - fx), ty = fade(gy - fy), tz = fade(gz - fz);

  double c[2][2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int d = 0; d < 2; ++d)
        c[a][b][d] = lattice_value(ix + a, iy + b, iz + d, seed);

  const double c00 = c[0][0][0] + (c[1][0][0] - c[0][0][0]) * tx;
  const double c10 = c[0][1][0] + (c[1][1][0] - c[0][1][0]) * tx;
  const double c01 = c[0][0][1] + (c[1][0][1] - c[0][0][1]) * tx;
  const double c11 = c[0][1][1] + (c[1][1][1] - c[0][1][1]) * tx;
  const double c0 = c00 + (c10 - c00) * ty;
  const double c1 = c01 + (c11 - c01) * ty;
  return c0 + (c1 - c0) * tz;
}

namespace {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

constexpr int kBlurSamples = 8;

// Fixed Halton(2,3,5) point set mapped into the unit ball.
std::vector<Vec3> blur_offsets(double radius) {
  std::vector<Vec3> offs;
  offs.reserve(kBlurSamples);
  for (int i = 1; i <= kBlurSamples; ++i) {
    const double z = 2.0 * halton(i, 2) - 1.0;
    const double phi = 2.0 * M_PI * halton(i, 3);
    const double r = radius * std::cbrt(halton(i, 5));
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    offs.push_back({r * s * std::cos(phi), r * s * std::sin(phi), r * z});
  }
  return offs;
}

class PriorField final : public OccupancyField {
 public:
  PriorField(std::shared_ptr<const OccupancyField> gt, const PriorSpec& spec,
             std::uint64_t seed)
      : gt_(std::move(gt)),
        spec_(spec),
        seed_(seed),
        offsets_(spec.blur_radius > 0.0 ? blur_offsets(spec.blur_radius)
                                        : std::vector<Vec3>{}) {}

  double occupancy_at(const Vec3& p) const override {
    if (!bounds().contains(p)) return 0.0;
    double base;
    if (offsets_.empty()) {
      base = gt_->occupancy_at(p);
    } else {
      double acc = 0.0;
      for (const Vec3& off : offsets_) acc += gt_->occupancy_at(p + off);
      base = acc / offsets_.size();
    }
    base = recalibrate(base, spec_.corruption_beta);
    const double eta = spec_.noise_amplitude;
    const double n = value_noise(p, spec_.noise_scale, seed_);
    return clamp01((1.0 - eta) * base + eta * n);
  }

  Vec3 colour_at(const Vec3& p) const override {
    if (!bounds().contains(p)) return {0, 0, 0};
    const double eta = spec_.noise_amplitude;
    const Vec3 base = gt_->colour_at(p);
    const Vec3 n{value_noise(p, spec_.noise_scale, mix64(seed_ ^ 1)),
                 value_noise(p, spec_.noise_scale, mix64(seed_ ^ 2)),
                 value_noise(p, spec_.noise_scale, mix64(seed_ ^ 3))};
    return clamp01(base * (1.0 - eta) + n * eta);
  }

  Aabb bounds() const override { return gt_->bounds(); }
  const char* kind() const override { return "prior"; }

 private:
  std::shared_ptr<const OccupancyField> gt_;
  PriorSpec spec_;
  std::uint64_t seed_;
  std::vector<Vec3> offsets_;
};

class PredictedField final : public OccupancyField {
 public:
  PredictedField(std::shared_ptr<const OccupancyField> gt,
                 std::shared_ptr<const OccupancyField> prior,
                 std::shared_ptr<const VoxelGrid> confidence)
      : gt_(std::move(gt)), prior_(std::move(prior)), w_(std::move(confidence)) {}

  double occupancy_at(const Vec3& p) const override {
    const double w = w_->box.contains(p) ? w_->sample(p) : 0.0;
    if (w >= 1.0) return gt_->occupancy_at(p);
    return w * gt_->occupancy_at(p) + (1.0 - w) * prior_->occupancy_at(p);
  }

  Vec3 colour_at(const Vec3& p) const override {
    const double w = w_->box.contains(p) ? w_->sample(p) : 0.0;
    if (w >= 1.0) return gt_->colour_at(p);
    return gt_->colour_at(p) * w + prior_->colour_at(p) * (1.0 - w);
  }

  Aabb bounds() const override { return gt_->bounds(); }
  const char* kind() const override { return "surrogate-predicted"; }

 private:
  std::shared_ptr<const OccupancyField> gt_;
  std::shared_ptr<const OccupancyField> prior_;
  std::shared_ptr<const VoxelGrid> w_;
};

}  // namespace

std::shared_ptr<const OccupancyField> make_prior(
    std::shared_ptr<const OccupancyField> gt, const PriorSpec& spec,
    std::uint64_t seed) {
  spec.validate();
  return std::make_shared<PriorField>(std::move(gt), spec, seed);
}

SurrogateReconstructor::SurrogateReconstructor(
    std::shared_ptr<const OccupancyField> gt, const PriorSpec& prior_spec,
    std::uint64_t seed, int res_W, int res_acq)
    : gt_(std::move(gt)), res_acq_(res_acq) {
  if (res_W < 2) throw DomainError("res_W must be >= 2");
  if (res_acq < 2) throw DomainError("res_acq must be >= 2");
  prior_ = make_prior(gt_, prior_spec, seed);
  confidence_ = std::make_shared<VoxelGrid>(res_W, res_W, res_W, canonical_bounds());
}

namespace {

void check_on_sphere(const Camera& cam) {
  if (std::abs(norm(cam.position) - kCameraRadius) > 1e-6)
    throw PoseError("camera is off the search sphere");
}

}  // namespace

void SurrogateReconstructor::acquire_impl(const Camera& cam, bool parallel) {
  check_on_sphere(cam);
  Camera acq = cam;
  acq.res = res_acq_;

  VoxelGrid& w = *confidence_;
  const OccupancyField& gt = *gt_;
  const int threads = parallel ? worker_count() : 1;

  // Marking writes the same value everywhere, so racing rays are benign;
  // atomic_ref keeps them well-defined.
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int py = 0; py < res_acq_; ++py) {
    for (int px = 0; px < res_acq_; ++px) {
      const RayQuadrature q = quadrature(gt, pixel_ray(acq, px, py), 128);
      for (int i = 0; i < q.size(); ++i) {
        const Vec3 p = q.position(i);
        if (w.box.contains(p)) {
          int ci, cj, ck;
          w.cell_of(p, ci, cj, ck);
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              for (int c = 0; c < 2; ++c)
                std::atomic_ref<float>(w.at(ci + a, cj + b, ck + c))
                    .store(1.0f, std::memory_order_relaxed);
        }
        // Stop after the first confident ground-truth hit: the view cannot
        // see behind it.
        if (q.occupancy[i] >= 0.5) break;
      }
    }
  }
  acquired_.push_back(cam);
}

void SurrogateReconstructor::acquire_view(const Camera& cam) {
  acquire_impl(cam, true);
}

void SurrogateReconstructor::acquire_view_serial(const Camera& cam) {
  acquire_impl(cam, false);
}

std::shared_ptr<const OccupancyField> SurrogateReconstructor::predicted_field()
    const {
  return std::make_shared<PredictedField>(gt_, prior_, confidence_);
}

}  // namespace nbv
