#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nbv/camera.hpp"
#include "nbv/field.hpp"
#include "nbv/render.hpp"

namespace nbv {

// Exponents and switches for the uncertainty pipeline. The mode flags feed
// the ablation variants: use_sil drops the silhouette term (keeping the
// floor lambda), use_depth replaces accumulated depth uncertainty by 1,
// use_Tu swaps the uncertainty accumulation T_u for the standard
// transmittance T, and use_d disables the rate-of-change correction.
struct UncertaintyParams {
  double beta = 0.7;
  double lambda_s = 2.0;
  double lambda_u = 2.0;
  double lambda_t = 4.0;
  double lambda_d = 0.5;
  std::vector<double> lambda_d_schedule;  // per selection step; empty = scalar
  double lambda = 1.0;                    // silhouette floor

  bool use_sil = true;
  bool use_depth = true;
  bool use_Tu = true;
  bool use_d = true;
  bool silhouette_only = false;

  static UncertaintyParams preset_3d();
  static UncertaintyParams preset_2d();

  // lambda_d for the given selection step (step 2 = first policy-driven
  // selection uses schedule[0]); falls back to the scalar.
  double lambda_d_for_step(int step) const;

  void validate() const;
};

// u = 1 - (2|o - 0.5|)^beta: distance from the decision boundary, shaped by
// the calibration exponent.
double occupancy_uncertainty(double o, double beta);

// Side-preserving exponential warp of a probability: beta = 1 is the
// identity and recalibrate(recalibrate(o, b), 1/b) == o.
double recalibrate(double o, double beta);

// Average L1 calibration error over equal-width prediction bins; empty bins
// are skipped and the mean over non-empty bins is unweighted.
double calibration_error(std::span<const double> preds,
                         std::span<const int> labels, int n_bins = 20);

double silhouette_uncertainty(double s, double lambda_s);

// T_u_i = exp(-sum_{j<i} 1[o_j > 0.5] * |o_j - 0.5|^lambda_t * dt).
// Decays only where the model is positively confident of occupancy.
std::vector<double> uncertainty_transmittance(const RayQuadrature& q,
                                              double lambda_t);

// d_i = 1 - (grad_i)^lambda_d with grad_i = |o_{i+1} - o_{i-1}| clamped to
// [0,1]; one-sided differences at the endpoints.
std::vector<double> rate_correction(const RayQuadrature& q, double lambda_d);

struct DepthUncertainty {
  double u_depth = 0.0;
  std::vector<double> u_p;
  std::vector<double> T_u;  // T when use_Tu is off
  std::vector<double> d;    // all ones when use_d is off
};

// u_depth = sum_i T_u_i * d_i * u_p_i * dt with
// u_p_i = 1 - (2|o_i - 0.5|)^lambda_u.
DepthUncertainty depth_uncertainty(const RayQuadrature& q,
                                   const UncertaintyParams& params);

struct ViewUncertainty {
  double value = 0.0;  // mean over rays of (u_sil + lambda) * u_depth
  double mean_u_sil = 0.0;
  double mean_u_depth = 0.0;
};

// Per-ray uncertainties over sample_rays(cam, n_rays, seed), reduced in ray
// order so the result is independent of scheduling.
ViewUncertainty view_uncertainty(const OccupancyField& field, const Camera& cam,
                                 const UncertaintyParams& params,
                                 int n_rays = 1024, std::uint64_t seed = 0,
                                 int n_samples = 128);
ViewUncertainty view_uncertainty_serial(const OccupancyField& field,
                                        const Camera& cam,
                                        const UncertaintyParams& params,
                                        int n_rays = 1024, std::uint64_t seed = 0,
                                        int n_samples = 128);

// Everything needed to plot uncertainty accumulation along one ray,
// including the standard-transmittance and no-rate-correction variants.
struct RayDiagnosticRow {
  double t, o, o_gt, T, T_u, d, u_p, u_cum, u_cum_noTu, u_cum_nod;
};

std::vector<RayDiagnosticRow> ray_diagnostic(const OccupancyField& pred,
                                             const OccupancyField& gt,
                                             const Ray& ray,
                                             const UncertaintyParams& params,
                                             int n_samples = 128);

// CSV with header t,o,o_gt,T,T_u,d,u_p,u_cum,u_cum_noTu,u_cum_nod.
void write_ray_diagnostic_csv(std::ostream& out,
                              const std::vector<RayDiagnosticRow>& rows);

}  // namespace nbv
