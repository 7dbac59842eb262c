#include "nbv/uncertainty.hpp"

#include <cmath>
#include <ostream>

#include "nbv/errors.hpp"
#include "nbv/format.hpp"
#include "nbv/parallel.hpp"

namespace nbv {

UncertaintyParams UncertaintyParams::preset_3d() {
  UncertaintyParams p;
  p.beta = 0.7;
  p.lambda_s = 2.0;
  p.lambda_u = 2.0;
  p.lambda_t = 4.0;
  p.lambda_d = 0.5;
  p.lambda = 1.0;
  return p;
}

UncertaintyParams UncertaintyParams::preset_2d() {
  UncertaintyParams p;
  p.beta = 0.7;
  p.lambda_s = 0.5;
  p.lambda_u = 4.0;
  p.lambda_t = 4.0;
  p.lambda_d_schedule = {10.0, 2.0, 0.5, 0.2};
  p.lambda_d = 0.2;
  p.lambda = 0.0;
  return p;
}

double UncertaintyParams::lambda_d_for_step(int step) const {
  if (lambda_d_schedule.empty()) return lambda_d;
  // Selection step 2 (the first policy-driven choice) uses schedule[0].
  int idx = step - 2;
  if (idx < 0) idx = 0;
  if (idx >= static_cast<int>(lambda_d_schedule.size()))
    idx = static_cast<int>(lambda_d_schedule.size()) - 1;
  return lambda_d_schedule[idx];
}

void UncertaintyParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError(std::string(name) + " must be > 0");
  };
  positive(beta, "beta");
  positive(lambda_s, "lambda_s");
  positive(lambda_u, "lambda_u");
  positive(lambda_t, "lambda_t");
  positive(lambda_d, "lambda_d");
  for (double v : lambda_d_schedule) positive(v, "lambda_d schedule entry");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("lambda must be >= 0");
}

namespace {

void check_probability(double o, const char* name) {
  if (!(o >= 0.0 && o <= 1.0))
    throw DomainError(std::string(name) + " must be in [0,1]");
}

void check_exponent(double b, const char* name) {
  if (!(b > 0.0) || !std::isfinite(b))
    throw DomainError(std::string(name) + " must be > 0");
}

}  // namespace

double occupancy_uncertainty(double o, double beta) {
  check_probability(o, "occupancy");
  check_exponent(beta, "beta");
  return 1.0 - std::pow(2.0 * std::abs(o - 0.5), beta);
}

double recalibrate(double o, double beta) {
  check_probability(o, "occupancy");
  check_exponent(beta, "beta");
  if (o >= 0.5) return 0.5 * (1.0 + std::pow(2.0 * o - 1.0, beta));
  return 0.5 * (1.0 - std::pow(1.0 - 2.0 * o, beta));
}

double calibration_error(std::span<const double> preds,
                         std::span<const int> labels, int n_bins) {
  if (preds.empty() || preds.size() != labels.size())
    throw DomainError("calibration_error needs equal-length non-empty inputs");
  if (n_bins < 1) throw DomainError("calibration_error needs n_bins >= 1");

  std::vector<double> pred_sum(n_bins, 0.0), label_sum(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    check_probability(preds[i], "prediction");
    const int b = std::min(static_cast<int>(preds[i] * n_bins), n_bins - 1);
    pred_sum[b] += preds[i];
    label_sum[b] += labels[i];
    ++count[b];
  }
  double err = 0.0;
  int non_empty = 0;
  for (int b = 0; b < n_bins; ++b) {
    if (count[b] == 0) continue;
    err += std::abs(pred_sum[b] / count[b] - label_sum[b] / count[b]);
    ++non_empty;
  }
  return err / non_empty;
}

double silhouette_uncertainty(double s, double lambda_s) {
  check_probability(s, "silhouette");
  check_exponent(lambda_s, "lambda_s");
  return 1.0 - std::pow(2.0 * std::abs(s - 0.5), lambda_s);
}

std::vector<double> uncertainty_transmittance(const RayQuadrature& q,
                                              double lambda_t) {
  check_exponent(lambda_t, "lambda_t");
  std::vector<double> T_u(q.size());
  double acc = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    T_u[i] = std::exp(-acc);
    const double o = q.occupancy[i];
    if (o > 0.5) acc += std::pow(o - 0.5, lambda_t) * q.dt;
  }
  return T_u;
}

std::vector<double> rate_correction(const RayQuadrature& q, double lambda_d) {
  check_exponent(lambda_d, "lambda_d");
  const int n = q.size();
  if (n < 3) throw DomainError("rate_correction needs at least 3 samples");
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    double grad;
    if (i == 0)
      grad = std::abs(q.occupancy[1] - q.occupancy[0]);
    else if (i == n - 1)
      grad = std::abs(q.occupancy[n - 1] - q.occupancy[n - 2]);
    else
      grad = std::abs(q.occupancy[i + 1] - q.occupancy[i - 1]);
    d[i] = 1.0 - std::pow(clamp01(grad), lambda_d);
  }
  return d;
}

DepthUncertainty depth_uncertainty(const RayQuadrature& q,
                                   const UncertaintyParams& params) {
  DepthUncertainty out;
  const int n = q.size();
  out.u_p.resize(n);
  for (int i = 0; i < n; ++i)
    out.u_p[i] = occupancy_uncertainty(q.occupancy[i], params.lambda_u);
  out.T_u = params.use_Tu ? uncertainty_transmittance(q, params.lambda_t)
                          : transmittance(q);
  out.d = params.use_d ? rate_correction(q, params.lambda_d)
                       : std::vector<double>(n, 1.0);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += out.T_u[i] * out.d[i] * out.u_p[i] * q.dt;
  out.u_depth = acc;
  return out;
}

namespace {

struct RayTerms {
  double u_sil, u_depth;
};

RayTerms ray_terms(const OccupancyField& field, const Ray& ray,
                   const UncertaintyParams& params, int n_samples) {
  const RayQuadrature q = quadrature(field, ray, n_samples);
  RayTerms t;
  t.u_sil = silhouette_uncertainty(silhouette(q), params.lambda_s);
  t.u_depth = params.use_depth ? depth_uncertainty(q, params).u_depth : 1.0;
  return t;
}

ViewUncertainty view_uncertainty_impl(const OccupancyField& field,
                                      const Camera& cam,
                                      const UncertaintyParams& params,
                                      int n_rays, std::uint64_t seed,
                                      int n_samples, bool parallel) {
  params.validate();
  const std::vector<Ray> rays = sample_rays(cam, n_rays, seed);
  const int n = static_cast<int>(rays.size());
  std::vector<RayTerms> terms(n);

  const int threads = parallel ? worker_count() : 1;
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int i = 0; i < n; ++i)
    terms[i] = ray_terms(field, rays[i], params, n_samples);

  // Ordered reduction: independent of thread count.
  ViewUncertainty out;
  double acc = 0.0, acc_sil = 0.0, acc_depth = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u_sil = params.use_sil ? terms[i].u_sil : 0.0;
    if (params.silhouette_only)
      acc += terms[i].u_sil;
    else
      acc += (u_sil + params.lambda) * terms[i].u_depth;
    acc_sil += terms[i].u_sil;
    acc_depth += terms[i].u_depth;
  }
  out.value = acc / n;
  out.mean_u_sil = acc_sil / n;
  out.mean_u_depth = acc_depth / n;
  return out;
}

}  // namespace

ViewUncertainty view_uncertainty(const OccupancyField& field, const Camera& cam,
                                 const UncertaintyParams& params, int n_rays,
                                 std::uint64_t seed, int n_samples) {
  return view_uncertainty_impl(field, cam, params, n_rays, seed, n_samples, true);
}

ViewUncertainty view_uncertainty_serial(const OccupancyField& field,
                                        const Camera& cam,
                                        const UncertaintyParams& params,
                                        int n_rays, std::uint64_t seed,
                                        int n_samples) {
  return view_uncertainty_impl(field, cam, params, n_rays, seed, n_samples, false);
}

std::vector<RayDiagnosticRow> ray_diagnostic(const OccupancyField& pred,
                                             const OccupancyField& gt,
                                             const Ray& ray,
                                             const UncertaintyParams& params,
                                             int n_samples) {
  params.validate();
  const RayQuadrature q = quadrature(pred, ray, n_samples);
  const std::vector<double> T = transmittance(q);
  const std::vector<double> T_u = uncertainty_transmittance(q, params.lambda_t);
  const std::vector<double> d = rate_correction(q, params.lambda_d);

  std::vector<RayDiagnosticRow> rows(q.size());
  double cum = 0.0, cum_noTu = 0.0, cum_nod = 0.0;
  for (int i = 0; i < q.size(); ++i) {
    RayDiagnosticRow& r = rows[i];
    r.t = q.ts[i];
    r.o = q.occupancy[i];
    r.o_gt = gt.occupancy_at(q.position(i));
    r.T = T[i];
    r.T_u = T_u[i];
    r.d = d[i];
    r.u_p = occupancy_uncertainty(q.occupancy[i], params.lambda_u);
    cum += T_u[i] * d[i] * r.u_p * q.dt;
    cum_noTu += T[i] * d[i] * r.u_p * q.dt;
    cum_nod += T_u[i] * r.u_p * q.dt;
    r.u_cum = cum;
    r.u_cum_noTu = cum_noTu;
    r.u_cum_nod = cum_nod;
  }
  return rows;
}

void write_ray_diagnostic_csv(std::ostream& out,
                              const std::vector<RayDiagnosticRow>& rows) {
  out << "t,o,o_gt,T,T_u,d,u_p,u_cum,u_cum_noTu,u_cum_nod\n";
  for (const RayDiagnosticRow& r : rows) {
    std::string line;
    const double vals[] = {r.t,   r.o,     r.o_gt,      r.T,         r.T_u,
                           r.d,   r.u_p,   r.u_cum,     r.u_cum_noTu, r.u_cum_nod};
    for (int i = 0; i < 10; ++i) {
      if (i) line.push_back(',');
      append_shortest_double(line, vals[i]);
    }
    line.push_back('\n');
    out << line;
  }
}

}  // namespace nbv
