#include "nbv/policies.hpp"

#include <cmath>
#include <limits>

#include "nbv/errors.hpp"
#include "nbv/parallel.hpp"
#include "nbv/rng.hpp"

namespace nbv {

PolicyKind policy_kind_from_string(const std::string& s) {
  if (s == "random") return PolicyKind::Random;
  if (s == "even") return PolicyKind::Even;
  if (s == "odd") return PolicyKind::Odd;
  if (s == "candidate") return PolicyKind::Candidate;
  if (s == "gradient") return PolicyKind::Gradient;
  throw SpecError("unknown policy kind '" + s + "'");
}

const char* policy_kind_to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::Random:
      return "random";
    case PolicyKind::Even:
      return "even";
    case PolicyKind::Odd:
      return "odd";
    case PolicyKind::Candidate:
      return "candidate";
    case PolicyKind::Gradient:
      return "gradient";
  }
  return "random";
}

std::string PolicyConfig::effective_label() const {
  return label.empty() ? policy_kind_to_string(kind) : label;
}

void PolicyConfig::validate() const {
  if (n_candidates < 1) throw SpecError("policy n_candidates must be >= 1");
  if (!(delta >= 0.0)) throw SpecError("policy delta must be >= 0");
  if (gradient_steps < 1) throw SpecError("policy gradient_steps must be >= 1");
  if (!(fd_step > 0.0)) throw SpecError("policy fd_step must be > 0");
  if (even_lattice_size < 2) throw SpecError("policy even_lattice_size must be >= 2");
  if (n_rays < 1) throw SpecError("policy n_rays must be >= 1");
  if (n_samples < 3) throw SpecError("policy n_samples must be >= 3");
  if (camera_res < 1) throw SpecError("policy camera_res must be >= 1");
}

std::vector<Vec3> ViewHistory::positions() const {
  std::vector<Vec3> out;
  out.reserve(cameras.size());
  for (const Camera& c : cameras) out.push_back(c.position);
  return out;
}

double ViewHistory::min_distance_to(const Vec3& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Camera& c : cameras) best = std::min(best, distance(c.position, p));
  return best;
}

namespace {

constexpr int kRejectionBudget = 10000;

// Shared by random_next and the candidate draw: uniform sphere points at
// least delta from everything in `taken`.
Vec3 rejection_sample_sphere(const std::vector<Vec3>& taken, double delta,
                             Rng& rng, bool* used_fallback) {
  Vec3 best;
  double best_min = -1.0;
  for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
    const Vec3 p = rng.on_sphere(kCameraRadius);
    double min_d = std::numeric_limits<double>::infinity();
    for (const Vec3& t : taken) min_d = std::min(min_d, distance(t, p));
    if (min_d >= delta) return p;
    if (min_d > best_min) {
      best_min = min_d;
      best = p;
    }
  }
  if (used_fallback) *used_fallback = true;
  return best;
}

}  // namespace

Camera random_next(const ViewHistory& history, double delta, std::uint64_t seed,
                   int camera_res, bool* used_fallback) {
  Rng rng(seed);
  if (used_fallback) *used_fallback = false;
  const Vec3 p = rejection_sample_sphere(history.positions(), delta, rng,
                                         used_fallback);
  return Camera::looking_at_origin(p, 60.0, camera_res);
}

std::vector<Vec3> fibonacci_sphere(int n, double radius) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    pts.push_back({radius * r * std::cos(phi), radius * r * std::sin(phi),
                   radius * z});
  }
  return pts;
}

Camera even_next(const ViewHistory& history, int lattice_size, int camera_res) {
  const std::vector<Vec3> lattice = fibonacci_sphere(lattice_size, kCameraRadius);
  int best_idx = 0;
  double best_min = -1.0;
  for (int i = 0; i < lattice_size; ++i) {
    const double min_d = history.min_distance_to(lattice[i]);
    if (min_d > best_min) {
      best_min = min_d;
      best_idx = i;
    }
  }
  return Camera::looking_at_origin(lattice[best_idx], 60.0, camera_res);
}

Camera odd_next(const ViewHistory& history, int lattice_size, int camera_res) {
  if (history.cameras.empty())
    return even_next(history, lattice_size, camera_res);
  // Replay the internal Even chain from the first view; each odd selection
  // advances it by two picks and keeps the second.
  ViewHistory chain;
  chain.cameras.push_back(history.cameras.front());
  const int steps_done = static_cast<int>(history.cameras.size()) - 1;
  Camera out = chain.cameras.front();
  for (int s = 0; s <= steps_done; ++s) {
    const Camera e1 = even_next(chain, lattice_size, camera_res);
    chain.cameras.push_back(e1);
    const Camera e2 = even_next(chain, lattice_size, camera_res);
    chain.cameras.push_back(e2);
    out = e2;
  }
  return out;
}

CandidateSelection candidate_next(const OccupancyField& field,
                                  const ViewHistory& history,
                                  const UncertaintyParams& params,
                                  const PolicyConfig& config,
                                  std::uint64_t seed) {
  config.validate();
  params.validate();

  Rng rng(derive_seed(seed, {0xCA4D}));
  std::vector<Vec3> taken = history.positions();
  CandidateSelection sel;
  sel.candidate_positions.reserve(config.n_candidates);
  for (int i = 0; i < config.n_candidates; ++i) {
    const Vec3 p = rejection_sample_sphere(taken, config.delta, rng, nullptr);
    taken.push_back(p);
    sel.candidate_positions.push_back(p);
  }

  const int n = config.n_candidates;
  sel.candidate_uncertainty.assign(n, 0.0);
  const int threads = worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    const Camera cam = Camera::looking_at_origin(sel.candidate_positions[i],
                                                 60.0, config.camera_res);
    sel.candidate_uncertainty[i] =
        view_uncertainty(field, cam, params, config.n_rays,
                         derive_seed(seed, {0x5EED, static_cast<std::uint64_t>(i)}),
                         config.n_samples)
            .value;
  }

  int best = 0;
  for (int i = 1; i < n; ++i)
    if (sel.candidate_uncertainty[i] > sel.candidate_uncertainty[best]) best = i;
  sel.selected_index = best;
  sel.uncertainty = sel.candidate_uncertainty[best];
  sel.camera = Camera::looking_at_origin(sel.candidate_positions[best], 60.0,
                                         config.camera_res);
  return sel;
}

Vec3 AdamOptimizer::step(const Vec3& grad) {
  ++t;
  m = m * beta1 + grad * (1.0 - beta1);
  v = {beta2 * v.x + (1.0 - beta2) * grad.x * grad.x,
       beta2 * v.y + (1.0 - beta2) * grad.y * grad.y,
       beta2 * v.z + (1.0 - beta2) * grad.z * grad.z};
  const double mc = 1.0 - std::pow(beta1, t);
  const double vc = 1.0 - std::pow(beta2, t);
  return {lr * (m.x / mc) / (std::sqrt(v.x / vc) + eps),
          lr * (m.y / mc) / (std::sqrt(v.y / vc) + eps),
          lr * (m.z / mc) / (std::sqrt(v.z / vc) + eps)};
}

namespace {

struct Penalty {
  double value;
  Vec3 grad;
};

// Hinge proximity penalty sum_j max(0, delta - |theta - v_j|), or the raw
// set distance min_j |theta - v_j| in eq5_literal mode.
Penalty previous_view_penalty(const Vec3& theta, const std::vector<Vec3>& prev,
                              double delta, bool literal) {
  Penalty p{0.0, {}};
  if (prev.empty()) return p;
  if (literal) {
    double best = std::numeric_limits<double>::infinity();
    Vec3 dir;
    for (const Vec3& v : prev) {
      const double d = distance(theta, v);
      if (d < best) {
        best = d;
        dir = d > 1e-12 ? (theta - v) / d : Vec3{0, 0, 0};
      }
    }
    p.value = best;
    p.grad = dir;
    return p;
  }
  for (const Vec3& v : prev) {
    const double d = distance(theta, v);
    if (d < delta) {
      p.value += delta - d;
      if (d > 1e-12) p.grad += (theta - v) * (-1.0 / d);
    }
  }
  return p;
}

Penalty sphere_penalty(const Vec3& theta) {
  const double r = norm(theta);
  Penalty p;
  p.value = std::abs(r - kCameraRadius);
  p.grad = r > 1e-12 ? theta * ((r >= kCameraRadius ? 1.0 : -1.0) / r)
                     : Vec3{0, 0, 0};
  return p;
}

}  // namespace

GradientSelection gradient_next(const OccupancyField& field,
                                const ViewHistory& history,
                                const UncertaintyParams& params,
                                const PolicyConfig& config, std::uint64_t seed) {
  config.validate();
  params.validate();

  Rng rng(derive_seed(seed, {0x64AD}));
  const std::vector<Vec3> prev = history.positions();
  Vec3 theta = rejection_sample_sphere(prev, config.delta, rng, nullptr);

  // One ray seed for every probe and step: common random numbers keep the
  // finite-difference objective smooth.
  const std::uint64_t ray_seed = derive_seed(seed, {0x4AB5});
  const auto u_of = [&](const Vec3& pos) {
    const Camera cam = Camera::looking_at_origin(pos, 60.0, config.camera_res);
    return view_uncertainty(field, cam, params, config.n_rays, ray_seed,
                            config.n_samples)
        .value;
  };
  const auto objective = [&](const Vec3& pos) {
    const Penalty pp =
        previous_view_penalty(pos, prev, config.delta, config.eq5_literal);
    return u_of(pos) - config.lambda_D * pp.value - config.lambda_S * sphere_penalty(pos).value;
  };

  GradientSelection sel;
  sel.objective_trace.push_back(objective(theta));

  AdamOptimizer adam;
  adam.lr = config.learning_rate;
  const double h = config.fd_step;
  for (int step = 0; step < config.gradient_steps; ++step) {
    Vec3 grad;
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 hi = theta, lo = theta;
      hi[axis] += h;
      lo[axis] -= h;
      grad[axis] = (u_of(hi) - u_of(lo)) / (2.0 * h);
    }
    const Penalty pp =
        previous_view_penalty(theta, prev, config.delta, config.eq5_literal);
    const Penalty sp = sphere_penalty(theta);
    grad += pp.grad * (-config.lambda_D) + sp.grad * (-config.lambda_S);

    theta += adam.step(grad);
    sel.objective_trace.push_back(objective(theta));
  }

  theta = theta * (kCameraRadius / norm(theta));
  sel.camera = Camera::looking_at_origin(theta, 60.0, config.camera_res);
  sel.uncertainty = u_of(theta);
  return sel;
}

}  // namespace nbv
