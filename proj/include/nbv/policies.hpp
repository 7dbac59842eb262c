#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nbv/camera.hpp"
#include "nbv/field.hpp"
#include "nbv/uncertainty.hpp"

namespace nbv {

enum class PolicyKind { Random, Even, Odd, Candidate, Gradient };

PolicyKind policy_kind_from_string(const std::string& s);
const char* policy_kind_to_string(PolicyKind k);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Random;
  std::string label;        // defaults to the kind name
  int n_candidates = 20;
  double delta = 0.7;       // minimum view separation (l2 between positions)
  int gradient_steps = 5;
  double learning_rate = 0.5;
  double lambda_D = 0.05;   // previous-view proximity weight
  double lambda_S = 4.0;    // search-space (sphere) distance weight
  double fd_step = 0.01;    // finite-difference probe step, world units
  int even_lattice_size = 512;
  bool eq5_literal = false;  // subtract raw set distance instead of the
                             // hinge proximity penalty
  int n_rays = 1024;
  int n_samples = 128;
  int camera_res = 128;

  std::string effective_label() const;
  void validate() const;
};

struct ViewHistory {
  std::vector<Camera> cameras;

  std::vector<Vec3> positions() const;
  double min_distance_to(const Vec3& p) const;  // +inf when empty
};

// Uniform sphere point at least delta away from every history position.
// Rejection sampling with a 10k-try budget; on exhaustion returns the try
// that maximised the minimum distance and sets *used_fallback.
Camera random_next(const ViewHistory& history, double delta, std::uint64_t seed,
                   int camera_res = 128, bool* used_fallback = nullptr);

// The point of a fixed Fibonacci lattice that maximises the minimum
// distance to the history; ties resolved to the lowest lattice index.
Camera even_next(const ViewHistory& history, int lattice_size = 512,
                 int camera_res = 128);

// Every second Even selection: replays an internal Even sequence seeded by
// the episode's first view (history[0]) and advanced two picks per call.
Camera odd_next(const ViewHistory& history, int lattice_size = 512,
                int camera_res = 128);

// Evenly distributed lattice points on the sphere of the given radius.
std::vector<Vec3> fibonacci_sphere(int n, double radius);

struct CandidateSelection {
  Camera camera;
  double uncertainty = 0.0;
  int selected_index = 0;
  std::vector<Vec3> candidate_positions;
  std::vector<double> candidate_uncertainty;
};

// Draws n_candidates mutually delta-separated random views (also separated
// from the history), scores each with view_uncertainty under a derived
// sub-seed, and returns the argmax (lowest index on ties).
CandidateSelection candidate_next(const OccupancyField& field,
                                  const ViewHistory& history,
                                  const UncertaintyParams& params,
                                  const PolicyConfig& config,
                                  std::uint64_t seed);

struct GradientSelection {
  Camera camera;
  double uncertainty = 0.0;        // u(v) at the returned (projected) camera
  std::vector<double> objective_trace;  // J at init and after each step
};

// Starts from a random admissible view and runs m Adam ascent steps on
//   J(theta) = u(v_theta) - lambda_D * P_prev(theta)
//              - lambda_S * | ||theta|| - R |,
// where P_prev sums hinge penalties max(0, delta - |theta - v_j|) over
// previous views (config.eq5_literal switches to the raw set distance as
// printed). The u term is differentiated by central finite differences with
// a fixed ray seed shared by all probes; the final point is projected back
// onto the sphere.
GradientSelection gradient_next(const OccupancyField& field,
                                const ViewHistory& history,
                                const UncertaintyParams& params,
                                const PolicyConfig& config, std::uint64_t seed);

// Adam ascent state over a 3-vector.
struct AdamOptimizer {
  double lr = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Vec3 m, v;
  int t = 0;

  Vec3 step(const Vec3& grad);
};

}  // namespace nbv
