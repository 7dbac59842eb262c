#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nbv/policies.hpp"
#include "nbv/scene.hpp"
#include "nbv/surrogate.hpp"
#include "nbv/uncertainty.hpp"

namespace nbv {

struct EvalConfig {
  int iou_res = 64;
  int n_psnr_views = 20;  // 0 disables PSNR evaluation
  int psnr_res = 64;
  std::uint64_t eval_seed = 1234;
};

// Procedural scene source used when the config does not list scene files.
struct SceneGenerator {
  int n_scenes = 50;
  std::uint64_t seed = 7;
  double w_sphere = 1.0, w_box = 1.0, w_capsule = 1.0;

  SceneSpec generate(int scene_index) const;
};

struct ExperimentConfig {
  std::vector<std::string> scene_paths;  // empty -> use generator
  SceneGenerator generator;
  std::vector<PolicyConfig> policies;
  int n_inits = 10;
  int max_views = 5;
  UncertaintyParams uncertainty = UncertaintyParams::preset_3d();
  PriorSpec prior;
  EvalConfig eval;
  std::uint64_t master_seed = 1;
  std::string output_dir = "results";
  bool record_timing = true;
  int res_W = 64;
  int res_acq = 64;

  void validate() const;
};

ExperimentConfig experiment_config_from_json(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct EpisodeRecord {
  std::string scene_id;
  std::string policy;
  std::uint64_t init_seed = 0;
  int step = 0;
  double iou = 0.0;
  double psnr_mean = 0.0;   // NaN when PSNR evaluation is disabled
  double u_selected = 0.0;  // NaN for steps without a scored selection
  Vec3 cam_pos;
  std::int64_t wall_ms = 0;
  std::string error;
};

// Seed scheme: every stream hangs off (master_seed, scene index, init
// index) plus a policy label hash and step counter where appropriate, so
// adding scenes, inits or policies never perturbs existing rows.
//   init seed   = derive(master, {scene, init})
//   prior seed  = derive(master, {scene})         (model fixed across inits)
//   step stream = derive(master, {scene, init, hash(label), step})
struct EpisodeSeeds {
  std::uint64_t init_seed = 0;
  std::uint64_t prior_seed = 0;
  std::uint64_t policy_stream = 0;

  static EpisodeSeeds derive(std::uint64_t master_seed, int scene_index,
                             int init_index, const std::string& policy_label);
};

// One full acquisition episode: a random first view, then policy-driven
// selections, metrics recorded against ground truth after every
// acquisition. Deterministic given (scene, policy, seeds, config).
std::vector<EpisodeRecord> run_episode(const SceneSpec& scene,
                                       const std::string& scene_id,
                                       const PolicyConfig& policy,
                                       const ExperimentConfig& config,
                                       const EpisodeSeeds& seeds);

struct SummaryRow {
  std::string policy;
  int step = 0;
  double iou_mean = 0.0;
  double iou_worst = 0.0;  // min over inits per scene, then mean over scenes
  double iou_std = 0.0;    // std over inits per scene, then mean over scenes
  double psnr_mean = 0.0;
  double psnr_worst = 0.0;
  double psnr_std = 0.0;
};

struct ExperimentResult {
  std::vector<EpisodeRecord> records;
  std::vector<SummaryRow> summary;
};

// Full sweep scenes x policies x inits. Episodes run in parallel (capped by
// NBV_THREADS) and rows come out in canonical order, so the output is
// independent of the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentResult run_experiment_and_write(const ExperimentConfig& config,
                                          const std::string& output_dir);

std::vector<SummaryRow> summarize(const std::vector<EpisodeRecord>& records);

std::string records_to_csv(const std::vector<EpisodeRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::vector<EpisodeRecord> records_from_csv(const std::string& csv_text);

}  // namespace nbv
