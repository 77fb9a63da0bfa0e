#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "arrl/trainer.hpp"
#include "arrl/transfer.hpp"

namespace arrl {

class BadConfig : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class MissingRuns : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class MissingCheckpoint : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct MethodSpec {
  AgentKind agent = AgentKind::None;
  OptimizerKind optimizer = OptimizerKind::None;
  std::optional<GaitKind> gait;

  std::string tag() const;
};

struct ExperimentConfig {
  std::vector<MethodSpec> methods;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out_dir = "runs";
  TrainerConfig trainer;  // shared budget/env/rl settings
  TransferSchedule transfer;
  DynamicsPerturbation perturbation = default_perturbation();
  int transfer_eval_seeds = 5;
  int jobs = 1;

  TrainerConfig trainer_for(const MethodSpec& m, std::uint64_t seed) const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct RunSummary {
  MethodSpec method;
  std::uint64_t seed = 0;
  std::filesystem::path dir;
  double best_return = 0.0;
  bool skipped = false;  // already complete on disk
};

/// Runs every (method x seed) combination, writing one directory per run:
/// episodes.csv, manifest.json and checkpoints/. Completed runs (matching
/// config hash) are skipped.
std::vector<RunSummary> run_experiment(const ExperimentConfig& cfg);

/// Per-run artifact paths and manifest access.
std::filesystem::path run_dir(const ExperimentConfig& cfg, const MethodSpec& m,
                              std::uint64_t seed);
bool run_complete(const std::filesystem::path& dir, const std::string& hash);

struct LoadedRun {
  MethodSpec method;
  std::uint64_t seed = 0;
  std::vector<std::pair<long, double>> best_curve;  // env_step, best return
  nlohmann::json manifest;
  std::filesystem::path dir;
};
LoadedRun load_run(const std::filesystem::path& dir);

struct TransferRow {
  std::string method;
  std::string gait;
  std::uint64_t train_seed = 0;
  std::uint64_t eval_seed = 0;
  double direct_return = 0.0, direct_distance = 0.0;
  double progressive_return = 0.0, progressive_distance = 0.0;
};

/// Direct-vs-progressive evaluation of every trained checkpoint found under
/// the experiment output directory, paired per evaluation seed.
std::vector<TransferRow> transfer_table(const ExperimentConfig& cfg);
void write_transfer_csv(const std::filesystem::path& path,
                        const std::vector<TransferRow>& rows);

/// Restores a trained policy (agent + theta-prime + controller) from a run
/// directory's final checkpoint.
struct RestoredPolicy {
  std::unique_ptr<Agent> agent;
  std::unique_ptr<BaseController> controller;
  MethodSpec method;
  std::uint64_t seed = 0;
};
RestoredPolicy restore_policy(const std::filesystem::path& dir,
                              const ExperimentConfig& cfg);

}  // namespace arrl
