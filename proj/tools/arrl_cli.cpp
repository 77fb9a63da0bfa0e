#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "arrl/experiment.hpp"
#include "arrl/plots.hpp"
#include "arrl/selfcheck.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> collect_run_dirs(const std::vector<std::string>& args) {
  std::vector<fs::path> dirs;
  auto is_run = [](const fs::path& p) {
    return fs::exists(p / "manifest.json") && fs::exists(p / "episodes.csv");
  };
  for (const auto& a : args) {
    fs::path p(a);
    if (is_run(p)) {
      dirs.push_back(p);
      continue;
    }
    if (!fs::is_directory(p)) continue;
    for (const auto& method : fs::directory_iterator(p)) {
      if (!method.is_directory()) continue;
      if (is_run(method.path())) {
        dirs.push_back(method.path());
        continue;
      }
      for (const auto& seed : fs::directory_iterator(method.path()))
        if (seed.is_directory() && is_run(seed.path()))
          dirs.push_back(seed.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

int cmd_train(const std::string& config_path, const std::string& out_override,
              const std::vector<std::uint64_t>& seeds_override, int jobs_override) {
  arrl::ExperimentConfig cfg = arrl::load_experiment_config(config_path);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (!seeds_override.empty()) cfg.seeds = seeds_override;
  if (jobs_override > 0) cfg.jobs = jobs_override;

  auto summaries = arrl::run_experiment(cfg);
  for (const auto& s : summaries) {
    std::cout << (s.skipped ? "[skip] " : "[done] ") << s.method.tag()
              << " seed " << s.seed << "  best return " << s.best_return
              << "  -> " << s.dir.string() << "\n";
  }
  return 0;
}

int cmd_plot(const std::vector<std::string>& run_args, const std::string& out) {
  auto dirs = collect_run_dirs(run_args);
  if (dirs.empty()) throw arrl::MissingRuns("no run directories found");
  std::vector<arrl::LoadedRun> runs;
  for (const auto& d : dirs) runs.push_back(arrl::load_run(d));

  auto curves = arrl::aggregate_runs(runs);
  fs::path out_dir(out);
  fs::create_directories(out_dir);
  arrl::write_aggregate_csv(out_dir / "aggregate.csv", curves);
  std::ofstream svg(out_dir / "curves.svg", std::ios::trunc);
  svg << arrl::render_curves_svg(curves);
  std::cout << "wrote " << (out_dir / "curves.svg").string() << " and "
            << (out_dir / "aggregate.csv").string() << " (" << runs.size()
            << " runs)\n";
  return 0;
}

int cmd_transfer(const std::string& config_path, const std::string& runs_dir,
                 const std::string& out) {
  arrl::ExperimentConfig cfg = arrl::load_experiment_config(config_path);
  if (!runs_dir.empty()) cfg.out_dir = runs_dir;
  auto rows = arrl::transfer_table(cfg);
  fs::path out_path = out.empty() ? cfg.out_dir / "transfer.csv" : fs::path(out);
  arrl::write_transfer_csv(out_path, rows);
  std::cout << "wrote " << out_path.string() << " (" << rows.size()
            << " rows)\n";
  return 0;
}

int cmd_selftest() {
  auto results = arrl::run_selfchecks();
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail
              << "\n";
    all = all && r.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ARRL bipedal-locomotion laboratory"};
  app.require_subcommand(1);

  std::string config_path, out, runs_dir;
  std::vector<std::uint64_t> seeds;
  int jobs = 0;

  auto* train = app.add_subcommand("train", "run the method x seed cross product");
  train->add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  train->add_option("--out", out, "output directory override");
  train->add_option("--seeds", seeds, "seed list override");
  train->add_option("--jobs", jobs, "parallel run count");

  std::vector<std::string> plot_dirs;
  std::string plot_out = "plots";
  auto* plot = app.add_subcommand("plot", "best-so-far curves and bands");
  plot->add_option("runs", plot_dirs, "run directories or experiment roots")
      ->required();
  plot->add_option("--out", plot_out, "output directory");

  std::string transfer_out;
  auto* transfer =
      app.add_subcommand("transfer", "direct vs progressive transfer tables");
  transfer->add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  transfer->add_option("--runs", runs_dir, "trained runs directory");
  transfer->add_option("--out", transfer_out, "output CSV path");

  auto* selftest = app.add_subcommand("selftest", "run the property suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, out, seeds, jobs);
    if (plot->parsed()) return cmd_plot(plot_dirs, plot_out);
    if (transfer->parsed()) return cmd_transfer(config_path, runs_dir, transfer_out);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
