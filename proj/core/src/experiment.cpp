#include "arrl/experiment.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "arrl/checkpoint.hpp"

namespace arrl {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json* walk(const json& j, const std::string& path) {
  const json* cur = &j;
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos
                                             ? std::string::npos
                                             : dot - start);
    if (!cur->is_object() || !cur->contains(key)) return nullptr;
    cur = &(*cur)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return cur;
}

template <typename T>
T require(const json& j, const std::string& path) {
  const json* v = walk(j, path);
  if (!v) throw BadConfig("missing field: " + path);
  try {
    return v->get<T>();
  } catch (const json::exception&) {
    throw BadConfig("bad value for field: " + path);
  }
}

template <typename T>
void maybe(const json& j, const std::string& path, T& out) {
  const json* v = walk(j, path);
  if (!v) return;
  try {
    out = v->get<T>();
  } catch (const json::exception&) {
    throw BadConfig("bad value for field: " + path);
  }
}

std::string csv_escape_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string MethodSpec::tag() const {
  std::string t = agent_name(agent);
  t += "+";
  t += optimizer_name(optimizer);
  t += "+";
  t += gait ? gait_name(*gait) : "nogait";
  return t;
}

TrainerConfig ExperimentConfig::trainer_for(const MethodSpec& m,
                                            std::uint64_t seed) const {
  TrainerConfig t = trainer;
  t.agent = m.agent;
  t.optimizer = m.optimizer;
  t.gait = m.gait;
  t.seed = seed;
  return t;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["out_dir"] = cfg.out_dir.string();
  j["seeds"] = cfg.seeds;
  j["jobs"] = cfg.jobs;
  j["transfer_eval_seeds"] = cfg.transfer_eval_seeds;
  for (const auto& m : cfg.methods) {
    json jm;
    jm["agent"] = agent_name(m.agent);
    jm["optimizer"] = optimizer_name(m.optimizer);
    jm["gait"] = m.gait ? gait_name(*m.gait) : "none";
    j["methods"].push_back(jm);
  }
  const TrainerConfig& t = cfg.trainer;
  j["trainer"] = {{"t_max", t.t_max},
                  {"horizon", t.horizon},
                  {"eval_interval", t.eval_interval},
                  {"omega_lo", t.omega_lo},
                  {"omega_hi", t.omega_hi}};
  const RLConfig& r = t.rl;
  j["rl"] = {{"gamma", r.gamma},
             {"batch_size", r.batch_size},
             {"buffer_capacity", r.buffer_capacity},
             {"hidden", r.hidden},
             {"actor_lr", r.actor_lr},
             {"critic_lr", r.critic_lr},
             {"tau", r.tau},
             {"warmup_steps", r.warmup_steps},
             {"policy_delay", r.policy_delay},
             {"target_noise_std", r.target_noise_std},
             {"target_noise_clip", r.target_noise_clip},
             {"exploration_noise_std", r.exploration_noise_std},
             {"init_temperature", r.init_temperature},
             {"entropy_target", r.entropy_target},
             {"alpha_lr", r.alpha_lr}};
  const EnvConfig& e = t.env;
  j["env"] = {{"control_dt", e.control_dt},
              {"physics_substeps", e.physics_substeps},
              {"max_steps", e.max_steps},
              {"k_a", e.k_a},
              {"gravity", e.gravity},
              {"ground_stiffness", e.ground_stiffness},
              {"ground_damping", e.ground_damping},
              {"friction_mu", e.friction_mu},
              {"friction_damping", e.friction_damping},
              {"servo_kp", e.servo_kp},
              {"servo_kd", e.servo_kd},
              {"e_pitch_limit", e.e_pitch_limit},
              {"reset_jitter", e.reset_jitter}};
  const LegGeometry& g = e.geometry;
  j["env"]["geometry"] = {{"torso_len_a", g.torso_len_a},
                          {"thigh_len_b", g.thigh_len_b},
                          {"shank_len_c", g.shank_len_c},
                          {"stick_angle_gamma", g.stick_angle_gamma},
                          {"com_frac_k", g.com_frac_k},
                          {"arm_len", g.arm_len},
                          {"stick_mount", g.stick_mount},
                          {"joint_limit_lo", g.joint_limit_lo},
                          {"joint_limit_hi", g.joint_limit_hi}};
  const MassModel& mm = e.masses;
  j["env"]["masses"] = {{"m_torso", mm.m_torso},
                        {"i_torso", mm.i_torso},
                        {"m_thigh", mm.m_thigh},
                        {"m_shank", mm.m_shank},
                        {"m_arm", mm.m_arm}};
  const TransferSchedule& s = cfg.transfer;
  j["transfer"] = {{"k1", s.k1},
                   {"k2", s.k2},
                   {"a_set", s.a_set},
                   {"e_pitch_threshold", s.e_pitch_threshold},
                   {"e_pitch_rate_threshold", s.e_pitch_rate_threshold},
                   {"averaging_window", s.averaging_window}};
  const DynamicsPerturbation& p = cfg.perturbation;
  j["perturbation"] = {{"mass_scale", p.mass_scale},
                       {"friction_scale", p.friction_scale},
                       {"ground_stiffness_scale", p.ground_stiffness_scale},
                       {"actuation_latency", p.actuation_latency},
                       {"observation_noise_std", p.observation_noise_std}};
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.seeds = require<std::vector<std::uint64_t>>(j, "seeds");
  if (cfg.seeds.empty()) throw BadConfig("empty field: seeds");
  const json* methods = walk(j, "methods");
  if (!methods || !methods->is_array() || methods->empty())
    throw BadConfig("missing field: methods");
  for (std::size_t i = 0; i < methods->size(); ++i) {
    const json& jm = (*methods)[i];
    MethodSpec m;
    try {
      m.agent = agent_from_name(jm.value("agent", "none"));
      m.optimizer = optimizer_from_name(jm.value("optimizer", "none"));
      std::string g = jm.value("gait", "none");
      if (g != "none") m.gait = gait_from_name(g);
    } catch (const std::invalid_argument& e) {
      throw BadConfig("methods[" + std::to_string(i) + "]: " + e.what());
    }
    if (m.agent == AgentKind::None && m.optimizer == OptimizerKind::None)
      throw BadConfig("methods[" + std::to_string(i) +
                      "]: agent and optimizer cannot both be none");
    if (m.optimizer != OptimizerKind::None && !m.gait)
      throw BadConfig("methods[" + std::to_string(i) +
                      "]: optimizer requires a gait");
    cfg.methods.push_back(m);
  }

  std::string out = cfg.out_dir.string();
  maybe(j, "out_dir", out);
  cfg.out_dir = out;
  maybe(j, "jobs", cfg.jobs);
  maybe(j, "transfer_eval_seeds", cfg.transfer_eval_seeds);

  TrainerConfig& t = cfg.trainer;
  maybe(j, "trainer.t_max", t.t_max);
  maybe(j, "trainer.horizon", t.horizon);
  maybe(j, "trainer.eval_interval", t.eval_interval);
  maybe(j, "trainer.omega_lo", t.omega_lo);
  maybe(j, "trainer.omega_hi", t.omega_hi);

  RLConfig& r = t.rl;
  maybe(j, "rl.gamma", r.gamma);
  maybe(j, "rl.batch_size", r.batch_size);
  maybe(j, "rl.buffer_capacity", r.buffer_capacity);
  maybe(j, "rl.hidden", r.hidden);
  maybe(j, "rl.actor_lr", r.actor_lr);
  maybe(j, "rl.critic_lr", r.critic_lr);
  maybe(j, "rl.tau", r.tau);
  maybe(j, "rl.warmup_steps", r.warmup_steps);
  maybe(j, "rl.policy_delay", r.policy_delay);
  maybe(j, "rl.target_noise_std", r.target_noise_std);
  maybe(j, "rl.target_noise_clip", r.target_noise_clip);
  maybe(j, "rl.exploration_noise_std", r.exploration_noise_std);
  maybe(j, "rl.init_temperature", r.init_temperature);
  maybe(j, "rl.entropy_target", r.entropy_target);
  maybe(j, "rl.alpha_lr", r.alpha_lr);

  EnvConfig& e = t.env;
  maybe(j, "env.control_dt", e.control_dt);
  maybe(j, "env.physics_substeps", e.physics_substeps);
  maybe(j, "env.max_steps", e.max_steps);
  maybe(j, "env.k_a", e.k_a);
  maybe(j, "env.gravity", e.gravity);
  maybe(j, "env.ground_stiffness", e.ground_stiffness);
  maybe(j, "env.ground_damping", e.ground_damping);
  maybe(j, "env.friction_mu", e.friction_mu);
  maybe(j, "env.friction_damping", e.friction_damping);
  maybe(j, "env.servo_kp", e.servo_kp);
  maybe(j, "env.servo_kd", e.servo_kd);
  maybe(j, "env.e_pitch_limit", e.e_pitch_limit);
  maybe(j, "env.reset_jitter", e.reset_jitter);

  LegGeometry& g = e.geometry;
  maybe(j, "env.geometry.torso_len_a", g.torso_len_a);
  maybe(j, "env.geometry.thigh_len_b", g.thigh_len_b);
  maybe(j, "env.geometry.shank_len_c", g.shank_len_c);
  maybe(j, "env.geometry.stick_angle_gamma", g.stick_angle_gamma);
  maybe(j, "env.geometry.com_frac_k", g.com_frac_k);
  maybe(j, "env.geometry.arm_len", g.arm_len);
  maybe(j, "env.geometry.stick_mount", g.stick_mount);
  maybe(j, "env.geometry.joint_limit_lo", g.joint_limit_lo);
  maybe(j, "env.geometry.joint_limit_hi", g.joint_limit_hi);

  MassModel& mm = e.masses;
  maybe(j, "env.masses.m_torso", mm.m_torso);
  maybe(j, "env.masses.i_torso", mm.i_torso);
  maybe(j, "env.masses.m_thigh", mm.m_thigh);
  maybe(j, "env.masses.m_shank", mm.m_shank);
  maybe(j, "env.masses.m_arm", mm.m_arm);

  TransferSchedule& s = cfg.transfer;
  maybe(j, "transfer.k1", s.k1);
  maybe(j, "transfer.k2", s.k2);
  maybe(j, "transfer.a_set", s.a_set);
  maybe(j, "transfer.e_pitch_threshold", s.e_pitch_threshold);
  maybe(j, "transfer.e_pitch_rate_threshold", s.e_pitch_rate_threshold);
  maybe(j, "transfer.averaging_window", s.averaging_window);

  DynamicsPerturbation& p = cfg.perturbation;
  maybe(j, "perturbation.mass_scale", p.mass_scale);
  maybe(j, "perturbation.friction_scale", p.friction_scale);
  maybe(j, "perturbation.ground_stiffness_scale", p.ground_stiffness_scale);
  maybe(j, "perturbation.actuation_latency", p.actuation_latency);
  maybe(j, "perturbation.observation_noise_std", p.observation_noise_std);
  return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw BadConfig("cannot open config: " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw BadConfig(std::string("config is not valid JSON: ") + e.what());
  }
  return experiment_config_from_json(j);
}

fs::path run_dir(const ExperimentConfig& cfg, const MethodSpec& m,
                 std::uint64_t seed) {
  return cfg.out_dir / m.tag() / ("seed" + std::to_string(seed));
}

bool run_complete(const fs::path& dir, const std::string& hash) {
  fs::path mf = dir / "manifest.json";
  if (!fs::exists(mf)) return false;
  std::ifstream is(mf);
  json j;
  try {
    is >> j;
  } catch (const json::exception&) {
    return false;
  }
  return j.value("complete", false) && j.value("config_hash", "") == hash;
}

namespace {

void write_run(const ExperimentConfig& cfg, const MethodSpec& m,
               std::uint64_t seed, RunSummary& summary) {
  TrainerConfig tc = cfg.trainer_for(m, seed);
  fs::path dir = run_dir(cfg, m, seed);
  summary.method = m;
  summary.seed = seed;
  summary.dir = dir;

  if (run_complete(dir, tc.hash())) {
    std::ifstream is(dir / "manifest.json");
    json j;
    is >> j;
    summary.best_return = j.value("best_return", 0.0);
    summary.skipped = true;
    return;
  }

  fs::create_directories(dir / "checkpoints");
  std::string run_id = m.tag() + "-s" + std::to_string(seed);
  std::ofstream csv(dir / "episodes.csv", std::ios::trunc);
  csv << "run_id,episode,env_step,return,a_over_omega,omega,kpp,kdp,kpy,kdy,"
         "delta_x\n";

  TrainHooks hooks;
  hooks.on_episode = [&](const EpisodeRecord& e) {
    csv << run_id << ',' << e.index << ',' << e.env_step_end << ','
        << csv_escape_double(e.ret);
    for (double v : e.theta) csv << ',' << csv_escape_double(v);
    csv << '\n';
  };
  hooks.on_checkpoint = [&](long env_step, const Agent* agent,
                            const Optimizer* opt, const ResidualParams& theta) {
    NamedTensors tensors;
    if (agent) tensors.items = agent->export_tensors();
    json meta;
    meta["agent"] = agent ? agent->kind() : "none";
    meta["seed"] = seed;
    meta["env_steps"] = env_step;
    meta["hidden"] = tc.rl.hidden;
    meta["theta"] = theta.to_array();
    if (opt) meta["optimizer_state"] = opt->save_state();
    write_checkpoint((dir / "checkpoints" /
                      ("step_" + std::to_string(env_step) + ".ckpt"))
                         .string(),
                     tensors, meta);
    write_checkpoint((dir / "checkpoints" / "final.ckpt").string(), tensors,
                     meta);
  };

  RunRecord record = arrl_train(tc, hooks);
  csv.close();
  summary.best_return = record.best_return;

  json manifest;
  manifest["config_hash"] = tc.hash();
  manifest["seed"] = seed;
  manifest["run_id"] = run_id;
  manifest["method"] = {{"agent", agent_name(m.agent)},
                        {"optimizer", optimizer_name(m.optimizer)},
                        {"gait", m.gait ? gait_name(*m.gait) : "none"}};
  manifest["best_return"] = record.best_return;
  manifest["best_theta"] = record.best_theta;
  manifest["best_theta_return"] = record.best_theta_return;
  manifest["total_env_steps"] = record.total_env_steps;
  manifest["episodes"] = record.episodes.size();
  manifest["stationarity_violations"] = record.stationarity_violations;
  manifest["complete"] = true;
  std::ofstream mf(dir / "manifest.json", std::ios::trunc);
  mf << manifest.dump(2) << '\n';
}

}  // namespace

std::vector<RunSummary> run_experiment(const ExperimentConfig& cfg) {
  struct Task {
    MethodSpec method;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& m : cfg.methods)
    for (std::uint64_t s : cfg.seeds) tasks.push_back({m, s});

  std::vector<RunSummary> summaries(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  int jobs = std::max(1, cfg.jobs);

  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      try {
        write_run(cfg, tasks[i].method, tasks[i].seed, summaries[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::string combined;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i].empty())
      combined += tasks[i].method.tag() + " seed " +
                  std::to_string(tasks[i].seed) + ": " + errors[i] + "\n";
  }
  if (!combined.empty())
    throw std::runtime_error("failed runs:\n" + combined);
  return summaries;
}

LoadedRun load_run(const fs::path& dir) {
  fs::path mf = dir / "manifest.json";
  fs::path csvp = dir / "episodes.csv";
  if (!fs::exists(mf) || !fs::exists(csvp))
    throw MissingRuns("run artifacts missing in " + dir.string());
  LoadedRun out;
  out.dir = dir;
  std::ifstream is(mf);
  is >> out.manifest;
  out.seed = out.manifest.value("seed", 0ULL);
  out.method.agent = agent_from_name(out.manifest["method"].value("agent", "none"));
  out.method.optimizer =
      optimizer_from_name(out.manifest["method"].value("optimizer", "none"));
  std::string g = out.manifest["method"].value("gait", "none");
  if (g != "none") out.method.gait = gait_from_name(g);

  std::ifstream csv(csvp);
  std::string line;
  std::getline(csv, line);  // header
  double best = -1e300;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    // run_id,episode,env_step,return,...
    std::size_t p1 = line.find(',');
    std::size_t p2 = line.find(',', p1 + 1);
    std::size_t p3 = line.find(',', p2 + 1);
    std::size_t p4 = line.find(',', p3 + 1);
    long env_step = std::stol(line.substr(p2 + 1, p3 - p2 - 1));
    double ret = std::stod(line.substr(p3 + 1, p4 - p3 - 1));
    best = std::max(best, ret);
    out.best_curve.emplace_back(env_step, best);
  }
  return out;
}

RestoredPolicy restore_policy(const fs::path& dir, const ExperimentConfig& cfg) {
  fs::path ckpt = dir / "checkpoints" / "final.ckpt";
  if (!fs::exists(ckpt))
    throw MissingCheckpoint("no final checkpoint in " + dir.string());
  LoadedRun run = load_run(dir);

  RestoredPolicy out;
  out.method = run.method;
  out.seed = run.seed;

  json meta;
  NamedTensors tensors = read_checkpoint(ckpt.string(), &meta);
  if (run.method.agent != AgentKind::None) {
    RLConfig rl = cfg.trainer.rl;
    rl.hidden = meta.value("hidden", rl.hidden);
    out.agent = make_agent(run.method.agent, rl, run.seed);
    out.agent->import_tensors(tensors.items);
  }
  if (run.method.gait) {
    std::array<double, 7> theta =
        run.manifest.value("best_theta", std::array<double, 7>{});
    GaitSpec spec = make_gait_spec(*run.method.gait, cfg.trainer.env.geometry);
    Stance stance = default_stance(cfg.trainer.env.geometry);
    out.controller = std::make_unique<BaseController>(
        spec, ResidualParams::from_array(theta), stance.torso_pitch,
        cfg.trainer.env.k_a, cfg.trainer.env.control_dt);
  }
  return out;
}

std::vector<TransferRow> transfer_table(const ExperimentConfig& cfg) {
  std::vector<TransferRow> rows;
  bool found_any = false;
  for (const auto& m : cfg.methods) {
    for (std::uint64_t seed : cfg.seeds) {
      fs::path dir = run_dir(cfg, m, seed);
      if (!fs::exists(dir / "checkpoints" / "final.ckpt")) continue;
      found_any = true;
      RestoredPolicy policy = restore_policy(dir, cfg);

      EnvConfig perturbed = cfg.trainer.env;
      perturbed.perturbation = cfg.perturbation;
      for (int es = 0; es < cfg.transfer_eval_seeds; ++es) {
        std::uint64_t eval_seed = Rng::mix(seed, 0xe5a1 + es);
        TransferRow row;
        row.method = m.tag();
        row.gait = m.gait ? gait_name(*m.gait) : "-";
        row.train_seed = seed;
        row.eval_seed = eval_seed;
        TransferResult direct =
            evaluate_transfer(policy.agent.get(), policy.controller.get(),
                              perturbed, cfg.transfer, false, eval_seed);
        TransferResult prog =
            evaluate_transfer(policy.agent.get(), policy.controller.get(),
                              perturbed, cfg.transfer, true, eval_seed);
        row.direct_return = direct.ret;
        row.direct_distance = direct.walk_distance;
        row.progressive_return = prog.ret;
        row.progressive_distance = prog.walk_distance;
        rows.push_back(row);
      }
    }
  }
  if (!found_any)
    throw MissingCheckpoint("no trained checkpoints under " +
                            cfg.out_dir.string());
  return rows;
}

void write_transfer_csv(const fs::path& path,
                        const std::vector<TransferRow>& rows) {
  std::ofstream os(path, std::ios::trunc);
  os << "method,gait,train_seed,eval_seed,direct_return,direct_distance,"
        "progressive_return,progressive_distance\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.gait << ',' << r.train_seed << ','
       << r.eval_seed << ',' << csv_escape_double(r.direct_return) << ','
       << csv_escape_double(r.direct_distance) << ','
       << csv_escape_double(r.progressive_return) << ','
       << csv_escape_double(r.progressive_distance) << '\n';
  }
}

}  // namespace arrl
