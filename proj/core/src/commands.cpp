#include "spectrumlab/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "spectrumlab/errors.hpp"
#include "spectrumlab/manifest.hpp"

namespace spectrumlab {

namespace {

ScenarioConfig load_config(const std::string& path, std::uint64_t cap_override) {
  ScenarioConfig cfg = load_scenario(path);
  if (cap_override > 0) cfg.exhaustive_cap = cap_override;
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int cmd_train(const TrainCommandOptions& opt) {
  ScenarioConfig cfg = load_config(opt.config_path, opt.exhaustive_cap);
  Algorithm algo = algorithm_from_string(opt.algo);
  rl::PpoConfig ppo;

  int workers = worker_threads();
  bool multi = opt.seeds.size() > 1;
  (void)workers;

  for (std::uint64_t seed : opt.seeds) {
    TrainOptions topt;
    topt.episodes = opt.episodes;
    topt.min_episodes = opt.min_episodes;
    topt.stop_on_converged = !opt.no_early_stop;
    topt.conv_threshold = opt.conv_threshold;
    topt.conv_patience = opt.conv_patience;
    topt.seed = seed;
    topt.out_dir = multi ? opt.out_dir + "/seed_" + std::to_string(seed)
                         : opt.out_dir;

    TrainResult res = train_run(cfg, algo, ppo, topt);
    double final_reward = res.curve.empty() ? 0.0 : res.curve.back().raw_reward;
    std::printf("train algo=%s seed=%llu episodes=%d converged_at=%d "
                "final_reward=%.6f out=%s\n",
                opt.algo.c_str(), static_cast<unsigned long long>(seed),
                res.episodes_run, res.converged_at, final_reward,
                topt.out_dir.c_str());
  }
  return 0;
}

int cmd_eval(const EvalCommandOptions& opt) {
  ScenarioConfig cfg = load_config(opt.config_path, opt.exhaustive_cap);
  Algorithm algo = algorithm_from_string(opt.algo);

  std::string checkpoint;
  if (is_learned(algo)) {
    if (opt.checkpoint_path.empty())
      throw ConfigError("--checkpoint is required for learned algorithms");
    checkpoint = read_file(opt.checkpoint_path);
  }

  EvalOptions eopt;
  eopt.seeds = opt.seeds;
  eopt.episodes = opt.episodes;
  eopt.sample_every = opt.sample_every;
  eopt.out_dir = opt.out_dir;
  eopt.write_trace = opt.write_trace;
  eopt.threads = worker_threads();

  EvalResult res = eval_run(cfg, algo, checkpoint, eopt);
  for (const SeedSummary& s : res.seeds) {
    std::printf("eval algo=%s seed=%llu mean_se=%.6f mean_throughput=%.6g "
                "fairness=%.6f violations=%.6f slot_score=%.6f\n",
                opt.algo.c_str(), static_cast<unsigned long long>(s.seed),
                s.mean_se, s.mean_throughput_bps, s.mean_fairness,
                s.mean_violations, s.mean_slot_score);
  }
  return 0;
}

int cmd_bench(const BenchCommandOptions& opt) {
  ScenarioConfig cfg = load_config(opt.config_path, opt.exhaustive_cap);
  BenchOptions bopt;
  bopt.algorithms.clear();
  for (const std::string& a : opt.algos)
    bopt.algorithms.push_back(algorithm_from_string(a));
  bopt.episodes = opt.episodes;
  bopt.seed = opt.seed;
  bopt.out_dir = opt.out_dir;

  BenchResult res = bench_run(cfg, bopt);
  std::cout << res.table_text;
  if (!opt.out_dir.empty())
    std::cout << "bench table written to " << opt.out_dir << "/bench.csv\n";
  return 0;
}

ComplexityReport complexity_report_for(const ScenarioConfig& cfg) {
  CostInputs c;
  TierNetDefaults nets;
  c.layers = static_cast<int>(nets.local_hidden.size());
  c.hidden_global = nets.global_hidden.front();
  c.hidden_regional = nets.regional_hidden.front();
  c.hidden_local = nets.local_hidden.front();
  rl::PpoConfig ppo;
  c.batch_global = std::max<long long>(1, ppo.batch_slots / cfg.global_period_slots);
  c.batch_regional =
      std::max<long long>(1, ppo.batch_slots / cfg.regional_period_slots);
  c.batch_local = ppo.batch_slots;
  c.regional_policies = cfg.hap_count();
  c.local_nodes = cfg.tbs_count() + cfg.uav_count();
  return complexity_report(cfg, c);
}

std::string complexity_report_json(const ComplexityReport& r) {
  nlohmann::json j;
  j["d_global_multiband"] = r.d_global_multiband;
  j["d_global_singleband"] = r.d_global_singleband;
  j["d_regional"] = r.d_regional;
  j["d_local"] = r.d_local;
  j["d_total"] = r.d_total;
  j["training_term_global"] = r.training_term_global;
  j["training_cost_per_epoch"] = r.training_cost_per_epoch;
  j["inference_cost"] = r.inference_cost;
  return j.dump(2);
}

int cmd_complexity(const ComplexityCommandOptions& opt) {
  ScenarioConfig cfg = load_scenario(opt.config_path);
  ComplexityReport report = complexity_report_for(cfg);
  if (opt.json_output)
    std::cout << complexity_report_json(report) << "\n";
  else
    std::cout << complexity_report_text(report);
  return 0;
}

}  // namespace spectrumlab
