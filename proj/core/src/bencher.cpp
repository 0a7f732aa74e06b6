#include "spectrumlab/bencher.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>

#include "spectrumlab/manifest.hpp"

namespace spectrumlab {

namespace {

BenchCell bench_cell(const ScenarioConfig& base, Algorithm algo, Hierarchy h,
                     const BenchOptions& opt) {
  BenchCell cell;
  cell.algorithm = algo;
  cell.hierarchy = h;

  ScenarioConfig cfg = with_hierarchy(base, h);
  HierEnv env(cfg);
  env.reset(mix_seed(opt.seed, 41));

  std::optional<LearnedAgents> agents;
  if (is_learned(algo)) {
    agents = LearnedAgents::create(env, algo, opt.net_defaults, opt.seed);
    agents->seed_sampler(mix_seed(opt.seed, 42));
  }
  RandomPolicy random_policy(opt.seed);
  ExhaustivePolicy exhaustive(cfg.exhaustive_cap, worker_threads());

  int total_slots = opt.episodes * cfg.slots_per_episode;
  if (algo == Algorithm::Exhaustive)
    total_slots = std::min(total_slots, opt.exhaustive_slots);

  double sum_s = 0;
  long counted = 0;
  int seen = 0;
  int episode = 0;
  try {
    while (seen < total_slots) {
      if (env.done()) {
        env.reset(mix_seed(opt.seed, 50 + static_cast<std::uint64_t>(++episode)));
      }
      TierActions actions;
      std::map<AgentKey, double> latencies;
      double seconds = 0;
      if (agents) {
        DecisionOutcome d = agents->decide(env, /*greedy=*/false);
        actions = std::move(d.actions);
        latencies = std::move(d.latencies);
        seconds = d.compute_seconds;
      } else {
        auto t0 = std::chrono::steady_clock::now();
        actions = algo == Algorithm::Random ? random_policy.decide(env)
                                            : exhaustive.decide(env);
        seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
      }
      env.step(actions, latencies);
      ++seen;
      if (seen > opt.warmup_decisions) {
        sum_s += seconds;
        ++counted;
      }
    }
  } catch (const ExhaustiveCapExceeded& e) {
    cell.refused = true;
    cell.note = e.what();
    return cell;
  }

  cell.decision_slots = counted;
  cell.mean_decision_ms = counted > 0 ? sum_s / counted * 1e3 : 0;
  return cell;
}

}  // namespace

BenchResult bench_run(const ScenarioConfig& cfg, const BenchOptions& opt) {
  cfg.validate();
  BenchResult result;

  for (Algorithm algo : opt.algorithms)
    for (Hierarchy h : opt.hierarchies)
      result.cells.push_back(bench_cell(cfg, algo, h, opt));

  std::ostringstream table;
  table << "Per-decision execution time (ms)\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-20s", "algorithm");
  table << buf;
  for (Hierarchy h : opt.hierarchies) {
    std::snprintf(buf, sizeof buf, " %18s", to_string(h).c_str());
    table << buf;
  }
  table << "\n";
  for (Algorithm algo : opt.algorithms) {
    std::snprintf(buf, sizeof buf, "%-20s", to_string(algo).c_str());
    table << buf;
    for (Hierarchy h : opt.hierarchies) {
      const BenchCell* found = nullptr;
      for (const BenchCell& c : result.cells)
        if (c.algorithm == algo && c.hierarchy == h) found = &c;
      if (found == nullptr || found->refused)
        std::snprintf(buf, sizeof buf, " %18s", "refused");
      else
        std::snprintf(buf, sizeof buf, " %18.4f", found->mean_decision_ms);
      table << buf;
    }
    table << "\n";
  }
  result.table_text = table.str();

  if (!opt.out_dir.empty()) {
    CsvWriter csv(opt.out_dir + "/bench.csv",
                  "algorithm,hierarchy,mean_decision_ms,decision_slots,refused");
    for (const BenchCell& c : result.cells)
      csv.row(to_string(c.algorithm) + "," + to_string(c.hierarchy) + "," +
              csv_double(c.mean_decision_ms) + "," +
              std::to_string(c.decision_slots) + "," +
              (c.refused ? "1" : "0"));
  }
  return result;
}

}  // namespace spectrumlab
