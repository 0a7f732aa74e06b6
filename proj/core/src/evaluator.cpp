#include "spectrumlab/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <optional>

#include "spectrumlab/errors.hpp"
#include "spectrumlab/manifest.hpp"
#include "spectrumlab/trace_io.hpp"

namespace spectrumlab {

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of empty set");
  std::sort(values.begin(), values.end());
  size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

struct SeedOutcome {
  SeedSummary summary;
  std::vector<SlotMetrics> sampled;
  EpisodeTrace first_trace;
};

SeedOutcome eval_seed(const ScenarioConfig& cfg, Algorithm algo,
                      const std::string& checkpoint_json, std::uint64_t seed,
                      const EvalOptions& opt, int exhaustive_threads) {
  HierEnv env(cfg);
  env.reset(mix_seed(seed, 0));

  std::optional<LearnedAgents> agents;
  if (is_learned(algo)) {
    if (checkpoint_json.empty())
      throw ConfigError("learned algorithm evaluation needs a checkpoint");
    agents = LearnedAgents::from_checkpoint_json(checkpoint_json, env);
  }
  RandomPolicy random_policy(seed);
  ExhaustivePolicy exhaustive(cfg.exhaustive_cap, exhaustive_threads);

  SeedOutcome out;
  out.summary.seed = seed;
  double se_sum = 0, tput_sum = 0, fair_sum = 0, viol_sum = 0;
  double tput_sq_sum = 0;
  int sampled_n = 0;
  double score_sum = 0;
  int slots = 0;
  double decision_seconds = 0;

  for (int episode = 0; episode < opt.episodes; ++episode) {
    env.reset(mix_seed(seed, 1 + static_cast<std::uint64_t>(episode)));
    while (!env.done()) {
      auto t0 = std::chrono::steady_clock::now();
      TierActions actions;
      std::map<AgentKey, double> latencies;
      if (agents) {
        DecisionOutcome d = agents->decide(env, /*greedy=*/true);
        actions = std::move(d.actions);
        latencies = std::move(d.latencies);
        decision_seconds += d.compute_seconds;
      } else if (algo == Algorithm::Random) {
        actions = random_policy.decide(env);
        decision_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
      } else if (algo == Algorithm::Exhaustive) {
        actions = exhaustive.decide(env);
        decision_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
      } else {
        throw ConfigError("eval_run: unsupported algorithm");
      }

      StepResult res = env.step(actions, latencies);
      score_sum += res.scores.global_score;
      ++slots;
      if (res.metrics.slot % opt.sample_every == 0) {
        se_sum += res.metrics.spectral_efficiency;
        tput_sum += res.metrics.network_throughput_bps;
        tput_sq_sum +=
            res.metrics.network_throughput_bps * res.metrics.network_throughput_bps;
        fair_sum += res.metrics.fairness;
        viol_sum += res.metrics.violation_fraction;
        ++sampled_n;
        if (episode == 0) out.sampled.push_back(res.metrics);
      }
    }
    if (episode == 0 && opt.write_trace) out.first_trace = env.trace();
  }

  SeedSummary& s = out.summary;
  if (sampled_n > 0) {
    s.mean_se = se_sum / sampled_n;
    s.mean_throughput_bps = tput_sum / sampled_n;
    s.mean_fairness = fair_sum / sampled_n;
    s.mean_violations = viol_sum / sampled_n;
    double mean = tput_sum / sampled_n;
    s.throughput_variance = tput_sq_sum / sampled_n - mean * mean;
  }
  s.mean_slot_score = slots > 0 ? score_sum / slots : 0;
  s.mean_decision_ms = slots > 0 ? decision_seconds / slots * 1e3 : 0;
  return out;
}

}  // namespace

EvalResult eval_run(const ScenarioConfig& cfg, Algorithm algo,
                    const std::string& checkpoint_json, const EvalOptions& opt) {
  cfg.validate();
  EvalResult result;

  int workers = std::max(1, opt.threads);
  int exhaustive_threads = workers > 1 ? 1 : worker_threads();

  std::vector<SeedOutcome> outcomes(opt.seeds.size());
  if (workers <= 1 || opt.seeds.size() <= 1) {
    for (size_t i = 0; i < opt.seeds.size(); ++i)
      outcomes[i] =
          eval_seed(cfg, algo, checkpoint_json, opt.seeds[i], opt, exhaustive_threads);
  } else {
    size_t next = 0;
    while (next < opt.seeds.size()) {
      std::vector<std::future<SeedOutcome>> batch;
      for (int w = 0; w < workers && next < opt.seeds.size(); ++w, ++next) {
        std::uint64_t seed = opt.seeds[next];
        batch.push_back(std::async(std::launch::async, [&, seed] {
          return eval_seed(cfg, algo, checkpoint_json, seed, opt, 1);
        }));
      }
      for (size_t i = 0; i < batch.size(); ++i)
        outcomes[next - batch.size() + i] = batch[i].get();
    }
  }

  if (!opt.out_dir.empty()) {
    RunManifest manifest;
    manifest.run_id = make_run_id(to_string(algo) + "-eval", config_hash(cfg));
    manifest.config_hash = config_hash(cfg);
    manifest.algorithm = to_string(algo);
    manifest.seeds = opt.seeds;
    manifest.episodes = opt.episodes;
    manifest.out_dir = opt.out_dir;
    manifest.started_at = iso8601_now();
    write_manifest(manifest);

    CsvWriter summary(opt.out_dir + "/summary.csv",
                      "seed,mean_se,mean_throughput_bps,mean_fairness,"
                      "mean_violations,mean_slot_score,throughput_variance");
    for (const SeedOutcome& o : outcomes) {
      CsvWriter rows(opt.out_dir + "/metrics_seed" +
                         std::to_string(o.summary.seed) + ".csv",
                     slot_metrics_csv_header());
      for (const SlotMetrics& m : o.sampled) rows.row(slot_metrics_csv_row(m));
      const SeedSummary& s = o.summary;
      summary.row(std::to_string(s.seed) + "," + csv_double(s.mean_se) + "," +
                  csv_double(s.mean_throughput_bps) + "," +
                  csv_double(s.mean_fairness) + "," +
                  csv_double(s.mean_violations) + "," +
                  csv_double(s.mean_slot_score) + "," +
                  csv_double(s.throughput_variance));
      if (opt.write_trace)
        write_trace_csvs(o.first_trace, opt.out_dir + "/trace_seed" +
                                             std::to_string(s.seed));
    }
    manifest.finished_at = iso8601_now();
    write_manifest(manifest);
  }

  for (SeedOutcome& o : outcomes) result.seeds.push_back(o.summary);
  return result;
}

}  // namespace spectrumlab
