// spectrumlab: train, evaluate and benchmark hierarchical spectrum-sharing
// policies on a simulated satellite/HAP/UAV/terrestrial network.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectrumlab/commands.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::string cur;
  for (char c : list + ",") {
    if (c == ',') {
      if (!cur.empty()) seeds.push_back(std::stoull(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (seeds.empty()) seeds.push_back(1);
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical spectrum sharing simulator and training harness"};
  app.require_subcommand(1);

  spectrumlab::TrainCommandOptions train;
  std::string train_seeds = "1";
  CLI::App* t = app.add_subcommand("train", "train a policy set");
  t->add_option("--config", train.config_path, "scenario JSON path")->required();
  t->add_option("--algo", train.algo, "hdrl|flat_ppo|independent_mappo|random");
  t->add_option("--episodes", train.episodes, "episode budget");
  t->add_option("--min-episodes", train.min_episodes,
                "do not stop on convergence before this many episodes");
  t->add_option("--seeds", train_seeds, "comma-separated seed list");
  t->add_option("--out", train.out_dir, "output directory");
  t->add_option("--exhaustive-cap", train.exhaustive_cap,
                "override the scenario's exhaustive enumeration cap");
  t->add_option("--conv-threshold", train.conv_threshold,
                "convergence improvement threshold");
  t->add_option("--conv-patience", train.conv_patience,
                "consecutive episodes below the threshold");
  t->add_flag("--no-early-stop", train.no_early_stop,
              "always run the full episode budget");

  spectrumlab::EvalCommandOptions eval;
  std::string eval_seeds = "1";
  CLI::App* e = app.add_subcommand("eval", "evaluate a checkpoint or baseline");
  e->add_option("--config", eval.config_path, "scenario JSON path")->required();
  e->add_option("--algo", eval.algo,
                "hdrl|flat_ppo|independent_mappo|random|exhaustive");
  e->add_option("--checkpoint", eval.checkpoint_path,
                "checkpoint JSON (learned algorithms)");
  e->add_option("--episodes", eval.episodes, "episodes per seed");
  e->add_option("--seeds", eval_seeds, "comma-separated seed list");
  e->add_option("--out", eval.out_dir, "output directory");
  e->add_option("--sample-every", eval.sample_every, "metrics sampling cadence");
  e->add_option("--exhaustive-cap", eval.exhaustive_cap,
                "override the scenario's exhaustive enumeration cap");
  e->add_flag("--trace", eval.write_trace, "write full episode traces");

  spectrumlab::BenchCommandOptions bench;
  std::string bench_algos = "random,flat_ppo,hdrl,independent_mappo,exhaustive";
  CLI::App* b = app.add_subcommand("bench", "per-decision latency table");
  b->add_option("--config", bench.config_path, "scenario JSON path")->required();
  b->add_option("--algos", bench_algos, "comma-separated algorithm list");
  b->add_option("--episodes", bench.episodes, "episodes per cell");
  b->add_option("--seeds", bench.seed, "seed");
  b->add_option("--out", bench.out_dir, "output directory");
  b->add_option("--exhaustive-cap", bench.exhaustive_cap,
                "override the scenario's exhaustive enumeration cap");

  spectrumlab::ComplexityCommandOptions cx;
  CLI::App* c = app.add_subcommand("complexity", "decision-space report");
  c->add_option("--config", cx.config_path, "scenario JSON path")->required();
  c->add_flag("--json", cx.json_output, "emit JSON instead of text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (t->parsed()) {
      train.seeds = parse_seeds(train_seeds);
      return spectrumlab::cmd_train(train);
    }
    if (e->parsed()) {
      eval.seeds = parse_seeds(eval_seeds);
      return spectrumlab::cmd_eval(eval);
    }
    if (b->parsed()) {
      bench.algos.clear();
      std::string cur;
      for (char ch : bench_algos + ",") {
        if (ch == ',') {
          if (!cur.empty()) bench.algos.push_back(cur);
          cur.clear();
        } else {
          cur.push_back(ch);
        }
      }
      return spectrumlab::cmd_bench(bench);
    }
    if (c->parsed()) return spectrumlab::cmd_complexity(cx);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
