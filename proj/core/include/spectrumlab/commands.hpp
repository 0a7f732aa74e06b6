#pragma once

#include <string>
#include <vector>

#include "spectrumlab/bencher.hpp"
#include "spectrumlab/complexity.hpp"
#include "spectrumlab/evaluator.hpp"
#include "spectrumlab/trainer.hpp"

namespace spectrumlab {

struct TrainCommandOptions {
  std::string config_path;
  std::string algo = "hdrl";
  int episodes = 500;
  int min_episodes = 0;
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir = "runs/train";
  double conv_threshold = 0.15;
  int conv_patience = 10;
  bool no_early_stop = false;
  std::uint64_t exhaustive_cap = 0;  // 0: keep the scenario's value
};

struct EvalCommandOptions {
  std::string config_path;
  std::string algo = "random";
  std::string checkpoint_path;  // required for learned algorithms
  int episodes = 1;
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir = "runs/eval";
  int sample_every = 10;
  bool write_trace = false;
  std::uint64_t exhaustive_cap = 0;
};

struct BenchCommandOptions {
  std::string config_path;
  std::vector<std::string> algos{"random", "flat_ppo", "hdrl",
                                 "independent_mappo", "exhaustive"};
  int episodes = 2;
  std::uint64_t seed = 1;
  std::string out_dir = "runs/bench";
  std::uint64_t exhaustive_cap = 0;
};

struct ComplexityCommandOptions {
  std::string config_path;
  bool json_output = false;
};

int cmd_train(const TrainCommandOptions& opt);
int cmd_eval(const EvalCommandOptions& opt);
int cmd_bench(const BenchCommandOptions& opt);
int cmd_complexity(const ComplexityCommandOptions& opt);

// Assembles the report from the scenario plus the default net/batch shapes.
ComplexityReport complexity_report_for(const ScenarioConfig& cfg);
std::string complexity_report_json(const ComplexityReport& report);

}  // namespace spectrumlab
