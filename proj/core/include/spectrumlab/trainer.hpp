#pragma once

#include <string>
#include <vector>

#include "spectrumlab/agents.hpp"

namespace spectrumlab {

struct TrainOptions {
  int episodes = 500;
  int min_episodes = 0;  // convergence may not stop training before this
  bool stop_on_converged = true;
  double conv_threshold = 0.15;
  int conv_patience = 10;
  int checkpoint_every = 100;
  std::uint64_t seed = 1;
  std::string out_dir;  // empty: keep everything in memory
  TierNetDefaults net_defaults;
};

struct EpisodeStats {
  int episode = 0;           // 1-based
  double raw_reward = 0;     // mean decision reward over the episode trace
  double normalized_reward = 0;
  double reward_global = 0;  // per-tier mean decision rewards
  double reward_regional = 0;
  double reward_local = 0;
  double mean_slot_score = 0;  // global-scope Eq-form score, mean over slots
  double mean_throughput_bps = 0;
};

struct TrainResult {
  std::vector<EpisodeStats> curve;
  int converged_at = -1;  // 1-based episode where the detector first fired
  int episodes_run = 0;
  std::string checkpoint_json;  // final agents; empty for random
};

// Trains hdrl / flat_ppo / independent_mappo (or rolls out the random
// baseline) and emits curve.csv plus periodic checkpoints when out_dir is
// set.  Training stops at the episode budget or, after min_episodes, when
// the convergence detector fires.
TrainResult train_run(const ScenarioConfig& cfg, Algorithm algo,
                      const rl::PpoConfig& ppo, const TrainOptions& opt);

// One greedy/sampled episode with an already-built agent set; fills buffers
// when collect is true and returns the episode stats.  Exposed for the
// evaluator and tests.
EpisodeStats run_learned_episode(HierEnv& env, LearnedAgents& agents,
                                 const rl::PpoConfig& ppo, bool greedy,
                                 bool collect);

EpisodeStats episode_stats_from_trace(const HierEnv& env);

}  // namespace spectrumlab
