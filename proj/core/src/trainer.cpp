#include "spectrumlab/trainer.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"
#include "spectrumlab/manifest.hpp"

namespace spectrumlab {

EpisodeStats episode_stats_from_trace(const HierEnv& env) {
  const EpisodeTrace& trace = env.trace();
  EpisodeStats s;
  double sum = 0;
  int n = 0;
  double tier_sum[3] = {0, 0, 0};
  int tier_n[3] = {0, 0, 0};
  for (const DecisionRecord& rec : trace.decisions) {
    sum += rec.reward;
    ++n;
    tier_sum[static_cast<int>(rec.tier)] += rec.reward;
    ++tier_n[static_cast<int>(rec.tier)];
  }
  s.raw_reward = n > 0 ? sum / n : 0;
  s.reward_global =
      tier_n[0] > 0 ? tier_sum[0] / tier_n[0] : 0;
  s.reward_regional = tier_n[1] > 0 ? tier_sum[1] / tier_n[1] : 0;
  s.reward_local = tier_n[2] > 0 ? tier_sum[2] / tier_n[2] : 0;

  double tput = 0;
  for (const SlotMetrics& m : trace.metrics) tput += m.network_throughput_bps;
  s.mean_throughput_bps =
      trace.metrics.empty() ? 0 : tput / static_cast<double>(trace.metrics.size());
  return s;
}

EpisodeStats run_learned_episode(HierEnv& env, LearnedAgents& agents,
                                 const rl::PpoConfig& ppo, bool greedy,
                                 bool collect) {
  (void)ppo;
  Algorithm algo = agents.algorithm();
  double slot_score_sum = 0;
  int slots = 0;

  while (!env.done()) {
    DecisionOutcome out = agents.decide(env, greedy);

    if (collect && algo == Algorithm::Hdrl) {
      for (auto& [name, tr] : out.computed) {
        LearnedAgent* agent = agents.find(name);
        if (agent->has_pending)
          throw ProtocolError("pending decision without delivered reward: " + name);
        agent->pending = tr;
        agent->has_pending = true;
      }
    }

    StepResult res = env.step(out.actions, out.latencies);
    slot_score_sum += res.scores.global_score;
    ++slots;

    if (!collect) continue;

    switch (algo) {
      case Algorithm::Hdrl: {
        for (const auto& [key, reward] : res.epoch_rewards) {
          std::string name = to_string(key.tier) + "_" + std::to_string(key.id);
          LearnedAgent* agent = agents.find(name);
          if (agent == nullptr || !agent->has_pending) continue;
          agent->pending.reward = reward;
          agent->pending.done = res.episode_done;
          agent->buffer.push(std::move(agent->pending));
          agent->has_pending = false;
        }
        break;
      }
      case Algorithm::FlatPpo: {
        LearnedAgent* agent = agents.find("flat");
        auto it = out.computed.find("flat");
        rl::Transition tr = std::move(it->second);
        int clamps = 0;
        for (const auto& [key, count] : res.clamp_events) clamps += count;
        tr.reward = res.scores.global_score - defaults::kClampPenalty * clamps;
        tr.done = res.episode_done;
        agent->buffer.push(std::move(tr));
        break;
      }
      case Algorithm::IndependentMappo: {
        for (auto& [name, tr] : out.computed) {
          LearnedAgent* agent = agents.find(name);
          const Fragment& f = agent->fragments.front();
          double reward = 0;
          switch (f.tier) {
            case Tier::Global: reward = res.scores.global_score; break;
            case Tier::Regional: reward = res.scores.hap_score.at(f.id); break;
            case Tier::Local: reward = res.scores.node_score.at(f.id); break;
          }
          auto it = res.clamp_events.find({f.tier, f.id});
          if (it != res.clamp_events.end())
            reward -= defaults::kClampPenalty * it->second;
          tr.reward = reward;
          tr.done = res.episode_done;
          agent->buffer.push(std::move(tr));
        }
        break;
      }
      default:
        throw ProtocolError("run_learned_episode: not a learned algorithm");
    }
  }

  EpisodeStats s = episode_stats_from_trace(env);
  s.mean_slot_score = slots > 0 ? slot_score_sum / slots : 0;
  return s;
}

namespace {

EpisodeStats run_random_episode(HierEnv& env, RandomPolicy& policy) {
  double slot_score_sum = 0;
  int slots = 0;
  while (!env.done()) {
    TierActions actions = policy.decide(env);
    StepResult res = env.step(actions);
    slot_score_sum += res.scores.global_score;
    ++slots;
  }
  EpisodeStats s = episode_stats_from_trace(env);
  s.mean_slot_score = slots > 0 ? slot_score_sum / slots : 0;
  return s;
}

void update_agents(LearnedAgents& agents, const rl::PpoConfig& ppo, Rng& rng) {
  // Shared-weight groups pool their buffers into the group leader.
  std::map<int, std::vector<LearnedAgent*>> groups;
  for (LearnedAgent& a : agents.agents()) {
    if (a.share_group >= 0) groups[a.share_group].push_back(&a);
  }
  for (auto& [group, members] : groups) {
    LearnedAgent* leader = members.front();
    for (size_t i = 1; i < members.size(); ++i) {
      for (rl::Transition& t : members[i]->buffer.items)
        leader->buffer.push(std::move(t));
      members[i]->buffer.clear();
    }
  }

  for (LearnedAgent& a : agents.agents()) {
    if (a.buffer.empty()) continue;
    rl::ppo_update(a.net, a.adam, a.buffer, ppo, rng);
    a.updates += 1;
    a.buffer.clear();
  }

  for (auto& [group, members] : groups) {
    LearnedAgent* leader = members.front();
    for (size_t i = 1; i < members.size(); ++i) {
      if (members[i]->spec.head_sizes == leader->spec.head_sizes &&
          members[i]->spec.input_len == leader->spec.input_len) {
        members[i]->net.set_params(leader->net.params());
        members[i]->adam = leader->adam;
        members[i]->updates = leader->updates;
      }
    }
  }
}

}  // namespace

TrainResult train_run(const ScenarioConfig& cfg, Algorithm algo,
                      const rl::PpoConfig& ppo, const TrainOptions& opt) {
  cfg.validate();
  if (algo == Algorithm::Exhaustive)
    throw ConfigError("exhaustive search is not trainable; use eval or bench");

  HierEnv env(cfg);
  env.reset(mix_seed(opt.seed, 0));

  std::optional<LearnedAgents> agents;
  if (is_learned(algo)) {
    agents = LearnedAgents::create(env, algo, opt.net_defaults, opt.seed);
    agents->seed_sampler(mix_seed(opt.seed, 7001));
  }
  RandomPolicy random_policy(opt.seed);
  Rng update_rng = make_rng(opt.seed, 7002);

  RunManifest manifest;
  std::optional<CsvWriter> curve_csv;
  if (!opt.out_dir.empty()) {
    manifest.run_id = make_run_id(to_string(algo), config_hash(cfg));
    manifest.config_hash = config_hash(cfg);
    manifest.algorithm = to_string(algo);
    manifest.seeds = {opt.seed};
    manifest.episodes = opt.episodes;
    manifest.out_dir = opt.out_dir;
    manifest.started_at = iso8601_now();
    write_manifest(manifest);
    curve_csv.emplace(opt.out_dir + "/curve.csv",
                      "episode,raw_reward,normalized_reward,reward_global,"
                      "reward_regional,reward_local,mean_slot_score,"
                      "mean_throughput_bps");
  }

  TrainResult result;
  std::vector<double> raw_history;
  std::vector<double> normalized_history;
  double run_max = -std::numeric_limits<double>::infinity();
  int slots_since_update = 0;

  for (int episode = 1; episode <= opt.episodes; ++episode) {
    env.reset(mix_seed(opt.seed, 100000 + static_cast<std::uint64_t>(episode)));

    EpisodeStats stats;
    if (is_learned(algo)) {
      stats = run_learned_episode(env, *agents, ppo, /*greedy=*/false,
                                  /*collect=*/true);
      slots_since_update += cfg.slots_per_episode;
      if (slots_since_update >= ppo.batch_slots) {
        update_agents(*agents, ppo, update_rng);
        slots_since_update = 0;
      }
    } else {
      stats = run_random_episode(env, random_policy);
    }

    stats.episode = episode;
    raw_history.push_back(stats.raw_reward);
    run_max = std::max(run_max, stats.raw_reward);
    stats.normalized_reward =
        run_max > 0 ? std::clamp(stats.raw_reward / run_max, 0.0, 1.0) : 0.0;
    normalized_history.push_back(stats.normalized_reward);
    result.curve.push_back(stats);

    if (curve_csv) {
      curve_csv->row(std::to_string(episode) + "," + csv_double(stats.raw_reward) +
                     "," + csv_double(stats.normalized_reward) + "," +
                     csv_double(stats.reward_global) + "," +
                     csv_double(stats.reward_regional) + "," +
                     csv_double(stats.reward_local) + "," +
                     csv_double(stats.mean_slot_score) + "," +
                     csv_double(stats.mean_throughput_bps));
    }

    if (result.converged_at < 0) {
      int at = rl::converged_at(normalized_history, opt.conv_threshold,
                                opt.conv_patience);
      if (at >= 0) result.converged_at = at + 1;  // 1-based episode
    }

    if (!opt.out_dir.empty() && agents && opt.checkpoint_every > 0 &&
        episode % opt.checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "/checkpoint_ep%06d.json", episode);
      std::ofstream out(opt.out_dir + name);
      out << agents->to_checkpoint_json(config_hash(cfg), episode) << "\n";
    }

    result.episodes_run = episode;
    if (opt.stop_on_converged && result.converged_at >= 0 &&
        episode >= opt.min_episodes)
      break;
  }

  if (agents) {
    result.checkpoint_json =
        agents->to_checkpoint_json(config_hash(cfg), result.episodes_run);
    if (!opt.out_dir.empty()) {
      std::ofstream out(opt.out_dir + "/checkpoint_final.json");
      out << result.checkpoint_json << "\n";
    }
  }
  if (!opt.out_dir.empty()) {
    manifest.finished_at = iso8601_now();
    write_manifest(manifest);
  }
  return result;
}

}  // namespace spectrumlab
