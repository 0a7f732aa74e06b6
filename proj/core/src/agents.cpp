#include "spectrumlab/agents.hpp"

#include <chrono>

#include <json.hpp>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"

namespace spectrumlab {

using nlohmann::json;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Hdrl: return "hdrl";
    case Algorithm::FlatPpo: return "flat_ppo";
    case Algorithm::IndependentMappo: return "independent_mappo";
    case Algorithm::Random: return "random";
    case Algorithm::Exhaustive: return "exhaustive";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "hdrl") return Algorithm::Hdrl;
  if (s == "flat_ppo") return Algorithm::FlatPpo;
  if (s == "independent_mappo") return Algorithm::IndependentMappo;
  if (s == "random") return Algorithm::Random;
  if (s == "exhaustive") return Algorithm::Exhaustive;
  throw ConfigError("unknown algorithm: " + s);
}

bool is_learned(Algorithm a) {
  return a == Algorithm::Hdrl || a == Algorithm::FlatPpo ||
         a == Algorithm::IndependentMappo;
}

std::vector<double> fragment_observation(const HierEnv& env, const Fragment& f) {
  const Observations& obs = env.observations();
  switch (f.tier) {
    case Tier::Global: return *obs.global;
    case Tier::Regional: return obs.regional.at(f.id);
    case Tier::Local: return obs.local.at(f.id);
  }
  return {};
}

std::vector<int> fragment_head_sizes(const HierEnv& env, const Fragment& f) {
  switch (f.tier) {
    case Tier::Global: return env.global_space().head_sizes();
    case Tier::Regional: return env.regional_space(f.id).head_sizes();
    case Tier::Local:
      return env.local_space(f.id).head_sizes(defaults::kMaxUsersPerNodeObs);
  }
  return {};
}

void fragment_mask(const HierEnv& env, const Fragment& f,
                   std::vector<std::uint8_t>& mask_out) {
  if (f.tier != Tier::Local) {
    mask_out.insert(mask_out.end(), static_cast<size_t>(f.n_heads), 1);
    return;
  }
  int users = static_cast<int>(env.users_of(f.id).size());
  bool has_move = env.graph().node(f.id).kind == NodeKind::Uav;
  for (int i = 0; i < defaults::kMaxUsersPerNodeObs; ++i) {
    std::uint8_t active = i < users ? 1 : 0;
    mask_out.push_back(active);
    mask_out.push_back(active);
  }
  if (has_move) mask_out.push_back(1);
}

void fragment_apply(const HierEnv& env, const Fragment& f,
                    std::span<const int> head_actions, TierActions& out) {
  const ScenarioConfig& cfg = env.config();
  switch (f.tier) {
    case Tier::Global: {
      std::vector<int> counts;
      int sum = 0;
      for (int b = 0; b < cfg.beams - 1; ++b) {
        counts.push_back(head_actions[static_cast<size_t>(b)]);
        sum += counts.back();
      }
      counts.push_back(cfg.chunks - sum);  // env clamps if negative
      out.global = std::move(counts);
      return;
    }
    case Tier::Regional: {
      RegionalActionSpace space = env.regional_space(f.id);
      std::vector<int> digits(head_actions.begin(),
                              head_actions.begin() + space.nodes.size());
      out.regional[f.id] = std::move(digits);
      return;
    }
    case Tier::Local: {
      LocalAction act;
      const std::vector<NodeId>& users = env.users_of(f.id);
      for (size_t i = 0; i < users.size(); ++i) {
        int ch = head_actions[2 * i];
        int pw = head_actions[2 * i + 1] + 1;
        act.per_user.push_back({ch, pw});
      }
      if (env.graph().node(f.id).kind == NodeKind::Uav)
        act.move = static_cast<UavMove>(head_actions[head_actions.size() - 1]);
      out.local[f.id] = act;
      return;
    }
  }
}

std::vector<Fragment> LearnedAgents::fragments_for(const HierEnv& env,
                                                   Algorithm algo,
                                                   const std::string& agent_name) {
  std::vector<Fragment> all;
  if (auto g = env.global_agent()) {
    all.push_back({Tier::Global, g->id,
                   static_cast<int>(env.global_space().head_sizes().size()),
                   env.global_obs_len()});
  }
  for (const AgentKey& a : env.regional_agents())
    all.push_back({Tier::Regional, a.id,
                   static_cast<int>(env.regional_space(a.id).head_sizes().size()),
                   env.regional_obs_len(a.id)});
  for (const AgentKey& a : env.local_agents())
    all.push_back(
        {Tier::Local, a.id,
         static_cast<int>(
             env.local_space(a.id).head_sizes(defaults::kMaxUsersPerNodeObs).size()),
         env.local_obs_len(a.id)});

  if (algo == Algorithm::FlatPpo) return all;
  for (const Fragment& f : all) {
    std::string name = to_string(f.tier) + "_" + std::to_string(f.id);
    if (name == agent_name) return {f};
  }
  throw ConfigError("unknown agent fragment: " + agent_name);
}

LearnedAgents LearnedAgents::create(const HierEnv& env, Algorithm algo,
                                    const TierNetDefaults& defaults,
                                    std::uint64_t seed) {
  if (!is_learned(algo)) throw ConfigError("not a learned algorithm");
  LearnedAgents set;
  set.algo_ = algo;
  set.rng_ = make_rng(seed, 17);
  Rng init_rng = make_rng(seed, 18);

  auto spec_for = [&](const std::vector<Fragment>& frags,
                      const std::vector<int>& hidden) {
    rl::NetSpec spec;
    spec.hidden = hidden;
    spec.input_len = 0;
    for (const Fragment& f : frags) {
      spec.input_len += f.obs_len;
      for (int h : fragment_head_sizes(env, f)) spec.head_sizes.push_back(h);
    }
    if (spec.input_len == 0) spec.input_len = 1;
    return spec;
  };

  auto add_agent = [&](const std::string& name, std::vector<Fragment> frags,
                       const std::vector<int>& hidden, int share_group) {
    LearnedAgent agent;
    agent.name = name;
    agent.fragments = std::move(frags);
    agent.spec = spec_for(agent.fragments, hidden);
    agent.share_group = share_group;
    agent.net = rl::Mlp::init(agent.spec, init_rng);
    agent.adam.init(agent.net.param_count());
    set.agents_.push_back(std::move(agent));
  };

  if (algo == Algorithm::FlatPpo) {
    add_agent("flat", fragments_for(env, algo, "flat"), defaults.flat_hidden, -1);
    return set;
  }

  if (auto g = env.global_agent()) {
    std::string name = "global_" + std::to_string(g->id);
    add_agent(name, fragments_for(env, algo, name), defaults.global_hidden, -1);
  }
  int group = 0;
  for (const AgentKey& a : env.regional_agents()) {
    std::string name = "regional_" + std::to_string(a.id);
    add_agent(name, fragments_for(env, algo, name), defaults.regional_hidden,
              defaults.share_regional_weights ? 1 : -1);
  }
  for (const AgentKey& a : env.local_agents()) {
    std::string name = "local_" + std::to_string(a.id);
    add_agent(name, fragments_for(env, algo, name), defaults.local_hidden,
              defaults.share_local_weights ? 2 : -1);
  }
  (void)group;

  // Weight sharing: members of a group alias the group leader's parameters.
  for (int g : {1, 2}) {
    const LearnedAgent* leader = nullptr;
    for (auto& agent : set.agents_) {
      if (agent.share_group != g) continue;
      if (!leader) {
        leader = &agent;
      } else if (agent.spec.input_len == leader->spec.input_len &&
                 agent.spec.head_sizes == leader->spec.head_sizes) {
        agent.net.set_params(leader->net.params());
      }
    }
  }
  return set;
}

LearnedAgent* LearnedAgents::find(const std::string& name) {
  for (auto& a : agents_)
    if (a.name == name) return &a;
  return nullptr;
}

DecisionOutcome LearnedAgents::decide(const HierEnv& env, bool greedy) {
  DecisionOutcome out;
  DueTiers due = env.due();

  auto acts_this_slot = [&](const LearnedAgent& agent) {
    if (algo_ != Algorithm::Hdrl) return true;  // flat and mappo compute always
    const Fragment& f = agent.fragments.front();
    switch (f.tier) {
      case Tier::Global: return due.global;
      case Tier::Regional: return due.regional;
      case Tier::Local: return true;
    }
    return true;
  };

  auto fragment_due = [&](const Fragment& f) {
    switch (f.tier) {
      case Tier::Global: return due.global;
      case Tier::Regional: return due.regional;
      case Tier::Local: return true;
    }
    return true;
  };

  for (LearnedAgent& agent : agents_) {
    if (!acts_this_slot(agent)) continue;
    auto t0 = std::chrono::steady_clock::now();

    // Assemble the observation and mask across fragments.
    rl::Transition tr;
    tr.obs.reserve(static_cast<size_t>(agent.spec.input_len));
    for (const Fragment& f : agent.fragments) {
      std::vector<double> o = fragment_observation(env, f);
      tr.obs.insert(tr.obs.end(), o.begin(), o.end());
      fragment_mask(env, f, tr.mask);
    }

    rl::Mlp::Output fwd = agent.net.forward(tr.obs);
    tr.actions.assign(agent.spec.head_sizes.size(), 0);
    for (size_t h = 0; h < agent.spec.head_sizes.size(); ++h) {
      if (!tr.mask[h]) continue;
      tr.actions[h] = greedy ? agent.net.argmax_head(fwd, static_cast<int>(h))
                             : agent.net.sample_head(fwd, static_cast<int>(h), rng_);
    }
    tr.logp = agent.net.logp_of(fwd, tr.actions, tr.mask);
    tr.value = fwd.value;

    // Split head actions back into tier-action fragments.
    size_t head_cursor = 0;
    for (const Fragment& f : agent.fragments) {
      std::span<const int> slice(tr.actions.data() + head_cursor,
                                 static_cast<size_t>(f.n_heads));
      head_cursor += static_cast<size_t>(f.n_heads);
      if (fragment_due(f)) fragment_apply(env, f, slice, out.actions);
    }

    auto t1 = std::chrono::steady_clock::now();
    double seconds = std::chrono::duration<double>(t1 - t0).count();
    out.compute_seconds += seconds;
    for (const Fragment& f : agent.fragments) {
      if (!fragment_due(f)) continue;
      AgentKey key{f.tier, f.id};
      out.latencies[key] += seconds / static_cast<double>(agent.fragments.size());
    }
    out.computed[agent.name] = std::move(tr);
  }
  return out;
}

namespace {

json spec_to_json(const rl::NetSpec& s) {
  return json{{"input_len", s.input_len},
              {"hidden", s.hidden},
              {"head_sizes", s.head_sizes}};
}

rl::NetSpec spec_from_json(const json& j) {
  rl::NetSpec s;
  s.input_len = j.at("input_len").get<int>();
  s.hidden = j.at("hidden").get<std::vector<int>>();
  s.head_sizes = j.at("head_sizes").get<std::vector<int>>();
  return s;
}

}  // namespace

std::string LearnedAgents::to_checkpoint_json(const std::string& scenario_hash,
                                              long episodes_trained) const {
  json j;
  j["version"] = 1;
  j["algorithm"] = to_string(algo_);
  j["scenario_hash"] = scenario_hash;
  j["episodes_trained"] = episodes_trained;
  json agents = json::array();
  for (const LearnedAgent& a : agents_) {
    json ja;
    ja["name"] = a.name;
    ja["spec"] = spec_to_json(a.spec);
    ja["params"] = a.net.params();
    ja["adam_m"] = a.adam.m;
    ja["adam_v"] = a.adam.v;
    ja["adam_step"] = a.adam.step;
    ja["updates"] = a.updates;
    json frags = json::array();
    for (const Fragment& f : a.fragments)
      frags.push_back({{"tier", to_string(f.tier)},
                       {"id", f.id},
                       {"n_heads", f.n_heads},
                       {"obs_len", f.obs_len}});
    ja["fragments"] = frags;
    agents.push_back(std::move(ja));
  }
  j["agents"] = std::move(agents);
  return j.dump();
}

LearnedAgents LearnedAgents::from_checkpoint_json(const std::string& text,
                                                  const HierEnv& env) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("checkpoint parse error: ") + e.what());
  }

  LearnedAgents set;
  set.algo_ = algorithm_from_string(j.at("algorithm").get<std::string>());
  set.rng_ = make_rng(1, 17);

  for (const json& ja : j.at("agents")) {
    LearnedAgent a;
    a.name = ja.at("name").get<std::string>();
    a.spec = spec_from_json(ja.at("spec"));
    for (const json& jf : ja.at("fragments")) {
      Fragment f;
      std::string tier = jf.at("tier").get<std::string>();
      f.tier = tier == "global" ? Tier::Global
               : tier == "regional" ? Tier::Regional
                                    : Tier::Local;
      f.id = jf.at("id").get<NodeId>();
      f.n_heads = jf.at("n_heads").get<int>();
      f.obs_len = jf.at("obs_len").get<int>();

      // Shape compatibility with the target environment.
      int want = 0;
      switch (f.tier) {
        case Tier::Global: want = env.global_obs_len(); break;
        case Tier::Regional: want = env.regional_obs_len(f.id); break;
        case Tier::Local: want = env.local_obs_len(f.id); break;
      }
      if (want != f.obs_len)
        throw ConfigError("checkpoint/scenario shape mismatch for agent " +
                          a.name + ": observation length " +
                          std::to_string(f.obs_len) + " in checkpoint vs " +
                          std::to_string(want) + " in scenario");
      a.fragments.push_back(f);
    }
    Rng dummy = make_rng(0, 0);
    a.net = rl::Mlp::init(a.spec, dummy);
    a.net.set_params(ja.at("params").get<std::vector<double>>());
    a.adam.m = ja.at("adam_m").get<std::vector<double>>();
    a.adam.v = ja.at("adam_v").get<std::vector<double>>();
    a.adam.step = ja.at("adam_step").get<long>();
    a.updates = ja.at("updates").get<long>();
    set.agents_.push_back(std::move(a));
  }
  return set;
}

}  // namespace spectrumlab
