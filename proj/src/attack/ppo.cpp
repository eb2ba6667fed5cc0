// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#include "spoofsim/attack/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spoofsim {

namespace {

struct Sample {
  VectorXd obs;
  std::vector<bool> mask;
  int action = 0;
  double logp = 0.0;
  double value = 0.0;
  double reward = 0.0;
  double advantage = 0.0;
  double ret = 0.0;
};

struct EpisodeOut {
  std::vector<Sample> samples;
  double mean_reward = 0.0;
  double effective_reward = 0.0;
  double infeasible = 0.0;
  double consistent = 0.0;
};

std::vector<bool> effective_mask(const FeasibleSet& fs, bool masked) {
  if (masked) return fs.mask;
  return std::vector<bool>(fs.mask.size(), true);
}

std::vector<double> action_probs(const VectorXd& logits, const std::vector<bool>& mask, double alpha) {
  return masked_policy(logits, mask, alpha);
}

EpisodeOut rollout(const ScenarioConfig& cfg, const PolicyNet& net, const PpoConfig& hp, std::uint64_t seed, int ep) {
  const auto pattern = static_cast<MotionPattern>(derive_seed(seed, "ppo.pattern", ep) % 3);
  const Trajectory truth = gen_ground_truth(pattern, hp.trajectory_length, derive_seed(seed, "ppo.truth", ep),
                                            cfg.slot_duration);
  SpoofEpisode env(cfg, truth, derive_seed(seed, "ppo.noise", ep));
  Rng rng = make_rng(seed, "ppo.action", ep);
  const std::vector<double> actions = action_grid(cfg);

  EpisodeOut out;
  int n_dec = 0, n_eff = 0, n_inf = 0, n_ok = 0, n_steps = 0;
  double eff = 0.0;
  while (!env.done()) {
    const FeasibleSet fs = action_mask(cfg, env.state(), actions);
    const bool any = std::any_of(fs.mask.begin(), fs.mask.end(), [](bool b) { return b; });
    StepResult r;
    if (hp.masked && !any) {
      r = env.step(std::nullopt);
    } else {
      Sample s;
      s.obs = observation(env.state());
      s.mask = effective_mask(fs, hp.masked);
      const auto o = net.forward(s.obs);
      const auto p = action_probs(o.logits, s.mask, hp.alpha);
      std::discrete_distribution<int> pick(p.begin(), p.end());
      s.action = pick(rng);
      s.logp = std::log(std::max(p[s.action], 1e-300));
      s.value = o.value;
      r = env.step(actions[s.action]);
      s.reward = r.reward;
      out.samples.push_back(std::move(s));
      ++n_dec;
      if (!r.feasible) ++n_inf;
    }
    ++n_steps;
    if (is_consistent(r.consistency)) ++n_ok;
    if (r.doppler_spoofed) {
      eff += r.reward;
      ++n_eff;
    }
  }
  double total = 0.0;
  for (const auto& s : out.samples) total += s.reward;
  out.mean_reward = n_dec ? total / n_dec : 0.0;
  out.effective_reward = n_eff ? eff / n_eff : 0.0;
  out.infeasible = n_dec ? double(n_inf) / n_dec : 0.0;
  out.consistent = n_steps ? double(n_ok) / n_steps : 0.0;

  // Generalized advantage estimates over the decision slots of this episode.
  double next_value = 0.0, gae = 0.0;
  for (std::size_t i = out.samples.size(); i-- > 0;) {
    Sample& s = out.samples[i];
    const double delta = s.reward + hp.gamma * next_value - s.value;
    gae = delta + hp.gamma * hp.gae_lambda * gae;
    s.advantage = gae;
    s.ret = gae + s.value;
    next_value = s.value;
  }
  return out;
}

void add(PolicyNet::Grads& a, const PolicyNet::Grads& b) {
  a.trunk += b.trunk;
  a.pi += b.pi;
  a.v += b.v;
}

}  // namespace

std::optional<int> policy_action(const PolicyNet& net, const MdpState& state, const std::vector<bool>& mask,
                                 bool masked, double alpha, Rng* rng) {
  const bool any = std::any_of(mask.begin(), mask.end(), [](bool b) { return b; });
  if (masked && !any) return std::nullopt;
  const std::vector<bool> m = masked ? mask : std::vector<bool>(mask.size(), true);
  const auto o = net.forward(observation(state));
  const auto p = masked_policy(o.logits, m, alpha);
  if (rng) {
    std::discrete_distribution<int> pick(p.begin(), p.end());
    return pick(*rng);
  }
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

SpoofPlan policy_plan(const ScenarioConfig& cfg, const PolicyNet& net, const Trajectory& truth,
                      std::uint64_t noise_root, bool masked, double alpha) {
  const std::vector<double> actions = action_grid(cfg);
  SpoofEpisode ep(cfg, truth, noise_root);
  SpoofPlan plan;
  plan.initial = ep.state().prev_sensed;
  while (!ep.done()) {
    const FeasibleSet fs = action_mask(cfg, ep.state(), actions);
    const auto a = policy_action(net, ep.state(), fs.mask, masked, alpha, nullptr);
    PlanStep s;
    s.k = ep.slot();
    s.truth = truth[s.k];
    s.result = ep.step(a ? std::optional<double>(actions[*a]) : std::nullopt);
    plan.steps.push_back(s);
  }
  return plan;
}

PpoResult ppo_train(const ScenarioConfig& cfg, const PpoConfig& hp, std::uint64_t seed,
                    const std::function<void(int, double)>& on_episode) {
  Rng init = make_rng(seed, "ppo.init");
  PpoResult res;
  res.policy = PolicyNet(cfg.action_count, init, hp.hidden);
  PolicyNet& net = res.policy;
  Adam opt_trunk(net.trunk.params().size(), hp.lr), opt_pi(net.pi_head.params().size(), hp.lr),
      opt_v(net.v_head.params().size(), hp.lr);

  constexpr int kChunks = 8;
  int update = 0;
  for (int ep0 = 0; ep0 < hp.episodes; ep0 += hp.episodes_per_update, ++update) {
    const int n_ep = std::min(hp.episodes_per_update, hp.episodes - ep0);
    std::vector<EpisodeOut> outs(n_ep);
#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < n_ep; ++e) outs[e] = rollout(cfg, net, hp, seed, ep0 + e);

    std::vector<Sample> batch;
    for (int e = 0; e < n_ep; ++e) {
      res.stats.mean_reward.push_back(outs[e].mean_reward);
      res.stats.effective_reward.push_back(outs[e].effective_reward);
      res.stats.infeasible_fraction.push_back(outs[e].infeasible);
      res.stats.consistent_fraction.push_back(outs[e].consistent);
      if (on_episode) on_episode(ep0 + e, outs[e].mean_reward);
      for (auto& s : outs[e].samples) batch.push_back(std::move(s));
    }
    if (batch.empty()) continue;

    double mean = 0.0, var = 0.0;
    for (const auto& s : batch) mean += s.advantage;
    mean /= batch.size();
    for (const auto& s : batch) var += (s.advantage - mean) * (s.advantage - mean);
    const double sd = std::sqrt(var / batch.size()) + 1e-8;
    for (auto& s : batch) s.advantage = (s.advantage - mean) / sd;

    std::vector<std::size_t> order(batch.size());
    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), 0);
      Rng shuf = make_rng(seed, "ppo.shuffle", std::uint64_t(update) * 1000 + epoch);
      std::shuffle(order.begin(), order.end(), shuf);
      for (std::size_t start = 0; start < order.size(); start += hp.minibatch) {
        const std::size_t end = std::min(order.size(), start + hp.minibatch);
        const double inv = 1.0 / double(end - start);
        std::vector<PolicyNet::Grads> partial(kChunks, net.zero_grads());
        bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
        for (int c = 0; c < kChunks; ++c) {
          for (std::size_t i = start + c; i < end; i += kChunks) {
            const Sample& s = batch[order[i]];
            PolicyNet::Caches cache;
            const auto o = net.forward(s.obs, &cache);
            const auto p = action_probs(o.logits, s.mask, hp.alpha);
            const double logp = std::log(std::max(p[s.action], 1e-300));
            const double ratio = std::exp(logp - s.logp);
            if (!std::isfinite(ratio) || !std::isfinite(o.value)) bad = true;
            const bool clipped = (s.advantage >= 0.0 && ratio > 1.0 + hp.clip) ||
                                 (s.advantage < 0.0 && ratio < 1.0 - hp.clip);
            double entropy = 0.0;
            for (double pi : p)
              if (pi > 0.0) entropy -= pi * std::log(pi);
            VectorXd d_logits(p.size());
            for (std::size_t j = 0; j < p.size(); ++j) {
              const double onehot = int(j) == s.action ? 1.0 : 0.0;
              double g = clipped ? 0.0 : -s.advantage * ratio * (onehot - p[j]);
              if (p[j] > 0.0) g += hp.entropy_coef * p[j] * (std::log(p[j]) + entropy);
              d_logits[j] = g * inv;
            }
            const double d_value = 2.0 * hp.value_coef * (o.value - s.ret) * inv;
            net.backward(cache, d_logits, d_value, partial[c]);
          }
        }
        if (bad) throw NumericalError("ppo_train: non-finite policy ratio or value");
        PolicyNet::Grads total = net.zero_grads();
        for (const auto& g : partial) add(total, g);
        opt_trunk.step(net.trunk.params(), total.trunk);
        opt_pi.step(net.pi_head.params(), total.pi);
        opt_v.step(net.v_head.params(), total.v);
      }
    }
  }
  return res;
}

}  // namespace spoofsim
