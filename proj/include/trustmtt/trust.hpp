#pragma once

// Hierarchical Bayesian trust estimation. Track and agent trusts are Beta
// distributions in mean/precision form, updated from per-frame trust
// pseudomeasurements (PSMs) via the conjugate Beta-Bernoulli rule, with a
// precision-decay process-noise step. Sequencing follows the alternating
// conditional decomposition: track trusts update against last frame's agent
// trusts, agent trusts against the current track trusts.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "trustmtt/kalman.hpp"
#include "trustmtt/scene.hpp"
#include "trustmtt/tracker.hpp"

namespace trustmtt {

struct TrustDistribution {
  double mean_phi = 0.5;        // phi = alpha / (alpha + beta)
  double precision_lambda = 1.0;  // lambda = alpha + beta

  double alpha() const { return precision_lambda * mean_phi; }
  double beta() const { return precision_lambda * (1.0 - mean_phi); }
  double mean() const { return mean_phi; }
  double variance() const {
    return mean_phi * (1.0 - mean_phi) / (precision_lambda + 1.0);
  }

  static TrustDistribution from_canonical(double a, double b) {
    if (a <= 0.0 || b <= 0.0)
      throw std::invalid_argument("trust: canonical alpha, beta must be > 0");
    return {a / (a + b), a + b};
  }

  void validate() const {
    if (mean_phi <= 0.0 || mean_phi >= 1.0)
      throw std::invalid_argument("trust: mean must be in (0,1)");
    if (precision_lambda <= 0.0)
      throw std::invalid_argument("trust: precision must be > 0");
  }
};

struct PsmDatapoint {
  double value = 0.0;       // v in [0,1]
  double confidence = 0.0;  // c in [0,1]
  int track_id = -1;
  int agent_id = -1;
};

inline TrustDistribution beta_update(const TrustDistribution& dist,
                                     const std::vector<PsmDatapoint>& psms) {
  double a = dist.alpha();
  double b = dist.beta();
  for (const auto& p : psms) {
    if (p.value < 0.0 || p.value > 1.0 || p.confidence < 0.0 || p.confidence > 1.0)
      throw std::invalid_argument("beta_update: PSM fields must be in [0,1]");
    a += p.confidence * p.value;
    b += p.confidence * (1.0 - p.value);
  }
  return TrustDistribution::from_canonical(a, b);
}

inline TrustDistribution apply_process_noise(const TrustDistribution& dist, double decay,
                                             double lambda_floor) {
  if (decay <= 0.0 || decay > 1.0)
    throw std::invalid_argument("apply_process_noise: decay must be in (0,1]");
  TrustDistribution out = dist;
  out.precision_lambda = std::max(lambda_floor, decay * dist.precision_lambda);
  return out;
}

struct TrustConfig {
  TrustDistribution track_prior{0.5, 1.0};
  TrustDistribution agent_prior{0.5, 1.0};
  std::map<int, TrustDistribution> agent_prior_overrides;
  double process_noise_decay = 0.98;
  double lambda_floor = 0.1;
  double match_threshold = 4.5;  // local-vs-central track match distance, meters

  TrustDistribution prior_for_agent(int agent_id) const {
    auto it = agent_prior_overrides.find(agent_id);
    return it == agent_prior_overrides.end() ? agent_prior : it->second;
  }
};

struct TrustState {
  std::map<int, TrustDistribution> track_trusts;
  std::map<int, TrustDistribution> agent_trusts;
};

// Track PSM: each agent expected to see the track contributes one datapoint,
// value 1 if the agent has a detection gating to the track, 0 otherwise,
// confidence the agent's trust mean. No datapoints unless at least two agents
// are expected observers.
inline std::vector<PsmDatapoint> track_psm(const TrackState& track,
                                           const std::vector<AgentCharacteristics>& agents,
                                           const std::map<int, std::vector<Detection>>& batches,
                                           const std::map<int, double>& agent_trust_means,
                                           const ScoringParams& params) {
  std::vector<PsmDatapoint> out;
  int n_expected = 0;
  for (const auto& agent : agents) {
    if (!fov_contains(agent, track.position())) continue;
    ++n_expected;
    bool seen = false;
    auto it = batches.find(agent.id);
    if (it != batches.end()) {
      for (const auto& det : it->second) {
        const GateResult g =
            gate(track.mean, track.cov, det.value, det.noise_cov, params);
        if (g.passes) {
          seen = true;
          break;
        }
      }
    }
    auto tm = agent_trust_means.find(agent.id);
    if (tm == agent_trust_means.end())
      throw std::invalid_argument("track_psm: unknown agent id");
    out.push_back({seen ? 1.0 : 0.0, tm->second, track.id, agent.id});
  }
  if (n_expected <= 1) return {};
  return out;
}

// Agent PSM: each central track the agent is expected to see contributes one
// datapoint. A matching local track endorses the central track's trust; a
// missing one endorses its negation. Confidence is one minus the track-trust
// variance.
inline std::vector<PsmDatapoint> agent_psm(const AgentCharacteristics& agent,
                                           const std::vector<TrackState>& central_tracks,
                                           const std::map<int, TrustDistribution>& track_trusts,
                                           const std::vector<Vec2>& local_track_positions,
                                           double match_threshold) {
  std::vector<PsmDatapoint> out;
  for (const auto& ct : central_tracks) {
    if (!fov_contains(agent, ct.position())) continue;
    auto tt = track_trusts.find(ct.id);
    if (tt == track_trusts.end()) throw std::invalid_argument("agent_psm: unknown track id");
    bool matched = false;
    for (const auto& lp : local_track_positions) {
      if ((lp - ct.position()).norm() <= match_threshold) {
        matched = true;
        break;
      }
    }
    const double e = tt->second.mean();
    const double c = 1.0 - tt->second.variance();
    out.push_back({matched ? e : 1.0 - e, c, ct.id, agent.id});
  }
  return out;
}

struct TrustStepInfo {
  std::map<int, int> track_psm_counts;
  std::map<int, int> agent_psm_counts;
};

// One trust frame, run after the MTT frame. Order: process noise on all
// distributions, track PSMs with previous-frame agent trusts, track updates,
// agent PSMs with current track trusts, agent updates.
inline TrustStepInfo trust_step(TrustState& state, const Tracker& central,
                                const std::vector<AgentCharacteristics>& agents,
                                const std::map<int, std::vector<Detection>>& batches,
                                const std::map<int, std::vector<Vec2>>& local_tracks,
                                const TrustConfig& cfg) {
  TrustStepInfo info;
  for (const auto& agent : agents) {
    if (!state.agent_trusts.count(agent.id))
      state.agent_trusts.emplace(agent.id, cfg.prior_for_agent(agent.id));
  }
  std::map<int, TrustDistribution> live;
  for (const auto& t : central.tracks()) {
    auto it = state.track_trusts.find(t.id);
    live.emplace(t.id, it == state.track_trusts.end() ? cfg.track_prior : it->second);
  }
  state.track_trusts = std::move(live);

  for (auto& [id, d] : state.track_trusts)
    d = apply_process_noise(d, cfg.process_noise_decay, cfg.lambda_floor);
  for (auto& [id, d] : state.agent_trusts)
    d = apply_process_noise(d, cfg.process_noise_decay, cfg.lambda_floor);

  std::map<int, double> prev_agent_means;
  for (const auto& [id, d] : state.agent_trusts) prev_agent_means[id] = d.mean();

  for (const auto& t : central.tracks()) {
    const auto psms =
        track_psm(t, agents, batches, prev_agent_means, central.config().scoring);
    info.track_psm_counts[t.id] = static_cast<int>(psms.size());
    state.track_trusts.at(t.id) = beta_update(state.track_trusts.at(t.id), psms);
  }

  for (const auto& agent : agents) {
    auto lt = local_tracks.find(agent.id);
    if (lt == local_tracks.end())
      throw std::invalid_argument("trust_step: missing local tracks for agent");
    const auto psms = agent_psm(agent, central.tracks(), state.track_trusts, lt->second,
                                cfg.match_threshold);
    info.agent_psm_counts[agent.id] = static_cast<int>(psms.size());
    state.agent_trusts.at(agent.id) = beta_update(state.agent_trusts.at(agent.id), psms);
  }
  return info;
}

// Optional trust-informed pruning, off by default: delete tracks whose trust
// mean is below the threshold once enough evidence (precision) has built up.
inline std::vector<int> prune_by_trust(Tracker& tracker, const TrustState& state,
                                       double trust_threshold, double confidence_min) {
  std::vector<int> pruned;
  for (const auto& t : tracker.tracks()) {
    auto it = state.track_trusts.find(t.id);
    if (it == state.track_trusts.end()) continue;
    if (it->second.mean() < trust_threshold && it->second.precision_lambda >= confidence_min)
      pruned.push_back(t.id);
  }
  for (int id : pruned) tracker.erase_track(id);
  return pruned;
}

}  // namespace trustmtt
