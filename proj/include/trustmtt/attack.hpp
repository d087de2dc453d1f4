#pragma once

// Closed-form security analysis of track scoring: the per-detection gain
// bound, the per-frame change bound, the natural-FP gate probability, and the
// minimum frames-to-confirm for an adversary against benign observers, plus
// an empirical confirm-time measurement against the simulator.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trustmtt/scene.hpp"
#include "trustmtt/scoring.hpp"
#include "trustmtt/tracker.hpp"

namespace trustmtt {

struct ThreatConfig {
  int k_a = 1;         // adversaries
  int k_b = 0;         // benign observers
  double det_r = 5.0;  // determinant of the measurement covariance
  ScoringParams params;
};

struct GateVolume {
  double v_g = 0.0;  // gating volume
  double v_c = 0.0;  // bounded clutter region volume

  double lambda_poisson(double beta_fp) const { return v_c * beta_fp; }
};

// Area of the 2D gating ellipse d^2 <= gate_chi2.
inline double gate_area(double gate_chi2, const Mat2& innov_cov) {
  return M_PI * gate_chi2 * std::sqrt(innov_cov.determinant());
}

// Upper bound on any single detection's score contribution (attained at
// d^2 = 0 with S = R).
inline double max_hit_gain(const ScoringParams& p, double det_r) {
  if (det_r <= 0.0) throw std::invalid_argument("max_hit_gain: det_r must be > 0");
  return std::log(p.p_d / (std::pow(2.0 * M_PI, p.eta / 2.0) * p.beta_fp * std::sqrt(det_r)));
}

// Bound on the one-frame score change given d_t detections and m_t misses.
inline double frame_delta_bound(int d_t, int m_t, const ScoringParams& p, double det_r) {
  if (d_t < 0 || m_t < 0) throw std::invalid_argument("frame_delta_bound: counts must be >= 0");
  return d_t * max_hit_gain(p, det_r) + m_t * std::log(1.0 - p.p_d);
}

// Probability that at least one natural FP falls in a gating volume v_g.
inline double fp_gate_probability(double v_g, double beta_fp) {
  if (v_g < 0.0) throw std::invalid_argument("fp_gate_probability: v_g must be >= 0");
  return 1.0 - std::exp(-v_g * beta_fp);
}

// Minimum frames for k_a adversaries to confirm a false track against k_b
// benign observers; empty when benign misses dominate the adversarial gain.
inline std::optional<double> t_min(const ThreatConfig& c) {
  if (c.k_a + c.k_b < 1) throw std::invalid_argument("t_min: k_a + k_b must be >= 1");
  const double denom =
      c.k_a * max_hit_gain(c.params, c.det_r) + c.k_b * std::log(1.0 - c.params.p_d);
  if (denom <= 0.0) return std::nullopt;  // attack infeasible
  return 1.0 + (c.params.t2() - init_score(c.params)) / denom;
}

inline std::optional<int> t_min_ceil(const ThreatConfig& c) {
  const auto t = t_min(c);
  if (!t) return std::nullopt;
  return static_cast<int>(std::ceil(*t));
}

struct SurfaceCell {
  int k_a = 0;
  int k_b = 0;
  std::optional<double> t_min_continuous;
};

inline std::vector<SurfaceCell> t_min_surface(int k_a_max, int k_b_max,
                                              const ThreatConfig& base) {
  if (k_a_max < 1 || k_b_max < 1) throw std::invalid_argument("t_min_surface: ranges non-empty");
  std::vector<SurfaceCell> grid;
  for (int ka = 1; ka <= k_a_max; ++ka) {
    for (int kb = 1; kb <= k_b_max; ++kb) {
      ThreatConfig c = base;
      c.k_a = ka;
      c.k_b = kb;
      grid.push_back({ka, kb, t_min(c)});
    }
  }
  return grid;
}

// Builds the single-volume-element attack world of the threat model: k_a
// compromised agents inject one shared false track at the origin, k_b benign
// agents stare at the same spot with nothing there.
inline Scenario confirm_time_scenario(const ThreatConfig& c, int n_frames,
                                      std::uint64_t seed) {
  Scenario s;
  s.frame_rate = 10.0;
  s.n_frames = n_frames;
  s.rng_seed = seed;
  Mat2 r = Mat2::Identity() * std::sqrt(c.det_r);
  int id = 0;
  for (int i = 0; i < c.k_a; ++i) {
    AgentCharacteristics a;
    a.id = id++;
    a.position = Vec2(0.0, -20.0);
    a.fov = {Vec2::Zero(), 50.0};
    a.detection_prob = c.params.p_d;
    a.meas_noise_cov = r;
    AdversaryProfile adv;
    adv.false_tracks.push_back({Vec2::Zero(), Vec2::Zero()});
    a.adversary = adv;
    s.agents.push_back(a);
  }
  for (int i = 0; i < c.k_b; ++i) {
    AgentCharacteristics a;
    a.id = id++;
    a.position = Vec2(0.0, 20.0);
    a.fov = {Vec2::Zero(), 50.0};
    a.detection_prob = c.params.p_d;
    a.meas_noise_cov = r;
    s.agents.push_back(a);
  }
  validate_scenario(s);
  return s;
}

struct ConfirmTimeResult {
  double mean_frames = 0.0;
  int min_frames = 0;
  std::vector<int> per_trial;  // 1-based frame of first confirmation; -1 if never
};

// Runs the simulator under the threat-model scenario and records the first
// frame (1-based) at which the injected false track reaches Confirmed.
inline ConfirmTimeResult monte_carlo_confirm_time(const ThreatConfig& c, int n_trials,
                                                  std::uint64_t root_seed,
                                                  int max_frames = 200) {
  ConfirmTimeResult res;
  if (n_trials <= 0) return res;
  const auto bound = t_min(c);
  if (!bound) throw std::invalid_argument("monte_carlo_confirm_time: attack infeasible");
  long long sum = 0;
  int n_confirmed = 0;
  res.min_frames = max_frames + 1;
  for (int trial = 0; trial < n_trials; ++trial) {
    Scenario s = confirm_time_scenario(c, max_frames, substream_seed(root_seed, trial));
    Rng rng(s.rng_seed);
    TrackerConfig tc;
    tc.scoring = c.params;
    Tracker tracker(tc);
    int confirmed_at = -1;
    for (int f = 0; f < max_frames && confirmed_at < 0; ++f) {
      auto dets = generate_detections(s, f, rng);
      std::map<int, std::vector<Detection>> batches;
      for (const auto& a : s.agents) batches[a.id];
      for (auto& d : dets) batches[d.agent_id].push_back(d);
      tracker.step(batches, s.agents, s.dt());
      for (const auto& t : tracker.tracks()) {
        if (t.status == TrackStatus::Confirmed) {
          confirmed_at = f + 1;
          break;
        }
      }
    }
    res.per_trial.push_back(confirmed_at);
    if (confirmed_at > 0) {
      ++n_confirmed;
      sum += confirmed_at;
      res.min_frames = std::min(res.min_frames, confirmed_at);
    }
  }
  res.mean_frames = n_confirmed > 0 ? static_cast<double>(sum) / n_confirmed : -1.0;
  if (n_confirmed == 0) res.min_frames = -1;
  return res;
}

}  // namespace trustmtt
