#pragma once

// Synthetic world: true objects, agents with circular FOVs, benign detection
// generation, and the compromised-agent adversary (persistent false positives,
// suppressed detections).

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "trustmtt/common.hpp"

namespace trustmtt {

struct ObjectState {
  int id = 0;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
};

struct CircleFov {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

struct FalseTrack {
  Vec2 spawn_position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
};

struct AdversaryProfile {
  std::vector<FalseTrack> false_tracks;
  std::set<int> suppress_ids;  // object ids never reported (FN attack)
};

struct AgentCharacteristics {
  int id = 0;
  Vec2 position = Vec2::Zero();
  double heading = 0.0;
  CircleFov fov;
  double detection_prob = 0.9;       // P_D, in (0, 1]
  Mat2 meas_noise_cov = Mat2::Identity();  // R, SPD
  std::optional<AdversaryProfile> adversary;

  bool compromised() const { return adversary.has_value(); }
};

enum class TruthTag { TrueObject, AdversarialFP, NaturalFP };

// Simulation ground truth rides along in `truth_tag`/`truth_id`; estimators
// must never read it.
struct Detection {
  int agent_id = 0;
  Vec2 value = Vec2::Zero();
  Mat2 noise_cov = Mat2::Identity();
  int frame = 0;
  TruthTag truth_tag = TruthTag::TrueObject;
  int truth_id = -1;  // object id for TrueObject, false-track index for AdversarialFP
};

// Natural false positives, off by default. Counts are Poisson with
// mean density * FOV area; positions uniform over the FOV disc.
struct ClutterModel {
  bool enabled = false;
  double density = 1e-6;  // beta_FP, per unit area
};

struct Scenario {
  std::vector<AgentCharacteristics> agents;
  std::vector<ObjectState> objects;
  double frame_rate = 10.0;  // Hz
  int n_frames = 50;
  std::uint64_t rng_seed = 0;
  ClutterModel clutter;
  bool adversarial_noise = false;  // add R-noise to injected FPs

  double dt() const { return 1.0 / frame_rate; }
};

// Closed-boundary membership test (<= radius).
inline bool fov_contains(const AgentCharacteristics& agent, const Vec2& point) {
  return (point - agent.fov.center).norm() <= agent.fov.radius;
}

inline void validate_scenario(const Scenario& s) {
  if (s.agents.empty()) throw std::invalid_argument("scenario: at least one agent required");
  if (s.n_frames < 1) throw std::invalid_argument("scenario: n_frames >= 1 required");
  if (s.frame_rate <= 0.0) throw std::invalid_argument("scenario: frame_rate must be > 0");
  std::set<int> oids;
  for (const auto& o : s.objects)
    if (!oids.insert(o.id).second) throw std::invalid_argument("scenario: duplicate object id");
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& a = s.agents[i];
    if (i > 0 && s.agents[i - 1].id >= a.id)
      throw std::invalid_argument("scenario: agent ids must be strictly ascending");
    if (a.fov.radius <= 0.0) throw std::invalid_argument("scenario: fov radius must be > 0");
    if (a.detection_prob <= 0.0 || a.detection_prob > 1.0)
      throw std::invalid_argument("scenario: detection_prob must be in (0, 1]");
    Eigen::LLT<Mat2> llt(a.meas_noise_cov);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("scenario: meas_noise_cov must be SPD");
    if (a.adversary) {
      for (const auto& ft : a.adversary->false_tracks) {
        if (!fov_contains(a, ft.spawn_position))
          throw std::invalid_argument("scenario: false-track spawn outside owning agent's FOV");
      }
    }
  }
}

inline void step_objects(Scenario& s, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step_objects: dt must be > 0");
  for (auto& o : s.objects) o.position += o.velocity * dt;
}

inline Vec2 sample_noise(const Mat2& cov, Rng& rng) {
  std::normal_distribution<double> stdn(0.0, 1.0);
  Vec2 u(stdn(rng), stdn(rng));
  return Eigen::LLT<Mat2>(cov).matrixL() * u;
}

// One batch per agent per frame, agents in ascending id order. Benign agents
// report each in-FOV object with probability P_D plus R-noise; compromised
// agents additionally inject one detection per active false track, placed
// exactly at the false track's current position, and drop suppressed ids.
inline std::vector<Detection> generate_detections(const Scenario& s, int frame, Rng& rng) {
  if (frame >= s.n_frames) throw std::invalid_argument("generate_detections: frame out of range");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double t = frame * s.dt();
  std::vector<Detection> out;
  for (const auto& agent : s.agents) {
    for (const auto& obj : s.objects) {
      if (agent.adversary && agent.adversary->suppress_ids.count(obj.id)) continue;
      if (!fov_contains(agent, obj.position)) continue;
      if (unif(rng) >= agent.detection_prob) continue;
      Detection d;
      d.agent_id = agent.id;
      d.value = obj.position + sample_noise(agent.meas_noise_cov, rng);
      d.noise_cov = agent.meas_noise_cov;
      d.frame = frame;
      d.truth_tag = TruthTag::TrueObject;
      d.truth_id = obj.id;
      out.push_back(d);
    }
    if (agent.adversary) {
      int idx = 0;
      for (const auto& ft : agent.adversary->false_tracks) {
        Detection d;
        d.agent_id = agent.id;
        d.value = ft.spawn_position + ft.velocity * t;
        if (s.adversarial_noise) d.value += sample_noise(agent.meas_noise_cov, rng);
        d.noise_cov = agent.meas_noise_cov;
        d.frame = frame;
        d.truth_tag = TruthTag::AdversarialFP;
        d.truth_id = idx++;
        out.push_back(d);
      }
    }
    if (s.clutter.enabled) {
      const double area = M_PI * agent.fov.radius * agent.fov.radius;
      std::poisson_distribution<int> pois(s.clutter.density * area);
      const int n = pois(rng);
      for (int i = 0; i < n; ++i) {
        const double r = agent.fov.radius * std::sqrt(unif(rng));
        const double theta = 2.0 * M_PI * unif(rng);
        Detection d;
        d.agent_id = agent.id;
        d.value = agent.fov.center + Vec2(r * std::cos(theta), r * std::sin(theta));
        d.noise_cov = agent.meas_noise_cov;
        d.frame = frame;
        d.truth_tag = TruthTag::NaturalFP;
        d.truth_id = -1;
        out.push_back(d);
      }
    }
  }
  return out;
}

}  // namespace trustmtt
