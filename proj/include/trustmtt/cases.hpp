#pragma once

// The two case-study worlds: three static agents with partially overlapping
// circular FOVs, six labeled entities per case (true objects plus injected
// false tracks), and the two prior regimes. Geometry is validated against the
// per-label visibility sets at build time.

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "trustmtt/scene.hpp"
#include "trustmtt/trust.hpp"

namespace trustmtt {

enum class CaseId { Case1, Case2 };
enum class PriorRegime { Uninformative, StrongAgent1 };

struct CaseLabel {
  int label = 0;
  bool is_fp = false;
  int owner_agent = -1;  // injecting agent for FPs
  Vec2 position = Vec2::Zero();
  std::set<int> visible_to;  // agent ids whose FOV must contain the position
};

struct CaseBuild {
  Scenario scenario;
  TrustConfig trust;
  std::vector<CaseLabel> labels;
};

inline TrustDistribution uninformative_prior() { return {0.5, 1.0}; }
inline TrustDistribution strong_agent1_prior() { return {0.8, 10.0}; }

namespace detail {

// Entities are kept well past the gating footprint (~11 m at the default R)
// from one another so that a detection of one never corroborates a track on
// another; FOV membership margins stay above 5 m.
inline std::vector<AgentCharacteristics> case_agents() {
  const double radius = 60.0;
  const Mat2 r = Mat2::Identity() * std::sqrt(5.0);  // det R = 5
  std::vector<AgentCharacteristics> agents(3);
  const Vec2 centers[3] = {Vec2(-30.0, 0.0), Vec2(30.0, 0.0), Vec2(0.0, 52.0)};
  for (int i = 0; i < 3; ++i) {
    agents[i].id = i;
    agents[i].position = centers[i];
    agents[i].fov = {centers[i], radius};
    agents[i].detection_prob = 0.9;
    agents[i].meas_noise_cov = r;
  }
  return agents;
}

inline std::vector<CaseLabel> case_labels(CaseId id) {
  std::vector<CaseLabel> v;
  if (id == CaseId::Case1) {
    v.push_back({0, false, -1, Vec2(0.0, -32.0), {0, 1}});
    v.push_back({1, false, -1, Vec2(0.0, 70.0), {2}});
    v.push_back({2, true, 0, Vec2(0.0, -18.0), {0, 1}});
    v.push_back({3, false, -1, Vec2(-20.0, -18.0), {0, 1}});
    v.push_back({4, false, -1, Vec2(20.0, -18.0), {0, 1}});
    v.push_back({5, true, 2, Vec2(0.0, 6.0), {0, 1, 2}});
  } else {
    v.push_back({0, false, -1, Vec2(0.0, -32.0), {0, 1}});
    v.push_back({1, false, -1, Vec2(-20.0, -18.0), {0, 1}});
    v.push_back({2, false, -1, Vec2(20.0, -18.0), {0, 1}});
    v.push_back({3, false, -1, Vec2(-75.0, -10.0), {0}});
    v.push_back({4, true, 2, Vec2(-14.0, 6.0), {0, 1, 2}});
    v.push_back({5, true, 2, Vec2(14.0, 6.0), {0, 1, 2}});
  }
  return v;
}

}  // namespace detail

inline CaseBuild build_case(CaseId id, PriorRegime regime, std::uint64_t seed,
                            int n_frames = 50) {
  CaseBuild out;
  out.scenario.agents = detail::case_agents();
  out.scenario.frame_rate = 10.0;
  out.scenario.n_frames = n_frames;
  out.scenario.rng_seed = seed;
  out.labels = detail::case_labels(id);

  for (const auto& lbl : out.labels) {
    if (lbl.is_fp) {
      auto& owner = out.scenario.agents.at(lbl.owner_agent);
      if (!owner.adversary) owner.adversary = AdversaryProfile{};
      owner.adversary->false_tracks.push_back({lbl.position, Vec2::Zero()});
    } else {
      out.scenario.objects.push_back({lbl.label, lbl.position, Vec2::Zero()});
    }
  }

  for (const auto& lbl : out.labels) {
    for (const auto& agent : out.scenario.agents) {
      const bool expected = lbl.visible_to.count(agent.id) > 0;
      if (fov_contains(agent, lbl.position) != expected)
        throw std::runtime_error("build_case: geometry violates the visibility matrix (label " +
                                 std::to_string(lbl.label) + ", agent " +
                                 std::to_string(agent.id) + ")");
    }
  }
  validate_scenario(out.scenario);

  out.trust.track_prior = uninformative_prior();
  out.trust.agent_prior = uninformative_prior();
  if (regime == PriorRegime::StrongAgent1)
    out.trust.agent_prior_overrides[1] = strong_agent1_prior();
  return out;
}

}  // namespace trustmtt
