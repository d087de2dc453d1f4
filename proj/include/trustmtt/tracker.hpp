#pragma once

// Centralized multi-sensor tracker: per-frame predict, per-agent sequential
// association (ascending agent id), score lifecycle, track spawning.
//
// Lifecycle notes. With the default densities the initial score
// log(P_D*beta_NT/beta_FP) sits below the deletion threshold T1, so the
// deletion test is applied to the score increment since birth (L - L0 <= T1);
// confirmation stays absolute (L >= T2). A track's spawn frame is
// score-neutral: detections arriving in the batch that spawned it or in later
// batches of the same frame refine the state but are already accounted for by
// the initial score.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trustmtt/assignment.hpp"
#include "trustmtt/kalman.hpp"
#include "trustmtt/scene.hpp"
#include "trustmtt/scoring.hpp"

namespace trustmtt {

struct Innovation {
  Vec2 residual = Vec2::Zero();
  Mat2 innov_cov = Mat2::Identity();
  double mahalanobis_sq = 0.0;
};

struct ScoreEvent {
  int frame = 0;
  int agent_id = 0;
  bool hit = false;
  double delta_l = 0.0;
};

struct TrackState {
  int id = 0;
  Vec4 mean = Vec4::Zero();
  Mat4 cov = Mat4::Identity();
  double score = 0.0;
  TrackStatus status = TrackStatus::Tentative;
  std::optional<Innovation> last_innovation;
  std::vector<ScoreEvent> hit_history;
  int spawn_frame = 0;
  double initial_score = 0.0;

  Vec2 position() const { return mean.head<2>(); }
  Vec2 velocity() const { return mean.tail<2>(); }
};

struct TrackerConfig {
  ScoringParams scoring;
  double process_noise_q = 0.01;  // CV white-acceleration intensity
  double init_velocity_var = 4.0; // prior variance on each velocity axis
  // Initiation gate, wider than the association gate: detections inside some
  // track's spawn gate but outside its association gate are dropped rather
  // than allowed to seed a duplicate track.
  double spawn_gate_chi2 = 18.42;
};

class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}) : cfg_(cfg) { cfg_.scoring.validate(); }

  const TrackerConfig& config() const { return cfg_; }
  const std::vector<TrackState>& tracks() const { return tracks_; }
  int frame() const { return frame_; }

  // One full frame: predict, associate per agent, score, spawn, lifecycle.
  // `batches` maps agent id to that agent's detections for this frame.
  void step(const std::map<int, std::vector<Detection>>& batches,
            const std::vector<AgentCharacteristics>& agents, double dt) {
    ++frame_;
    for (auto& t : tracks_) {
      kf_predict(t.mean, t.cov, dt, cfg_.process_noise_q);
      t.last_innovation.reset();
    }

    std::map<int, const AgentCharacteristics*> agent_by_id;
    for (const auto& a : agents) agent_by_id[a.id] = &a;
    for (const auto& [aid, dets] : batches) {
      if (!agent_by_id.count(aid))
        throw std::invalid_argument("tracker: batch from unknown agent id");
      for (const auto& d : dets)
        if (d.agent_id != aid) throw std::invalid_argument("tracker: mismatched agent id in batch");
    }

    for (const auto& [aid, agent_ptr] : agent_by_id) {
      const auto& agent = *agent_ptr;
      auto it = batches.find(aid);
      const std::vector<Detection> empty;
      const auto& dets = it == batches.end() ? empty : it->second;
      process_batch(agent, dets);
    }

    apply_lifecycle();
  }

  void erase_track(int track_id) {
    tracks_.erase(std::remove_if(tracks_.begin(), tracks_.end(),
                                 [&](const TrackState& t) { return t.id == track_id; }),
                  tracks_.end());
  }

 private:
  void process_batch(const AgentCharacteristics& agent, const std::vector<Detection>& dets) {
    const int nt = static_cast<int>(tracks_.size());
    const int nd = static_cast<int>(dets.size());
    if (nt == 0) {
      for (const auto& d : dets) spawn_track(d);
      return;
    }

    std::vector<std::vector<double>> cost(nt, std::vector<double>(nd, 0.0));
    std::vector<std::vector<char>> gated(nt, std::vector<char>(nd, 0));
    std::vector<std::vector<GateResult>> gr(nt, std::vector<GateResult>(nd));
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < nd; ++j) {
        gr[i][j] = gate(tracks_[i].mean, tracks_[i].cov, dets[j].value, dets[j].noise_cov,
                        cfg_.scoring);
        cost[i][j] = gr[i][j].mahalanobis_sq;
        gated[i][j] = gr[i][j].passes ? 1 : 0;
      }
    }
    const Assignment assn = associate(cost, gated);

    std::vector<char> track_hit(nt, 0);
    for (const auto& [i, j] : assn.pairs) {
      auto& t = tracks_[i];
      const GateResult g = kf_update(t.mean, t.cov, dets[j].value, dets[j].noise_cov,
                                     cfg_.scoring);
      t.last_innovation = Innovation{g.residual, g.innov_cov, g.mahalanobis_sq};
      track_hit[i] = 1;
      if (t.spawn_frame < frame_) {
        const double before = t.score;
        t.score = score_update_hit(t.score, g.mahalanobis_sq, g.innov_cov, cfg_.scoring);
        t.hit_history.push_back({frame_, agent.id, true, t.score - before});
      }
    }
    for (int i = 0; i < nt; ++i) {
      auto& t = tracks_[i];
      if (track_hit[i] || t.spawn_frame >= frame_) continue;
      if (!fov_contains(agent, t.position())) continue;  // no penalty outside the FOV
      const double before = t.score;
      t.score = score_update_miss(t.score, cfg_.scoring);
      t.hit_history.push_back({frame_, agent.id, false, t.score - before});
    }

    for (int j : assn.unassigned_cols) {
      bool near_existing = false;
      for (int i = 0; i < nt && !near_existing; ++i)
        near_existing = gr[i][j].mahalanobis_sq <= cfg_.spawn_gate_chi2;
      if (!near_existing) spawn_track(dets[j]);
    }
  }

  void spawn_track(const Detection& d) {
    TrackState t;
    t.id = next_id_++;
    t.mean = Vec4::Zero();
    t.mean.head<2>() = d.value;
    t.cov = Mat4::Zero();
    t.cov.topLeftCorner<2, 2>() = d.noise_cov;
    t.cov(2, 2) = t.cov(3, 3) = cfg_.init_velocity_var;
    t.score = init_score(cfg_.scoring);
    t.initial_score = t.score;
    t.status = TrackStatus::Tentative;
    t.spawn_frame = frame_;
    tracks_.push_back(std::move(t));
  }

  void apply_lifecycle() {
    for (auto& t : tracks_) {
      if (t.spawn_frame >= frame_) continue;
      if (t.score >= cfg_.scoring.t2()) {
        t.status = TrackStatus::Confirmed;
      }
      if (t.score - t.initial_score <= cfg_.scoring.t1()) {
        t.status = TrackStatus::Deleted;
      }
    }
    tracks_.erase(std::remove_if(tracks_.begin(), tracks_.end(),
                                 [](const TrackState& t) {
                                   return t.status == TrackStatus::Deleted;
                                 }),
                  tracks_.end());
  }

  TrackerConfig cfg_;
  std::vector<TrackState> tracks_;
  int frame_ = 0;
  int next_id_ = 0;
};

}  // namespace trustmtt
