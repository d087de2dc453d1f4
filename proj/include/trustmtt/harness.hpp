#pragma once

// End-to-end runner: per frame, generate detections, advance each agent's
// local single-sensor tracker, advance the central tracker, update trusts,
// and append trace rows. Also the trace file formats (CSV and JSON lines)
// with loaders for round-tripping.

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "trustmtt/attack.hpp"
#include "trustmtt/cases.hpp"
#include "trustmtt/scene.hpp"
#include "trustmtt/tracker.hpp"
#include "trustmtt/trust.hpp"

namespace trustmtt {

struct TrackRow {
  int frame = 0;
  int track_id = 0;
  double x = 0.0, y = 0.0, vx = 0.0, vy = 0.0;
  double score = 0.0;
  double prob = 0.0;
  std::string status;
  std::string matched;  // "object:<id>", "fp:<agent>:<index>", or "none"
};

struct TrustRow {
  int frame = 0;
  std::string kind;  // "track" or "agent"
  int id = 0;
  double phi = 0.0;
  double lambda = 0.0;
  double variance = 0.0;
  int psm_count = 0;
};

struct RunTrace {
  std::uint64_t seed = 0;
  int n_frames = 0;
  int schema = 1;
  std::string case_name = "custom";
  std::string prior_regime = "none";
  std::vector<TrackRow> tracks;
  std::vector<TrustRow> trusts;
};

inline std::string status_name(TrackStatus s) {
  switch (s) {
    case TrackStatus::Tentative: return "tentative";
    case TrackStatus::Confirmed: return "confirmed";
    default: return "deleted";
  }
}

// Nearest ground-truth entity within `radius` of the track estimate.
inline std::string match_truth(const Vec2& pos, const Scenario& s, double time,
                               double radius = 5.0) {
  double best = radius;
  std::string tag = "none";
  for (const auto& o : s.objects) {
    const double d = (o.position - pos).norm();
    if (d <= best) {
      best = d;
      tag = "object:" + std::to_string(o.id);
    }
  }
  for (const auto& a : s.agents) {
    if (!a.adversary) continue;
    for (std::size_t i = 0; i < a.adversary->false_tracks.size(); ++i) {
      const auto& ft = a.adversary->false_tracks[i];
      const Vec2 p = ft.spawn_position + ft.velocity * time;
      const double d = (p - pos).norm();
      if (d <= best) {
        best = d;
        tag = "fp:" + std::to_string(a.id) + ":" + std::to_string(i);
      }
    }
  }
  return tag;
}

struct RunResult {
  RunTrace trace;
  Tracker central;
  TrustState trust;
  std::map<int, Tracker> locals;

  RunResult(const TrackerConfig& tc) : central(tc) {}
};

inline RunResult run(const Scenario& scenario_in, const TrustConfig& trust_cfg,
                     const TrackerConfig& tracker_cfg = {}) {
  if (scenario_in.n_frames == 0) {  // empty run: nothing executes, priors untouched
    RunResult empty(tracker_cfg);
    empty.trace.seed = scenario_in.rng_seed;
    return empty;
  }
  validate_scenario(scenario_in);
  Scenario scenario = scenario_in;
  RunResult res(tracker_cfg);
  res.trace.seed = scenario.rng_seed;
  res.trace.n_frames = scenario.n_frames;
  for (const auto& a : scenario.agents) res.locals.emplace(a.id, Tracker(tracker_cfg));

  Rng rng(scenario.rng_seed);
  const double dt = scenario.dt();
  for (int f = 0; f < scenario.n_frames; ++f) {
    auto dets = generate_detections(scenario, f, rng);
    std::map<int, std::vector<Detection>> batches;
    for (const auto& a : scenario.agents) batches[a.id];
    for (auto& d : dets) batches.at(d.agent_id).push_back(d);

    std::map<int, std::vector<Vec2>> local_positions;
    for (const auto& a : scenario.agents) {
      auto& local = res.locals.at(a.id);
      std::map<int, std::vector<Detection>> own{{a.id, batches.at(a.id)}};
      local.step(own, {a}, dt);
      auto& pos = local_positions[a.id];
      for (const auto& t : local.tracks()) pos.push_back(t.position());
    }

    res.central.step(batches, scenario.agents, dt);
    const auto info = trust_step(res.trust, res.central, scenario.agents, batches,
                                 local_positions, trust_cfg);

    const double time = f * dt;
    for (const auto& t : res.central.tracks()) {
      TrackRow row;
      row.frame = f;
      row.track_id = t.id;
      row.x = t.mean(0);
      row.y = t.mean(1);
      row.vx = t.mean(2);
      row.vy = t.mean(3);
      row.score = t.score;
      row.prob = score_to_prob(t.score);
      row.status = status_name(t.status);
      row.matched = match_truth(t.position(), scenario, time);
      res.trace.tracks.push_back(row);
    }
    for (const auto& [id, d] : res.trust.track_trusts) {
      auto it = info.track_psm_counts.find(id);
      res.trace.trusts.push_back({f, "track", id, d.mean(), d.precision_lambda, d.variance(),
                                  it == info.track_psm_counts.end() ? 0 : it->second});
    }
    for (const auto& [id, d] : res.trust.agent_trusts) {
      auto it = info.agent_psm_counts.find(id);
      res.trace.trusts.push_back({f, "agent", id, d.mean(), d.precision_lambda, d.variance(),
                                  it == info.agent_psm_counts.end() ? 0 : it->second});
    }

    if (f + 1 < scenario.n_frames) step_objects(scenario, dt);
  }
  return res;
}

// Convenience for the case studies: returns the run plus per-label final
// trust means (track labels matched by position at the final frame).
struct CaseOutcome {
  std::map<int, double> track_trust_by_label;  // label -> final trust mean
  std::map<int, double> agent_trust;           // agent id -> final trust mean
  RunTrace trace;
};

inline CaseOutcome run_case(CaseId id, PriorRegime regime, std::uint64_t seed,
                            int n_frames = 50) {
  const CaseBuild build = build_case(id, regime, seed, n_frames);
  RunResult res = run(build.scenario, build.trust);
  CaseOutcome out;
  out.trace = res.trace;
  out.trace.case_name = id == CaseId::Case1 ? "case1" : "case2";
  out.trace.prior_regime = regime == PriorRegime::StrongAgent1 ? "agent1" : "none";
  for (const auto& [aid, d] : res.trust.agent_trusts) out.agent_trust[aid] = d.mean();
  for (const auto& lbl : build.labels) {
    double best = 5.0;
    int best_track = -1;
    for (const auto& t : res.central.tracks()) {
      const double d = (t.position() - lbl.position).norm();
      if (d <= best) {
        best = d;
        best_track = t.id;
      }
    }
    if (best_track >= 0 && res.trust.track_trusts.count(best_track))
      out.track_trust_by_label[lbl.label] = res.trust.track_trusts.at(best_track).mean();
  }
  return out;
}

// ---- trace files ----------------------------------------------------------

inline void emit_tracks_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_tracks_csv: cannot open " + path);
  f << "frame,track_id,x,y,vx,vy,score,prob,status,matched\n";
  f << std::setprecision(17);
  for (const auto& r : trace.tracks)
    f << r.frame << ',' << r.track_id << ',' << r.x << ',' << r.y << ',' << r.vx << ','
      << r.vy << ',' << r.score << ',' << r.prob << ',' << r.status << ',' << r.matched
      << '\n';
}

inline void emit_trust_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_trust_csv: cannot open " + path);
  f << "frame,kind,id,phi,lambda,variance,psm_count\n";
  f << std::setprecision(17);
  for (const auto& r : trace.trusts)
    f << r.frame << ',' << r.kind << ',' << r.id << ',' << r.phi << ',' << r.lambda << ','
      << r.variance << ',' << r.psm_count << '\n';
}

inline void emit_jsonl(const RunTrace& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_jsonl: cannot open " + path);
  nlohmann::json meta{{"type", "meta"},
                      {"schema", trace.schema},
                      {"seed", trace.seed},
                      {"n_frames", trace.n_frames},
                      {"case", trace.case_name},
                      {"prior", trace.prior_regime}};
  f << meta.dump() << '\n';
  for (const auto& r : trace.tracks) {
    nlohmann::json j{{"type", "track"},   {"frame", r.frame}, {"track_id", r.track_id},
                     {"x", r.x},          {"y", r.y},         {"vx", r.vx},
                     {"vy", r.vy},        {"score", r.score}, {"prob", r.prob},
                     {"status", r.status}, {"matched", r.matched}};
    f << j.dump() << '\n';
  }
  for (const auto& r : trace.trusts) {
    nlohmann::json j{{"type", "trust"},  {"frame", r.frame},   {"kind", r.kind},
                     {"id", r.id},       {"phi", r.phi},       {"lambda", r.lambda},
                     {"variance", r.variance}, {"psm_count", r.psm_count}};
    f << j.dump() << '\n';
  }
}

inline RunTrace load_jsonl(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_jsonl: cannot open " + path);
  RunTrace trace;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const std::string type = j.at("type");
    if (type == "meta") {
      trace.schema = j.at("schema");
      trace.seed = j.at("seed");
      trace.n_frames = j.at("n_frames");
      trace.case_name = j.at("case");
      trace.prior_regime = j.at("prior");
    } else if (type == "track") {
      trace.tracks.push_back({j.at("frame"), j.at("track_id"), j.at("x"), j.at("y"),
                              j.at("vx"), j.at("vy"), j.at("score"), j.at("prob"),
                              j.at("status"), j.at("matched")});
    } else if (type == "trust") {
      trace.trusts.push_back({j.at("frame"), j.at("kind"), j.at("id"), j.at("phi"),
                              j.at("lambda"), j.at("variance"), j.at("psm_count")});
    }
  }
  return trace;
}

}  // namespace trustmtt
