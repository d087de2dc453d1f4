#pragma once

// Scenario files: JSON documents mirroring the Scenario structure, plus the
// trust prior configuration keys. Schema is documented in the README.

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "trustmtt/scene.hpp"
#include "trustmtt/trust.hpp"

namespace trustmtt {

inline nlohmann::json to_json(const Vec2& v) { return nlohmann::json::array({v.x(), v.y()}); }

inline Vec2 vec2_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("scenario: expected [x, y]");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

inline nlohmann::json to_json(const Mat2& m) {
  return nlohmann::json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
}

inline Mat2 mat2_from_json(const nlohmann::json& j) {
  Mat2 m;
  m << j.at(0).at(0).get<double>(), j.at(0).at(1).get<double>(), j.at(1).at(0).get<double>(),
      j.at(1).at(1).get<double>();
  return m;
}

inline nlohmann::json to_json(const TrustDistribution& d) {
  return {{"phi", d.mean_phi}, {"lambda", d.precision_lambda}};
}

inline TrustDistribution trust_from_json(const nlohmann::json& j) {
  return {j.at("phi").get<double>(), j.at("lambda").get<double>()};
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["schema"] = 1;
  j["frame_rate"] = s.frame_rate;
  j["n_frames"] = s.n_frames;
  j["rng_seed"] = s.rng_seed;
  j["adversarial_noise"] = s.adversarial_noise;
  if (s.clutter.enabled)
    j["clutter"] = {{"enabled", true}, {"density", s.clutter.density}};
  j["objects"] = nlohmann::json::array();
  for (const auto& o : s.objects)
    j["objects"].push_back(
        {{"id", o.id}, {"position", to_json(o.position)}, {"velocity", to_json(o.velocity)}});
  j["agents"] = nlohmann::json::array();
  for (const auto& a : s.agents) {
    nlohmann::json ja{{"id", a.id},
                      {"position", to_json(a.position)},
                      {"heading", a.heading},
                      {"fov", {{"center", to_json(a.fov.center)}, {"radius", a.fov.radius}}},
                      {"detection_prob", a.detection_prob},
                      {"meas_noise_cov", to_json(a.meas_noise_cov)}};
    if (a.adversary) {
      nlohmann::json adv;
      adv["false_tracks"] = nlohmann::json::array();
      for (const auto& ft : a.adversary->false_tracks)
        adv["false_tracks"].push_back(
            {{"spawn", to_json(ft.spawn_position)}, {"velocity", to_json(ft.velocity)}});
      adv["suppress_ids"] = a.adversary->suppress_ids;
      ja["adversary"] = adv;
    }
    j["agents"].push_back(ja);
  }
  return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.frame_rate = j.at("frame_rate").get<double>();
  s.n_frames = j.at("n_frames").get<int>();
  s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  s.adversarial_noise = j.value("adversarial_noise", false);
  if (j.contains("clutter")) {
    s.clutter.enabled = j["clutter"].value("enabled", false);
    s.clutter.density = j["clutter"].value("density", 1e-6);
  }
  for (const auto& jo : j.value("objects", nlohmann::json::array()))
    s.objects.push_back({jo.at("id").get<int>(), vec2_from_json(jo.at("position")),
                         vec2_from_json(jo.at("velocity"))});
  for (const auto& ja : j.at("agents")) {
    AgentCharacteristics a;
    a.id = ja.at("id").get<int>();
    a.position = vec2_from_json(ja.at("position"));
    a.heading = ja.value("heading", 0.0);
    a.fov.center = vec2_from_json(ja.at("fov").at("center"));
    a.fov.radius = ja.at("fov").at("radius").get<double>();
    a.detection_prob = ja.at("detection_prob").get<double>();
    a.meas_noise_cov = mat2_from_json(ja.at("meas_noise_cov"));
    if (ja.contains("adversary")) {
      AdversaryProfile adv;
      for (const auto& jf : ja["adversary"].value("false_tracks", nlohmann::json::array()))
        adv.false_tracks.push_back(
            {vec2_from_json(jf.at("spawn")), vec2_from_json(jf.at("velocity"))});
      for (const auto& sid : ja["adversary"].value("suppress_ids", nlohmann::json::array()))
        adv.suppress_ids.insert(sid.get<int>());
      a.adversary = adv;
    }
    s.agents.push_back(a);
  }
  std::sort(s.agents.begin(), s.agents.end(),
            [](const auto& x, const auto& y) { return x.id < y.id; });
  validate_scenario(s);
  return s;
}

// Trust prior keys: track_trust_prior, agent_trust_prior, agent_trust_overrides.
inline TrustConfig trust_config_from_json(const nlohmann::json& j) {
  TrustConfig cfg;
  if (j.contains("track_trust_prior")) cfg.track_prior = trust_from_json(j["track_trust_prior"]);
  if (j.contains("agent_trust_prior")) cfg.agent_prior = trust_from_json(j["agent_trust_prior"]);
  if (j.contains("agent_trust_overrides"))
    for (auto it = j["agent_trust_overrides"].begin(); it != j["agent_trust_overrides"].end(); ++it)
      cfg.agent_prior_overrides[std::stoi(it.key())] = trust_from_json(it.value());
  cfg.process_noise_decay = j.value("trust_process_noise_decay", cfg.process_noise_decay);
  cfg.lambda_floor = j.value("trust_lambda_floor", cfg.lambda_floor);
  cfg.match_threshold = j.value("trust_match_threshold", cfg.match_threshold);
  return cfg;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_scenario: cannot open " + path);
  f << scenario_to_json(s).dump(2) << '\n';
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_scenario: cannot open " + path);
  nlohmann::json j;
  f >> j;
  return scenario_from_json(j);
}

}  // namespace trustmtt
