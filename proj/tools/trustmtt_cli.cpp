// Command-line front end: case-study runs, the frames-to-confirm surface,
// single t_min evaluations, and a quick self-check suite.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "trustmtt/attack.hpp"
#include "trustmtt/harness.hpp"
#include "trustmtt/scenario_io.hpp"

using namespace trustmtt;

namespace {

std::string out_path(const std::string& name) {
  const char* dir = std::getenv("TRUSTMTT_OUT_DIR");
  if (!dir || !*dir) return name;
  return (std::filesystem::path(dir) / name).string();
}

int cmd_run(int case_num, const std::string& prior, int frames, std::uint64_t seed,
            const std::string& out, const std::string& scenario_path) {
  TrustConfig trust_cfg;
  Scenario scenario;
  std::string case_name = "custom";
  if (!scenario_path.empty()) {
    scenario = load_scenario(scenario_path);
    std::ifstream f(scenario_path);
    nlohmann::json j;
    f >> j;
    trust_cfg = trust_config_from_json(j);
    if (frames >= 0) scenario.n_frames = frames;
    scenario.rng_seed = seed;
  } else {
    const CaseId id = case_num == 2 ? CaseId::Case2 : CaseId::Case1;
    const PriorRegime regime =
        prior == "agent1" ? PriorRegime::StrongAgent1 : PriorRegime::Uninformative;
    if (frames == 0) {
      RunTrace empty;
      empty.seed = seed;
      empty.case_name = case_num == 2 ? "case2" : "case1";
      empty.prior_regime = prior;
      emit_tracks_csv(empty, out_path(out + ".tracks.csv"));
      emit_trust_csv(empty, out_path(out + ".trust.csv"));
      emit_jsonl(empty, out_path(out + ".jsonl"));
      std::cout << "empty run; wrote header-only traces to " << out_path(out) << ".*\n";
      return 0;
    }
    CaseBuild build = build_case(id, regime, seed, frames < 0 ? 50 : frames);
    scenario = build.scenario;
    trust_cfg = build.trust;
    case_name = case_num == 2 ? "case2" : "case1";
  }

  RunResult res = run(scenario, trust_cfg);
  res.trace.case_name = case_name;
  res.trace.prior_regime = prior;
  emit_tracks_csv(res.trace, out_path(out + ".tracks.csv"));
  emit_trust_csv(res.trace, out_path(out + ".trust.csv"));
  emit_jsonl(res.trace, out_path(out + ".jsonl"));

  std::cout << "ran " << scenario.n_frames << " frames, " << res.central.tracks().size()
            << " live tracks\n";
  for (const auto& [id, d] : res.trust.agent_trusts)
    std::cout << "agent " << id << " trust mean " << d.mean() << " (lambda "
              << d.precision_lambda << ")\n";
  std::cout << "wrote " << out_path(out) << ".tracks.csv, .trust.csv, .jsonl\n";
  return 0;
}

int cmd_surface(int ka_max, int kb_max, const std::string& out) {
  ThreatConfig base;
  const auto grid = t_min_surface(ka_max, kb_max, base);
  std::ofstream f(out_path(out));
  if (!f) {
    std::cerr << "cannot open " << out_path(out) << "\n";
    return 1;
  }
  f << "k_a,k_b,t_min_continuous,t_min_ceil\n";
  for (const auto& cell : grid) {
    f << cell.k_a << ',' << cell.k_b << ',';
    if (cell.t_min_continuous)
      f << *cell.t_min_continuous << ',' << static_cast<int>(std::ceil(*cell.t_min_continuous));
    else
      f << "inf,inf";
    f << '\n';
  }
  std::cout << "wrote " << grid.size() << " cells to " << out_path(out) << "\n";
  return 0;
}

int cmd_tmin(const ThreatConfig& cfg) {
  const auto t = t_min(cfg);
  if (!t) {
    std::cout << "attack infeasible: benign misses dominate adversarial gain\n";
    return 0;
  }
  std::cout << "t_min(k_a=" << cfg.k_a << ", k_b=" << cfg.k_b << ") = " << *t
            << " frames (ceil " << static_cast<int>(std::ceil(*t)) << ")\n";
  return 0;
}

int cmd_validate() {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << "\n";
    if (!ok) ++failures;
  };

  ThreatConfig c11;
  c11.k_b = 1;
  const auto t11 = t_min(c11);
  ThreatConfig c13 = c11;
  c13.k_b = 3;
  const auto t13 = t_min(c13);
  check("t_min(1,1) in [3.0, 3.5]", t11 && *t11 >= 3.0 && *t11 <= 3.5);
  check("t_min(1,3) in [5.8, 6.2]", t13 && *t13 >= 5.8 && *t13 <= 6.2);

  ScoringParams p;
  const double bound = max_hit_gain(p, 5.0);
  const Mat2 r = Mat2::Identity() * std::sqrt(5.0);
  check("hit gain attains bound at d2=0, S=R",
        std::abs(hit_gain(0.0, r.determinant(), p) - bound) < 1e-9);

  Rng rng(7);
  bool conj = true;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100 && conj; ++i) {
    TrustDistribution d{0.2 + 0.6 * u(rng), 0.5 + 5.0 * u(rng)};
    std::vector<PsmDatapoint> psms;
    const int n = 1 + static_cast<int>(u(rng) * 6);
    for (int k = 0; k < n; ++k) psms.push_back({u(rng), u(rng), 0, 0});
    TrustDistribution batch = beta_update(d, psms);
    TrustDistribution fold = d;
    for (const auto& x : psms) fold = beta_update(fold, {x});
    conj = std::abs(batch.mean() - fold.mean()) < 1e-12 &&
           std::abs(batch.precision_lambda - fold.precision_lambda) < 1e-12;
  }
  check("beta_update conjugacy (batch == fold)", conj);

  const CaseOutcome a = run_case(CaseId::Case1, PriorRegime::Uninformative, 42);
  const CaseOutcome b = run_case(CaseId::Case1, PriorRegime::Uninformative, 42);
  check("case run determinism",
        a.agent_trust == b.agent_trust && a.track_trust_by_label == b.track_trust_by_label);

  std::cout << (failures == 0 ? "all checks passed\n" : "some checks FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-sensor tracking with Bayesian trust estimation"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run a case study or scenario file end to end");
  int case_num = 1;
  std::string prior = "none";
  int frames = -1;
  std::uint64_t seed = 0;
  std::string out = "trace";
  std::string scenario_path;
  run_cmd->add_option("--case", case_num, "case study id (1 or 2)")->check(CLI::Range(1, 2));
  run_cmd->add_option("--prior", prior, "prior regime: none | agent1")
      ->check(CLI::IsMember({"none", "agent1"}));
  run_cmd->add_option("--frames", frames, "number of frames (default 50)");
  run_cmd->add_option("--seed", seed, "rng seed");
  run_cmd->add_option("--out", out, "output path prefix");
  run_cmd->add_option("--scenario", scenario_path, "scenario JSON file instead of a case");

  auto* surface_cmd = app.add_subcommand("surface", "emit the frames-to-confirm surface CSV");
  int ka_max = 5, kb_max = 5;
  std::string surf_out = "tmin_surface.csv";
  surface_cmd->add_option("--ka-max", ka_max, "max adversary count")->check(CLI::PositiveNumber);
  surface_cmd->add_option("--kb-max", kb_max, "max benign count")->check(CLI::PositiveNumber);
  surface_cmd->add_option("--out", surf_out, "output CSV path");

  auto* tmin_cmd = app.add_subcommand("tmin", "evaluate the minimum frames-to-confirm bound");
  ThreatConfig tcfg;
  tmin_cmd->add_option("--ka", tcfg.k_a, "adversary count")->check(CLI::PositiveNumber);
  tmin_cmd->add_option("--kb", tcfg.k_b, "benign observer count")
      ->check(CLI::NonNegativeNumber);
  tmin_cmd->add_option("--pd", tcfg.params.p_d, "detection probability");
  tmin_cmd->add_option("--beta-fp", tcfg.params.beta_fp, "false-positive density");
  tmin_cmd->add_option("--beta-nt", tcfg.params.beta_nt, "new-target density");
  tmin_cmd->add_option("--alpha", tcfg.params.alpha_err, "type-I error rate");
  tmin_cmd->add_option("--beta", tcfg.params.beta_err, "type-II error rate");
  tmin_cmd->add_option("--det-r", tcfg.det_r, "det of measurement covariance");

  auto* validate_cmd = app.add_subcommand("validate", "run the quick invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(case_num, prior, frames, seed, out, scenario_path);
    if (surface_cmd->parsed()) return cmd_surface(ka_max, kb_max, surf_out);
    if (tmin_cmd->parsed()) return cmd_tmin(tcfg);
    if (validate_cmd->parsed()) return cmd_validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
