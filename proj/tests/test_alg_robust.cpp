#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "riscf/alg/perfect.hpp"
#include "riscf/alg/robust.hpp"
#include "riscf/conic/solver.hpp"

using namespace riscf;
using namespace riscf::alg;

namespace {

struct Setup {
  ScenarioConfig cfg;
  ChannelSet cs;
  EveErrorModel err;
  RobustData rd;
  LiftedState st;
  AuxiliaryState aux;
};

Setup make_setup(const nlohmann::json& doc, double sigma_bar) {
  Setup s{build_scenario(doc), {}, {}, {}, {}, {}};
  s.cs = sample_channels(s.cfg);
  s.err = sigma_bar > 0 ? EveErrorModel::from_sigma_bar(s.cs, sigma_bar)
                        : EveErrorModel::zero(s.cs.J);
  s.rd = make_robust_data(s.cs, s.err, s.cfg);
  s.st = initial_state(s.cs, s.cfg, 0);
  s.aux = evaluate_auxiliary_robust(s.cs, s.st, s.cfg, s.rd);
  for (int k = 0; k < s.cs.K; ++k)
    for (int j = 0; j < s.cs.J; ++j)
      s.aux.rho(k, j) = rho_update(
          std::max(0.0, secrecy_surrogate(s.aux.alpha[k], s.aux.beta(k, j),
                                          s.aux.beta_prev(k, j))),
          power_denominator(s.st, s.cfg, k));
  return s;
}

}  // namespace

TEST_CASE("robust constraint census at defaults") {
  Setup s = make_setup(nlohmann::json::object(), 0.01);
  AlgOptions opts;
  const BeamStep beam =
      build_robust_beamforming_subproblem(s.cs, s.st.q_hat, s.aux, s.rd, s.cfg, opts);
  const auto cb = beam.prog.census();
  CHECK(cb.lmi == 40);  // B + 3K + 8KJ
  CHECK(cb.soc == 6);   // K + KJ

  const PhaseStep phase =
      build_robust_phase_subproblem(s.cs, s.st.w, s.st.v, s.aux, s.rd, s.cfg, opts);
  const auto cp = phase.prog.census();
  CHECK(cp.lmi == 44);  // 2 + RN + K + 8KJ
  CHECK(cp.soc == 6);
}

TEST_CASE("ablation flags drop one certificate family at a time") {
  Setup s = make_setup(nlohmann::json::object(), 0.01);
  AlgOptions no_bti;
  no_bti.use_bti = false;
  AlgOptions no_sproc;
  no_sproc.use_sproc = false;
  const auto full =
      build_robust_beamforming_subproblem(s.cs, s.st.q_hat, s.aux, s.rd, s.cfg, {});
  const auto without_bti = build_robust_beamforming_subproblem(
      s.cs, s.st.q_hat, s.aux, s.rd, s.cfg, no_bti);
  const auto without_sproc = build_robust_beamforming_subproblem(
      s.cs, s.st.q_hat, s.aux, s.rd, s.cfg, no_sproc);
  CHECK(without_bti.prog.census().lmi < full.prog.census().lmi);
  CHECK(without_sproc.prog.census().lmi < full.prog.census().lmi);
  CHECK(conic::solve(without_bti.prog).usable());
  CHECK(conic::solve(without_sproc.prog).usable());
}

TEST_CASE("zero error level reduces to the hard eavesdropping-rate cap") {
  // no reflecting surfaces so both sides are pure beam iterations
  nlohmann::json doc;
  doc["num_bs"] = 1;
  doc["num_ris"] = 0;
  doc["num_users"] = 1;
  doc["num_eves"] = 1;

  Setup s = make_setup(doc, 0.0);
  AlgOptions opts;

  // robust loop at zero error
  LiftedState st_r = s.st;
  AuxiliaryState aux_r = s.aux;
  double z_robust = 0.0;
  for (int t = 0; t < 12; ++t) {
    for (int k = 0; k < s.cs.K; ++k)
      for (int j = 0; j < s.cs.J; ++j)
        aux_r.rho(k, j) = rho_update(
            std::max(0.0, secrecy_surrogate(aux_r.alpha[k], aux_r.beta(k, j),
                                            aux_r.beta_prev(k, j))),
            power_denominator(st_r, s.cfg, k));
    BeamStep step = build_robust_beamforming_subproblem(s.cs, st_r.q_hat, aux_r,
                                                        s.rd, s.cfg, opts);
    const auto sol = conic::solve(step.prog);
    REQUIRE(sol.usable());
    for (int k = 0; k < s.cs.K; ++k) {
      st_r.w[k] = psd_clip(sol.value(step.w[k]));
      st_r.v[k] = psd_clip(sol.value(step.v[k]));
    }
    refresh_expansion(sol, step.vars, aux_r, true);
    z_robust = sol.objective;
  }

  // perfect-CSI loop with the deterministic rate ceiling
  LiftedState st_p = initial_state(s.cs, s.cfg, 0);
  AuxiliaryState aux_p = evaluate_auxiliary(s.cs, st_p, s.cfg, false);
  double z_cap = 0.0;
  for (int t = 0; t < 12; ++t) {
    for (int k = 0; k < s.cs.K; ++k)
      for (int j = 0; j < s.cs.J; ++j)
        aux_p.rho(k, j) = rho_update(
            std::max(0.0, secrecy_surrogate(aux_p.alpha[k], aux_p.beta(k, j),
                                            aux_p.beta_prev(k, j))),
            power_denominator(st_p, s.cfg, k));
    BeamStep step = build_beamforming_subproblem(
        s.cs, st_p.q_hat, aux_p, s.cfg, ObjectiveMode::max_min_see, true);
    const auto sol = conic::solve(step.prog);
    REQUIRE(sol.usable());
    for (int k = 0; k < s.cs.K; ++k) {
      st_p.w[k] = psd_clip(sol.value(step.w[k]));
      st_p.v[k] = psd_clip(sol.value(step.v[k]));
    }
    refresh_expansion(sol, step.vars, aux_p, false);
    z_cap = sol.objective;
  }

  CHECK(std::abs(z_robust - z_cap) < 1e-3 * std::max(1.0, std::abs(z_cap)));
}

TEST_CASE("looser outage target can only widen the feasible region") {
  Setup s = make_setup(nlohmann::json::object(), 0.01);
  AlgOptions opts;

  const BeamStep tight =
      build_robust_beamforming_subproblem(s.cs, s.st.q_hat, s.aux, s.rd, s.cfg, opts);
  const auto sol_tight = conic::solve(tight.prog);
  REQUIRE(sol_tight.usable());

  nlohmann::json doc;
  doc["phi_outage"] = 0.9999;
  ScenarioConfig loose_cfg = build_scenario(doc);
  const RobustData rd_loose = make_robust_data(s.cs, s.err, loose_cfg);
  const BeamStep loose = build_robust_beamforming_subproblem(
      s.cs, s.st.q_hat, s.aux, rd_loose, loose_cfg, opts);
  const auto sol_loose = conic::solve(loose.prog);
  REQUIRE(sol_loose.usable());

  CHECK(sol_loose.objective >= sol_tight.objective - 1e-4);
}

TEST_CASE("tighter error level can only lower the robust optimum") {
  nlohmann::json doc;
  doc["num_bs"] = 1;
  doc["num_ris"] = 1;
  doc["num_users"] = 1;
  doc["num_eves"] = 1;
  doc["num_elements"] = 2;

  double prev = std::numeric_limits<double>::infinity();
  for (double sigma_bar : {0.0, 0.01, 0.05}) {
    Setup s = make_setup(doc, sigma_bar);
    // common expansion point: the most conservative one stays feasible for
    // every smaller error level
    Setup anchor = make_setup(doc, 0.05);
    AlgOptions opts;
    const BeamStep step = build_robust_beamforming_subproblem(
        s.cs, anchor.st.q_hat, anchor.aux, s.rd, s.cfg, opts);
    const auto sol = conic::solve(step.prog);
    REQUIRE(sol.usable());
    CHECK(sol.objective <= prev + 1e-5);
    prev = sol.objective;
  }
}

TEST_CASE("full robust run: monotone objective, outage within target") {
  const ScenarioConfig cfg = build_scenario();
  const ChannelSet cs = sample_channels(cfg);
  const EveErrorModel err = EveErrorModel::from_sigma_bar(cs, cfg.sigma_bar);
  AlgOptions opts;
  opts.max_iters = 8;
  opts.outage_samples = 4000;
  const RunResult res = run_algorithm2(cs, err, cfg, opts);
  REQUIRE(res.trace.rows.size() >= 2);
  double prev = -1e300;
  for (const auto& r : res.trace.rows) {
    CHECK(r.z_p6 >= prev - 1e-5);
    prev = r.z_p6;
    CHECK(r.psi == doctest::Approx(sphere_radius(cfg.phi_outage, cs.mb() + cs.rn())));
  }
  CHECK(res.trace.rows.back().empirical_outage_max <= cfg.phi_outage + 0.02);
  CHECK(res.min_see >= 0.0);
  const std::string csv = res.trace.to_csv();
  CHECK(csv.find("empirical_outage_max,psi") != std::string::npos);
}

TEST_CASE("robust solution never beats the perfect-CSI one on the same draw") {
  const ScenarioConfig cfg = build_scenario();
  const ChannelSet cs = sample_channels(cfg);
  const EveErrorModel err = EveErrorModel::from_sigma_bar(cs, cfg.sigma_bar);
  AlgOptions opts;
  opts.max_iters = 8;
  opts.outage_samples = 2000;
  const RunResult perfect = run_algorithm1(cs, cfg, opts);
  const RunResult robust = run_algorithm2(cs, err, cfg, opts);
  CHECK(robust.min_see <= perfect.min_see + 1e-6);
}
