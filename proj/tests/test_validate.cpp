#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "riscf/validate.hpp"

using namespace riscf;
using namespace riscf::validate;

namespace {

BeamformingState zero_state(const ChannelSet& cs) {
  BeamformingState st;
  st.w.assign(cs.K, VectorXcd::Zero(cs.mb()));
  st.an.resize(cs.K);
  st.theta = VectorXcd::Ones(cs.rn());
  return st;
}

}  // namespace

TEST_CASE("outage estimator degenerate cases") {
  const ScenarioConfig cfg = build_scenario();
  const ChannelSet cs = sample_channels(cfg);

  // zero beams: eavesdropper SINR is 0, no outage for positive redundancy
  const BeamformingState quiet = zero_state(cs);
  const auto est0 = mc_outage(quiet, cs, EveErrorModel::from_sigma_bar(cs, 0.01),
                              cfg, 0.5, 1000, 1);
  CHECK(est0.max_probability() == 0.0);

  // zero error: deterministic indicator, probability 0 or 1 exactly
  BeamformingState loud = quiet;
  Philox rng(1, 2);
  for (int i = 0; i < cs.mb(); ++i) loud.w[0][i] = 5.0 * rng.cgaussian();
  const auto est1 =
      mc_outage(loud, cs, EveErrorModel::zero(cs.J), cfg, 0.5, 2000, 2);
  for (int k = 0; k < cs.K; ++k)
    for (int j = 0; j < cs.J; ++j) {
      const double p = est1.probability(k, j);
      CHECK((p == 0.0 || p == 1.0));
    }

  CHECK_THROWS_AS(mc_outage(quiet, cs, EveErrorModel::zero(cs.J), cfg, 0.5, 0, 3),
                  std::invalid_argument);
}

TEST_CASE("outage estimator error scales like 1/sqrt(samples)") {
  const ScenarioConfig cfg = build_scenario();
  const ChannelSet cs = sample_channels(cfg);
  BeamformingState st = zero_state(cs);
  Philox rng(4, 5);
  for (int k = 0; k < cs.K; ++k)
    for (int i = 0; i < cs.mb(); ++i) st.w[k][i] = 2.0 * rng.cgaussian();
  const EveErrorModel err = EveErrorModel::from_sigma_bar(cs, 0.3);

  // spread of repeated estimates shrinks roughly as 1/sqrt(n)
  auto spread = [&](int samples) {
    double mn = 1e9, mx = -1e9;
    for (int rep = 0; rep < 8; ++rep) {
      const auto est =
          mc_outage(st, cs, err, cfg, 0.5, samples, 100 + rep);
      const double p = est.probability(0, 0);
      mn = std::min(mn, p);
      mx = std::max(mx, p);
    }
    return mx - mn;
  };
  const double s_small = spread(500);
  const double s_big = spread(8000);
  CHECK(s_big <= std::max(0.7 * s_small, 0.02));
}

TEST_CASE("quadratic-form oracle") {
  const ScenarioConfig cfg = build_scenario();
  const ChannelSet cs = sample_channels(cfg);
  Philox rng(6, 7);

  VectorXcd w = VectorXcd::Zero(cs.mb());
  VectorXcd theta_hat(cs.rn() + 1);
  for (int n = 0; n < cs.rn(); ++n)
    theta_hat[n] = std::polar(1.0, 2 * M_PI * rng.uniform01());
  theta_hat[cs.rn()] = 1.0;

  auto [d0, t0] = quadratic_form_oracle(theta_hat, cs.h_eff_user[0], w);
  CHECK(d0 == 0.0);
  CHECK(t0 == doctest::Approx(0.0));

  for (int trial = 0; trial < 1000; ++trial) {
    for (int i = 0; i < cs.mb(); ++i) w[i] = rng.cgaussian();
    const auto [direct, traced] =
        quadratic_form_oracle(theta_hat, cs.h_eff_user[trial % cs.K], w);
    CHECK(std::abs(direct - traced) <= 1e-12 * std::max(1.0, direct));
  }

  // direct-link-only reduction: zero the reflected rows
  MatrixXcd h = cs.h_eff_user[0];
  h.topRows(cs.rn()).setZero();
  for (int i = 0; i < cs.mb(); ++i) w[i] = rng.cgaussian();
  const auto [direct, traced] = quadratic_form_oracle(theta_hat, h, w);
  const double want = std::norm((cs.h_d_user[0].adjoint() * w)(0));
  CHECK(direct == doctest::Approx(want).epsilon(1e-10));
  CHECK(traced == doctest::Approx(want).epsilon(1e-10));

  CHECK_THROWS_AS(quadratic_form_oracle(theta_hat.head(3), h, w),
                  std::invalid_argument);
}

TEST_CASE("complexity estimates at the reference configuration") {
  const ScenarioConfig cfg = build_scenario();
  const auto p4 = complexity_estimate(cfg, Subproblem::beam_perfect);
  CHECK(p4.barrier_parameter == doctest::Approx(44.0));
  const auto p6 = complexity_estimate(cfg, Subproblem::phase_perfect);
  CHECK(p6.barrier_parameter == doctest::Approx(44.0));

  // n0 = 2 K M^2 B^2 = 64, n1 = 6K + 2 B^3 M^3 K + 11JK = 172, n2 = 2K+2M^2B^2K+7JK = 96
  const double n0 = 64, n1 = 12 + 2 * 8 * 8 * 2 + 44, n2 = 4 + 64 + 28;
  CHECK(p4.per_iteration_ops ==
        doctest::Approx(n0 * n1 + n0 * n0 * n2 + n0 * n0 * n0));
  CHECK(p4.iteration_factor ==
        doctest::Approx(std::sqrt(44.0) * std::log(1e6)).epsilon(1e-12));

  // robust counterparts dominate their plain versions
  const auto p4r = complexity_estimate(cfg, Subproblem::beam_robust);
  const auto p6r = complexity_estimate(cfg, Subproblem::phase_robust);
  CHECK(p4r.total_ops >= p4.total_ops);
  CHECK(p6r.total_ops >= p6.total_ops);

  // monotone in the number of reflecting elements for the phase family
  nlohmann::json doc;
  doc["num_elements"] = 8;
  const ScenarioConfig big = build_scenario(doc);
  CHECK(complexity_estimate(big, Subproblem::phase_perfect).per_iteration_ops >
        p6.per_iteration_ops);
  CHECK(complexity_estimate(big, Subproblem::phase_robust).per_iteration_ops >
        p6r.per_iteration_ops);
}
