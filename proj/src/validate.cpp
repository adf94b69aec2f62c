#include "riscf/validate.hpp"

#include <cmath>

namespace riscf::validate {

OutageEstimate mc_outage(const BeamformingState& state, const ChannelSet& estimates,
                         const EveErrorModel& err, const ScenarioConfig& cfg,
                         double redundancy_rate, int samples, std::uint64_t stream) {
  if (samples < 1) throw std::invalid_argument("mc_outage: samples must be >= 1");
  const int mb = estimates.mb(), rn = estimates.rn();
  const double gate = std::pow(2.0, redundancy_rate) - 1.0;  // SINR threshold

  OutageEstimate out;
  out.samples = samples;
  out.probability.setZero(estimates.K, estimates.J);
  out.std_error.setZero(estimates.K, estimates.J);

  const MatrixXcd theta_diag =
      rn > 0 ? MatrixXcd(state.theta.asDiagonal()) : MatrixXcd(0, 0);
  const MatrixXcd reflect =
      rn > 0 ? MatrixXcd(estimates.g.adjoint() * theta_diag) : MatrixXcd(mb, 0);

  for (int j = 0; j < estimates.J; ++j) {
    Philox rng(cfg.rng_seed, stream_id(StreamKind::outage_mc, stream, j));
    VectorXcd h_nom = estimates.h_d_eve[j];
    if (rn > 0) h_nom += reflect * estimates.f_eve[j];

    Eigen::VectorXi exceed = Eigen::VectorXi::Zero(estimates.K);
    VectorXcd dh(mb), df(rn);
    for (int s = 0; s < samples; ++s) {
      for (int i = 0; i < mb; ++i) dh[i] = err.sigma_d[j] * rng.cgaussian();
      VectorXcd h = h_nom + dh;
      if (rn > 0) {
        for (int n = 0; n < rn; ++n) df[n] = err.sigma_f[j] * rng.cgaussian();
        h += reflect * df;
      }
      // received powers of every beam and AN stream at this true channel
      double an_power = 0.0;
      Eigen::VectorXd wp(estimates.K);
      for (int k = 0; k < estimates.K; ++k) {
        wp[k] = std::norm(h.dot(state.w[k]));
        if (k < static_cast<int>(state.an.size()))
          for (const auto& v : state.an[k]) an_power += std::norm(h.dot(v));
      }
      const double wsum = wp.sum();
      for (int k = 0; k < estimates.K; ++k) {
        const double sinr =
            wp[k] / (wsum - wp[k] + an_power + cfg.noise_eve_mw);
        if (sinr > gate) ++exceed[k];
      }
    }
    for (int k = 0; k < estimates.K; ++k) {
      const double p = static_cast<double>(exceed[k]) / samples;
      out.probability(k, j) = p;
      out.std_error(k, j) = std::sqrt(std::max(0.0, p * (1.0 - p) / samples));
    }
  }
  return out;
}

std::pair<double, double> quadratic_form_oracle(const VectorXcd& theta_hat,
                                                const MatrixXcd& h_eff,
                                                const VectorXcd& w) {
  if (theta_hat.size() != h_eff.rows() || w.size() != h_eff.cols())
    throw std::invalid_argument("quadratic_form_oracle: dimension mismatch");
  const Complex g = (theta_hat.adjoint() * h_eff * w)(0);
  const double direct = std::norm(g);
  const MatrixXcd lifted = w * w.adjoint();
  const double traced =
      (theta_hat.adjoint() * h_eff * lifted * h_eff.adjoint() * theta_hat)(0).real();
  return {direct, traced};
}

ComplexityEstimate complexity_estimate(const ScenarioConfig& cfg, Subproblem which,
                                       double omega) {
  const double B = cfg.num_bs, K = cfg.num_users, J = cfg.num_eves;
  const double M = cfg.num_antennas;
  const double RN = cfg.num_ris * cfg.num_elements;
  const double MB = M * B;
  auto cube = [](double x) { return x * x * x; };
  auto sq = [](double x) { return x * x; };

  double delta = 0, n0 = 0, n1 = 0, n2 = 0;
  switch (which) {
    case Subproblem::beam_perfect:
      delta = B + 2 * MB * K + 3 * K + 5 * J * K;
      n0 = 2 * K * sq(M) * sq(B);
      n1 = 6 * K + 2 * cube(B) * cube(M) * K + 11 * J * K;
      n2 = 2 * K + 2 * sq(M) * sq(B) * K + 7 * J * K;
      break;
    case Subproblem::phase_perfect:
      delta = 2 + 2 * RN + 3 * K + 5 * K * J;
      n0 = sq(RN + 1);
      n1 = 5 * K + 11 * K * J + (RN + 1) + cube(RN + 1);
      n2 = K + 7 * K * J + (RN + 1) + sq(RN + 1);
      break;
    case Subproblem::beam_robust:
      delta = B + 3 * K + 2 * MB * K + (10 + 3 * MB + 3 * RN) * K * J;
      n0 = 2 * K * sq(M) * sq(B);
      n1 = 6 * K + 2 * cube(M) * cube(B) * K + 12 * K * J + cube(MB + RN) * K * J +
           2 * cube(MB + RN + 1) * K * J + sq(sq(MB + RN) + (MB + RN)) * K * J;
      n2 = 2 * K + 8 * K * J + 2 * K * sq(M) * sq(B) + sq(MB + RN) * K * J +
           2 * sq(MB + RN + 1) * K * J;
      break;
    case Subproblem::phase_robust:
      delta = 2 + 2 * RN + 3 * K + (10 + 3 * MB + 3 * RN) * K * J;
      n0 = sq(RN + 1);
      n1 = (RN + 1) + cube(RN + 1) + 5 * K + 12 * K * J + cube(MB + RN) * K * J +
           2 * cube(MB + RN + 1) * K * J + sq(sq(MB + RN) + (MB + RN)) * K * J;
      n2 = (RN + 1) + sq(RN + 1) + K + 8 * K * J + 2 * sq(MB + RN + 1) * K * J +
           sq(MB + RN) * K * J;
      break;
  }
  ComplexityEstimate est;
  est.barrier_parameter = delta;
  est.iteration_factor = std::sqrt(delta) * std::log(1.0 / omega);
  est.per_iteration_ops = n0 * n1 + sq(n0) * n2 + cube(n0);
  est.total_ops = est.iteration_factor * est.per_iteration_ops;
  return est;
}

}  // namespace riscf::validate
