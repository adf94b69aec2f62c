#pragma once

// Ground-truth evaluation of SINRs, secrecy rate, power and secrecy energy
// efficiency for a candidate solution. Every optimizer output is scored
// against these functions, never against its own surrogate values.

#include <Eigen/Dense>
#include <vector>

#include "riscf/channel.hpp"
#include "riscf/scenario.hpp"

namespace riscf {

struct BeamformingState {
  std::vector<VectorXcd> w;  // K beams, length MB (per-BS blocks stacked)
  // Artificial-noise streams per user; each stream is a length-MB vector and
  // the lifted covariance is the sum of stream outer products.
  std::vector<std::vector<VectorXcd>> an;
  VectorXcd theta;  // RN entries, unit modulus

  VectorXcd theta_hat() const {
    VectorXcd t(theta.size() + 1);
    t.head(theta.size()) = theta;
    t[theta.size()] = 1.0;
    return t;
  }

  MatrixXcd lifted_w(int k) const { return w[k] * w[k].adjoint(); }

  MatrixXcd lifted_v(int k) const {
    const Eigen::Index mb = w.empty() ? 0 : w[0].size();
    MatrixXcd v = MatrixXcd::Zero(mb, mb);
    if (k < static_cast<int>(an.size()))
      for (const auto& s : an[k]) v += s * s.adjoint();
    return v;
  }

  MatrixXcd lifted_q() const {
    const VectorXcd t = theta_hat();
    return t * t.adjoint();
  }
};

// Consistency checks from the state's invariants: unit-modulus phases and,
// when lifted forms are supplied, vector/lifted agreement.
bool state_valid(const BeamformingState& st, double tol = 1e-8);

double user_sinr(const ChannelSet& cs, const BeamformingState& st,
                 const ScenarioConfig& cfg, int k);
VectorXd eve_sinrs(const ChannelSet& cs, const BeamformingState& st,
                   const ScenarioConfig& cfg, int k);

// [log2(1+g_k) - max_j log2(1+g_kj)]^+
double secrecy_rate(double gamma_k, const VectorXd& gamma_kj);
double secrecy_rate(const ChannelSet& cs, const BeamformingState& st,
                    const ScenarioConfig& cfg, int k);

// bits/Joule/Hz; transmit and circuit powers are converted to Watts.
double see_value(const ChannelSet& cs, const BeamformingState& st,
                 const ScenarioConfig& cfg, int k);
double min_see(const ChannelSet& cs, const BeamformingState& st,
               const ScenarioConfig& cfg);
double sum_see(const ChannelSet& cs, const BeamformingState& st,
               const ScenarioConfig& cfg);

// Transmit power drawn from BS b across all beams and AN streams, mW.
double per_bs_power(const BeamformingState& st, int b, int antennas_per_bs);

// Lifted-form evaluation used by the alternating loops before any rank-one
// extraction has happened: SINRs from trace forms over (W, V, Qhat).
double user_sinr_lifted(const ChannelSet& cs, const std::vector<MatrixXcd>& w,
                        const std::vector<MatrixXcd>& v, const MatrixXcd& q_hat,
                        const ScenarioConfig& cfg, int k);
VectorXd eve_sinrs_lifted(const ChannelSet& cs, const std::vector<MatrixXcd>& w,
                          const std::vector<MatrixXcd>& v, const MatrixXcd& q_hat,
                          const ScenarioConfig& cfg, int k);
double min_see_lifted(const ChannelSet& cs, const std::vector<MatrixXcd>& w,
                      const std::vector<MatrixXcd>& v, const MatrixXcd& q_hat,
                      const ScenarioConfig& cfg);

}  // namespace riscf
