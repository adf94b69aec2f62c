#include "riscf/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace riscf {
namespace {

double log2p1(double x) { return std::log2(1.0 + x); }

// |theta_hat^H H v|^2
double link_gain(const VectorXcd& theta_hat, const MatrixXcd& h_eff,
                 const VectorXcd& v) {
  const Complex g = (theta_hat.adjoint() * h_eff * v)(0);
  return std::norm(g);
}

double interference_plus_an(const ChannelSet& cs, const BeamformingState& st,
                            const MatrixXcd& h_eff, const VectorXcd& theta_hat,
                            int skip_k) {
  double acc = 0.0;
  const VectorXcd row = (theta_hat.adjoint() * h_eff).adjoint();
  for (int i = 0; i < cs.K; ++i) {
    if (i != skip_k) acc += std::norm(row.dot(st.w[i]));
    if (i < static_cast<int>(st.an.size()))
      for (const auto& s : st.an[i]) acc += std::norm(row.dot(s));
  }
  return acc;
}

}  // namespace

bool state_valid(const BeamformingState& st, double tol) {
  for (Eigen::Index n = 0; n < st.theta.size(); ++n)
    if (std::abs(std::abs(st.theta[n]) - 1.0) > tol) return false;
  return true;
}

double user_sinr(const ChannelSet& cs, const BeamformingState& st,
                 const ScenarioConfig& cfg, int k) {
  if (k < 0 || k >= cs.K) throw std::out_of_range("user_sinr: k out of range");
  const VectorXcd th = st.theta_hat();
  const double sig = link_gain(th, cs.h_eff_user[k], st.w[k]);
  const double intf = interference_plus_an(cs, st, cs.h_eff_user[k], th, k);
  return sig / (intf + cfg.noise_user_mw);
}

VectorXd eve_sinrs(const ChannelSet& cs, const BeamformingState& st,
                   const ScenarioConfig& cfg, int k) {
  if (k < 0 || k >= cs.K) throw std::out_of_range("eve_sinrs: k out of range");
  const VectorXcd th = st.theta_hat();
  VectorXd out(cs.J);
  for (int j = 0; j < cs.J; ++j) {
    const double sig = link_gain(th, cs.h_eff_eve[j], st.w[k]);
    const double intf = interference_plus_an(cs, st, cs.h_eff_eve[j], th, k);
    out[j] = sig / (intf + cfg.noise_eve_mw);
  }
  return out;
}

double secrecy_rate(double gamma_k, const VectorXd& gamma_kj) {
  if (gamma_k < 0 || (gamma_kj.size() && gamma_kj.minCoeff() < 0))
    throw std::invalid_argument("secrecy_rate: SINRs must be >= 0");
  const double eve = gamma_kj.size() ? gamma_kj.maxCoeff() : 0.0;
  return std::max(0.0, log2p1(gamma_k) - log2p1(eve));
}

double secrecy_rate(const ChannelSet& cs, const BeamformingState& st,
                    const ScenarioConfig& cfg, int k) {
  return secrecy_rate(user_sinr(cs, st, cfg, k), eve_sinrs(cs, st, cfg, k));
}

double see_value(const ChannelSet& cs, const BeamformingState& st,
                 const ScenarioConfig& cfg, int k) {
  const double rate = secrecy_rate(cs, st, cfg, k);
  double tx_mw = st.w[k].squaredNorm();
  if (k < static_cast<int>(st.an.size()))
    for (const auto& s : st.an[k]) tx_mw += s.squaredNorm();
  const double watts =
      (tx_mw / cfg.pa_efficiency + circuit_power(cfg)) / 1000.0;
  return rate / watts;
}

double min_see(const ChannelSet& cs, const BeamformingState& st,
               const ScenarioConfig& cfg) {
  double v = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cs.K; ++k) v = std::min(v, see_value(cs, st, cfg, k));
  return v;
}

double sum_see(const ChannelSet& cs, const BeamformingState& st,
               const ScenarioConfig& cfg) {
  double v = 0.0;
  for (int k = 0; k < cs.K; ++k) v += see_value(cs, st, cfg, k);
  return v;
}

double per_bs_power(const BeamformingState& st, int b, int antennas_per_bs) {
  const Eigen::Index mb = st.w.empty() ? 0 : st.w[0].size();
  const Eigen::Index lo = static_cast<Eigen::Index>(b) * antennas_per_bs;
  if (lo < 0 || lo + antennas_per_bs > mb)
    throw std::out_of_range("per_bs_power: b out of range");
  double acc = 0.0;
  for (const auto& wk : st.w) acc += wk.segment(lo, antennas_per_bs).squaredNorm();
  for (const auto& streams : st.an)
    for (const auto& s : streams) acc += s.segment(lo, antennas_per_bs).squaredNorm();
  return acc;
}

double user_sinr_lifted(const ChannelSet& cs, const std::vector<MatrixXcd>& w,
                        const std::vector<MatrixXcd>& v, const MatrixXcd& q_hat,
                        const ScenarioConfig& cfg, int k) {
  const MatrixXcd gram = cs.h_eff_user[k].adjoint() * q_hat * cs.h_eff_user[k];
  double sig = (w[k] * gram).trace().real();
  double intf = 0.0;
  for (int i = 0; i < cs.K; ++i) {
    if (i != k) intf += (w[i] * gram).trace().real();
    intf += (v[i] * gram).trace().real();
  }
  return std::max(0.0, sig) / (std::max(0.0, intf) + cfg.noise_user_mw);
}

VectorXd eve_sinrs_lifted(const ChannelSet& cs, const std::vector<MatrixXcd>& w,
                          const std::vector<MatrixXcd>& v, const MatrixXcd& q_hat,
                          const ScenarioConfig& cfg, int k) {
  VectorXd out(cs.J);
  for (int j = 0; j < cs.J; ++j) {
    const MatrixXcd gram = cs.h_eff_eve[j].adjoint() * q_hat * cs.h_eff_eve[j];
    double sig = (w[k] * gram).trace().real();
    double intf = 0.0;
    for (int i = 0; i < cs.K; ++i) {
      if (i != k) intf += (w[i] * gram).trace().real();
      intf += (v[i] * gram).trace().real();
    }
    out[j] = std::max(0.0, sig) / (std::max(0.0, intf) + cfg.noise_eve_mw);
  }
  return out;
}

double min_see_lifted(const ChannelSet& cs, const std::vector<MatrixXcd>& w,
                      const std::vector<MatrixXcd>& v, const MatrixXcd& q_hat,
                      const ScenarioConfig& cfg) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cs.K; ++k) {
    const double rate =
        secrecy_rate(user_sinr_lifted(cs, w, v, q_hat, cfg, k),
                     eve_sinrs_lifted(cs, w, v, q_hat, cfg, k));
    const double tx_mw = (w[k].trace().real() + v[k].trace().real());
    const double watts =
        (tx_mw / cfg.pa_efficiency + circuit_power(cfg)) / 1000.0;
    best = std::min(best, rate / watts);
  }
  return best;
}

}  // namespace riscf
