#pragma once

// Scalar fractional-programming and convexification surrogates shared by both
// alternating algorithms. Each one is tight at its expansion point and sits on
// the conservative side globally; the sweeps in the test suite check both.

#include <Eigen/Dense>
#include <stdexcept>

namespace riscf {

// log2(1+alpha) - log2(1+beta_hat) - (beta - beta_hat)/((1+beta_hat)*ln 2).
// Linearized in beta around beta_hat; upper-bounds nothing and lower-bounds
// the true rate difference log2(1+alpha) - log2(1+beta).
double secrecy_surrogate(double alpha, double beta, double beta_hat);

// sqrt(f)/denom: the multiplier that maximizes fp_value at the current point.
double rho_update(double f_value, double denom);

// 2*rho*sqrt(f) - rho^2*denom <= f/denom for every rho, equal at rho_update.
double fp_value(double f_value, double denom, double rho);

// (alpha_hat/(2 delta_hat)) delta^2 + (delta_hat/(2 alpha_hat)) alpha^2;
// >= alpha*delta with equality iff alpha/alpha_hat == delta/delta_hat.
double bilinear_upper_bound(double alpha, double delta, double alpha_hat,
                            double delta_hat);

// 2*s_hat*s - s_hat^2 <= s^2, equal at s == s_hat.
double square_lower_bound(double varsigma, double varsigma_hat);

// Tangent minorant of log2(1+x) through 1/x: for x, x_hat > 0,
//   log2(1+x) >= c0 - c1/x, tight with matching slope at x_hat.
struct LogMinorant {
  double c0 = 0.0;
  double c1 = 0.0;  // >= 0
  double value_at(double x) const { return c0 - c1 / x; }
};
LogMinorant log_rate_minorant(double x_hat);

// Auxiliary optimizer state: current values of every scalar introduced by the
// reformulations, kept across outer iterations as the next expansion point.
struct AuxiliaryState {
  Eigen::VectorXd alpha;      // K, user-SINR lower bounds
  Eigen::MatrixXd beta;       // K x J, eve-SINR upper bounds
  Eigen::MatrixXd beta_prev;  // K x J, previous outer iterate
  Eigen::MatrixXd rho;        // K x J, FP multipliers
  Eigen::VectorXd delta;      // K
  Eigen::MatrixXd varsigma;   // K x J
  Eigen::MatrixXd chi;        // K x J
  Eigen::MatrixXd varpi;      // K x J (robust chain only)
  double z = 0.0;
};

}  // namespace riscf
