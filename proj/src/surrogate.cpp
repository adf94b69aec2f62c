#include "riscf/surrogate.hpp"

#include <cmath>

namespace riscf {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double secrecy_surrogate(double alpha, double beta, double beta_hat) {
  if (alpha < 0 || beta < 0 || beta_hat < 0)
    throw std::invalid_argument("secrecy_surrogate: inputs must be >= 0");
  return std::log2(1.0 + alpha) - std::log2(1.0 + beta_hat) -
         (beta - beta_hat) / ((1.0 + beta_hat) * kLn2);
}

double rho_update(double f_value, double denom) {
  if (f_value < 0) throw std::invalid_argument("rho_update: f_value must be >= 0");
  if (denom <= 0) throw std::invalid_argument("rho_update: denom must be > 0");
  return std::sqrt(f_value) / denom;
}

double fp_value(double f_value, double denom, double rho) {
  return 2.0 * rho * std::sqrt(f_value) - rho * rho * denom;
}

double bilinear_upper_bound(double alpha, double delta, double alpha_hat,
                            double delta_hat) {
  if (alpha_hat <= 0 || delta_hat <= 0)
    throw std::invalid_argument("bilinear_upper_bound: expansion points must be > 0");
  return alpha_hat / (2.0 * delta_hat) * delta * delta +
         delta_hat / (2.0 * alpha_hat) * alpha * alpha;
}

double square_lower_bound(double varsigma, double varsigma_hat) {
  return 2.0 * varsigma_hat * varsigma - varsigma_hat * varsigma_hat;
}

LogMinorant log_rate_minorant(double x_hat) {
  if (x_hat <= 0)
    throw std::invalid_argument("log_rate_minorant: expansion point must be > 0");
  LogMinorant m;
  m.c0 = std::log2(1.0 + x_hat) + x_hat / ((1.0 + x_hat) * kLn2);
  m.c1 = x_hat * x_hat / ((1.0 + x_hat) * kLn2);
  return m;
}

}  // namespace riscf
