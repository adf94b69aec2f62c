#include "riscf/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace riscf {

double regularized_gamma_p(int a, double x) {
  if (a < 1) throw std::invalid_argument("regularized_gamma_p: a must be >= 1");
  if (x < 0) throw std::invalid_argument("regularized_gamma_p: x must be >= 0");
  if (x == 0) return 0.0;
  // For integer a: P(a,x) = 1 - exp(-x) * sum_{i<a} x^i/i!, evaluated in log
  // space to stay stable for large a or x.
  double sum = 0.0;
  double log_term = -x;  // log(x^0/0! * e^-x)
  for (int i = 0; i < a; ++i) {
    if (i > 0) log_term += std::log(x) - std::log(static_cast<double>(i));
    sum += std::exp(log_term);
  }
  return 1.0 - std::min(1.0, sum);
}

double chi2_cdf_even(int half_dof, double x) {
  return regularized_gamma_p(half_dof, x / 2.0);
}

double chi2_inv_even(int half_dof, double prob) {
  if (prob < 0 || prob >= 1)
    throw std::invalid_argument("chi2_inv_even: prob must lie in [0,1)");
  if (prob == 0) return 0.0;
  double lo = 0.0;
  double hi = 2.0 * half_dof + 10.0;
  while (chi2_cdf_even(half_dof, hi) < prob) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf_even(half_dof, mid) < prob)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-10 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace riscf
