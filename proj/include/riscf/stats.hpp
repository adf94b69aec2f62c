#pragma once

// Small statistical helpers: regularized incomplete gamma for even-dof
// chi-square CDFs and its inverse by bisection.

namespace riscf {

// P(a, x): regularized lower incomplete gamma function for integer a >= 1.
double regularized_gamma_p(int a, double x);

// Chi-square CDF with even dof = 2a.
double chi2_cdf_even(int half_dof, double x);

// Inverse chi-square CDF with even dof = 2a, solved by bisection to 1e-10.
double chi2_inv_even(int half_dof, double prob);

}  // namespace riscf
