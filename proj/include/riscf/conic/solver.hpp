#pragma once

// Reference conic solver: a dense primal-dual interior-point method with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector step, covering the
// nonnegative, second-order and PSD cones. Problem sizes here are desk scale
// (PSD blocks of a few dozen rows), so everything is dense and deterministic.
// External backends can be plugged behind the same solve() contract.

#include <string>

#include "riscf/conic/program.hpp"

namespace riscf::conic {

enum class SolveStatus { optimal, infeasible, inaccurate, failure };

struct SolverOptions {
  double feas_tol = 1e-7;
  double gap_abs = 1e-7;
  double gap_rel = 1e-7;
  int max_iters = 100;
  double step_fraction = 0.99;
  bool verbose = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::failure;
  VectorXd x;          // real parameter vector
  double objective = 0.0;  // value of the maximized objective
  int iterations = 0;
  double wall_seconds = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  std::string message;

  double value(const ScalarVar& v) const { return x[v.index]; }
  MatrixXcd value(const HermVar& v) const {
    return herm_from_params(x.segment(v.base, v.params()), v.dim);
  }
  bool usable() const {
    return status == SolveStatus::optimal || status == SolveStatus::inaccurate;
  }
};

ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts = {});

// Largest constraint violation of a candidate point (tests and diagnostics).
double max_violation(const ConicProgram& prog, const VectorXd& x);

const char* status_name(SolveStatus s);

}  // namespace riscf::conic
