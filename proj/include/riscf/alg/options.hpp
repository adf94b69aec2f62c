#pragma once

// Shared knobs and per-iteration bookkeeping for the alternating optimizers.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "riscf/conic/solver.hpp"
#include "riscf/metrics.hpp"

namespace riscf::alg {

enum class ObjectiveMode {
  max_min_see,   // maximize the minimum per-user secrecy energy efficiency
  sum_see,       // maximize the sum of per-user SEE surrogates
  max_min_rate,  // maximize the minimum secrecy rate (no power denominator)
};

struct AlgOptions {
  double tau = 1e-3;    // outer-loop convergence threshold on z
  int max_iters = 30;
  int min_iters = 1;    // run at least this many outer iterations
  int trials = 100;     // Gaussian randomization draws
  double rank_tol = 1e-4;
  conic::SolverOptions solver;
  ObjectiveMode mode = ObjectiveMode::max_min_see;
  bool use_bti = true;    // robust: chance-constraint slack triple
  bool use_sproc = true;  // robust: ball-certificate LMIs
  int outage_samples = 10000;
  std::uint64_t extra_stream = 0;  // separates runs sharing one channel seed
};

struct IterationRecord {
  int iter = 0;
  double z_p4 = 0.0;
  double z_p6 = 0.0;
  double min_see_true = 0.0;
  std::string status_p4;
  std::string status_p6;
  double seconds = 0.0;
  double rank_ratio_w = 0.0;
  double rank_ratio_v = 0.0;
  double rank_ratio_q = 0.0;
  double empirical_outage_max = std::numeric_limits<double>::quiet_NaN();
  double psi = std::numeric_limits<double>::quiet_NaN();
};

struct IterationTrace {
  bool robust = false;
  std::vector<IterationRecord> rows;
  std::string to_csv() const;
};

struct RunResult {
  BeamformingState state;
  IterationTrace trace;
  double min_see = 0.0;
  double sum_see = 0.0;
  double z_final = 0.0;
  int iterations = 0;
  bool converged = false;
  double seconds = 0.0;
};

class AlgorithmError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace riscf::alg
