#pragma once

// Rank-one recovery from a lifted PSD solution: eigenvector extraction when
// the matrix is numerically rank one, Gaussian randomization otherwise.

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "riscf/rng.hpp"

namespace riscf::conic {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Complex = std::complex<double>;

struct RankOneResult {
  bool accepted = false;
  VectorXcd vector;     // sqrt(lambda_1) * u_1, phase-normalized
  double rank_ratio = 0.0;  // lambda_2 / lambda_1
};

// Accepts when lambda_2/lambda_1 <= rank_tol. The returned vector's
// largest-modulus entry is made real nonnegative. Throws on non-Hermitian
// input (beyond `herm_tol`).
RankOneResult extract_rank_one(const MatrixXcd& h, double rank_tol,
                               double herm_tol = 1e-8);

// One sample x ~ CN(0, H); H is clipped to its PSD part.
VectorXcd sample_gaussian(const MatrixXcd& h, Philox& rng);

// Entrywise unit-modulus projection with the trailing element renormalized
// to one (the lifted-phase convention).
VectorXcd project_phases(const VectorXcd& x);

// Draws `trials` candidates from CN(0, H), maps each through `project`,
// keeps those passing `feasible`, and returns the best under `objective`.
// Empty optional when no candidate is feasible.
std::optional<VectorXcd> gaussian_randomize(
    const MatrixXcd& h, const std::function<VectorXcd(const VectorXcd&)>& project,
    const std::function<bool(const VectorXcd&)>& feasible,
    const std::function<double(const VectorXcd&)>& objective, int trials,
    Philox& rng);

}  // namespace riscf::conic
