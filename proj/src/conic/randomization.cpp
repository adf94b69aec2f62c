#include "riscf/conic/randomization.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace riscf::conic {

RankOneResult extract_rank_one(const MatrixXcd& h, double rank_tol, double herm_tol) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale)
    throw std::invalid_argument("extract_rank_one: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (h + h.adjoint()));
  const auto& vals = es.eigenvalues();  // ascending
  const Eigen::Index d = vals.size();
  const double top = vals[d - 1];
  const double second = d > 1 ? std::max(0.0, vals[d - 2]) : 0.0;

  RankOneResult res;
  if (top <= 0) return res;
  res.rank_ratio = d > 1 ? second / top : 0.0;
  if (res.rank_ratio > rank_tol) return res;

  VectorXcd v = std::sqrt(top) * es.eigenvectors().col(d - 1);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex piv = v[imax];
  if (std::abs(piv) > 0) v *= std::conj(piv) / std::abs(piv);
  res.accepted = true;
  res.vector = v;
  return res;
}

VectorXcd sample_gaussian(const MatrixXcd& h, Philox& rng) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (h + h.adjoint()));
  const Eigen::Index d = h.rows();
  VectorXcd xi(d);
  for (Eigen::Index i = 0; i < d; ++i) xi[i] = rng.cgaussian();
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * xi;
}

VectorXcd project_phases(const VectorXcd& x) {
  const Eigen::Index d = x.size();
  VectorXcd y(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double m = std::abs(x[i]);
    y[i] = m > 0 ? x[i] / m : Complex(1.0, 0.0);
  }
  // renormalize so the trailing entry is exactly one
  y /= y[d - 1];
  for (Eigen::Index i = 0; i < d; ++i) {
    const double m = std::abs(y[i]);
    y[i] = m > 0 ? y[i] / m : Complex(1.0, 0.0);
  }
  y[d - 1] = 1.0;
  return y;
}

std::optional<VectorXcd> gaussian_randomize(
    const MatrixXcd& h, const std::function<VectorXcd(const VectorXcd&)>& project,
    const std::function<bool(const VectorXcd&)>& feasible,
    const std::function<double(const VectorXcd&)>& objective, int trials,
    Philox& rng) {
  if (trials < 1) throw std::invalid_argument("gaussian_randomize: trials must be >= 1");
  std::optional<VectorXcd> best;
  double best_obj = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    VectorXcd cand = project(sample_gaussian(h, rng));
    if (!feasible(cand)) continue;
    const double obj = objective(cand);
    if (obj > best_obj) {
      best_obj = obj;
      best = cand;
    }
  }
  return best;
}

}  // namespace riscf::conic
