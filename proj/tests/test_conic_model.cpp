#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "riscf/conic/program.hpp"
#include "riscf/conic/solver.hpp"
#include "riscf/rng.hpp"

using namespace riscf;
using namespace riscf::conic;

namespace {

MatrixXcd random_hermitian(int d, Philox& rng, bool psd = false) {
  MatrixXcd a(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) a(r, c) = rng.cgaussian();
  MatrixXcd h = 0.5 * (a + a.adjoint());
  if (psd) h = a * a.adjoint();
  return h;
}

}  // namespace

TEST_CASE("hermitian parameterization round trips") {
  Philox rng(1, 1);
  for (int d : {1, 2, 3, 5, 9}) {
    const MatrixXcd h = random_hermitian(d, rng);
    const VectorXd p = herm_to_params(h);
    CHECK(p.size() == d * d);
    const MatrixXcd back = herm_from_params(p, d);
    CHECK((back - h).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("expression evaluation matches direct algebra") {
  ConicProgram prog;
  const HermVar X = prog.add_hermitian("X", 3);
  const ScalarVar t = prog.add_scalar("t");

  Philox rng(2, 2);
  const MatrixXcd C = random_hermitian(3, rng);
  const MatrixXcd T(random_hermitian(3, rng));
  VectorXcd u(3);
  for (int i = 0; i < 3; ++i) u[i] = rng.cgaussian();

  VectorXd x = VectorXd::Zero(prog.num_reals());
  const MatrixXcd Xval = random_hermitian(3, rng);
  x.segment(X.base, X.params()) = herm_to_params(Xval);
  x[t.index] = 0.7;

  CHECK(trace_form(C, X).eval(x) ==
        doctest::Approx((C * Xval).trace().real()).epsilon(1e-12));
  CHECK(quad_form(X, u).eval(x) ==
        doctest::Approx((u.adjoint() * Xval * u)(0).real()).epsilon(1e-12));

  const HermExpr cong = congruence(T, X);
  CHECK((cong.eval(x) - T * Xval * T.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  const CVecExpr hv = herm_times_vec(X, u);
  CHECK((hv.eval(x) - Xval * u).cwiseAbs().maxCoeff() < 1e-12);

  const CMatExpr mp = mat_product(T, X, T.adjoint());
  CHECK((mp.eval(x) - T * Xval * T.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  // bordered block
  const HermExpr big =
      bordered(cong, herm_times_vec(X, u), RealExpr::var(t, 2.0));
  const MatrixXcd bval = big.eval(x);
  CHECK(bval.rows() == 4);
  CHECK((bval.topLeftCorner(3, 3) - T * Xval * T.adjoint()).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((bval.block(0, 3, 3, 1) - Xval * u).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(bval(3, 3) - Complex(1.4, 0.0)) < 1e-12);
  CHECK((bval - bval.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("vech rows reproduce the Frobenius norm") {
  ConicProgram prog;
  const HermVar X = prog.add_hermitian("X", 4);
  Philox rng(3, 3);
  const MatrixXcd Xval = random_hermitian(4, rng);
  VectorXd x = VectorXd::Zero(prog.num_reals());
  x.segment(X.base, X.params()) = herm_to_params(Xval);

  const auto rows = vech_rows(herm_var_expr(X));
  double nrm2 = 0.0;
  for (const auto& r : rows) {
    const double v = r.eval(x);
    nrm2 += v * v;
  }
  CHECK(std::sqrt(nrm2) == doctest::Approx(Xval.norm()).epsilon(1e-12));
}

TEST_CASE("complex PSD embedding preserves definiteness both ways") {
  Philox rng(4, 4);
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 4;
    MatrixXcd h = random_hermitian(d, rng, t % 2 == 0);
    if (t % 2 == 1) h -= 0.5 * h.cwiseAbs().maxCoeff() * MatrixXcd::Identity(d, d);
    // embed via a one-variable Herm expression fixed at its value
    ConicProgram prog;
    const HermVar X = prog.add_hermitian("X", d);
    prog.add_psd(X, "psd");
    VectorXd x = herm_to_params(h);

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const double cplx_min = es.eigenvalues().minCoeff();
    const double viol = max_violation(prog, x);
    if (cplx_min >= 0)
      CHECK(viol <= 1e-10);
    else
      CHECK(viol >= -cplx_min - 1e-10);
  }
}

TEST_CASE("schur 2x2 equivalence on an exhaustive grid") {
  for (double beta = 0.0; beta <= 2.0; beta += 0.25)
    for (double s = -2.0; s <= 2.0; s += 0.25)
      for (double chi = -1.0; chi <= 2.0; chi += 0.25) {
        Eigen::Matrix2d m;
        m << beta, s, s, chi;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m, Eigen::EigenvaluesOnly);
        const bool psd = es.eigenvalues().minCoeff() >= -1e-12;
        const bool analytic = beta >= 0 && chi >= 0 && beta * chi >= s * s - 1e-12;
        CHECK(psd == analytic);
      }
}

TEST_CASE("program JSON round trip is identical") {
  ConicProgram prog;
  const ScalarVar z = prog.add_scalar("z");
  const ScalarVar a = prog.add_scalar("alpha", true);
  const HermVar W = prog.add_hermitian("W", 2);
  prog.maximize(RealExpr::var(z));
  prog.add_ineq(RealExpr(5.0) - trace_form(MatrixXcd::Identity(2, 2), W), "power",
                CensusClass::lmi);
  prog.add_eq(RealExpr::var(a) - RealExpr(1.0), "pin", CensusClass::lmi);
  prog.add_soc(RealExpr::var(a), {RealExpr::var(z), RealExpr(0.5)}, "cap",
               CensusClass::soc);
  prog.add_psd(W, "psd_w", CensusClass::lmi);
  Philox rng(5, 5);
  prog.add_lmi(bordered(herm_var_expr(W), CVecExpr::of_constant(VectorXcd::Zero(2)),
                        RealExpr::var(z)),
               "border", CensusClass::lmi);

  const auto j1 = prog.to_json();
  const ConicProgram back = ConicProgram::from_json(j1);
  CHECK(back.to_json().dump() == j1.dump());

  const auto c = prog.census();
  CHECK(c.lmi == 4);
  CHECK(c.soc == 1);
}
