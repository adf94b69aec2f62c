#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "riscf/conic/solver.hpp"
#include "riscf/rng.hpp"

using namespace riscf;
using namespace riscf::conic;

TEST_CASE("tiny LP") {
  ConicProgram prog;
  const ScalarVar x = prog.add_scalar("x");
  prog.maximize(RealExpr::var(x));
  prog.add_ineq(RealExpr(1.0) - RealExpr::var(x), "cap");
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.value(x) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("equality plus nonnegativity") {
  ConicProgram prog;
  const ScalarVar x = prog.add_scalar("x", true);
  const ScalarVar y = prog.add_scalar("y", true);
  prog.maximize(RealExpr::var(x) + 2.0 * RealExpr::var(y));
  prog.add_eq(RealExpr::var(x) + RealExpr::var(y) - RealExpr(1.0), "sum");
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sol.value(y) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("tiny SOC") {
  // maximize x + y st ||(x,y)|| <= 1 -> sqrt(2)
  ConicProgram prog;
  const ScalarVar x = prog.add_scalar("x");
  const ScalarVar y = prog.add_scalar("y");
  prog.maximize(RealExpr::var(x) + RealExpr::var(y));
  prog.add_soc(RealExpr(1.0), {RealExpr::var(x), RealExpr::var(y)}, "ball");
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("2x2 PSD boundary: max t with [[1,t],[t,1]] psd") {
  ConicProgram prog;
  const ScalarVar t = prog.add_scalar("t");
  prog.maximize(RealExpr::var(t));
  prog.add_lmi(schur2(RealExpr(1.0), RealExpr::var(t), RealExpr(1.0)), "corr");
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.value(t) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("eigenvalue program: max tr(CX), tr(X)=1, X psd") {
  ConicProgram prog;
  const HermVar X = prog.add_hermitian("X", 3);
  MatrixXcd C = MatrixXcd::Zero(3, 3);
  C(0, 0) = 1.0;
  C(1, 1) = 2.5;
  C(2, 2) = -1.0;
  prog.maximize(trace_form(C, X));
  prog.add_eq(trace_form(MatrixXcd::Identity(3, 3), X) - RealExpr(1.0), "trace");
  prog.add_psd(X, "psd");
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("complex Hermitian eigenvalue program") {
  Philox rng(1, 9);
  MatrixXcd a(3, 3);
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) a(r, c) = rng.cgaussian();
  const MatrixXcd C = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(C, Eigen::EigenvaluesOnly);

  ConicProgram prog;
  const HermVar X = prog.add_hermitian("X", 3);
  prog.maximize(trace_form(C, X));
  prog.add_eq(trace_form(MatrixXcd::Identity(3, 3), X) - RealExpr(1.0), "trace");
  prog.add_psd(X, "psd");
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective ==
        doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-6));
}

TEST_CASE("random 2-variable SDP agrees with a refined grid search") {
  Philox rng(2, 7);
  for (int inst = 0; inst < 5; ++inst) {
    // maximize c0 x + c1 y st M0 + x M1 + y M2 psd, |x|,|y| <= 2
    MatrixXcd m1(2, 2), m2(2, 2);
    auto rnd_herm = [&rng](MatrixXcd& m) {
      MatrixXcd a(2, 2);
      for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 2; ++r) a(r, c) = rng.cgaussian();
      m = 0.5 * (a + a.adjoint());
    };
    rnd_herm(m1);
    rnd_herm(m2);
    const MatrixXcd m0 = MatrixXcd::Identity(2, 2);
    const double c0 = 2.0 * rng.uniform01() - 1.0;
    const double c1 = 2.0 * rng.uniform01() - 1.0;

    ConicProgram prog;
    const ScalarVar x = prog.add_scalar("x");
    const ScalarVar y = prog.add_scalar("y");
    prog.maximize(c0 * RealExpr::var(x) + c1 * RealExpr::var(y));
    HermExpr lmi = HermExpr::of_constant(m0);
    lmi += scaled_identity(RealExpr(0.0), 2);  // no-op, keeps type
    HermExpr xterm(2), yterm(2);
    xterm.terms.emplace_back(x.index, m1);
    yterm.terms.emplace_back(y.index, m2);
    lmi += xterm;
    lmi += yterm;
    prog.add_lmi(lmi, "lmi");
    prog.add_ineq(RealExpr(2.0) - RealExpr::var(x), "xu");
    prog.add_ineq(RealExpr(2.0) + RealExpr::var(x), "xl");
    prog.add_ineq(RealExpr(2.0) - RealExpr::var(y), "yu");
    prog.add_ineq(RealExpr(2.0) + RealExpr::var(y), "yl");

    const ConicSolution sol = solve(prog);
    REQUIRE(sol.status == SolveStatus::optimal);

    // Brute-force oracle: the feasible set is convex in (x, y), so bisect on
    // the support value tau of the objective, probing each level line on a
    // fine grid. Origin is feasible (the constant block is the identity).
    auto feasible = [&](double xv, double yv) {
      if (std::abs(xv) > 2 || std::abs(yv) > 2) return false;
      const MatrixXcd m = m0 + xv * m1 + yv * m2;
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
      return es.eigenvalues().minCoeff() >= 0.0;
    };
    const double cn2 = c0 * c0 + c1 * c1;
    double u_hint = 0.0;
    auto line_feasible = [&](double tau, double& hint) {
      const double px = tau * c0 / cn2, py = tau * c1 / cn2;
      const double dx = -c1 / std::sqrt(cn2), dy = c0 / std::sqrt(cn2);
      // coarse sweep plus a fine probe around the last feasible spot; the
      // feasible slice shrinks to a point as tau approaches the optimum
      const int grid = 2000;
      for (int i = 0; i <= grid; ++i) {
        const double u = -4.0 + 8.0 * i / grid;
        if (feasible(px + u * dx, py + u * dy)) {
          hint = u;
          return true;
        }
      }
      const int fine = 4000;
      for (int i = 0; i <= fine; ++i) {
        const double u = hint - 0.02 + 0.04 * i / fine;
        if (feasible(px + u * dx, py + u * dy)) {
          hint = u;
          return true;
        }
      }
      return false;
    };
    double lo = 0.0, hi = 2.0 * (std::abs(c0) + std::abs(c1)) + 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (line_feasible(mid, u_hint))
        lo = mid;
      else
        hi = mid;
    }
    const double best = lo;

    CHECK(std::abs(sol.objective - best) <= 1e-4);
    CHECK(max_violation(prog, sol.x) <= 1e-6);
  }
}

TEST_CASE("infeasible program is detected") {
  ConicProgram prog;
  const ScalarVar x = prog.add_scalar("x");
  prog.maximize(RealExpr::var(x));
  prog.add_ineq(RealExpr::var(x) - RealExpr(1.0), "xlo");   // x >= 1
  prog.add_ineq(RealExpr(-1.0) - RealExpr::var(x), "xhi");  // x <= -1
  const ConicSolution sol = solve(prog);
  CHECK(sol.status == SolveStatus::infeasible);
}

TEST_CASE("mixed cones: SOC + PSD + equality") {
  // maximize x + tr(diag(1,2) X) st ||(x, 1)|| <= 2, tr X = 1, X psd
  ConicProgram prog;
  const ScalarVar x = prog.add_scalar("x");
  const HermVar X = prog.add_hermitian("X", 2);
  MatrixXcd C = MatrixXcd::Zero(2, 2);
  C(0, 0) = 1;
  C(1, 1) = 2;
  prog.maximize(RealExpr::var(x) + trace_form(C, X));
  prog.add_soc(RealExpr(2.0), {RealExpr::var(x), RealExpr(1.0)}, "ball");
  prog.add_eq(trace_form(MatrixXcd::Identity(2, 2), X) - RealExpr(1.0), "tr");
  prog.add_psd(X, "psd");
  const ConicSolution sol = solve(prog);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == doctest::Approx(std::sqrt(3.0) + 2.0).epsilon(1e-6));
}

TEST_CASE("deterministic: same program twice gives identical output") {
  ConicProgram prog;
  const ScalarVar x = prog.add_scalar("x");
  prog.maximize(RealExpr::var(x));
  prog.add_lmi(schur2(RealExpr(1.0), RealExpr::var(x), RealExpr(2.0)), "s");
  const ConicSolution a = solve(prog);
  const ConicSolution b = solve(prog);
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}
