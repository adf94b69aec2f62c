// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code is the number of
// failed criteria.

#include <Eigen/Eigenvalues>
#include <atomic>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "riscf/alg/perfect.hpp"
#include "riscf/alg/robust.hpp"
#include "riscf/conic/randomization.hpp"
#include "riscf/conic/solver.hpp"
#include "riscf/stats.hpp"
#include "riscf/validate.hpp"

using namespace riscf;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

// tiny work pool: runs tasks on hardware threads, preserves slot order
void run_parallel(std::vector<std::function<void()>>& tasks) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      tasks[i]();
    }
  };
  const unsigned n = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

nlohmann::json scenario_with(std::uint64_t seed,
                             const std::vector<std::pair<std::string, double>>& kv = {},
                             const std::string& geometry = "") {
  nlohmann::json doc;
  doc["rng_seed"] = seed;
  for (const auto& [k, v] : kv) doc[k] = v;
  if (!geometry.empty()) doc["geometry"] = geometry;
  return doc;
}

struct SeedRuns {
  alg::RunResult perfect, robust, perfect_no_ris;
  bool perfect_ok = false, robust_ok = false, no_ris_ok = false;
  std::string error;
};

bool monotone_z(const alg::IterationTrace& trace, double slack) {
  double prev = -1e300;
  for (const auto& r : trace.rows) {
    if (r.z_p4 < prev - slack) return false;
    if (r.z_p6 < r.z_p4 - slack) return false;
    prev = r.z_p6;
  }
  return true;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Check>> results(11);

  constexpr int kSeeds = 10;
  std::vector<SeedRuns> runs(kSeeds);

  // --- shared runs for criteria 1-3 -------------------------------------
  {
    std::vector<std::function<void()>> tasks;
    for (int s = 0; s < kSeeds; ++s)
      tasks.push_back([&runs, s] {
        SeedRuns& r = runs[s];
        try {
          const auto doc = scenario_with(s + 1);
          const ScenarioConfig cfg = build_scenario(doc);
          const ChannelSet cs = sample_channels(cfg);
          alg::AlgOptions opts;
          opts.max_iters = 10;
          r.perfect = alg::run_algorithm1(cs, cfg, opts);
          r.perfect_ok = true;
          const EveErrorModel err = EveErrorModel::from_sigma_bar(cs, cfg.sigma_bar);
          r.robust = alg::run_algorithm2(cs, err, cfg, opts);
          r.robust_ok = true;

          nlohmann::json doc2 = doc;
          doc2["num_ris"] = 0;
          const ScenarioConfig cfg2 = build_scenario(doc2);
          const ChannelSet cs2 = sample_channels(cfg2);
          r.perfect_no_ris = alg::run_algorithm1(cs2, cfg2, opts);
          r.no_ris_ok = true;
        } catch (const std::exception& ex) {
          r.error = ex.what();
        }
      });
    run_parallel(tasks);
  }

  // --- criterion 1: convergence ------------------------------------------
  {
    Check& c = results[1].second;
    results[1].first = "convergence: nondecreasing z, converged within 10 iterations";
    for (int s = 0; s < kSeeds; ++s) {
      const SeedRuns& r = runs[s];
      const std::string tag = "seed " + std::to_string(s + 1);
      c.require(r.perfect_ok && r.robust_ok, tag + " failed: " + r.error);
      if (!r.perfect_ok || !r.robust_ok) continue;
      c.require(r.perfect.converged, tag + " perfect not converged");
      c.require(r.robust.converged, tag + " robust not converged");
      c.require(r.perfect.iterations <= 10, tag + " perfect iterations");
      c.require(r.robust.iterations <= 10, tag + " robust iterations");
      c.require(monotone_z(r.perfect.trace, 1e-5), tag + " perfect z dip");
      c.require(monotone_z(r.robust.trace, 1e-5), tag + " robust z dip");
      c.require(r.perfect.seconds < 600 && r.robust.seconds < 600,
                tag + " over time budget");
    }
  }

  // --- criterion 2: scheme ordering ---------------------------------------
  {
    Check& c = results[2].second;
    results[2].first =
        "scheme ordering: perfect >= robust and RIS > no-RIS on >= 9/10 seeds";
    int good = 0;
    for (int s = 0; s < kSeeds; ++s) {
      const SeedRuns& r = runs[s];
      if (!r.perfect_ok || !r.robust_ok || !r.no_ris_ok) continue;
      if (r.perfect.min_see >= r.robust.min_see - 1e-9 &&
          r.perfect.min_see > r.perfect_no_ris.min_see)
        ++good;
    }
    c.require(good >= 9, "ordered on only " + std::to_string(good) + "/10 seeds");
  }

  // --- criterion 3: outage guarantee --------------------------------------
  {
    Check& c = results[3].second;
    results[3].first = "outage: robust empirical outage <= 0.12 on every seed";
    for (int s = 0; s < kSeeds; ++s) {
      const SeedRuns& r = runs[s];
      if (!r.robust_ok) {
        c.require(false, "seed " + std::to_string(s + 1) + " missing");
        continue;
      }
      const double outage = r.robust.trace.rows.back().empirical_outage_max;
      c.require(outage <= 0.12, "seed " + std::to_string(s + 1) + " outage " +
                                    std::to_string(outage));
    }
  }

  // --- criterion 4: power sweep -------------------------------------------
  {
    Check& c = results[4].second;
    results[4].first = "power sweep: rise-then-flat for SEE schemes, decline for "
                       "the rate-only baseline";
    const std::vector<double> pbs = {5, 10, 15, 20, 25, 30};
    constexpr int kSweepSeeds = 3;
    struct Cell {
      double perfect = 0, robust = 0, rate = 0;
      bool ok = false;
      std::string err;
    };
    std::vector<Cell> cells(pbs.size() * kSweepSeeds);
    std::vector<std::function<void()>> tasks;
    for (std::size_t p = 0; p < pbs.size(); ++p)
      for (int s = 0; s < kSweepSeeds; ++s)
        tasks.push_back([&cells, &pbs, p, s] {
          Cell& cell = cells[p * kSweepSeeds + s];
          try {
            const auto doc = scenario_with(s + 1, {{"pb_dbm", pbs[p]}});
            const ScenarioConfig cfg = build_scenario(doc);
            const ChannelSet cs = sample_channels(cfg);
            alg::AlgOptions opts;
            opts.max_iters = 12;
            opts.outage_samples = 2000;
            cell.perfect = alg::run_algorithm1(cs, cfg, opts).min_see;
            alg::AlgOptions rate_opts = opts;
            rate_opts.mode = alg::ObjectiveMode::max_min_rate;
            cell.rate = alg::run_algorithm1(cs, cfg, rate_opts).min_see;
            const EveErrorModel err =
                EveErrorModel::from_sigma_bar(cs, cfg.sigma_bar);
            cell.robust = alg::run_algorithm2(cs, err, cfg, opts).min_see;
            cell.ok = true;
          } catch (const std::exception& ex) {
            cell.err = ex.what();
          }
        });
    run_parallel(tasks);

    std::vector<double> mean_perfect(pbs.size(), 0), mean_robust(pbs.size(), 0),
        mean_rate(pbs.size(), 0);
    for (std::size_t p = 0; p < pbs.size(); ++p)
      for (int s = 0; s < kSweepSeeds; ++s) {
        const Cell& cell = cells[p * kSweepSeeds + s];
        c.require(cell.ok, "sweep cell failed: " + cell.err);
        mean_perfect[p] += cell.perfect / kSweepSeeds;
        mean_robust[p] += cell.robust / kSweepSeeds;
        mean_rate[p] += cell.rate / kSweepSeeds;
      }
    auto check_rise_flat = [&](const std::vector<double>& m, const std::string& who) {
      for (int i = 0; i + 1 <= 3; ++i)
        c.require(m[i + 1] >= m[i] * (1.0 - 1e-3),
                  who + " not nondecreasing at point " + std::to_string(i + 1));
      for (int i = 4; i < 6; ++i)
        c.require(std::abs(m[i] - m[3]) <= 0.02 * std::abs(m[3]),
                  who + " not flat beyond 20 dBm");
    };
    check_rise_flat(mean_perfect, "perfect");
    check_rise_flat(mean_robust, "robust");
    const auto peak = std::max_element(mean_rate.begin(), mean_rate.end());
    c.require(peak != mean_rate.end() - 1 &&
                  mean_rate.back() < *peak * (1.0 - 1e-3),
              "rate-only baseline does not decline from its peak");
  }

  // --- criterion 5: eavesdropper count ------------------------------------
  {
    Check& c = results[5].second;
    results[5].first = "eve count: min-SEE nonincreasing in J per paired seed";
    constexpr int kEveSeeds = 3;
    struct Cell {
      double perfect = 0, robust = 0;
      bool ok = false;
      std::string err;
    };
    std::vector<Cell> cells(3 * kEveSeeds);
    std::vector<std::function<void()>> tasks;
    for (int j = 1; j <= 3; ++j)
      for (int s = 0; s < kEveSeeds; ++s)
        tasks.push_back([&cells, j, s] {
          Cell& cell = cells[(j - 1) * kEveSeeds + s];
          try {
            const auto doc = scenario_with(
                s + 1, {{"num_eves", static_cast<double>(j)}}, "eve_sweep");
            const ScenarioConfig cfg = build_scenario(doc);
            const ChannelSet cs = sample_channels(cfg);
            alg::AlgOptions opts;
            opts.max_iters = 12;
            opts.outage_samples = 2000;
            cell.perfect = alg::run_algorithm1(cs, cfg, opts).min_see;
            const EveErrorModel err =
                EveErrorModel::from_sigma_bar(cs, cfg.sigma_bar);
            cell.robust = alg::run_algorithm2(cs, err, cfg, opts).min_see;
            cell.ok = true;
          } catch (const std::exception& ex) {
            cell.err = ex.what();
          }
        });
    run_parallel(tasks);
    for (int s = 0; s < kEveSeeds; ++s)
      for (int j = 0; j < 2; ++j) {
        const Cell& fewer = cells[j * kEveSeeds + s];
        const Cell& more = cells[(j + 1) * kEveSeeds + s];
        c.require(fewer.ok && more.ok, "cell failed: " + fewer.err + more.err);
        if (!fewer.ok || !more.ok) continue;
        const std::string tag =
            "seed " + std::to_string(s + 1) + " J " + std::to_string(j + 1) + "->" +
            std::to_string(j + 2);
        c.require(more.perfect <= fewer.perfect + 1e-6, "perfect rose: " + tag);
        c.require(more.robust <= fewer.robust + 1e-6, "robust rose: " + tag);
      }
  }

  // --- criterion 6: BS count ----------------------------------------------
  {
    Check& c = results[6].second;
    results[6].first = "BS count: mean min-SEE unimodal in B";
    constexpr int kBsSeeds = 5;
    std::vector<double> vals(4 * kBsSeeds, 0);
    std::vector<int> oks(4 * kBsSeeds, 0);
    std::vector<std::function<void()>> tasks;
    for (int b = 1; b <= 4; ++b)
      for (int s = 0; s < kBsSeeds; ++s)
        tasks.push_back([&vals, &oks, b, s] {
          try {
            const auto doc = scenario_with(
                s + 1, {{"num_bs", static_cast<double>(b)}}, "bs_sweep");
            const ScenarioConfig cfg = build_scenario(doc);
            const ChannelSet cs = sample_channels(cfg);
            alg::AlgOptions opts;
            opts.max_iters = 12;
            vals[(b - 1) * kBsSeeds + s] = alg::run_algorithm1(cs, cfg, opts).min_see;
            oks[(b - 1) * kBsSeeds + s] = 1;
          } catch (const std::exception&) {
          }
        });
    run_parallel(tasks);
    std::vector<double> mean(4, 0);
    for (int b = 0; b < 4; ++b) {
      int n = 0;
      for (int s = 0; s < kBsSeeds; ++s)
        if (oks[b * kBsSeeds + s]) {
          mean[b] += vals[b * kBsSeeds + s];
          ++n;
        }
      c.require(n == kBsSeeds, "B=" + std::to_string(b + 1) + " runs failed");
      if (n) mean[b] /= n;
    }
    const std::size_t peak =
        std::max_element(mean.begin(), mean.end()) - mean.begin();
    bool unimodal = true;
    for (std::size_t i = 0; i < peak; ++i)
      if (mean[i + 1] < mean[i] * (1.0 - 1e-3)) unimodal = false;
    for (std::size_t i = peak; i + 1 < mean.size(); ++i)
      if (mean[i + 1] > mean[i] * (1.0 + 1e-3)) unimodal = false;
    std::ostringstream shape;
    for (double m : mean) shape << m << " ";
    c.require(unimodal, "means not unimodal: " + shape.str());
  }

  // --- criterion 7: surrogate suite ----------------------------------------
  {
    Check& c = results[7].second;
    results[7].first = "surrogates: tight at expansion, correct bound side, "
                       "multiplier optimal";
    Philox rng(77, 1);
    for (int t = 0; t < 1000; ++t) {
      const double a = 10 * rng.uniform01(), b = 5 * rng.uniform01();
      const double bh = 5 * rng.uniform01();
      c.require(std::abs(secrecy_surrogate(a, bh, bh) -
                         (std::log2(1 + a) - std::log2(1 + bh))) <= 1e-12,
                "secrecy surrogate not tight");
      c.require(secrecy_surrogate(a, b, bh) <=
                    std::log2(1 + a) - std::log2(1 + b) + 1e-12,
                "secrecy surrogate above the exact value");

      const double ah = 0.01 + 5 * rng.uniform01(), dh = 0.01 + 5 * rng.uniform01();
      const double av = 0.01 + 5 * rng.uniform01(), dv = 0.01 + 5 * rng.uniform01();
      c.require(std::abs(bilinear_upper_bound(ah, dh, ah, dh) - ah * dh) <= 1e-12,
                "bilinear bound not tight");
      c.require(bilinear_upper_bound(av, dv, ah, dh) >= av * dv - 1e-12,
                "bilinear bound below the product");

      const double s1 = 10 * (rng.uniform01() - 0.5);
      const double s2 = 10 * (rng.uniform01() - 0.5);
      c.require(std::abs(square_lower_bound(s1, s1) - s1 * s1) <= 1e-12,
                "square bound not tight");
      c.require(square_lower_bound(s1, s2) <= s1 * s1 + 1e-12,
                "square bound above the square");

      const double f = 0.1 + 5 * rng.uniform01(), d = 0.1 + 3 * rng.uniform01();
      const double rho = 5 * rng.uniform01();
      c.require(fp_value(f, d, rho) <= f / d + 1e-12, "fp value above the ratio");
      c.require(std::abs(fp_value(f, d, rho_update(f, d)) - f / d) <= 1e-12,
                "fp value at the optimal multiplier");
    }
    // numeric 1-D maximization: parabola vertex through three samples
    Philox rng2(77, 2);
    for (int t = 0; t < 50; ++t) {
      const double f = 0.1 + 5 * rng2.uniform01(), d = 0.1 + 3 * rng2.uniform01();
      const double m = std::max(rho_update(f, d), 1e-3);
      const double y0 = fp_value(f, d, 0), y1 = fp_value(f, d, m),
                   y2 = fp_value(f, d, 2 * m);
      const double a2 = (y2 - 2 * y1 + y0) / (2 * m * m);
      const double b1 = (4 * y1 - 3 * y0 - y2) / (2 * m);
      c.require(std::abs(-b1 / (2 * a2) - rho_update(f, d)) <=
                    1e-9 * std::max(1.0, rho_update(f, d)),
                "numeric maximizer disagrees");
    }
  }

  // --- criterion 8: robust machinery ---------------------------------------
  {
    Check& c = results[8].second;
    results[8].first = "robust machinery: tail bound conservative, ball "
                       "certificates sound, factorization exact, radii correct";
    // tail-bound conservativeness on 50 synthetic triples
    Philox rng(88, 1);
    const double phi = 0.1;
    for (int inst = 0; inst < 50; ++inst) {
      const int dim = 4;
      Eigen::MatrixXcd araw(dim, dim);
      for (int cc = 0; cc < dim; ++cc)
        for (int rr = 0; rr < dim; ++rr) araw(rr, cc) = rng.cgaussian();
      const Eigen::MatrixXcd a = 0.5 * (araw + araw.adjoint());
      Eigen::VectorXcd u(dim);
      for (int i = 0; i < dim; ++i) u[i] = rng.cgaussian();
      const double lam = std::sqrt(a.squaredNorm() + 2 * u.squaredNorm());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
      const double eps = std::max(0.0, -es.eigenvalues().minCoeff());
      const double cval = -a.trace().real() +
                          std::sqrt(-2 * std::log(phi)) * lam - std::log(phi) * eps;
      int bad = 0;
      const int draws = 100000;
      Philox mc(880 + inst, 2);
      for (int s = 0; s < draws; ++s) {
        Eigen::VectorXcd e(dim);
        for (int i = 0; i < dim; ++i) e[i] = mc.cgaussian();
        if ((e.adjoint() * a * e)(0).real() + 2 * (u.adjoint() * e)(0).real() +
                cval <
            0)
          ++bad;
      }
      const double viol = static_cast<double>(bad) / draws;
      c.require(viol <= phi + 3 * std::sqrt(phi * (1 - phi) / draws),
                "tail bound violated on instance " + std::to_string(inst));
    }
    // ball-certificate soundness: sampled points never violate
    for (int inst = 0; inst < 5; ++inst) {
      const int dim = 5;
      Eigen::MatrixXcd m(dim, dim);
      for (int cc = 0; cc < dim; ++cc)
        for (int rr = 0; rr < dim; ++rr) m(rr, cc) = rng.cgaussian();
      const Eigen::MatrixXcd cw = m * m.adjoint() / dim;
      Eigen::VectorXcd xt(dim);
      for (int i = 0; i < dim; ++i) xt[i] = rng.cgaussian();
      const double rb2 = 0.5 + rng.uniform01();
      conic::ConicProgram prog;
      const conic::ScalarVar varpi = prog.add_scalar("varpi");
      prog.maximize(conic::RealExpr(0.0) - conic::RealExpr::var(varpi));
      alg::emit_ball_cap_num(prog, conic::HermExpr::of_constant(cw), xt, rb2,
                             conic::RealExpr::var(varpi), "t");
      const auto sol = conic::solve(prog);
      c.require(sol.status == conic::SolveStatus::optimal, "certificate solve");
      const double varpi_star = sol.value(varpi);
      for (int s = 0; s < 10000; ++s) {
        Eigen::VectorXcd dvec(dim);
        for (int i = 0; i < dim; ++i) dvec[i] = rng.cgaussian();
        dvec *= std::sqrt(rb2) * std::pow(rng.uniform01(), 1.0 / (2 * dim)) /
                dvec.norm();
        const Eigen::VectorXcd x = xt + dvec;
        c.require((x.adjoint() * cw * x)(0).real() <= varpi_star + 1e-6,
                  "in-ball violation");
      }
    }
    // factorized phase sandwich exactness
    for (int inst = 0; inst < 50; ++inst) {
      const int rn = 6;
      Eigen::MatrixXcd mraw(rn, rn);
      for (int cc = 0; cc < rn; ++cc)
        for (int rr = 0; rr < rn; ++rr) mraw(rr, cc) = rng.cgaussian();
      const Eigen::MatrixXcd mid = 0.5 * (mraw + mraw.adjoint());
      const alg::SvdSandwich s = alg::svd_reformulate(mid);
      Eigen::VectorXcd theta(rn);
      for (int n = 0; n < rn; ++n)
        theta[n] = std::polar(1.0, 2 * M_PI * rng.uniform01());
      Eigen::VectorXcd th(rn + 1);
      th.head(rn) = theta;
      th[rn] = 1.0;
      const Eigen::MatrixXcd direct =
          theta.conjugate().asDiagonal() * mid * theta.asDiagonal();
      c.require((s.apply(th * th.adjoint()) - direct).cwiseAbs().maxCoeff() <=
                    1e-9 * std::max(1.0, direct.cwiseAbs().maxCoeff()),
                "factorized sandwich mismatch");
    }
    // sphere radii
    c.require(std::abs(alg::sphere_radius(0.1, 1) - std::sqrt(-std::log(0.1))) <=
                  1e-10,
              "2-dof radius");
    const double psi12 = alg::sphere_radius(0.1, 12);
    Philox mc(88, 3);
    int below = 0;
    const int n = 1000000;
    for (int s = 0; s < n; ++s) {
      double nrm2 = 0;
      for (int i = 0; i < 12; ++i) nrm2 += std::norm(mc.cgaussian());
      if (nrm2 <= psi12 * psi12) ++below;
    }
    c.require(std::abs(static_cast<double>(below) / n - 0.9) <= 0.01 * 0.9,
              "dim-12 radius quantile");
  }

  // --- criterion 9: identity suite -----------------------------------------
  {
    Check& c = results[9].second;
    results[9].first =
        "identities: trace forms, cascade assembly, Schur grid, census counts";
    const ScenarioConfig cfg = build_scenario();
    const ChannelSet cs = sample_channels(cfg);
    Philox rng(99, 1);
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXcd w(cs.mb());
      for (int i = 0; i < cs.mb(); ++i) w[i] = rng.cgaussian();
      Eigen::VectorXcd th(cs.rn() + 1);
      for (int nn = 0; nn < cs.rn(); ++nn)
        th[nn] = std::polar(1.0, 2 * M_PI * rng.uniform01());
      th[cs.rn()] = 1.0;
      const auto [direct, traced] =
          validate::quadratic_form_oracle(th, cs.h_eff_user[t % cs.K], w);
      c.require(std::abs(direct - traced) <= 1e-10 * std::max(1.0, direct),
                "trace-form mismatch");

      const int k = t % cs.K;
      const Complex lhs = (th.adjoint() * cs.h_eff_user[k] * w)(0);
      Complex rhs = (cs.h_d_user[k].adjoint() * w)(0);
      for (int nn = 0; nn < cs.rn(); ++nn)
        rhs += std::conj(th[nn]) * std::conj(cs.f_user[k][nn]) * (cs.g.row(nn) * w)(0);
      c.require(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)),
                "cascade assembly mismatch");
    }
    for (int bi = 0; bi <= 10; ++bi)
      for (int si = -10; si <= 10; ++si)
        for (int ci = -5; ci <= 10; ++ci) {
          const double beta = 0.2 * bi, sg = 0.2 * si, chi = 0.2 * ci;
          Eigen::Matrix2d m;
          m << beta, sg, sg, chi;
          Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m,
                                                            Eigen::EigenvaluesOnly);
          const bool psd = es.eigenvalues().minCoeff() >= -1e-12;
          const bool analytic =
              beta >= 0 && chi >= 0 && beta * chi >= sg * sg - 1e-12;
          c.require(psd == analytic, "Schur grid mismatch");
        }
    // census counts
    alg::LiftedState st = alg::initial_state(cs, cfg, 0);
    AuxiliaryState aux_p = alg::evaluate_auxiliary(cs, st, cfg, false);
    aux_p.rho.setConstant(cs.K, cs.J, 1.0);
    const auto cb = alg::build_beamforming_subproblem(cs, st.q_hat, aux_p, cfg)
                        .prog.census();
    const auto cp =
        alg::build_phase_subproblem(cs, st.w, st.v, aux_p, cfg).prog.census();
    const EveErrorModel err = EveErrorModel::from_sigma_bar(cs, cfg.sigma_bar);
    const alg::RobustData rd = alg::make_robust_data(cs, err, cfg);
    AuxiliaryState aux_r = alg::evaluate_auxiliary_robust(cs, st, cfg, rd);
    aux_r.rho.setConstant(cs.K, cs.J, 1.0);
    const auto crb = alg::build_robust_beamforming_subproblem(cs, st.q_hat, aux_r,
                                                              rd, cfg, {})
                         .prog.census();
    const auto crp = alg::build_robust_phase_subproblem(cs, st.w, st.v, aux_r, rd,
                                                        cfg, {})
                         .prog.census();
    c.require(cb.lmi == 24 && cb.soc == 2, "beam census");
    c.require(cp.lmi == 28 && cp.soc == 2, "phase census");
    c.require(crb.lmi == 40 && crb.soc == 6, "robust beam census");
    c.require(crp.lmi == 44 && crp.soc == 6, "robust phase census");
  }

  // --- criterion 10: randomization quality ----------------------------------
  {
    Check& c = results[10].second;
    results[10].first =
        "randomization: within 0.9x of the exhaustive phase grid on toys";
    for (int seed = 1; seed <= 20; ++seed) {
      Philox rng(seed, 10);
      const int rn = 2;
      Eigen::MatrixXcd a(rn + 1, rn + 1);
      for (int cc = 0; cc <= rn; ++cc)
        for (int rr = 0; rr <= rn; ++rr) a(rr, cc) = rng.cgaussian();
      const Eigen::MatrixXcd cmat = a * a.adjoint() / (rn + 1);

      conic::ConicProgram prog;
      const conic::HermVar q = prog.add_hermitian("Q", rn + 1);
      prog.maximize(conic::trace_form(cmat, q));
      for (int m = 0; m <= rn; ++m) {
        Eigen::MatrixXcd em = Eigen::MatrixXcd::Zero(rn + 1, rn + 1);
        em(m, m) = 1.0;
        prog.add_eq(conic::trace_form(em, q) - conic::RealExpr(1.0), "diag");
      }
      prog.add_psd(q, "psd");
      const auto sol = conic::solve(prog);
      c.require(sol.status == conic::SolveStatus::optimal, "toy solve failed");

      auto objective = [&](const Eigen::VectorXcd& th) {
        return (th.adjoint() * cmat * th)(0).real();
      };
      Philox rrng(seed, 11);
      const auto best = conic::gaussian_randomize(
          sol.value(q), conic::project_phases,
          [](const Eigen::VectorXcd&) { return true; }, objective, 100, rrng);
      c.require(best.has_value(), "no candidate");
      if (!best) continue;

      double grid_best = 0.0;
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          Eigen::VectorXcd th(rn + 1);
          th[0] = std::polar(1.0, 2 * M_PI * i / 8.0);
          th[1] = std::polar(1.0, 2 * M_PI * j / 8.0);
          th[2] = 1.0;
          grid_best = std::max(grid_best, objective(th));
        }
      c.require(objective(best.value()) >= 0.9 * grid_best,
                "seed " + std::to_string(seed) + " below 0.9x of the grid");
    }
  }

  // --- report ---------------------------------------------------------------
  int failures = 0;
  for (int i = 1; i <= 10; ++i) {
    const auto& [label, check] = results[i];
    if (check.ok) {
      std::printf("[PASS] criterion %d: %s\n", i, label.c_str());
    } else {
      ++failures;
      std::printf("[FAIL] criterion %d: %s (%s)\n", i, label.c_str(),
                  check.detail.str().c_str());
    }
  }
  std::printf("%d/10 acceptance criteria passed\n", 10 - failures);
  return failures;
}
