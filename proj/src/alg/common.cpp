#include "riscf/alg/common.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace riscf::alg {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kAuxFloor = 1e-9;
}  // namespace

std::string IterationTrace::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "iter,z_p4,z_p6,min_see_true,status_p4,status_p6,secs";
  if (robust) os << ",empirical_outage_max,psi";
  os << "\n";
  for (const auto& r : rows) {
    os << r.iter << ',' << r.z_p4 << ',' << r.z_p6 << ',' << r.min_see_true << ','
       << r.status_p4 << ',' << r.status_p6 << ',' << r.seconds;
    if (robust) os << ',' << r.empirical_outage_max << ',' << r.psi;
    os << "\n";
  }
  return os.str();
}

ChannelGrams channel_grams(const ChannelSet& cs, const MatrixXcd& q_hat,
                           const ScenarioConfig& cfg) {
  ChannelGrams g;
  for (int k = 0; k < cs.K; ++k)
    g.user.push_back(cs.h_eff_user[k].adjoint() * q_hat * cs.h_eff_user[k] /
                     cfg.noise_user_mw);
  for (int j = 0; j < cs.J; ++j)
    g.eve.push_back(cs.h_eff_eve[j].adjoint() * q_hat * cs.h_eff_eve[j] /
                    cfg.noise_eve_mw);
  return g;
}

AuxiliaryState evaluate_auxiliary(const ChannelSet& cs, const LiftedState& st,
                                  const ScenarioConfig& cfg, bool robust) {
  const ChannelGrams g = channel_grams(cs, st.q_hat, cfg);
  AuxiliaryState aux;
  aux.alpha.resize(cs.K);
  aux.delta.resize(cs.K);
  aux.beta.resize(cs.K, cs.J);
  aux.beta_prev.resize(cs.K, cs.J);
  aux.rho.setZero(cs.K, cs.J);
  aux.varsigma.resize(cs.K, cs.J);
  aux.chi.resize(cs.K, cs.J);
  aux.varpi.resize(cs.K, cs.J);

  for (int k = 0; k < cs.K; ++k) {
    const double num = std::max(0.0, (st.w[k] * g.user[k]).trace().real());
    double intf = 0.0;
    for (int i = 0; i < cs.K; ++i) {
      if (i != k) intf += (st.w[i] * g.user[k]).trace().real();
      intf += (st.v[i] * g.user[k]).trace().real();
    }
    intf = std::max(0.0, intf);
    aux.delta[k] = intf + 1.0;
    aux.alpha[k] = std::max(kAuxFloor, num / aux.delta[k]);
    for (int j = 0; j < cs.J; ++j) {
      const double num_e = std::max(0.0, (st.w[k] * g.eve[j]).trace().real());
      double den_e = 0.0;
      for (int i = 0; i < cs.K; ++i) {
        if (i != k) den_e += (st.w[i] * g.eve[j]).trace().real();
        den_e += (st.v[i] * g.eve[j]).trace().real();
      }
      den_e = std::max(0.0, den_e);
      const double beta = std::max(kAuxFloor, num_e / (den_e + 1.0));
      aux.beta(k, j) = beta;
      aux.beta_prev(k, j) = beta;
      if (robust) {
        aux.chi(k, j) = den_e + 1.0;
        aux.varsigma(k, j) = std::sqrt(std::max(kAuxFloor, beta * aux.chi(k, j)));
        aux.varpi(k, j) = std::max(kAuxFloor, num_e);
      } else {
        aux.chi(k, j) = std::max(kAuxFloor, beta * den_e);
        aux.varsigma(k, j) = std::sqrt(aux.chi(k, j));
        aux.varpi(k, j) = 0.0;
      }
    }
  }
  return aux;
}

double power_denominator(const LiftedState& st, const ScenarioConfig& cfg, int k) {
  const double tx_mw = st.w[k].trace().real() + st.v[k].trace().real();
  return (tx_mw / cfg.pa_efficiency + circuit_power(cfg)) / 1000.0;
}

LiftedState initial_state(const ChannelSet& cs, const ScenarioConfig& cfg,
                          std::uint64_t phase_stream) {
  const int mb = cs.mb(), rn = cs.rn();
  Philox rng(cfg.rng_seed, stream_id(StreamKind::phase_init, phase_stream));

  VectorXcd theta_hat(rn + 1);
  for (int n = 0; n < rn; ++n)
    theta_hat[n] = std::polar(1.0, 2.0 * M_PI * rng.uniform01());
  theta_hat[rn] = 1.0;

  LiftedState st;
  st.q_hat = theta_hat * theta_hat.adjoint();

  // Matched-filter beams toward the combined effective channel, each BS block
  // scaled to an even split of 80% of the budget.
  for (int k = 0; k < cs.K; ++k) {
    VectorXcd dir = cs.h_eff_user[k].adjoint() * theta_hat;
    const double per_user_mw = 0.8 * cfg.pb_mw / cs.K;
    VectorXcd w = VectorXcd::Zero(mb);
    for (int b = 0; b < cs.B; ++b) {
      VectorXcd blk = dir.segment(b * cs.M, cs.M);
      const double nrm = blk.norm();
      if (nrm < 1e-30) {
        blk = VectorXcd::Ones(cs.M) / std::sqrt(static_cast<double>(cs.M));
      } else {
        blk /= nrm;
      }
      w.segment(b * cs.M, cs.M) = std::sqrt(per_user_mw) * blk;
    }
    st.w.push_back(w * w.adjoint());
    st.v.push_back(MatrixXcd::Zero(mb, mb));
  }
  return st;
}

SubproblemVars declare_common_vars(ConicProgram& prog, int num_users, int num_eves,
                                   ObjectiveMode mode, bool robust) {
  SubproblemVars v;
  for (int k = 0; k < num_users; ++k) {
    v.alpha.push_back(prog.add_scalar("alpha" + std::to_string(k), true));
    v.delta.push_back(prog.add_scalar("delta" + std::to_string(k), true));
    v.a_rate.push_back(prog.add_scalar("rate" + std::to_string(k)));
    v.recip.push_back(prog.add_scalar("recip" + std::to_string(k), true));
  }
  for (int k = 0; k < num_users; ++k)
    for (int j = 0; j < num_eves; ++j) {
      const std::string suf = std::to_string(k) + "_" + std::to_string(j);
      v.beta.push_back(prog.add_scalar("beta" + suf, true));
      v.varsigma.push_back(prog.add_scalar("varsigma" + suf));
      v.chi.push_back(prog.add_scalar("chi" + suf));
      if (robust) v.varpi.push_back(prog.add_scalar("varpi" + suf));
    }
  if (mode == ObjectiveMode::sum_see) {
    RealExpr obj;
    for (int k = 0; k < num_users; ++k) {
      v.z.push_back(prog.add_scalar("z" + std::to_string(k)));
      obj += RealExpr::var(v.z.back());
    }
    v.objective = obj;
  } else {
    v.z.push_back(prog.add_scalar("z"));
    v.objective = RealExpr::var(v.z[0]);
  }
  return v;
}

void emit_rate_minorant(ConicProgram& prog, const SubproblemVars& vars, int k,
                        double alpha_hat) {
  const LogMinorant m = log_rate_minorant(alpha_hat);
  // a <= c0 - c1 * recip
  prog.add_ineq(RealExpr(m.c0) - m.c1 * RealExpr::var(vars.recip[k]) -
                    RealExpr::var(vars.a_rate[k]),
                "rate_minorant");
  // recip * alpha >= 1  <=>  ||(2, recip - alpha)|| <= recip + alpha
  prog.add_soc(RealExpr::var(vars.recip[k]) + RealExpr::var(vars.alpha[k]),
               {RealExpr(2.0),
                RealExpr::var(vars.recip[k]) - RealExpr::var(vars.alpha[k])},
               "rate_minorant_recip");
}

void emit_fp_secrecy(ConicProgram& prog, const SubproblemVars& vars, int k, int j,
                     int num_eves, double rho, double beta_hat,
                     const RealExpr& denom_watts, ObjectiveMode mode) {
  const ScalarVar z = vars.z[mode == ObjectiveMode::sum_see ? k : 0];
  // f = a_k - log2(1+beta_hat) - (beta - beta_hat)/((1+beta_hat) ln 2)
  RealExpr f = RealExpr::var(vars.a_rate[k]);
  f += RealExpr(-std::log2(1.0 + beta_hat) + beta_hat / ((1.0 + beta_hat) * kLn2));
  f -= (1.0 / ((1.0 + beta_hat) * kLn2)) * RealExpr::var(vars.beta[k * num_eves + j]);

  if (mode == ObjectiveMode::max_min_rate) {
    prog.add_ineq(f - RealExpr::var(z), "fp_secrecy", CensusClass::lmi);
    return;
  }
  if (rho <= 1e-12) {
    // vanished multiplier: the transformed value is 0 at the optimum and the
    // epigraph would wrongly force f >= 0, so pin t = 0
    prog.add_ineq(RealExpr(0.0) - rho * rho * denom_watts - RealExpr::var(z),
                  "fp_secrecy", CensusClass::lmi);
    return;
  }
  const ScalarVar t = prog.add_scalar(
      "fp_t" + std::to_string(k) + "_" + std::to_string(j), true);
  prog.add_ineq(2.0 * rho * RealExpr::var(t) - rho * rho * denom_watts -
                    RealExpr::var(z),
                "fp_secrecy", CensusClass::lmi);
  // t^2 <= f  <=>  ||(2t, 1-f)|| <= 1+f
  prog.add_soc(RealExpr(1.0) + f,
               {2.0 * RealExpr::var(t), RealExpr(1.0) - f}, "fp_sqrt_epigraph");
}

void refresh_expansion(const conic::ConicSolution& sol, const SubproblemVars& vars,
                       AuxiliaryState& aux, bool robust) {
  const int K = static_cast<int>(aux.alpha.size());
  const int J = static_cast<int>(aux.beta.cols());
  aux.beta_prev = aux.beta;
  for (int k = 0; k < K; ++k) {
    aux.alpha[k] = std::max(kAuxFloor, sol.value(vars.alpha[k]));
    aux.delta[k] = std::max(1.0, sol.value(vars.delta[k]));
    for (int j = 0; j < J; ++j) {
      aux.beta(k, j) = std::max(kAuxFloor, sol.value(vars.beta[k * J + j]));
      aux.varsigma(k, j) = std::max(kAuxFloor, sol.value(vars.varsigma[k * J + j]));
      aux.chi(k, j) = sol.value(vars.chi[k * J + j]);
      if (robust) aux.varpi(k, j) = sol.value(vars.varpi[k * J + j]);
    }
  }
  aux.z = sol.objective;
}

MatrixXcd psd_clip(const MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXcd normalize_unit_diag(const MatrixXcd& q_hat) {
  const Eigen::Index d = q_hat.rows();
  Eigen::VectorXd scale(d);
  for (Eigen::Index i = 0; i < d; ++i)
    scale[i] = 1.0 / std::sqrt(std::max(1e-12, q_hat(i, i).real()));
  return scale.asDiagonal() * q_hat * scale.asDiagonal();
}

std::vector<VectorXcd> an_streams(const MatrixXcd& v_cov) {
  std::vector<VectorXcd> streams;
  if (v_cov.rows() == 0) return streams;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (v_cov + v_cov.adjoint()));
  const double floor = 1e-10 * std::max(1e-30, es.eigenvalues().maxCoeff());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > floor)
      streams.push_back(std::sqrt(es.eigenvalues()[i]) * es.eigenvectors().col(i));
  return streams;
}

namespace {

// Joint beam randomization: keeps AN streams fixed, draws all users' beams,
// rescales into the per-BS budget, and scores by true min-SEE.
BeamformingState repair_beams(const ChannelSet& cs, const ScenarioConfig& cfg,
                              const LiftedState& lifted,
                              const std::vector<VectorXcd>& base_w,
                              const std::vector<bool>& needs_random,
                              const BeamformingState& skeleton,
                              const AlgOptions& opts, Philox& rng) {
  BeamformingState best = skeleton;
  best.w = base_w;
  auto enforce_budget = [&](BeamformingState& st) {
    double factor = 1.0;
    for (int b = 0; b < cs.B; ++b) {
      double wp = 0.0, vp = 0.0;
      for (const auto& w : st.w) wp += w.segment(b * cs.M, cs.M).squaredNorm();
      for (const auto& streams : st.an)
        for (const auto& s : streams) vp += s.segment(b * cs.M, cs.M).squaredNorm();
      const double room = std::max(0.0, cfg.pb_mw - vp);
      if (wp > room) factor = std::min(factor, std::sqrt(room / std::max(wp, 1e-30)));
    }
    if (factor < 1.0)
      for (auto& w : st.w) w *= factor;
  };
  enforce_budget(best);
  double best_obj = min_see(cs, best, cfg);

  bool any_random = false;
  for (bool b : needs_random) any_random |= b;
  if (!any_random) return best;

  for (int t = 0; t < opts.trials; ++t) {
    BeamformingState cand = skeleton;
    cand.w = base_w;
    for (int k = 0; k < cs.K; ++k)
      if (needs_random[k]) cand.w[k] = conic::sample_gaussian(lifted.w[k], rng);
    enforce_budget(cand);
    const double obj = min_see(cs, cand, cfg);
    if (obj > best_obj) {
      best_obj = obj;
      best = cand;
    }
  }
  return best;
}

}  // namespace

RunResult run_alternating(const ChannelSet& cs, const ScenarioConfig& cfg,
                          const AlgOptions& opts, const AlternatingCallbacks& cb) {
  const auto t_start = std::chrono::steady_clock::now();
  RunResult out;
  out.trace.robust = cb.robust_trace;

  LiftedState lifted;
  AuxiliaryState aux;

  auto min_surrogate = [&]() {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cs.K; ++k)
      for (int j = 0; j < cs.J; ++j)
        worst = std::min(worst, secrecy_surrogate(aux.alpha[k], aux.beta(k, j),
                                                  aux.beta_prev(k, j)));
    return worst;
  };
  auto update_rho = [&]() {
    for (int k = 0; k < cs.K; ++k)
      for (int j = 0; j < cs.J; ++j)
        aux.rho(k, j) = rho_update(
            std::max(0.0, secrecy_surrogate(aux.alpha[k], aux.beta(k, j),
                                            aux.beta_prev(k, j))),
            power_denominator(lifted, cfg, k));
  };
  // Each step is solved to its own surrogate fixed point: the expansion
  // points and multipliers are refreshed from the incumbent and the convex
  // program re-solved while it still improves. Every re-solve keeps the
  // previous point feasible, so the objective stays monotone throughout.
  const int inner_cap = 3;
  const double inner_tol = std::max(0.5 * opts.tau, 1e-5);

  auto solve_step = [&](bool beam_side, ObjectiveMode mode, std::string* status,
                        int iter) {
    double last = -std::numeric_limits<double>::infinity();
    for (int inner = 0; inner < inner_cap; ++inner) {
      if (mode != ObjectiveMode::max_min_rate) update_rho();
      conic::ConicSolution sol;
      if (beam_side) {
        BeamStep beam = cb.build_beam(lifted, aux, mode);
        sol = conic::solve(beam.prog, opts.solver);
        if (status) *status = conic::status_name(sol.status);
        if (!sol.usable())
          throw AlgorithmError(std::string("beam step ") +
                               conic::status_name(sol.status) + " at iteration " +
                               std::to_string(iter) + ": " + sol.message);
        for (int k = 0; k < cs.K; ++k) {
          lifted.w[k] = psd_clip(sol.value(beam.w[k]));
          lifted.v[k] = psd_clip(sol.value(beam.v[k]));
        }
        refresh_expansion(sol, beam.vars, aux, !beam.vars.varpi.empty());
      } else {
        PhaseStep phase = cb.build_phase(lifted, aux, mode);
        sol = conic::solve(phase.prog, opts.solver);
        if (status) *status = conic::status_name(sol.status);
        if (!sol.usable())
          throw AlgorithmError(std::string("phase step ") +
                               conic::status_name(sol.status) + " at iteration " +
                               std::to_string(iter) + ": " + sol.message);
        lifted.q_hat = normalize_unit_diag(psd_clip(sol.value(phase.q_hat)));
        refresh_expansion(sol, phase.vars, aux, !phase.vars.varpi.empty());
      }
      const double gain = sol.objective - last;
      last = sol.objective;
      if (gain <= inner_tol) break;
    }
    return last;
  };

  auto solve_pair = [&](ObjectiveMode mode, IterationRecord* rec, int iter) {
    const double z_beam =
        solve_step(true, mode, rec ? &rec->status_p4 : nullptr, iter);
    if (rec) rec->z_p4 = z_beam;
    if (cs.rn() > 0) {
      const double z_phase =
          solve_step(false, mode, rec ? &rec->status_p6 : nullptr, iter);
      if (rec) rec->z_p6 = z_phase;
      return z_phase;
    }
    if (rec) {
      rec->status_p6 = "skipped";
      rec->z_p6 = z_beam;
    }
    return z_beam;
  };

  // Initialization with bounded retries; a rate-mode bootstrap runs whenever
  // the starting point has nonpositive secrecy, so the fractional transform
  // starts from a point where its multiplier is meaningful.
  const int bootstrap_cap = 5;
  bool initialized = false;
  std::string last_error;
  for (std::uint64_t attempt = 0; attempt < 3 && !initialized; ++attempt) {
    try {
      lifted = initial_state(cs, cfg, opts.extra_stream * 8 + attempt);
      aux = cb.eval_aux(lifted);
      for (int boot = 0; boot < bootstrap_cap && (opts.mode != ObjectiveMode::max_min_rate) &&
                         min_surrogate() <= 1e-4;
           ++boot)
        solve_pair(ObjectiveMode::max_min_rate, nullptr, -1 - boot);
      initialized = true;
    } catch (const AlgorithmError& ex) {
      last_error = ex.what();
    }
  }
  if (!initialized)
    throw AlgorithmError("initialization infeasible after bounded retries (" +
                         last_error + ")");

  double z_prev = -std::numeric_limits<double>::infinity();
  ExtractedState best;
  double best_true = -std::numeric_limits<double>::infinity();
  int iters_done = 0;

  for (int t = 1; t <= opts.max_iters; ++t) {
    const auto t_iter = std::chrono::steady_clock::now();
    IterationRecord rec;
    rec.iter = t;

    const double z = solve_pair(opts.mode, &rec, t);

    ExtractedState cand =
        extract_state(cs, lifted, cfg, opts, cb.extract_stream_base + t);
    rec.rank_ratio_w = cand.rank_ratio_w;
    rec.rank_ratio_v = cand.rank_ratio_v;
    rec.rank_ratio_q = cand.rank_ratio_q;
    const double cand_true = min_see(cs, cand.state, cfg);
    if (cand_true > best_true) {
      best_true = cand_true;
      best = cand;
    }
    rec.min_see_true = best_true;
    if (cb.annotate) cb.annotate(rec, best.state);
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_iter)
            .count();
    out.trace.rows.push_back(rec);
    iters_done = t;

    if (t >= std::max(2, opts.min_iters) && z - z_prev <= opts.tau) {
      out.converged = true;
      z_prev = z;
      break;
    }
    z_prev = z;
  }

  out.state = best.state;
  out.z_final = z_prev;
  out.iterations = iters_done;
  out.min_see = min_see(cs, out.state, cfg);
  out.sum_see = sum_see(cs, out.state, cfg);
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return out;
}

ExtractedState extract_state(const ChannelSet& cs, const LiftedState& st,
                             const ScenarioConfig& cfg, const AlgOptions& opts,
                             std::uint64_t stream) {
  ExtractedState out;
  const int rn = cs.rn();
  Philox rng(cfg.rng_seed,
             stream_id(StreamKind::randomization, stream, opts.extra_stream));

  // Phase first, scored with the lifted beams.
  VectorXcd theta_hat = VectorXcd::Ones(rn + 1);
  if (rn > 0) {
    const auto ext = conic::extract_rank_one(st.q_hat, opts.rank_tol);
    out.rank_ratio_q = ext.rank_ratio;
    if (ext.accepted) {
      theta_hat = conic::project_phases(ext.vector);
    } else {
      auto cand = conic::gaussian_randomize(
          st.q_hat, conic::project_phases,
          [](const VectorXcd&) { return true; },
          [&](const VectorXcd& th) {
            return min_see_lifted(cs, st.w, st.v, th * th.adjoint(), cfg);
          },
          opts.trials, rng);
      theta_hat = cand.value_or(conic::project_phases(
          st.q_hat.col(rn)));  // lifted column fallback
    }
  }

  BeamformingState skeleton;
  skeleton.theta = theta_hat.head(rn);
  skeleton.an.resize(cs.K);
  for (int k = 0; k < cs.K; ++k) skeleton.an[k] = an_streams(st.v[k]);
  skeleton.w.assign(cs.K, VectorXcd::Zero(cs.mb()));

  std::vector<VectorXcd> base_w(cs.K);
  std::vector<bool> needs_random(cs.K, false);
  double worst_ratio = 0.0;
  for (int k = 0; k < cs.K; ++k) {
    const auto ext = conic::extract_rank_one(st.w[k], opts.rank_tol);
    worst_ratio = std::max(worst_ratio, ext.rank_ratio);
    if (ext.accepted) {
      base_w[k] = ext.vector;
    } else {
      base_w[k] = conic::extract_rank_one(st.w[k], 2.0).vector;  // top component
      needs_random[k] = true;
    }
    if (base_w[k].size() == 0) base_w[k] = VectorXcd::Zero(cs.mb());
  }
  out.rank_ratio_w = worst_ratio;
  for (int k = 0; k < cs.K; ++k) {
    const auto ext = conic::extract_rank_one(st.v[k], 2.0);
    out.rank_ratio_v = std::max(out.rank_ratio_v, ext.rank_ratio);
  }

  out.state = repair_beams(cs, cfg, st, base_w, needs_random, skeleton, opts, rng);
  return out;
}

}  // namespace riscf::alg
