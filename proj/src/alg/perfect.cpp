#include "riscf/alg/perfect.hpp"

#include <chrono>
#include <cmath>

namespace riscf::alg {

namespace {

using conic::trace_form;

MatrixXcd bs_mask(int b, int antennas, int num_bs) {
  MatrixXcd m = MatrixXcd::Zero(antennas * num_bs, antennas * num_bs);
  m.block(b * antennas, b * antennas, antennas, antennas) =
      MatrixXcd::Identity(antennas, antennas);
  return m;
}

// (alpha_hat/2 delta_hat) delta^2 + (delta_hat/2 alpha_hat) alpha^2 <= rhs
void emit_sinr_quad(ConicProgram& prog, const SubproblemVars& vars, int k,
                    const AuxiliaryState& aux, const RealExpr& rhs) {
  const double d1 = aux.alpha[k] / (2.0 * aux.delta[k]);
  const double d2 = aux.delta[k] / (2.0 * aux.alpha[k]);
  prog.add_soc(RealExpr(1.0) + rhs,
               {2.0 * std::sqrt(d1) * RealExpr::var(vars.delta[k]),
                2.0 * std::sqrt(d2) * RealExpr::var(vars.alpha[k]),
                RealExpr(1.0) - rhs},
               "sinr_quad", CensusClass::soc);
}

}  // namespace

BeamStep build_beamforming_subproblem(const ChannelSet& cs, const MatrixXcd& q_hat,
                                      const AuxiliaryState& aux,
                                      const ScenarioConfig& cfg, ObjectiveMode mode,
                                      bool hard_eve_rate_cap) {
  if (q_hat.rows() != cs.rn() + 1)
    throw std::invalid_argument("build_beamforming_subproblem: phase Gram dimension");
  for (int k = 0; k < cs.K; ++k)
    if (!(aux.alpha[k] > 0) || !(aux.delta[k] > 0))
      throw std::invalid_argument(
          "build_beamforming_subproblem: expansion points must be positive");

  const int mb = cs.mb();
  const ChannelGrams grams = channel_grams(cs, q_hat, cfg);
  const double pc = circuit_power(cfg);

  BeamStep step;
  ConicProgram& prog = step.prog;
  for (int k = 0; k < cs.K; ++k)
    step.w.push_back(prog.add_hermitian("W" + std::to_string(k), mb));
  for (int k = 0; k < cs.K; ++k)
    step.v.push_back(prog.add_hermitian("V" + std::to_string(k), mb));
  step.vars = declare_common_vars(prog, cs.K, cs.J, mode, false);
  const SubproblemVars& vars = step.vars;
  prog.maximize(vars.objective);

  for (int k = 0; k < cs.K; ++k) {
    prog.add_psd(step.w[k], "psd_beam", CensusClass::lmi);
    prog.add_psd(step.v[k], "psd_an", CensusClass::lmi);
  }

  // per-BS power budgets
  for (int b = 0; b < cs.B; ++b) {
    const MatrixXcd mask = bs_mask(b, cs.M, cs.B);
    RealExpr used;
    for (int k = 0; k < cs.K; ++k) {
      used += trace_form(mask, step.w[k]);
      used += trace_form(mask, step.v[k]);
    }
    prog.add_ineq(RealExpr(cfg.pb_mw) - used, "per_bs_power", CensusClass::lmi);
  }

  auto interference = [&](const MatrixXcd& gram, int k) {
    RealExpr e;
    for (int i = 0; i < cs.K; ++i) {
      if (i != k) e += trace_form(gram, step.w[i]);
      e += trace_form(gram, step.v[i]);
    }
    return e;
  };

  for (int k = 0; k < cs.K; ++k) {
    emit_sinr_quad(prog, vars, k, aux, trace_form(grams.user[k], step.w[k]));
    prog.add_ineq(RealExpr::var(vars.delta[k]) - interference(grams.user[k], k) -
                      RealExpr(1.0),
                  "sinr_denominator", CensusClass::lmi);
    emit_rate_minorant(prog, vars, k, aux.alpha[k]);

    RealExpr denom_watts =
        (1.0 / (1000.0 * cfg.pa_efficiency)) *
        (trace_form(MatrixXcd::Identity(mb, mb), step.w[k]) +
         trace_form(MatrixXcd::Identity(mb, mb), step.v[k]));
    denom_watts += RealExpr(pc / 1000.0);

    for (int j = 0; j < cs.J; ++j) {
      const int kj = k * cs.J + j;
      const RealExpr den_e = interference(grams.eve[j], k);
      prog.add_lmi(conic::schur2(RealExpr::var(vars.beta[kj]),
                                 RealExpr::var(vars.varsigma[kj]), den_e),
                   "eve_denominator_schur", CensusClass::lmi);
      prog.add_ineq(2.0 * aux.varsigma(k, j) * RealExpr::var(vars.varsigma[kj]) -
                        RealExpr(aux.varsigma(k, j) * aux.varsigma(k, j)) -
                        RealExpr::var(vars.chi[kj]),
                    "eve_square_cut", CensusClass::lmi);
      prog.add_ineq(RealExpr::var(vars.chi[kj]) -
                        trace_form(grams.eve[j], step.w[k]) +
                        RealExpr::var(vars.beta[kj]),
                    "eve_numerator", CensusClass::lmi);
      emit_fp_secrecy(prog, vars, k, j, cs.J, aux.rho(k, j), aux.beta(k, j),
                      denom_watts, mode);
      if (hard_eve_rate_cap) {
        // deterministic ceiling: tr(D_k gram_e) + (2^R - 1) >= 0
        const double gain = std::pow(2.0, cfg.redundancy_rate) - 1.0;
        RealExpr cap;
        for (int i = 0; i < cs.K; ++i) {
          if (i != k) cap += gain * trace_form(grams.eve[j], step.w[i]);
          cap += gain * trace_form(grams.eve[j], step.v[i]);
        }
        cap -= trace_form(grams.eve[j], step.w[k]);
        cap += RealExpr(gain);
        prog.add_ineq(cap, "eve_rate_cap");
      }
    }
  }
  return step;
}

BeamStep build_beamforming_subproblem(const ChannelSet& cs, const VectorXcd& theta_hat,
                                      const AuxiliaryState& aux,
                                      const ScenarioConfig& cfg, ObjectiveMode mode) {
  const int rn = cs.rn();
  if (theta_hat.size() != rn + 1 ||
      std::abs(theta_hat[rn] - Complex(1.0, 0.0)) > 1e-9)
    throw std::invalid_argument("theta_hat must have a trailing one");
  for (int n = 0; n < rn; ++n)
    if (std::abs(std::abs(theta_hat[n]) - 1.0) > 1e-9)
      throw std::invalid_argument("theta_hat entries must be unit modulus");
  return build_beamforming_subproblem(cs, MatrixXcd(theta_hat * theta_hat.adjoint()),
                                      aux, cfg, mode, false);
}

PhaseStep build_phase_subproblem(const ChannelSet& cs, const std::vector<MatrixXcd>& w,
                                 const std::vector<MatrixXcd>& v,
                                 const AuxiliaryState& aux, const ScenarioConfig& cfg,
                                 ObjectiveMode mode) {
  const int rn = cs.rn();
  const int dim = rn + 1;
  if (static_cast<int>(w.size()) != cs.K || static_cast<int>(v.size()) != cs.K)
    throw std::invalid_argument("build_phase_subproblem: need K beam and AN matrices");

  // Lifted channel quadratics: hbar = H X H^H scaled by the receiver noise.
  std::vector<MatrixXcd> l(cs.K);
  for (int k = 0; k < cs.K; ++k) {
    l[k] = MatrixXcd::Zero(cs.mb(), cs.mb());
    for (int i = 0; i < cs.K; ++i) {
      if (i != k) l[k] += w[i];
      l[k] += v[i];
    }
  }
  const double pc = circuit_power(cfg);

  PhaseStep step;
  ConicProgram& prog = step.prog;
  step.q_hat = prog.add_hermitian("Qhat", dim);
  step.vars = declare_common_vars(prog, cs.K, cs.J, mode, false);
  const SubproblemVars& vars = step.vars;
  prog.maximize(vars.objective);

  prog.add_psd(step.q_hat, "psd_phase", CensusClass::lmi);
  for (int m = 0; m < dim; ++m) {
    MatrixXcd em = MatrixXcd::Zero(dim, dim);
    em(m, m) = 1.0;
    prog.add_eq(trace_form(em, step.q_hat) - RealExpr(1.0), "unit_modulus_diag",
                CensusClass::lmi);
  }

  for (int k = 0; k < cs.K; ++k) {
    const MatrixXcd& h = cs.h_eff_user[k];
    const MatrixXcd hbar_w = h * w[k] * h.adjoint() / cfg.noise_user_mw;
    const MatrixXcd hbar_l = h * l[k] * h.adjoint() / cfg.noise_user_mw;
    emit_sinr_quad(prog, vars, k, aux, trace_form(hbar_w, step.q_hat));
    prog.add_ineq(RealExpr::var(vars.delta[k]) - trace_form(hbar_l, step.q_hat) -
                      RealExpr(1.0),
                  "sinr_denominator", CensusClass::lmi);
    emit_rate_minorant(prog, vars, k, aux.alpha[k]);

    const double denom_watts_const =
        ((w[k].trace().real() + v[k].trace().real()) / cfg.pa_efficiency + pc) /
        1000.0;
    for (int j = 0; j < cs.J; ++j) {
      const int kj = k * cs.J + j;
      const MatrixXcd& he = cs.h_eff_eve[j];
      const MatrixXcd hbar_ew = he * w[k] * he.adjoint() / cfg.noise_eve_mw;
      const MatrixXcd hbar_el = he * l[k] * he.adjoint() / cfg.noise_eve_mw;
      prog.add_lmi(conic::schur2(RealExpr::var(vars.beta[kj]),
                                 RealExpr::var(vars.varsigma[kj]),
                                 trace_form(hbar_el, step.q_hat)),
                   "eve_denominator_schur", CensusClass::lmi);
      prog.add_ineq(2.0 * aux.varsigma(k, j) * RealExpr::var(vars.varsigma[kj]) -
                        RealExpr(aux.varsigma(k, j) * aux.varsigma(k, j)) -
                        RealExpr::var(vars.chi[kj]),
                    "eve_square_cut", CensusClass::lmi);
      prog.add_ineq(RealExpr::var(vars.chi[kj]) - trace_form(hbar_ew, step.q_hat) +
                        RealExpr::var(vars.beta[kj]),
                    "eve_numerator", CensusClass::lmi);
      emit_fp_secrecy(prog, vars, k, j, cs.J, aux.rho(k, j), aux.beta(k, j),
                      RealExpr(denom_watts_const), mode);
    }
  }
  return step;
}

RunResult run_algorithm1(const ChannelSet& cs, const ScenarioConfig& cfg,
                         const AlgOptions& opts) {
  AlternatingCallbacks cb;
  cb.build_beam = [&](const LiftedState& st, const AuxiliaryState& aux,
                      ObjectiveMode mode) {
    return build_beamforming_subproblem(cs, st.q_hat, aux, cfg, mode, false);
  };
  cb.build_phase = [&](const LiftedState& st, const AuxiliaryState& aux,
                       ObjectiveMode mode) {
    return build_phase_subproblem(cs, st.w, st.v, aux, cfg, mode);
  };
  cb.eval_aux = [&](const LiftedState& st) {
    return evaluate_auxiliary(cs, st, cfg, false);
  };
  cb.robust_trace = false;
  cb.extract_stream_base = 1000;
  return run_alternating(cs, cfg, opts, cb);
}

}  // namespace riscf::alg
