#include "riscf/alg/robust.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>

#include "riscf/stats.hpp"
#include "riscf/validate.hpp"

namespace riscf::alg {

namespace {

using conic::cols_scaled;
using conic::congruence;
using conic::congruence_expr;
using conic::const_times_vec;
using conic::cvec_add;
using conic::cvec_head;
using conic::cvec_rows;
using conic::cvec_scale;
using conic::diag_conj_scaled;
using conic::expr_times_vec;
using conic::hadamard_fixed;
using conic::herm_times_vec;
using conic::herm_to_mat;
using conic::herm_var_expr;
using conic::hermitian_2x2;
using conic::mat_product;
using conic::mat_times_const;
using conic::quad_form;
using conic::scale_entries;
using conic::scaled_identity;
using conic::trace_form;
using conic::trace_of;
using conic::vech_rows;

MatrixXcd bs_mask(int b, int antennas, int num_bs) {
  MatrixXcd m = MatrixXcd::Zero(antennas * num_bs, antennas * num_bs);
  m.block(b * antennas, b * antennas, antennas, antennas) =
      MatrixXcd::Identity(antennas, antennas);
  return m;
}

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

MatrixXcd build_dk(const std::vector<MatrixXcd>& w, const std::vector<MatrixXcd>& v,
                   int k, double redundancy_rate) {
  if (k < 0 || k >= static_cast<int>(w.size()))
    throw std::out_of_range("build_dk: k out of range");
  const double gain = std::pow(2.0, redundancy_rate) - 1.0;
  MatrixXcd d = -w[k];
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (static_cast<int>(i) != k) d += gain * w[i];
    d += gain * v[i];
  }
  return d;
}

HermExpr build_dk_expr(const std::vector<HermVar>& w, const std::vector<HermVar>& v,
                       int k, double redundancy_rate) {
  const double gain = std::pow(2.0, redundancy_rate) - 1.0;
  HermExpr d(w[0].dim);
  d -= herm_var_expr(w[k]);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (static_cast<int>(i) != k) d += gain * herm_var_expr(w[i]);
    d += gain * herm_var_expr(v[i]);
  }
  return d;
}

double sphere_radius(double phi, int dim) {
  if (phi <= 0 || phi >= 1)
    throw std::invalid_argument("sphere_radius: phi must lie in (0,1)");
  if (dim < 1) throw std::invalid_argument("sphere_radius: dim must be >= 1");
  return std::sqrt(0.5 * chi2_inv_even(dim, 1.0 - phi));
}

MatrixXcd SvdSandwich::middle() const {
  MatrixXcd m = MatrixXcd::Zero(rn, rn);
  for (std::size_t s = 0; s < left.size(); ++s)
    m += singular[static_cast<Eigen::Index>(s)] * left[s] * right[s].adjoint();
  return m;
}

MatrixXcd SvdSandwich::apply(const MatrixXcd& q_hat) const {
  const MatrixXcd qt = q_hat.topLeftCorner(rn, rn).transpose();
  MatrixXcd out = MatrixXcd::Zero(rn, rn);
  for (std::size_t s = 0; s < left.size(); ++s)
    out += singular[static_cast<Eigen::Index>(s)] *
           (left[s].asDiagonal() * qt * right[s].conjugate().asDiagonal());
  return out;
}

HermExpr SvdSandwich::expr(const HermVar& q_hat) const {
  HermExpr e(rn);
  e.constant = MatrixXcd::Zero(rn, rn);
  for (int t = 0; t < q_hat.params(); ++t) {
    const MatrixXcd coef = apply(conic::herm_basis(q_hat.dim, t));
    if (coef.cwiseAbs().maxCoeff() > 0.0) e.terms.emplace_back(q_hat.base + t, coef);
  }
  return e;
}

SvdSandwich svd_reformulate(const MatrixXcd& middle) {
  const double scale = std::max(1.0, middle.cwiseAbs().maxCoeff());
  if ((middle - middle.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("svd_reformulate: middle matrix must be Hermitian");
  Eigen::JacobiSVD<MatrixXcd> svd(middle, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdSandwich s;
  s.rn = static_cast<int>(middle.rows());
  s.singular = svd.singularValues();
  for (int i = 0; i < s.rn; ++i) {
    s.left.push_back(svd.matrixU().col(i));
    s.right.push_back(svd.matrixV().col(i));
  }
  return s;
}

void emit_bti(ConicProgram& prog, const HermExpr& a, const CVecExpr& u,
              const RealExpr& c, double phi, const std::string& tag) {
  if (phi <= 0 || phi > 1) throw std::invalid_argument("emit_bti: phi out of range");
  const ScalarVar lambda = prog.add_scalar("bti_lambda_" + tag, true);
  const ScalarVar eps = prog.add_scalar("bti_eps_" + tag, true);

  prog.add_ineq(trace_of(a) - std::sqrt(-2.0 * std::log(phi)) * RealExpr::var(lambda) +
                    std::log(phi) * RealExpr::var(eps) + c,
                "bti_margin", CensusClass::lmi);

  std::vector<RealExpr> rows = vech_rows(a);
  for (auto& r : cvec_rows(cvec_scale(u, std::sqrt(2.0)))) rows.push_back(std::move(r));
  prog.add_soc(RealExpr::var(lambda), std::move(rows), "bti_norm", CensusClass::soc);

  prog.add_lmi(scaled_identity(RealExpr::var(eps), static_cast<int>(a.dim())) + a,
               "bti_shift", CensusClass::lmi);
  prog.add_ineq(RealExpr::var(eps), "bti_eps", CensusClass::lmi);
}

void emit_sproc_lmi(ConicProgram& prog, const HermExpr& c, const CVecExpr& b,
                    const RealExpr& c0, double radius_sq, const std::string& family,
                    const std::string& tag) {
  if (radius_sq < 0) throw std::invalid_argument("emit_sproc_lmi: negative radius");
  const int dim = static_cast<int>(c.dim());
  const ScalarVar mult = prog.add_scalar("sproc_" + family + "_" + tag, true);
  RealExpr corner;
  corner -= radius_sq * RealExpr::var(mult);
  corner -= c0;
  HermExpr top = scaled_identity(RealExpr::var(mult), dim);
  top -= c;
  prog.add_lmi(conic::bordered(top, cvec_scale(b, -1.0), corner), family,
               CensusClass::lmi);
}

void emit_ball_cap_num(ConicProgram& prog, const HermExpr& c_w,
                       const VectorXcd& x_tilde, double ball_radius_sq,
                       const RealExpr& varpi, const std::string& tag) {
  RealExpr c0 = quad_form(c_w, x_tilde);
  c0 -= varpi;
  emit_sproc_lmi(prog, c_w, expr_times_vec(c_w, x_tilde), c0, ball_radius_sq,
                 "ball_cap_num", tag);
}

void emit_ball_cap_den(ConicProgram& prog, const HermExpr& c_l,
                       const VectorXcd& x_tilde, double ball_radius_sq,
                       const RealExpr& chi, double noise_norm,
                       const std::string& tag) {
  HermExpr neg = c_l;
  neg *= -1.0;
  RealExpr c0 = chi;
  c0 -= quad_form(c_l, x_tilde);
  c0 -= RealExpr(noise_norm);
  emit_sproc_lmi(prog, neg, cvec_scale(expr_times_vec(c_l, x_tilde), -1.0), c0,
                 ball_radius_sq, "ball_cap_den", tag);
}

AuxiliaryState evaluate_auxiliary_robust(const ChannelSet& estimates,
                                         const LiftedState& st,
                                         const ScenarioConfig& cfg,
                                         const RobustData& rd) {
  AuxiliaryState aux = evaluate_auxiliary(estimates, st, cfg, true);
  const int mb = estimates.mb(), rn = estimates.rn();
  const VectorXcd q = rn > 0 ? VectorXcd(st.q_hat.col(rn).head(rn)) : VectorXcd(0);
  MatrixXcd t_map(mb, mb + rn);  // error space -> eve channel space
  t_map.leftCols(mb) = MatrixXcd::Identity(mb, mb);
  if (rn > 0) t_map.rightCols(rn) = estimates.g.adjoint() * q.asDiagonal();

  for (int j = 0; j < estimates.J; ++j) {
    Eigen::VectorXd s_diag(mb + rn);
    s_diag.head(mb).setConstant(rd.sigma_d[j]);
    if (rn > 0) s_diag.tail(rn).setConstant(rd.sigma_f[j]);
    for (int k = 0; k < estimates.K; ++k) {
      const MatrixXcd c_w = t_map.adjoint() * st.w[k] * t_map;
      const double nominal =
          std::max(0.0, (rd.x_tilde[j].adjoint() * c_w * rd.x_tilde[j])(0).real());
      const MatrixXcd c_e =
          s_diag.cast<Complex>().asDiagonal() * c_w *
          s_diag.cast<Complex>().asDiagonal();
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(c_e, Eigen::EigenvaluesOnly);
      const double lam = std::max(0.0, es.eigenvalues().maxCoeff());
      const double worst_num =
          std::pow(std::sqrt(nominal) + rd.psi * std::sqrt(lam), 2) + 1e-9;
      aux.varpi(k, j) = worst_num;
      aux.chi(k, j) = 1.0;  // noise floor, always certifiable
      aux.beta(k, j) = worst_num;
      aux.beta_prev(k, j) = worst_num;
      aux.varsigma(k, j) = std::sqrt(worst_num);
    }
  }
  return aux;
}

RobustData make_robust_data(const ChannelSet& estimates, const EveErrorModel& err,
                            const ScenarioConfig& cfg) {
  const int mb = estimates.mb(), rn = estimates.rn();
  RobustData rd;
  rd.psi = sphere_radius(cfg.phi_outage, mb + rn);
  const double s_e = std::sqrt(cfg.noise_eve_mw);
  const double nu = 1.0 / (mb + rn);
  for (int j = 0; j < estimates.J; ++j) {
    rd.sigma_d.push_back(err.sigma_d[j] / s_e);
    rd.sigma_f.push_back(rn > 0 ? err.sigma_f[j] / s_e : 0.0);
    rd.h_d.push_back(estimates.h_d_eve[j] / s_e);
    rd.f.push_back(rn > 0 ? VectorXcd(estimates.f_eve[j] / s_e) : VectorXcd(0));
    VectorXcd x(mb + rn);
    x.head(mb) = rd.h_d.back();
    if (rn > 0) x.tail(rn) = rd.f.back();
    rd.x_tilde.push_back(x);
    const double trace_d = mb * rd.sigma_d[j] * rd.sigma_d[j];
    const double trace_f = rn * rd.sigma_f[j] * rd.sigma_f[j];
    rd.ball_radius_sq.push_back(rd.psi * rd.psi * nu * (trace_d + trace_f));
  }
  return rd;
}

namespace {

// The error statistics are anisotropic across the direct and reflected
// blocks, so the ball certificates are written in the normalized error
// space: x = x_tilde + S d with ||d|| <= psi and S = diag(sigma_d I,
// sigma_f I). This coincides with the averaged-covariance ball whenever
// sigma_d == sigma_f and stays exact otherwise.
void emit_error_space_caps(ConicProgram& prog, const HermExpr& cw_expr,
                           const HermExpr& cl_expr, const RobustData& rd, int j,
                           const RealExpr& varpi, const RealExpr& chi,
                           const std::string& tag) {
  const int mb = static_cast<int>(rd.h_d[j].size());
  const int rn = static_cast<int>(rd.f[j].size());
  Eigen::VectorXd s_diag(mb + rn);
  s_diag.head(mb).setConstant(rd.sigma_d[j]);
  if (rn > 0) s_diag.tail(rn).setConstant(rd.sigma_f[j]);
  const MatrixXcd s_mat = s_diag.cast<Complex>().asDiagonal();
  const double psi_sq = rd.psi * rd.psi;

  RealExpr c0_num = quad_form(cw_expr, rd.x_tilde[j]);
  c0_num -= varpi;
  emit_sproc_lmi(prog, congruence_expr(s_mat, cw_expr),
                 const_times_vec(s_mat, expr_times_vec(cw_expr, rd.x_tilde[j])),
                 c0_num, psi_sq, "ball_cap_num", tag);

  HermExpr neg = congruence_expr(s_mat, cl_expr);
  neg *= -1.0;
  RealExpr c0_den = chi;
  c0_den -= quad_form(cl_expr, rd.x_tilde[j]);
  c0_den -= RealExpr(1.0);
  emit_sproc_lmi(prog, neg,
                 cvec_scale(const_times_vec(s_mat,
                                            expr_times_vec(cl_expr, rd.x_tilde[j])),
                            -1.0),
                 c0_den, psi_sq, "ball_cap_den", tag);
}

}  // namespace

BeamStep build_robust_beamforming_subproblem(const ChannelSet& cs,
                                             const MatrixXcd& q_hat,
                                             const AuxiliaryState& aux,
                                             const RobustData& rd,
                                             const ScenarioConfig& cfg,
                                             const AlgOptions& opts) {
  const int mb = cs.mb(), rn = cs.rn();
  const ChannelGrams grams = channel_grams(cs, q_hat, cfg);
  const double pc = circuit_power(cfg);
  const double gain = std::pow(2.0, cfg.redundancy_rate) - 1.0;

  const VectorXcd q = rn > 0 ? VectorXcd(q_hat.col(rn).head(rn)) : VectorXcd(0);
  const MatrixXcd mask =
      rn > 0 ? MatrixXcd(q_hat.topLeftCorner(rn, rn).transpose()) : MatrixXcd(0, 0);
  const MatrixXcd g_cols_q =
      rn > 0 ? MatrixXcd(cs.g.adjoint() * q.asDiagonal()) : MatrixXcd(mb, 0);

  BeamStep step;
  ConicProgram& prog = step.prog;
  for (int k = 0; k < cs.K; ++k)
    step.w.push_back(prog.add_hermitian("W" + std::to_string(k), mb));
  for (int k = 0; k < cs.K; ++k)
    step.v.push_back(prog.add_hermitian("V" + std::to_string(k), mb));
  step.vars = declare_common_vars(prog, cs.K, cs.J, opts.mode, true);
  const SubproblemVars& vars = step.vars;
  prog.maximize(vars.objective);

  for (int k = 0; k < cs.K; ++k) {
    prog.add_psd(step.w[k], "psd_beam", CensusClass::lmi);
    prog.add_psd(step.v[k], "psd_an", CensusClass::lmi);
  }
  for (int b = 0; b < cs.B; ++b) {
    const MatrixXcd m = bs_mask(b, cs.M, cs.B);
    RealExpr used;
    for (int k = 0; k < cs.K; ++k) {
      used += trace_form(m, step.w[k]);
      used += trace_form(m, step.v[k]);
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
  // effective estimated eve channels at the fixed phase, normalized
  std::vector<VectorXcd> h_tilde;
  for (int j = 0; j < cs.J; ++j) {
    VectorXcd h = rd.h_d[j];
    if (rn > 0) h += g_cols_q * rd.f[j];
    h_tilde.push_back(h);
  }

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

    const HermExpr d_expr = build_dk_expr(step.w, step.v, k, cfg.redundancy_rate);
    const HermExpr gdg_expr =
        rn > 0 ? hadamard_fixed(congruence_expr(cs.g, d_expr), mask) : HermExpr(0);

    // L_k in the error-vector space for the ball certificates
    HermExpr l_expr(mb);
    for (int i = 0; i < cs.K; ++i) {
      if (i != k) l_expr += herm_var_expr(step.w[i]);
      l_expr += herm_var_expr(step.v[i]);
    }

    for (int j = 0; j < cs.J; ++j) {
      const int kj = k * cs.J + j;
      const std::string tag = std::to_string(k) + "_" + std::to_string(j);
      emit_fp_secrecy(prog, vars, k, j, cs.J, aux.rho(k, j), aux.beta(k, j),
                      denom_watts, opts.mode);

      if (opts.use_bti) {
        // quadratic-in-error outage margin, normalized error space
        const double sd = rd.sigma_d[j], sf = rd.sigma_f[j];
        HermExpr a_expr(mb + rn);
        CVecExpr u_expr(mb + rn);
        if (rn > 0) {
          CMatExpr offdiag =
              mat_times_const(herm_to_mat(d_expr), (sd * sf) * g_cols_q);
          a_expr = hermitian_2x2(sd * sd * d_expr, offdiag, sf * sf * gdg_expr);
          CVecExpr top = cvec_scale(expr_times_vec(d_expr, h_tilde[j]), sd);
          CVecExpr bottom = cvec_add(
              scale_entries(const_times_vec(cs.g, expr_times_vec(d_expr, rd.h_d[j])),
                            q.conjugate()),
              expr_times_vec(gdg_expr, rd.f[j]));
          bottom = cvec_scale(bottom, sf);
          u_expr.constant.head(mb) = top.constant;
          u_expr.constant.tail(rn) = bottom.constant;
          for (const auto& [i, t] : top.terms) {
            VectorXcd full = VectorXcd::Zero(mb + rn);
            full.head(mb) = t;
            u_expr.terms.emplace_back(i, full);
          }
          for (const auto& [i, t] : bottom.terms) {
            VectorXcd full = VectorXcd::Zero(mb + rn);
            full.tail(rn) = t;
            u_expr.terms.emplace_back(i, full);
          }
        } else {
          a_expr = sd * sd * d_expr;
          u_expr = cvec_scale(expr_times_vec(d_expr, h_tilde[j]), sd);
        }
        RealExpr c_expr = quad_form(d_expr, rd.h_d[j]);
        if (rn > 0) {
          c_expr += 2.0 * conic::real_dot(rd.f[j],
                                          scale_entries(const_times_vec(
                                                            cs.g, expr_times_vec(
                                                                      d_expr,
                                                                      rd.h_d[j])),
                                                        q.conjugate()));
          c_expr += quad_form(gdg_expr, rd.f[j]);
        }
        c_expr += RealExpr(gain);
        emit_bti(prog, a_expr, u_expr, c_expr, cfg.phi_outage, tag);
      }

      if (opts.use_sproc) {
        // worst-case eve SINR chain over the error ball
        prog.add_ineq(2.0 * aux.varsigma(k, j) * RealExpr::var(vars.varsigma[kj]) -
                          RealExpr(aux.varsigma(k, j) * aux.varsigma(k, j)) -
                          RealExpr::var(vars.varpi[kj]),
                      "eve_square_cut", CensusClass::lmi);
        prog.add_lmi(conic::schur2(RealExpr::var(vars.beta[kj]),
                                   RealExpr::var(vars.varsigma[kj]),
                                   RealExpr::var(vars.chi[kj])),
                     "eve_bilinear_schur", CensusClass::lmi);

        HermExpr cw_expr(mb + rn), cl_expr(mb + rn);
        if (rn > 0) {
          cw_expr = hermitian_2x2(
              herm_var_expr(step.w[k]),
              mat_product(MatrixXcd::Identity(mb, mb), step.w[k], g_cols_q),
              hadamard_fixed(congruence(cs.g, step.w[k]), mask));
          CMatExpr l_off(mb, rn);
          HermExpr l_gg(rn);
          for (int i = 0; i < cs.K; ++i) {
            if (i != k) {
              l_off += mat_product(MatrixXcd::Identity(mb, mb), step.w[i], g_cols_q);
              l_gg += hadamard_fixed(congruence(cs.g, step.w[i]), mask);
            }
            l_off += mat_product(MatrixXcd::Identity(mb, mb), step.v[i], g_cols_q);
            l_gg += hadamard_fixed(congruence(cs.g, step.v[i]), mask);
          }
          cl_expr = hermitian_2x2(l_expr, l_off, l_gg);
        } else {
          cw_expr = herm_var_expr(step.w[k]);
          cl_expr = l_expr;
        }
        emit_error_space_caps(prog, cw_expr, cl_expr, rd, j,
                              RealExpr::var(vars.varpi[kj]),
                              RealExpr::var(vars.chi[kj]), tag);
      }
    }
  }
  return step;
}

PhaseStep build_robust_phase_subproblem(const ChannelSet& cs,
                                        const std::vector<MatrixXcd>& w,
                                        const std::vector<MatrixXcd>& v,
                                        const AuxiliaryState& aux,
                                        const RobustData& rd,
                                        const ScenarioConfig& cfg,
                                        const AlgOptions& opts) {
  const int mb = cs.mb(), rn = cs.rn();
  const int dim = rn + 1;
  const double pc = circuit_power(cfg);
  const double gain = std::pow(2.0, cfg.redundancy_rate) - 1.0;

  std::vector<MatrixXcd> l(cs.K);
  for (int k = 0; k < cs.K; ++k) {
    l[k] = MatrixXcd::Zero(mb, mb);
    for (int i = 0; i < cs.K; ++i) {
      if (i != k) l[k] += w[i];
      l[k] += v[i];
    }
  }

  PhaseStep step;
  ConicProgram& prog = step.prog;
  step.q_hat = prog.add_hermitian("Qhat", dim);
  step.vars = declare_common_vars(prog, cs.K, cs.J, opts.mode, true);
  const SubproblemVars& vars = step.vars;
  prog.maximize(vars.objective);

  prog.add_psd(step.q_hat, "psd_phase", CensusClass::lmi);
  for (int m = 0; m < dim; ++m) {
    MatrixXcd em = MatrixXcd::Zero(dim, dim);
    em(m, m) = 1.0;
    prog.add_eq(trace_form(em, step.q_hat) - RealExpr(1.0), "unit_modulus_diag",
                CensusClass::lmi);
  }

  const CVecExpr q_col = cvec_head(
      herm_times_vec(step.q_hat, VectorXcd::Unit(dim, dim - 1)), rn);

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

    const MatrixXcd d_k = build_dk(w, v, k, cfg.redundancy_rate);
    const SvdSandwich gdg = svd_reformulate(cs.g * d_k * cs.g.adjoint());
    const SvdSandwich gwg = svd_reformulate(cs.g * w[k] * cs.g.adjoint());
    const SvdSandwich glg = svd_reformulate(cs.g * l[k] * cs.g.adjoint());
    const HermExpr gdg_e = gdg.expr(step.q_hat);
    const HermExpr gwg_e = gwg.expr(step.q_hat);
    const HermExpr glg_e = glg.expr(step.q_hat);
    const MatrixXcd dg = d_k * cs.g.adjoint();   // MB x RN
    const MatrixXcd wg = w[k] * cs.g.adjoint();  // MB x RN
    const MatrixXcd lg = l[k] * cs.g.adjoint();

    for (int j = 0; j < cs.J; ++j) {
      const int kj = k * cs.J + j;
      const std::string tag = std::to_string(k) + "_" + std::to_string(j);
      emit_fp_secrecy(prog, vars, k, j, cs.J, aux.rho(k, j), aux.beta(k, j),
                      RealExpr(denom_watts_const), opts.mode);

      const double sd = rd.sigma_d[j], sf = rd.sigma_f[j];
      const VectorXcd g_d_hd = cs.g * (d_k * rd.h_d[j]);  // RN

      if (opts.use_bti) {
        HermExpr a_expr = hermitian_2x2(
            HermExpr::of_constant(sd * sd * d_k),
            cols_scaled((sd * sf) * dg, q_col), (sf * sf) * gdg_e);
        CVecExpr u_expr(mb + rn);
        {
          CVecExpr top = cvec_add(CVecExpr::of_constant(sd * (d_k * rd.h_d[j])),
                                  cvec_scale(expr_times_vec(cols_scaled(dg, q_col),
                                                            rd.f[j]),
                                             sd));
          CVecExpr bottom = cvec_add(diag_conj_scaled(q_col, g_d_hd),
                                     expr_times_vec(gdg_e, rd.f[j]));
          bottom = cvec_scale(bottom, sf);
          u_expr.constant.head(mb) = top.constant;
          u_expr.constant.tail(rn) = bottom.constant;
          for (const auto& [i, t] : top.terms) {
            VectorXcd full = VectorXcd::Zero(mb + rn);
            full.head(mb) = t;
            u_expr.terms.emplace_back(i, full);
          }
          for (const auto& [i, t] : bottom.terms) {
            VectorXcd full = VectorXcd::Zero(mb + rn);
            full.tail(rn) = t;
            u_expr.terms.emplace_back(i, full);
          }
        }
        RealExpr c_expr(
            (rd.h_d[j].adjoint() * d_k * rd.h_d[j])(0).real() + gain);
        c_expr += 2.0 * conic::real_dot(rd.f[j], diag_conj_scaled(q_col, g_d_hd));
        c_expr += quad_form(gdg_e, rd.f[j]);
        emit_bti(prog, a_expr, u_expr, c_expr, cfg.phi_outage, tag);
      }

      if (opts.use_sproc) {
        prog.add_ineq(2.0 * aux.varsigma(k, j) * RealExpr::var(vars.varsigma[kj]) -
                          RealExpr(aux.varsigma(k, j) * aux.varsigma(k, j)) -
                          RealExpr::var(vars.varpi[kj]),
                      "eve_square_cut", CensusClass::lmi);
        prog.add_lmi(conic::schur2(RealExpr::var(vars.beta[kj]),
                                   RealExpr::var(vars.varsigma[kj]),
                                   RealExpr::var(vars.chi[kj])),
                     "eve_bilinear_schur", CensusClass::lmi);

        const HermExpr cw_expr = hermitian_2x2(HermExpr::of_constant(w[k]),
                                               cols_scaled(wg, q_col), gwg_e);
        const HermExpr cl_expr = hermitian_2x2(HermExpr::of_constant(l[k]),
                                               cols_scaled(lg, q_col), glg_e);
        emit_error_space_caps(prog, cw_expr, cl_expr, rd, j,
                              RealExpr::var(vars.varpi[kj]),
                              RealExpr::var(vars.chi[kj]), tag);
      }
    }
  }
  return step;
}

RunResult run_algorithm2(const ChannelSet& cs, const EveErrorModel& err,
                         const ScenarioConfig& cfg, const AlgOptions& opts) {
  const RobustData rd = make_robust_data(cs, err, cfg);
  AlternatingCallbacks cb;
  cb.build_beam = [&](const LiftedState& st, const AuxiliaryState& aux,
                      ObjectiveMode mode) {
    AlgOptions o = opts;
    o.mode = mode;
    return build_robust_beamforming_subproblem(cs, st.q_hat, aux, rd, cfg, o);
  };
  cb.build_phase = [&](const LiftedState& st, const AuxiliaryState& aux,
                       ObjectiveMode mode) {
    AlgOptions o = opts;
    o.mode = mode;
    return build_robust_phase_subproblem(cs, st.w, st.v, aux, rd, cfg, o);
  };
  cb.eval_aux = [&](const LiftedState& st) {
    return evaluate_auxiliary_robust(cs, st, cfg, rd);
  };
  cb.annotate = [&](IterationRecord& rec, const BeamformingState& best) {
    rec.psi = rd.psi;
    rec.empirical_outage_max =
        validate::mc_outage(best, cs, err, cfg, cfg.redundancy_rate,
                            opts.outage_samples, 7000 + rec.iter)
            .max_probability();
  };
  cb.robust_trace = true;
  cb.extract_stream_base = 2000;
  return run_alternating(cs, cfg, opts, cb);
}

}  // namespace riscf::alg
