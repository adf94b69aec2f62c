#pragma once

// Robust counterpart under imperfect eavesdropper CSI: the outage constraint
// is replaced by a deterministic slack triple (Gaussian tail bound), the
// worst-case eavesdropper SINR chain by ball certificates over the error
// sphere, and the phase-side blocks are rewritten linear in the lifted phase
// Gram through an SVD factorization of the reflected-path quadratics.

#include "riscf/alg/common.hpp"
#include "riscf/alg/perfect.hpp"

namespace riscf::alg {

using conic::CMatExpr;
using conic::CVecExpr;
using conic::HermExpr;

// D_k = (2^R - 1)(sum_{i != k} W_i + sum_i V_i) - W_k.
MatrixXcd build_dk(const std::vector<MatrixXcd>& w, const std::vector<MatrixXcd>& v,
                   int k, double redundancy_rate);
HermExpr build_dk_expr(const std::vector<HermVar>& w, const std::vector<HermVar>& v,
                       int k, double redundancy_rate);

// Radius containing a standard complex-normal vector of length `dim` with
// probability 1-phi: sqrt(F^-1_{chi2,2 dim}(1-phi)/2).
double sphere_radius(double phi, int dim);

// Factorized form of Theta^H * middle * Theta as a linear map of the lifted
// phase Gram. `middle` must be Hermitian (it is G D G^H-shaped in use).
struct SvdSandwich {
  Eigen::VectorXd singular;      // x_s
  std::vector<VectorXcd> left;   // o_s
  std::vector<VectorXcd> right;  // v_s
  int rn = 0;

  MatrixXcd middle() const;                       // sum_s x_s o_s v_s^H
  MatrixXcd apply(const MatrixXcd& q_hat) const;  // value route
  HermExpr expr(const HermVar& q_hat) const;      // program route
};
SvdSandwich svd_reformulate(const MatrixXcd& middle);

// Emits the chance-constraint slack triple for
//   Pr{ e^H A e + 2 Re(u^H e) + c >= 0 } >= 1 - phi,  e ~ CN(0, I):
//   tr(A) - sqrt(-2 ln phi) lambda + ln(phi) eps + c >= 0,
//   ||[vech(A); sqrt2 u]|| <= lambda,   eps I + A >= 0,  eps >= 0.
void emit_bti(ConicProgram& prog, const HermExpr& a, const CVecExpr& u,
              const RealExpr& c, double phi, const std::string& tag);

// Certificate that d^H C d + 2 Re(b^H d) + c0 <= 0 for every ||d||^2 <=
// radius_sq (one nonnegative multiplier, one LMI).
void emit_sproc_lmi(ConicProgram& prog, const HermExpr& c, const CVecExpr& b,
                    const RealExpr& c0, double radius_sq, const std::string& family,
                    const std::string& tag);

// Ball certificates over the channel-error ball: numerator side bounds
// x^H C x by varpi, denominator side lower-bounds it by chi - noise.
void emit_ball_cap_num(ConicProgram& prog, const HermExpr& c_w,
                       const VectorXcd& x_tilde, double ball_radius_sq,
                       const RealExpr& varpi, const std::string& tag);
void emit_ball_cap_den(ConicProgram& prog, const HermExpr& c_l,
                       const VectorXcd& x_tilde, double ball_radius_sq,
                       const RealExpr& chi, double noise_norm,
                       const std::string& tag);

// Per-eve constants shared by both robust subproblems (noise-normalized).
struct RobustData {
  double psi = 0.0;
  std::vector<double> sigma_d, sigma_f;        // per eve, normalized
  std::vector<double> ball_radius_sq;          // per eve
  std::vector<VectorXcd> h_d, f;               // normalized estimates
  std::vector<VectorXcd> x_tilde;              // [h_d; f]
};
RobustData make_robust_data(const ChannelSet& estimates, const EveErrorModel& err,
                            const ScenarioConfig& cfg);

// Expansion points that the first robust subproblem can actually satisfy:
// the eve chain is seeded at worst-case levels over the error ball rather
// than at the nominal estimate (which violates the ball certificates).
AuxiliaryState evaluate_auxiliary_robust(const ChannelSet& estimates,
                                         const LiftedState& st,
                                         const ScenarioConfig& cfg,
                                         const RobustData& rd);

BeamStep build_robust_beamforming_subproblem(const ChannelSet& estimates,
                                             const MatrixXcd& q_hat,
                                             const AuxiliaryState& aux,
                                             const RobustData& rd,
                                             const ScenarioConfig& cfg,
                                             const AlgOptions& opts);

PhaseStep build_robust_phase_subproblem(const ChannelSet& estimates,
                                        const std::vector<MatrixXcd>& w,
                                        const std::vector<MatrixXcd>& v,
                                        const AuxiliaryState& aux,
                                        const RobustData& rd,
                                        const ScenarioConfig& cfg,
                                        const AlgOptions& opts);

RunResult run_algorithm2(const ChannelSet& estimates, const EveErrorModel& err,
                         const ScenarioConfig& cfg, const AlgOptions& opts = {});

}  // namespace riscf::alg
