#pragma once

// Shared machinery of the two alternating optimizers: the lifted iterate, the
// noise-normalized channel grams, initialization, the fractional-programming
// secrecy block, and rank-one extraction of a reportable state.

#include <functional>
#include <vector>

#include "riscf/alg/options.hpp"
#include "riscf/channel.hpp"
#include "riscf/conic/program.hpp"
#include "riscf/conic/randomization.hpp"
#include "riscf/metrics.hpp"
#include "riscf/scenario.hpp"
#include "riscf/surrogate.hpp"

namespace riscf::alg {

using conic::CensusClass;
using conic::ConicProgram;
using conic::HermVar;
using conic::RealExpr;
using conic::ScalarVar;

// The alternating loops run entirely on lifted matrices; vectors are
// extracted only for reporting and for the final returned state.
struct LiftedState {
  std::vector<MatrixXcd> w;  // K, MB x MB
  std::vector<MatrixXcd> v;  // K, MB x MB
  MatrixXcd q_hat;           // (RN+1) x (RN+1), unit diagonal
};

// Noise-normalized per-user and per-eve channel grams at a fixed phase Gram:
// gram_u[k] = H_k^H Qhat H_k / sigma_k^2 (and analogously for eves), so the
// normalized noise is 1 in every subproblem row.
struct ChannelGrams {
  std::vector<MatrixXcd> user;  // K, MB x MB
  std::vector<MatrixXcd> eve;   // J, MB x MB
};
ChannelGrams channel_grams(const ChannelSet& cs, const MatrixXcd& q_hat,
                           const ScenarioConfig& cfg);

// Current SINR-chain values of a lifted iterate, used as expansion points.
// The robust flag switches the eve chain to the worst-case bookkeeping
// (chi tracks the eve denominator plus noise, varpi the eve numerator).
AuxiliaryState evaluate_auxiliary(const ChannelSet& cs, const LiftedState& st,
                                  const ScenarioConfig& cfg, bool robust);

// Power denominator of user k in Watts.
double power_denominator(const LiftedState& st, const ScenarioConfig& cfg, int k);

// Feasible starting point: matched-filter beams at a random phase draw,
// scaled to 80% of each BS budget split evenly across users; no AN.
LiftedState initial_state(const ChannelSet& cs, const ScenarioConfig& cfg,
                          std::uint64_t phase_stream);

// Handles to the scalar variables every subproblem shares.
struct SubproblemVars {
  std::vector<ScalarVar> alpha, delta, a_rate, recip;  // K each
  std::vector<ScalarVar> beta, varsigma, chi;          // K*J, index k*J+j
  std::vector<ScalarVar> varpi;                        // robust only
  std::vector<ScalarVar> z;                            // 1, or K in sum mode
  RealExpr objective;
};

// Declares the shared scalars, the objective, and the user-sideSINR chain
// pieces that do not depend on which step is being solved.
SubproblemVars declare_common_vars(ConicProgram& prog, int num_users, int num_eves,
                                   ObjectiveMode mode, bool robust);

// Emits, for user k: the rate minorant a_k <= log2(1+alpha_k) linearized
// through 1/alpha (auxiliary epigraph cones).
void emit_rate_minorant(ConicProgram& prog, const SubproblemVars& vars, int k,
                        double alpha_hat);

// Emits the fractional-programming secrecy constraint for pair (k,j):
//   2 rho t - rho^2 * denom >= z   (denom in Watts)
// with the auxiliary cone t^2 <= f(a_k, beta_kj; beta_hat). In rate mode the
// constraint is f >= z directly.
void emit_fp_secrecy(ConicProgram& prog, const SubproblemVars& vars, int k, int j,
                     int num_eves, double rho, double beta_hat,
                     const RealExpr& denom_watts, ObjectiveMode mode);

// Reads the shared scalars back into an expansion-point state (clamped to
// keep the next iteration's surrogates well defined).
void refresh_expansion(const conic::ConicSolution& sol, const SubproblemVars& vars,
                       AuxiliaryState& aux, bool robust);

// PSD-projects a solved Hermitian matrix (clips tiny negative eigenvalues).
MatrixXcd psd_clip(const MatrixXcd& h);

// Unit-diagonal renormalization of a solved phase Gram.
MatrixXcd normalize_unit_diag(const MatrixXcd& q_hat);

struct ExtractedState {
  BeamformingState state;
  double rank_ratio_w = 0.0;
  double rank_ratio_v = 0.0;
  double rank_ratio_q = 0.0;
};

// Rank-one extraction with Gaussian-randomization repair; candidates are
// scored by the true minimum SEE.
ExtractedState extract_state(const ChannelSet& cs, const LiftedState& st,
                             const ScenarioConfig& cfg, const AlgOptions& opts,
                             std::uint64_t stream);

// AN streams of a covariance: scaled eigenvectors above a relative floor.
std::vector<VectorXcd> an_streams(const MatrixXcd& v_cov);

// Step containers shared by the perfect and robust builders.
struct BeamStep {
  conic::ConicProgram prog;
  std::vector<HermVar> w;
  std::vector<HermVar> v;
  SubproblemVars vars;
};

struct PhaseStep {
  conic::ConicProgram prog;
  HermVar q_hat;
  SubproblemVars vars;
};

// Shared alternating driver. Builders are invoked with the current lifted
// iterate, expansion state and objective mode; `annotate` fills any extra
// per-iteration trace fields from the incumbent extracted state. A short
// bootstrap in rate mode runs first whenever the secrecy surrogate starts
// nonpositive, supplying the positive-secrecy feasible point the fractional
// transform needs.
struct AlternatingCallbacks {
  std::function<BeamStep(const LiftedState&, const AuxiliaryState&, ObjectiveMode)>
      build_beam;
  std::function<PhaseStep(const LiftedState&, const AuxiliaryState&, ObjectiveMode)>
      build_phase;
  std::function<AuxiliaryState(const LiftedState&)> eval_aux;
  std::function<void(IterationRecord&, const BeamformingState&)> annotate;
  bool robust_trace = false;
  std::uint64_t extract_stream_base = 1000;
};

RunResult run_alternating(const ChannelSet& cs, const ScenarioConfig& cfg,
                          const AlgOptions& opts, const AlternatingCallbacks& cb);

}  // namespace riscf::alg
