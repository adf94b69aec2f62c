#pragma once

// Independent oracles: Monte Carlo outage estimation, the quadratic-form
// identity pair, and interior-point complexity predictions.

#include <Eigen/Dense>
#include <cstdint>

#include "riscf/channel.hpp"
#include "riscf/metrics.hpp"
#include "riscf/scenario.hpp"

namespace riscf::validate {

using Eigen::MatrixXd;

struct OutageEstimate {
  MatrixXd probability;  // K x J fraction of draws whose eavesdropping rate
                         // exceeds the redundancy
  MatrixXd std_error;    // binomial standard error per entry
  int samples = 0;
  double max_probability() const {
    return probability.size() ? probability.maxCoeff() : 0.0;
  }
};

// Evaluates the eavesdropping rate at estimates + fresh error draws.
OutageEstimate mc_outage(const BeamformingState& state, const ChannelSet& estimates,
                         const EveErrorModel& err, const ScenarioConfig& cfg,
                         double redundancy_rate, int samples, std::uint64_t stream);

// Both routes to |theta_hat^H H w|^2: the direct modulus and the trace form.
std::pair<double, double> quadratic_form_oracle(const VectorXcd& theta_hat,
                                                const MatrixXcd& h_eff,
                                                const VectorXcd& w);

enum class Subproblem { beam_perfect, phase_perfect, beam_robust, phase_robust };

struct ComplexityEstimate {
  double barrier_parameter = 0.0;  // Delta
  double iteration_factor = 0.0;   // sqrt(Delta) * ln(1/omega)
  double per_iteration_ops = 0.0;  // n0 n1 + n0^2 n2 + n0^3
  double total_ops = 0.0;
};
ComplexityEstimate complexity_estimate(const ScenarioConfig& cfg, Subproblem which,
                                       double omega = 1e-6);

}  // namespace riscf::validate
