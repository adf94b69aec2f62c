#pragma once

// Alternating optimization under perfect CSI: the beamforming/AN step and the
// phase step are convexified with the shared surrogates, solved as SDPs, and
// iterated until the objective value settles.

#include "riscf/alg/common.hpp"

namespace riscf::alg {

// Beamforming/AN subproblem at a fixed phase Gram (theta_hat*theta_hat^H for
// a vector phase). `hard_eve_rate_cap` adds the deterministic eavesdropping
// rate ceiling used when uncertainty degenerates to zero.
BeamStep build_beamforming_subproblem(const ChannelSet& cs, const MatrixXcd& q_hat,
                                      const AuxiliaryState& aux,
                                      const ScenarioConfig& cfg,
                                      ObjectiveMode mode = ObjectiveMode::max_min_see,
                                      bool hard_eve_rate_cap = false);
BeamStep build_beamforming_subproblem(const ChannelSet& cs, const VectorXcd& theta_hat,
                                      const AuxiliaryState& aux,
                                      const ScenarioConfig& cfg,
                                      ObjectiveMode mode = ObjectiveMode::max_min_see);

// Phase subproblem at fixed beam/AN covariances.
PhaseStep build_phase_subproblem(const ChannelSet& cs,
                                 const std::vector<MatrixXcd>& w,
                                 const std::vector<MatrixXcd>& v,
                                 const AuxiliaryState& aux, const ScenarioConfig& cfg,
                                 ObjectiveMode mode = ObjectiveMode::max_min_see);

RunResult run_algorithm1(const ChannelSet& cs, const ScenarioConfig& cfg,
                         const AlgOptions& opts = {});

}  // namespace riscf::alg
