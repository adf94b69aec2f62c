#pragma once

// Experiment runner: sweeps over the campaign presets, runs the comparison
// schemes on shared channel realizations per seed, and writes machine-readable
// CSV series plus a JSON manifest. Averaging across seeds is a separate,
// explicit step.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "riscf/alg/options.hpp"

namespace riscf::experiments {

enum class Scheme {
  perfect,
  imperfect,
  perfect_no_ris,
  imperfect_no_ris,
  sseem,
  maxmin_sse,
  imperfect_no_outage,
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct ExperimentRequest {
  std::string experiment;  // convergence, power_sweep, ris_elements, num_eves,
                           // num_bs, error_level, fairness
  nlohmann::json scenario = nlohmann::json::object();
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds = {1};
  std::vector<Scheme> schemes;  // empty: the experiment's default set
  std::string out_dir = ".";
  alg::AlgOptions alg;
  int jobs = 0;  // 0: hardware concurrency
};

struct RowResult {
  std::string scheme;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  double min_see = 0.0;
  double sum_see = 0.0;
  int iters = 0;
  double secs = 0.0;
  std::string status;  // converged | max_iters | error: ...
  double outage_max = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentResult {
  std::vector<RowResult> rows;
  bool all_converged = false;
  std::string csv_path;
  std::string manifest_path;
};

// Runs one scheme on one scenario/seed; shared by the runner and tests.
RowResult run_scheme(Scheme scheme, const nlohmann::json& scenario_doc,
                     std::uint64_t seed, const alg::AlgOptions& base_opts,
                     alg::IterationTrace* trace_out = nullptr);

ExperimentResult run_experiment(const ExperimentRequest& req);

// Averages results.csv across seeds into summary.csv (per scheme and sweep
// point). Returns false when the input is missing or malformed.
bool summarize(const std::string& out_dir);

std::string tool_version();

}  // namespace riscf::experiments
