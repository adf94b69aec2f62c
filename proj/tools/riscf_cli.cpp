// Command-line experiment runner. Reproduces the simulation campaigns as
// static CSV sweeps; plotting is out of scope by design.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "riscf/experiments.hpp"
#include "riscf/scenario.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t a = std::stoull(spec.substr(0, dots));
    const std::uint64_t b = std::stoull(spec.substr(dots + 2));
    for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) seeds.push_back(std::stoull(tok));
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-aided cell-free secrecy-energy-efficiency simulator"};

  std::string experiment, scenario_file, out_dir = "out", seeds_spec = "1";
  std::vector<std::string> sets, scheme_names;
  bool do_summarize = false, print_scenario = false;
  double solver_tol = 1e-7, tau = 1e-3;
  int max_iters = 30, trials = 100, jobs = 0, outage_samples = 10000;

  app.add_option("--experiment", experiment,
                 "convergence | power_sweep | ris_elements | num_eves | num_bs | "
                 "error_level | fairness");
  app.add_option("--scenario", scenario_file, "scenario JSON file");
  app.add_option("--set", sets, "override scenario fields, key=value (repeatable)");
  app.add_option("--seeds", seeds_spec, "seed list: a..b or comma-separated");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--schemes", scheme_names, "subset of schemes to run");
  app.add_option("--solver-tol", solver_tol, "interior-point tolerance");
  app.add_option("--tau", tau, "outer-loop convergence threshold");
  app.add_option("--max-iters", max_iters, "outer-loop iteration cap");
  app.add_option("--trials", trials, "randomization trials");
  app.add_option("--outage-samples", outage_samples, "Monte Carlo outage draws");
  app.add_option("--jobs", jobs, "worker threads (0 = hardware)");
  app.add_flag("--summarize", do_summarize, "average results.csv across seeds");
  app.add_flag("--print-scenario", print_scenario, "dump the resolved scenario");
  app.set_version_flag("--version", riscf::experiments::tool_version());

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json doc = nlohmann::json::object();
    if (!scenario_file.empty()) {
      std::ifstream f(scenario_file);
      if (!f) {
        std::cerr << "cannot open scenario file: " << scenario_file << "\n";
        return 2;
      }
      f >> doc;
    }
    for (const auto& kv : sets) riscf::apply_override(doc, kv);

    if (print_scenario) {
      const auto cfg = riscf::build_scenario(doc);
      std::cout << riscf::scenario_to_json(cfg).dump(2) << "\n";
      for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }
    if (do_summarize) {
      if (!riscf::experiments::summarize(out_dir)) {
        std::cerr << "no results.csv under " << out_dir << "\n";
        return 2;
      }
      std::cout << out_dir << "/summary.csv written\n";
      return 0;
    }
    if (experiment.empty()) {
      std::cerr << "--experiment is required (or --summarize / --print-scenario)\n";
      return 2;
    }

    riscf::experiments::ExperimentRequest req;
    req.experiment = experiment;
    req.scenario = doc;
    req.seeds = parse_seeds(seeds_spec);
    req.out_dir = out_dir;
    req.jobs = jobs;
    req.alg.solver.feas_tol = solver_tol;
    req.alg.solver.gap_abs = solver_tol;
    req.alg.solver.gap_rel = solver_tol;
    req.alg.tau = tau;
    req.alg.max_iters = max_iters;
    req.alg.trials = trials;
    req.alg.outage_samples = outage_samples;
    for (const auto& n : scheme_names)
      req.schemes.push_back(riscf::experiments::scheme_from_name(n));

    const auto result = riscf::experiments::run_experiment(req);
    int bad = 0;
    for (const auto& r : result.rows)
      if (r.status != "converged") {
        ++bad;
        std::cerr << r.scheme << " sweep " << r.sweep_value << " seed " << r.seed
                  << ": " << r.status << "\n";
      }
    std::cout << result.csv_path << " written (" << result.rows.size() << " rows, "
              << bad << " not converged)\n";
    return result.all_converged ? 0 : 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
