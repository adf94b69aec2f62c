#include "riscf/experiments.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "riscf/alg/perfect.hpp"
#include "riscf/alg/robust.hpp"
#include "riscf/validate.hpp"

namespace riscf::experiments {

namespace fs = std::filesystem;
using nlohmann::json;

std::string tool_version() { return "riscf 1.0.0"; }

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::perfect: return "perfect";
    case Scheme::imperfect: return "imperfect";
    case Scheme::perfect_no_ris: return "perfect_no_ris";
    case Scheme::imperfect_no_ris: return "imperfect_no_ris";
    case Scheme::sseem: return "sseem";
    case Scheme::maxmin_sse: return "maxmin_sse";
    case Scheme::imperfect_no_outage: return "imperfect_no_outage";
  }
  return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
  for (Scheme s : {Scheme::perfect, Scheme::imperfect, Scheme::perfect_no_ris,
                   Scheme::imperfect_no_ris, Scheme::sseem, Scheme::maxmin_sse,
                   Scheme::imperfect_no_outage})
    if (scheme_name(s) == name) return s;
  throw std::invalid_argument("unknown scheme: " + name);
}

namespace {

struct SweepSpec {
  std::string key;  // scenario key the sweep writes, empty for single-point
  std::vector<double> values;
  std::vector<Scheme> default_schemes;
  std::string geometry;  // preset override, empty keeps the document's value
};

SweepSpec sweep_for(const std::string& experiment) {
  SweepSpec s;
  if (experiment == "convergence") {
    s.values = {0.0};
    s.default_schemes = {Scheme::perfect, Scheme::imperfect, Scheme::perfect_no_ris,
                         Scheme::imperfect_no_ris};
  } else if (experiment == "power_sweep") {
    s.key = "pb_dbm";
    s.values = {5, 10, 15, 20, 25, 30};
    s.default_schemes = {Scheme::perfect,          Scheme::imperfect,
                         Scheme::perfect_no_ris,   Scheme::imperfect_no_ris,
                         Scheme::sseem,            Scheme::maxmin_sse};
  } else if (experiment == "ris_elements") {
    s.key = "num_elements";
    s.values = {2, 4, 6, 8};
    s.default_schemes = {Scheme::perfect,          Scheme::imperfect,
                         Scheme::perfect_no_ris,   Scheme::imperfect_no_ris,
                         Scheme::sseem,            Scheme::maxmin_sse};
  } else if (experiment == "num_eves") {
    s.key = "num_eves";
    s.values = {1, 2, 3};
    s.default_schemes = {Scheme::perfect, Scheme::imperfect};
    s.geometry = "eve_sweep";
  } else if (experiment == "num_bs") {
    s.key = "num_bs";
    s.values = {1, 2, 3, 4};
    s.default_schemes = {Scheme::perfect, Scheme::imperfect};
    s.geometry = "bs_sweep";
  } else if (experiment == "error_level") {
    s.key = "sigma_bar";
    s.values = {0.0, 0.01, 0.05, 0.1};
    s.default_schemes = {Scheme::perfect, Scheme::imperfect, Scheme::imperfect_no_ris,
                         Scheme::imperfect_no_outage};
  } else if (experiment == "fairness") {
    s.values = {0.0};
    s.default_schemes = {Scheme::perfect, Scheme::imperfect, Scheme::sseem,
                         Scheme::maxmin_sse};
  } else {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  return s;
}

json fairness_overrides(json doc) {
  doc["num_users"] = 3;
  doc["user_positions"] = {{60.0, 70.0}, {60.0, 90.0}, {60.0, 120.0}};
  return doc;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

RowResult run_scheme(Scheme scheme, const json& scenario_doc, std::uint64_t seed,
                     const alg::AlgOptions& base_opts,
                     alg::IterationTrace* trace_out) {
  RowResult row;
  row.scheme = scheme_name(scheme);
  row.seed = seed;

  json doc = scenario_doc;
  doc["rng_seed"] = seed;
  if (scheme == Scheme::perfect_no_ris || scheme == Scheme::imperfect_no_ris)
    doc["num_ris"] = 0;

  alg::AlgOptions opts = base_opts;
  switch (scheme) {
    case Scheme::sseem: opts.mode = alg::ObjectiveMode::sum_see; break;
    case Scheme::maxmin_sse: opts.mode = alg::ObjectiveMode::max_min_rate; break;
    default: opts.mode = alg::ObjectiveMode::max_min_see; break;
  }

  try {
    const ScenarioConfig cfg = build_scenario(doc);
    const ChannelSet cs = sample_channels(cfg);
    alg::RunResult res;
    const bool robust = scheme == Scheme::imperfect || scheme == Scheme::imperfect_no_ris;
    if (robust) {
      const EveErrorModel err = EveErrorModel::from_sigma_bar(cs, cfg.sigma_bar);
      res = alg::run_algorithm2(cs, err, cfg, opts);
      if (!res.trace.rows.empty())
        row.outage_max = res.trace.rows.back().empirical_outage_max;
    } else {
      res = alg::run_algorithm1(cs, cfg, opts);
      if (scheme == Scheme::imperfect_no_outage) {
        const EveErrorModel err = EveErrorModel::from_sigma_bar(cs, cfg.sigma_bar);
        row.outage_max = validate::mc_outage(res.state, cs, err, cfg,
                                             cfg.redundancy_rate,
                                             opts.outage_samples, 99)
                             .max_probability();
      }
    }
    row.min_see = res.min_see;
    row.sum_see = res.sum_see;
    row.iters = res.iterations;
    row.secs = res.seconds;
    row.status = res.converged ? "converged" : "max_iters";
    if (trace_out) *trace_out = res.trace;
  } catch (const std::exception& ex) {
    row.status = std::string("error: ") + ex.what();
  }
  return row;
}

ExperimentResult run_experiment(const ExperimentRequest& req) {
  SweepSpec sweep = sweep_for(req.experiment);
  std::vector<Scheme> schemes =
      req.schemes.empty() ? sweep.default_schemes : req.schemes;

  json base = req.scenario;
  for (const auto& kv : req.overrides) apply_override(base, kv);
  if (!sweep.geometry.empty() && !base.contains("geometry"))
    base["geometry"] = sweep.geometry;
  if (req.experiment == "fairness") base = fairness_overrides(base);
  build_scenario(base);  // validate early; throws on bad input

  alg::AlgOptions alg_opts = req.alg;
  const bool want_traces = req.experiment == "convergence";
  if (want_traces) {
    alg_opts.min_iters = std::max(alg_opts.min_iters, 10);
    alg_opts.max_iters = std::max(alg_opts.max_iters, alg_opts.min_iters);
  }

  struct Task {
    std::size_t index;
    Scheme scheme;
    double sweep_value;
    std::uint64_t seed;
    json doc;
  };
  std::vector<Task> tasks;
  for (double value : sweep.values)
    for (Scheme scheme : schemes)
      for (std::uint64_t seed : req.seeds) {
        json doc = base;
        if (!sweep.key.empty()) doc[sweep.key] = value;
        tasks.push_back({tasks.size(), scheme, value, seed, std::move(doc)});
      }

  ExperimentResult out;
  out.rows.resize(tasks.size());
  std::vector<alg::IterationTrace> traces(want_traces ? tasks.size() : 0);

  const int jobs = req.jobs > 0
                       ? req.jobs
                       : std::max(1u, std::thread::hardware_concurrency());
  std::mutex next_mutex;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t idx;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= tasks.size()) return;
        idx = next++;
      }
      const Task& t = tasks[idx];
      alg::IterationTrace* trace = want_traces ? &traces[idx] : nullptr;
      RowResult row = run_scheme(t.scheme, t.doc, t.seed, alg_opts, trace);
      row.sweep_value = t.sweep_value;
      out.rows[idx] = std::move(row);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  // outputs (single writer, fixed order)
  fs::create_directories(req.out_dir);
  const fs::path csv_path = fs::path(req.out_dir) / "results.csv";
  std::ofstream csv(csv_path);
  csv << "scheme,sweep_value,seed,min_see,sum_see,iters,secs,status,outage_max\n";
  out.all_converged = true;
  for (const auto& r : out.rows) {
    csv << r.scheme << ',' << fmt(r.sweep_value) << ',' << r.seed << ','
        << fmt(r.min_see) << ',' << fmt(r.sum_see) << ',' << r.iters << ','
        << fmt(r.secs) << ',' << r.status << ',' << fmt(r.outage_max) << "\n";
    if (r.status != "converged") out.all_converged = false;
  }
  csv.close();
  out.csv_path = csv_path.string();

  if (want_traces)
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const fs::path p = fs::path(req.out_dir) /
                         ("trace_" + scheme_name(tasks[i].scheme) + "_seed" +
                          std::to_string(tasks[i].seed) + ".csv");
      std::ofstream tf(p);
      tf << traces[i].to_csv();
    }

  json manifest;
  manifest["experiment"] = req.experiment;
  manifest["tool_version"] = tool_version();
  manifest["seeds"] = req.seeds;
  json scheme_names = json::array();
  for (Scheme s : schemes) scheme_names.push_back(scheme_name(s));
  manifest["schemes"] = scheme_names;
  manifest["sweep_key"] = sweep.key;
  manifest["sweep_values"] = sweep.values;
  manifest["config"] = scenario_to_json(build_scenario(base));
  manifest["config_hash"] = fnv1a(manifest["config"].dump());
  const fs::path man_path = fs::path(req.out_dir) / "manifest.json";
  std::ofstream mf(man_path);
  mf << manifest.dump(2) << "\n";
  out.manifest_path = man_path.string();
  return out;
}

bool summarize(const std::string& out_dir) {
  const fs::path csv_path = fs::path(out_dir) / "results.csv";
  std::ifstream in(csv_path);
  if (!in) return false;
  std::string line;
  std::getline(in, line);  // header
  struct Acc {
    double min_see = 0, sum_see = 0;
    int n = 0;
  };
  std::map<std::pair<std::string, double>, Acc> acc;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string scheme, field;
    std::getline(ss, scheme, ',');
    std::getline(ss, field, ',');
    const double sweep_value = std::stod(field);
    std::getline(ss, field, ',');  // seed
    std::getline(ss, field, ',');
    const double min_see = std::stod(field);
    std::getline(ss, field, ',');
    const double sum_see = std::stod(field);
    std::getline(ss, field, ',');  // iters
    std::getline(ss, field, ',');  // secs
    std::getline(ss, field, ',');  // status
    if (field.rfind("error", 0) == 0) continue;
    Acc& a = acc[{scheme, sweep_value}];
    a.min_see += min_see;
    a.sum_see += sum_see;
    a.n += 1;
  }
  std::ofstream outf(fs::path(out_dir) / "summary.csv");
  outf << "scheme,sweep_value,seeds,mean_min_see,mean_sum_see\n";
  for (const auto& [key, a] : acc)
    outf << key.first << ',' << fmt(key.second) << ',' << a.n << ','
         << fmt(a.min_see / a.n) << ',' << fmt(a.sum_see / a.n) << "\n";
  return true;
}

}  // namespace riscf::experiments
