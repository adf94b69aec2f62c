#include "riscf/scenario.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace riscf {
namespace {

using nlohmann::json;

double get_num(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ScenarioError(std::string(key) + ": expected a number");
  return v.get<double>();
}

int get_count(const json& doc, const char* key, int fallback, int min_allowed) {
  const double raw = get_num(doc, key, fallback);
  if (raw != std::floor(raw))
    throw ScenarioError(std::string(key) + ": expected an integer");
  const int v = static_cast<int>(raw);
  if (v < min_allowed)
    throw ScenarioError(std::string(key) + ": must be >= " + std::to_string(min_allowed));
  return v;
}

double get_rician(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ScenarioError(std::string(key) + ": expected a number or \"inf\"");
  }
  if (!v.is_number()) throw ScenarioError(std::string(key) + ": expected a number or \"inf\"");
  const double x = v.get<double>();
  if (x < 0) throw ScenarioError(std::string(key) + ": must be >= 0");
  return x;
}

std::vector<Vec3> get_positions(const json& doc, const char* key, double default_height) {
  std::vector<Vec3> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ScenarioError(std::string(key) + ": expected an array of [x,y] or [x,y,z]");
  for (const auto& p : arr) {
    if (!p.is_array() || (p.size() != 2 && p.size() != 3))
      throw ScenarioError(std::string(key) + ": each entry must be [x,y] or [x,y,z]");
    Vec3 v(p[0].get<double>(), p[1].get<double>(),
           p.size() == 3 ? p[2].get<double>() : default_height);
    out.push_back(v);
  }
  return out;
}

constexpr double kBsHeight = 12.0;
constexpr double kRisHeight = 8.0;
constexpr double kUserHeight = 1.5;
constexpr double kEveHeight = 1.5;

void fill_positions(ScenarioConfig& cfg) {
  auto resize_or_check = [](std::vector<Vec3>& pos, int n, const char* what) {
    if (!pos.empty() && static_cast<int>(pos.size()) != n) {
      throw ScenarioError(std::string(what) +
                          ": position count does not match the node count");
    }
  };
  resize_or_check(cfg.bs_positions, cfg.num_bs, "bs_positions");
  resize_or_check(cfg.ris_positions, cfg.num_ris, "ris_positions");
  resize_or_check(cfg.user_positions, cfg.num_users, "user_positions");
  resize_or_check(cfg.eve_positions, cfg.num_eves, "eve_positions");

  if (cfg.bs_positions.empty()) {
    for (int b = 0; b < cfg.num_bs; ++b) {
      const double y = cfg.geometry == GeometryPreset::bs_sweep ? 15.0 * b + 20.0
                                                                : 40.0 * b + 30.0;
      cfg.bs_positions.emplace_back(0.0, y, kBsHeight);
    }
  }
  if (cfg.ris_positions.empty()) {
    for (int r = 0; r < cfg.num_ris; ++r)
      cfg.ris_positions.emplace_back(65.0, 40.0 * r + 30.0, kRisHeight);
  }
  if (cfg.user_positions.empty()) {
    for (int k = 0; k < cfg.num_users; ++k) {
      const double y = cfg.geometry == GeometryPreset::eve_sweep ? 8.0 * k + 30.0
                                                                 : 5.0 * k + 30.0;
      cfg.user_positions.emplace_back(60.0, y, kUserHeight);
    }
  }
  if (cfg.eve_positions.empty()) {
    for (int j = 0; j < cfg.num_eves; ++j) {
      const double y = cfg.geometry == GeometryPreset::eve_sweep ? 4.0 * j + 31.0
                                                                 : 5.0 * j + 32.0;
      cfg.eve_positions.emplace_back(55.0, y, kEveHeight);
    }
  }
}

void check_duplicates(ScenarioConfig& cfg) {
  std::vector<Vec3> all;
  for (const auto* group : {&cfg.bs_positions, &cfg.ris_positions,
                            &cfg.user_positions, &cfg.eve_positions})
    all.insert(all.end(), group->begin(), group->end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if ((all[i] - all[j]).norm() < 1e-9) {
        cfg.warnings.push_back("duplicate node positions at (" +
                               std::to_string(all[i].x()) + ", " +
                               std::to_string(all[i].y()) + ")");
        return;
      }
}

}  // namespace

ScenarioConfig build_scenario(const nlohmann::json& doc) {
  if (!doc.is_object() && !doc.is_null())
    throw ScenarioError("scenario document must be a JSON object");

  ScenarioConfig cfg;
  cfg.num_bs = get_count(doc, "num_bs", cfg.num_bs, 1);
  cfg.num_ris = get_count(doc, "num_ris", cfg.num_ris, 0);
  cfg.num_users = get_count(doc, "num_users", cfg.num_users, 1);
  cfg.num_eves = get_count(doc, "num_eves", cfg.num_eves, 1);
  cfg.num_antennas = get_count(doc, "num_antennas", cfg.num_antennas, 1);
  cfg.num_elements = get_count(doc, "num_elements", cfg.num_elements, 1);

  if (doc.contains("pb_dbm")) cfg.pb_mw = dbm_to_mw(get_num(doc, "pb_dbm", 0));
  if (doc.contains("pb_mw")) cfg.pb_mw = get_num(doc, "pb_mw", cfg.pb_mw);
  cfg.pa_efficiency = get_num(doc, "pa_efficiency", cfg.pa_efficiency);
  cfg.p_bs_mw = get_num(doc, "p_bs_mw", cfg.p_bs_mw);
  cfg.p_user_mw = get_num(doc, "p_user_mw", cfg.p_user_mw);
  cfg.p_ris_mw = get_num(doc, "p_ris_mw", cfg.p_ris_mw);
  if (doc.contains("noise_dbm")) {
    cfg.noise_user_mw = cfg.noise_eve_mw = dbm_to_mw(get_num(doc, "noise_dbm", 0));
  }
  if (doc.contains("noise_user_dbm"))
    cfg.noise_user_mw = dbm_to_mw(get_num(doc, "noise_user_dbm", 0));
  if (doc.contains("noise_eve_dbm"))
    cfg.noise_eve_mw = dbm_to_mw(get_num(doc, "noise_eve_dbm", 0));
  cfg.phi_outage = get_num(doc, "phi_outage", cfg.phi_outage);
  cfg.redundancy_rate = get_num(doc, "redundancy_rate", cfg.redundancy_rate);
  cfg.sigma_bar = get_num(doc, "sigma_bar", cfg.sigma_bar);
  if (doc.contains("l0_db")) cfg.l0 = db_to_linear(get_num(doc, "l0_db", 0));

  cfg.pl_exp_bu = get_num(doc, "pl_exp_bu", cfg.pl_exp_bu);
  cfg.pl_exp_be = get_num(doc, "pl_exp_be", cfg.pl_exp_be);
  cfg.pl_exp_ru = get_num(doc, "pl_exp_ru", cfg.pl_exp_ru);
  cfg.pl_exp_re = get_num(doc, "pl_exp_re", cfg.pl_exp_re);
  cfg.pl_exp_br = get_num(doc, "pl_exp_br", cfg.pl_exp_br);
  cfg.rician_bu = get_rician(doc, "rician_bu", cfg.rician_bu);
  cfg.rician_be = get_rician(doc, "rician_be", cfg.rician_be);
  cfg.rician_ru = get_rician(doc, "rician_ru", cfg.rician_ru);
  cfg.rician_re = get_rician(doc, "rician_re", cfg.rician_re);
  cfg.rician_br = get_rician(doc, "rician_br", cfg.rician_br);
  cfg.antenna_spacing = get_num(doc, "antenna_spacing", cfg.antenna_spacing);

  if (doc.contains("rng_seed")) cfg.rng_seed = doc.at("rng_seed").get<std::uint64_t>();

  if (doc.contains("geometry")) {
    const std::string g = doc.at("geometry").get<std::string>();
    if (g == "standard")
      cfg.geometry = GeometryPreset::standard;
    else if (g == "eve_sweep")
      cfg.geometry = GeometryPreset::eve_sweep;
    else if (g == "bs_sweep")
      cfg.geometry = GeometryPreset::bs_sweep;
    else
      throw ScenarioError("geometry: unknown preset \"" + g + "\"");
  }

  cfg.bs_positions = get_positions(doc, "bs_positions", kBsHeight);
  cfg.ris_positions = get_positions(doc, "ris_positions", kRisHeight);
  cfg.user_positions = get_positions(doc, "user_positions", kUserHeight);
  cfg.eve_positions = get_positions(doc, "eve_positions", kEveHeight);

  // Range validation.
  if (cfg.pb_mw <= 0) throw ScenarioError("pb_dbm/pb_mw: power must be > 0");
  if (cfg.pa_efficiency <= 0 || cfg.pa_efficiency > 1)
    throw ScenarioError("pa_efficiency: must lie in (0,1]");
  if (cfg.p_bs_mw <= 0) throw ScenarioError("p_bs_mw: must be > 0");
  if (cfg.p_user_mw <= 0) throw ScenarioError("p_user_mw: must be > 0");
  if (cfg.p_ris_mw < 0) throw ScenarioError("p_ris_mw: must be >= 0");
  if (cfg.noise_user_mw <= 0 || cfg.noise_eve_mw <= 0)
    throw ScenarioError("noise power: must be > 0");
  if (cfg.phi_outage <= 0 || cfg.phi_outage >= 1)
    throw ScenarioError("phi_outage: must lie in (0,1)");
  if (cfg.redundancy_rate < 0) throw ScenarioError("redundancy_rate: must be >= 0");
  if (cfg.sigma_bar < 0) throw ScenarioError("sigma_bar: must be >= 0");
  if (cfg.l0 <= 0) throw ScenarioError("l0_db: reference path loss must be > 0");
  if (cfg.antenna_spacing <= 0) throw ScenarioError("antenna_spacing: must be > 0");

  fill_positions(cfg);
  check_duplicates(cfg);
  return cfg;
}

ScenarioConfig build_scenario() { return build_scenario(nlohmann::json::object()); }

void apply_override(nlohmann::json& doc, const std::string& key_value) {
  const auto eq = key_value.find('=');
  if (eq == std::string::npos)
    throw ScenarioError("override must look like key=value: " + key_value);
  const std::string key = key_value.substr(0, eq);
  const std::string raw = key_value.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // bare string
  doc[key] = value;
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
  nlohmann::json j;
  j["num_bs"] = cfg.num_bs;
  j["num_ris"] = cfg.num_ris;
  j["num_users"] = cfg.num_users;
  j["num_eves"] = cfg.num_eves;
  j["num_antennas"] = cfg.num_antennas;
  j["num_elements"] = cfg.num_elements;
  j["pb_mw"] = cfg.pb_mw;
  j["pa_efficiency"] = cfg.pa_efficiency;
  j["p_bs_mw"] = cfg.p_bs_mw;
  j["p_user_mw"] = cfg.p_user_mw;
  j["p_ris_mw"] = cfg.p_ris_mw;
  j["noise_user_dbm"] = mw_to_dbm(cfg.noise_user_mw);
  j["noise_eve_dbm"] = mw_to_dbm(cfg.noise_eve_mw);
  j["phi_outage"] = cfg.phi_outage;
  j["redundancy_rate"] = cfg.redundancy_rate;
  j["sigma_bar"] = cfg.sigma_bar;
  j["l0_db"] = 10.0 * std::log10(cfg.l0);
  j["pl_exp_bu"] = cfg.pl_exp_bu;
  j["pl_exp_be"] = cfg.pl_exp_be;
  j["pl_exp_ru"] = cfg.pl_exp_ru;
  j["pl_exp_re"] = cfg.pl_exp_re;
  j["pl_exp_br"] = cfg.pl_exp_br;
  j["rician_bu"] = cfg.rician_bu;
  j["rician_be"] = cfg.rician_be;
  j["rician_ru"] = cfg.rician_ru;
  j["rician_re"] = cfg.rician_re;
  j["rician_br"] = std::isinf(cfg.rician_br) ? nlohmann::json("inf")
                                             : nlohmann::json(cfg.rician_br);
  j["antenna_spacing"] = cfg.antenna_spacing;
  j["rng_seed"] = cfg.rng_seed;
  switch (cfg.geometry) {
    case GeometryPreset::standard: j["geometry"] = "standard"; break;
    case GeometryPreset::eve_sweep: j["geometry"] = "eve_sweep"; break;
    case GeometryPreset::bs_sweep: j["geometry"] = "bs_sweep"; break;
  }
  auto dump_positions = [&j](const char* key, const std::vector<Vec3>& pos) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : pos) arr.push_back({p.x(), p.y(), p.z()});
    j[key] = arr;
  };
  dump_positions("bs_positions", cfg.bs_positions);
  dump_positions("ris_positions", cfg.ris_positions);
  dump_positions("user_positions", cfg.user_positions);
  dump_positions("eve_positions", cfg.eve_positions);
  return j;
}

double circuit_power(const ScenarioConfig& cfg) {
  return cfg.num_bs * cfg.p_bs_mw + cfg.p_user_mw +
         cfg.num_ris * cfg.num_elements * cfg.p_ris_mw;
}

}  // namespace riscf
