#pragma once

// Network configuration: node counts, powers, noise, path-loss and fading
// statistics, and node geometry. Immutable after construction; every other
// module reads its parameters from here.

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace riscf {

using Vec3 = Eigen::Vector3d;

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

class ScenarioError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Node placement rules for the sweep campaigns that move nodes around.
enum class GeometryPreset { standard, eve_sweep, bs_sweep };

struct ScenarioConfig {
  int num_bs = 2;         // B
  int num_ris = 2;        // R (0 disables the reflecting surfaces entirely)
  int num_users = 2;      // K
  int num_eves = 2;       // J
  int num_antennas = 2;   // M per BS
  int num_elements = 4;   // N per RIS

  double pb_mw = dbm_to_mw(15.0);  // per-BS transmit power budget
  double pa_efficiency = 1.0 / 3.0;
  double p_bs_mw = 100.0;
  double p_user_mw = 20.0;
  double p_ris_mw = 1.0;
  double noise_user_mw = dbm_to_mw(-80.0);
  double noise_eve_mw = dbm_to_mw(-80.0);
  double phi_outage = 0.1;
  double redundancy_rate = 0.5;  // bits/s/Hz
  double sigma_bar = 0.01;       // normalized eavesdropper channel error level
  double l0 = db_to_linear(-30.0);

  // Path-loss exponents and Rician factors per link class.
  double pl_exp_bu = 3.6, pl_exp_be = 3.6;
  double pl_exp_ru = 2.2, pl_exp_re = 2.2;
  double pl_exp_br = 2.0;
  double rician_bu = 0.0, rician_be = 0.0;
  double rician_ru = 0.0, rician_re = 0.0;
  double rician_br = std::numeric_limits<double>::infinity();

  double antenna_spacing = 0.5;  // in wavelengths

  // Per-element reflection efficiency is pinned to 1 and not configurable.
  static constexpr double kReflectionEfficiency = 1.0;

  GeometryPreset geometry = GeometryPreset::standard;
  std::vector<Vec3> bs_positions;
  std::vector<Vec3> ris_positions;
  std::vector<Vec3> user_positions;
  std::vector<Vec3> eve_positions;

  std::uint64_t rng_seed = 1;

  std::vector<std::string> warnings;

  int mb() const { return num_antennas * num_bs; }
  int rn() const { return num_elements * num_ris; }
};

// Parses a scenario document (possibly empty) into a validated config.
// Unset fields take their defaults; positions are derived from the geometry
// preset unless given explicitly. Throws ScenarioError naming the offending
// field; suspicious-but-usable geometry only appends to `warnings`.
ScenarioConfig build_scenario(const nlohmann::json& doc);
ScenarioConfig build_scenario();  // all defaults

// Parses "key=value" strings (value is JSON when it parses as such) onto doc.
void apply_override(nlohmann::json& doc, const std::string& key_value);

// Serializes the resolved config back to a document (stable key order).
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

// Total hardware-dissipated circuit power in mW.
double circuit_power(const ScenarioConfig& cfg);

}  // namespace riscf
