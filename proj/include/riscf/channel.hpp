#pragma once

// Channel synthesis and assembly. Per-link channels follow the distance-based
// large-scale model combined with Rician small-scale fading; the per-user and
// per-eavesdropper blocks are stacked into the effective cascaded matrices
// used by every optimizer and metric.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include <json.hpp>

#include "riscf/rng.hpp"
#include "riscf/scenario.hpp"

namespace riscf {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

struct ChannelSet {
  int B = 0, R = 0, K = 0, J = 0, M = 0, N = 0;

  // Per-link blocks. Index order: h_bu[b*K+k], h_be[b*J+j], f_ru[r*K+k],
  // f_re[r*J+j], g_br[b*R+r].
  std::vector<VectorXcd> h_bu;  // length M
  std::vector<VectorXcd> h_be;  // length M
  std::vector<VectorXcd> f_ru;  // length N
  std::vector<VectorXcd> f_re;  // length N
  std::vector<MatrixXcd> g_br;  // N x M

  // Stacked aggregates.
  std::vector<VectorXcd> h_d_user;  // K vectors, length MB
  std::vector<VectorXcd> h_d_eve;   // J vectors, length MB
  std::vector<VectorXcd> f_user;    // K vectors, length RN
  std::vector<VectorXcd> f_eve;     // J vectors, length RN
  MatrixXcd g;                      // RN x MB

  // Effective cascaded channels, (RN+1) x MB. Rows 0..RN-1 carry
  // diag(f^H) g, the last row carries h_d^H.
  std::vector<MatrixXcd> h_eff_user;  // K
  std::vector<MatrixXcd> h_eff_eve;   // J

  int mb() const { return M * B; }
  int rn() const { return N * R; }
};

// sqrt(L0 * d^-upsilon) with 1 m reference distance. Requires d > 0.
double path_loss_amplitude(double d, double upsilon, double l0);

// Uniform-linear-array response: a[p] = exp(j*2*pi*spacing*p*sin(angle)).
VectorXcd steering_vector(double angle, int count, double spacing_over_wavelength);

// Horizontal-plane azimuth of the direction from -> to.
double azimuth(const Vec3& from, const Vec3& to);

// Draws every link channel for the scenario. Deterministic in cfg.rng_seed;
// each link has its own counter-based stream, so the draw for one link is
// independent of how many other links exist.
ChannelSet sample_channels(const ScenarioConfig& cfg);

// Rebuilds all aggregates and effective matrices from the per-link blocks.
// Throws std::invalid_argument on inconsistent dimensions.
void assemble_effective(ChannelSet& cs);

struct EveErrorModel {
  VectorXd sigma_d;  // per-eve direct-link error std, length J
  VectorXd sigma_f;  // per-eve reflected-link error std, length J

  // Error energy is sigma_bar times the estimated channel energy, spread
  // evenly across dimensions: sigma_d^2 = sigma_bar*||h_d||^2/MB and
  // sigma_f^2 = sigma_bar*||f||^2/RN.
  static EveErrorModel from_sigma_bar(const ChannelSet& estimates, double sigma_bar);
  static EveErrorModel zero(int num_eves);
};

// True channels = estimates + Gaussian errors with the model's covariances.
// User links are returned untouched.
ChannelSet perturb_eve_channels(const ChannelSet& estimates, const EveErrorModel& err,
                                Philox& rng);

// Textual regression format: JSON arrays of [re, im] pairs.
nlohmann::json channels_to_json(const ChannelSet& cs);
ChannelSet channels_from_json(const nlohmann::json& doc);

}  // namespace riscf
