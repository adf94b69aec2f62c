#include "riscf/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace riscf {
namespace {

constexpr double kPi = 3.14159265358979323846;

// K'-weighted mix of a rank-one LoS response and an i.i.d. NLoS draw.
MatrixXcd rician_sample(double rician, const VectorXcd& a_rx, const VectorXcd& a_tx,
                        Philox& rng) {
  const auto rows = a_rx.size();
  const auto cols = a_tx.size();
  MatrixXcd los = a_rx * a_tx.adjoint();
  if (std::isinf(rician)) return los;

  MatrixXcd nlos(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) nlos(r, c) = rng.cgaussian();
  if (rician == 0.0) return nlos;

  const double w_los = std::sqrt(rician / (rician + 1.0));
  const double w_nlos = std::sqrt(1.0 / (rician + 1.0));
  return w_los * los + w_nlos * nlos;
}

VectorXcd draw_link_vector(const ScenarioConfig& cfg, const Vec3& tx, const Vec3& rx,
                           double upsilon, double rician, int tx_antennas,
                           Philox& rng) {
  const double amp = path_loss_amplitude((rx - tx).norm(), upsilon, cfg.l0);
  // Single-antenna receiver: response collapses to the transmit steering row.
  const VectorXcd a_rx = VectorXcd::Ones(1);
  const VectorXcd a_tx =
      steering_vector(azimuth(tx, rx), tx_antennas, cfg.antenna_spacing);
  // Stored so that the received sample is h^H x: h^H equals the response row.
  MatrixXcd h = rician_sample(rician, a_rx, a_tx, rng);
  return amp * h.row(0).adjoint();
}

}  // namespace

double path_loss_amplitude(double d, double upsilon, double l0) {
  if (d <= 0) throw std::invalid_argument("path_loss_amplitude: distance must be > 0");
  return std::sqrt(l0 * std::pow(d, -upsilon));
}

VectorXcd steering_vector(double angle, int count, double spacing_over_wavelength) {
  if (count < 1) throw std::invalid_argument("steering_vector: count must be >= 1");
  VectorXcd a(count);
  const double phase_step = 2.0 * kPi * spacing_over_wavelength * std::sin(angle);
  for (int p = 0; p < count; ++p)
    a[p] = std::polar(1.0, phase_step * static_cast<double>(p));
  return a;
}

double azimuth(const Vec3& from, const Vec3& to) {
  return std::atan2(to.y() - from.y(), to.x() - from.x());
}

ChannelSet sample_channels(const ScenarioConfig& cfg) {
  ChannelSet cs;
  cs.B = cfg.num_bs;
  cs.R = cfg.num_ris;
  cs.K = cfg.num_users;
  cs.J = cfg.num_eves;
  cs.M = cfg.num_antennas;
  cs.N = cfg.num_elements;

  const auto seed = cfg.rng_seed;

  cs.h_bu.resize(static_cast<std::size_t>(cs.B) * cs.K);
  for (int b = 0; b < cs.B; ++b)
    for (int k = 0; k < cs.K; ++k) {
      Philox rng(seed, stream_id(StreamKind::bs_user, b, k));
      cs.h_bu[b * cs.K + k] =
          draw_link_vector(cfg, cfg.bs_positions[b], cfg.user_positions[k],
                           cfg.pl_exp_bu, cfg.rician_bu, cs.M, rng);
    }

  cs.h_be.resize(static_cast<std::size_t>(cs.B) * cs.J);
  for (int b = 0; b < cs.B; ++b)
    for (int j = 0; j < cs.J; ++j) {
      Philox rng(seed, stream_id(StreamKind::bs_eve, b, j));
      cs.h_be[b * cs.J + j] =
          draw_link_vector(cfg, cfg.bs_positions[b], cfg.eve_positions[j],
                           cfg.pl_exp_be, cfg.rician_be, cs.M, rng);
    }

  cs.f_ru.resize(static_cast<std::size_t>(cs.R) * cs.K);
  cs.f_re.resize(static_cast<std::size_t>(cs.R) * cs.J);
  cs.g_br.resize(static_cast<std::size_t>(cs.B) * cs.R);
  for (int r = 0; r < cs.R; ++r) {
    for (int k = 0; k < cs.K; ++k) {
      Philox rng(seed, stream_id(StreamKind::ris_user, r, k));
      cs.f_ru[r * cs.K + k] =
          draw_link_vector(cfg, cfg.ris_positions[r], cfg.user_positions[k],
                           cfg.pl_exp_ru, cfg.rician_ru, cs.N, rng);
    }
    for (int j = 0; j < cs.J; ++j) {
      Philox rng(seed, stream_id(StreamKind::ris_eve, r, j));
      cs.f_re[r * cs.J + j] =
          draw_link_vector(cfg, cfg.ris_positions[r], cfg.eve_positions[j],
                           cfg.pl_exp_re, cfg.rician_re, cs.N, rng);
    }
  }
  for (int b = 0; b < cs.B; ++b)
    for (int r = 0; r < cs.R; ++r) {
      Philox rng(seed, stream_id(StreamKind::bs_ris, b, r));
      const Vec3& bs = cfg.bs_positions[b];
      const Vec3& ris = cfg.ris_positions[r];
      const double amp =
          path_loss_amplitude((ris - bs).norm(), cfg.pl_exp_br, cfg.l0);
      const VectorXcd a_rx =
          steering_vector(azimuth(ris, bs), cs.N, cfg.antenna_spacing);
      const VectorXcd a_tx =
          steering_vector(azimuth(bs, ris), cs.M, cfg.antenna_spacing);
      cs.g_br[b * cs.R + r] = amp * rician_sample(cfg.rician_br, a_rx, a_tx, rng);
    }

  assemble_effective(cs);
  return cs;
}

void assemble_effective(ChannelSet& cs) {
  const int mb = cs.mb();
  const int rn = cs.rn();

  auto check = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("assemble_effective: ") + what);
  };
  check(static_cast<int>(cs.h_bu.size()) == cs.B * cs.K, "h_bu block count");
  check(static_cast<int>(cs.h_be.size()) == cs.B * cs.J, "h_be block count");
  check(static_cast<int>(cs.f_ru.size()) == cs.R * cs.K, "f_ru block count");
  check(static_cast<int>(cs.f_re.size()) == cs.R * cs.J, "f_re block count");
  check(static_cast<int>(cs.g_br.size()) == cs.B * cs.R, "g_br block count");
  for (const auto& v : cs.h_bu) check(v.size() == cs.M, "h_bu length");
  for (const auto& v : cs.h_be) check(v.size() == cs.M, "h_be length");
  for (const auto& v : cs.f_ru) check(v.size() == cs.N, "f_ru length");
  for (const auto& v : cs.f_re) check(v.size() == cs.N, "f_re length");
  for (const auto& m : cs.g_br)
    check(m.rows() == cs.N && m.cols() == cs.M, "g_br shape");

  cs.h_d_user.assign(cs.K, VectorXcd::Zero(mb));
  for (int k = 0; k < cs.K; ++k)
    for (int b = 0; b < cs.B; ++b)
      cs.h_d_user[k].segment(b * cs.M, cs.M) = cs.h_bu[b * cs.K + k];

  cs.h_d_eve.assign(cs.J, VectorXcd::Zero(mb));
  for (int j = 0; j < cs.J; ++j)
    for (int b = 0; b < cs.B; ++b)
      cs.h_d_eve[j].segment(b * cs.M, cs.M) = cs.h_be[b * cs.J + j];

  cs.f_user.assign(cs.K, VectorXcd::Zero(rn));
  for (int k = 0; k < cs.K; ++k)
    for (int r = 0; r < cs.R; ++r)
      cs.f_user[k].segment(r * cs.N, cs.N) = cs.f_ru[r * cs.K + k];

  cs.f_eve.assign(cs.J, VectorXcd::Zero(rn));
  for (int j = 0; j < cs.J; ++j)
    for (int r = 0; r < cs.R; ++r)
      cs.f_eve[j].segment(r * cs.N, cs.N) = cs.f_re[r * cs.J + j];

  cs.g = MatrixXcd::Zero(rn, mb);
  for (int b = 0; b < cs.B; ++b)
    for (int r = 0; r < cs.R; ++r)
      cs.g.block(r * cs.N, b * cs.M, cs.N, cs.M) = cs.g_br[b * cs.R + r];

  auto effective = [&](const VectorXcd& f, const VectorXcd& h_d) {
    MatrixXcd h(rn + 1, mb);
    for (int n = 0; n < rn; ++n) h.row(n) = std::conj(f[n]) * cs.g.row(n);
    h.row(rn) = h_d.adjoint();
    return h;
  };
  cs.h_eff_user.clear();
  cs.h_eff_eve.clear();
  for (int k = 0; k < cs.K; ++k)
    cs.h_eff_user.push_back(effective(cs.f_user[k], cs.h_d_user[k]));
  for (int j = 0; j < cs.J; ++j)
    cs.h_eff_eve.push_back(effective(cs.f_eve[j], cs.h_d_eve[j]));
}

EveErrorModel EveErrorModel::from_sigma_bar(const ChannelSet& estimates,
                                            double sigma_bar) {
  EveErrorModel m;
  m.sigma_d = VectorXd::Zero(estimates.J);
  m.sigma_f = VectorXd::Zero(estimates.J);
  const double mb = estimates.mb();
  const double rn = estimates.rn();
  for (int j = 0; j < estimates.J; ++j) {
    m.sigma_d[j] = std::sqrt(sigma_bar * estimates.h_d_eve[j].squaredNorm() / mb);
    if (rn > 0)
      m.sigma_f[j] = std::sqrt(sigma_bar * estimates.f_eve[j].squaredNorm() / rn);
  }
  return m;
}

EveErrorModel EveErrorModel::zero(int num_eves) {
  EveErrorModel m;
  m.sigma_d = VectorXd::Zero(num_eves);
  m.sigma_f = VectorXd::Zero(num_eves);
  return m;
}

ChannelSet perturb_eve_channels(const ChannelSet& estimates, const EveErrorModel& err,
                                Philox& rng) {
  ChannelSet cs = estimates;
  for (int j = 0; j < cs.J; ++j) {
    for (int b = 0; b < cs.B; ++b)
      for (int m = 0; m < cs.M; ++m)
        cs.h_be[b * cs.J + j][m] += err.sigma_d[j] * rng.cgaussian();
    for (int r = 0; r < cs.R; ++r)
      for (int n = 0; n < cs.N; ++n)
        cs.f_re[r * cs.J + j][n] += err.sigma_f[j] * rng.cgaussian();
  }
  assemble_effective(cs);
  return cs;
}

namespace {

nlohmann::json vec_to_json(const VectorXcd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back({v[i].real(), v[i].imag()});
  return arr;
}

nlohmann::json mat_to_json(const MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

VectorXcd vec_from_json(const nlohmann::json& arr) {
  VectorXcd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = Complex(arr[i][0].get<double>(),
                                              arr[i][1].get<double>());
  return v;
}

MatrixXcd mat_from_json(const nlohmann::json& rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr ? rows[0].size() : 0;
  MatrixXcd m(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          Complex(rows[r][c][0].get<double>(), rows[r][c][1].get<double>());
  return m;
}

}  // namespace

nlohmann::json channels_to_json(const ChannelSet& cs) {
  nlohmann::json j;
  j["dims"] = {{"B", cs.B}, {"R", cs.R}, {"K", cs.K},
               {"J", cs.J}, {"M", cs.M}, {"N", cs.N}};
  auto dump_vecs = [](const std::vector<VectorXcd>& vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back(vec_to_json(v));
    return arr;
  };
  j["h_bu"] = dump_vecs(cs.h_bu);
  j["h_be"] = dump_vecs(cs.h_be);
  j["f_ru"] = dump_vecs(cs.f_ru);
  j["f_re"] = dump_vecs(cs.f_re);
  nlohmann::json gs = nlohmann::json::array();
  for (const auto& m : cs.g_br) gs.push_back(mat_to_json(m));
  j["g_br"] = gs;
  return j;
}

ChannelSet channels_from_json(const nlohmann::json& doc) {
  ChannelSet cs;
  const auto& d = doc.at("dims");
  cs.B = d.at("B").get<int>();
  cs.R = d.at("R").get<int>();
  cs.K = d.at("K").get<int>();
  cs.J = d.at("J").get<int>();
  cs.M = d.at("M").get<int>();
  cs.N = d.at("N").get<int>();
  auto load_vecs = [](const nlohmann::json& arr) {
    std::vector<VectorXcd> vs;
    for (const auto& v : arr) vs.push_back(vec_from_json(v));
    return vs;
  };
  cs.h_bu = load_vecs(doc.at("h_bu"));
  cs.h_be = load_vecs(doc.at("h_be"));
  cs.f_ru = load_vecs(doc.at("f_ru"));
  cs.f_re = load_vecs(doc.at("f_re"));
  for (const auto& m : doc.at("g_br")) cs.g_br.push_back(mat_from_json(m));
  assemble_effective(cs);
  return cs;
}

}  // namespace riscf
