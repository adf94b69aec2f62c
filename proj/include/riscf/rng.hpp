#pragma once

// Counter-based random number generation (Philox4x32-10). Every consumer owns
// an independent substream keyed by (seed, stream id), so sampling order in
// one part of the program never shifts the draws seen by another.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace riscf {

class Philox {
public:
  Philox(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0u, 0u, static_cast<std::uint32_t>(stream),
             static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly-symmetric complex normal, unit variance (E|z|^2 = 1).
  std::complex<double> cgaussian() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    const double a = 2.0 * kPi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

private:
  static constexpr double kPi = 3.14159265358979323846;

  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  void refill() {
    std::array<std::uint32_t, 4> c = ctr_;
    std::array<std::uint32_t, 2> k = key_;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2511F53u, c[0], hi0, lo0);
      mulhilo(0xCD9E8D57u, c[2], hi1, lo1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    buf_ = c;
    pos_ = 0;
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream identifiers. Kind in the top byte, two node indices below it.
enum class StreamKind : std::uint64_t {
  bs_user = 1,
  bs_eve = 2,
  ris_user = 3,
  ris_eve = 4,
  bs_ris = 5,
  eve_err_direct = 6,
  eve_err_reflect = 7,
  phase_init = 8,
  randomization = 9,
  outage_mc = 10,
};

inline std::uint64_t stream_id(StreamKind kind, std::uint64_t a = 0,
                               std::uint64_t b = 0) {
  return (static_cast<std::uint64_t>(kind) << 56) | ((a & 0xFFFFFFu) << 28) |
         (b & 0xFFFFFFFu);
}

}  // namespace riscf
