#include "mcsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mcsim {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Substream::next_u64() {
  counter_ += 0x9E3779B97F4A7C15ULL;
  return mix64(counter_);
}

double Substream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Substream::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  double u2 = next_unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> Substream::next_cgauss(double total_variance) {
  double s = std::sqrt(total_variance / 2.0);
  double re = next_gaussian();
  double im = next_gaussian();
  return {s * re, s * im};
}

std::uint8_t Substream::next_bit() {
  return static_cast<std::uint8_t>(next_u64() >> 63);
}

std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t trial_index,
                                std::uint32_t subsystem_tag) {
  std::uint64_t k = mix64(master_seed + 0x9E3779B97F4A7C15ULL);
  k = mix64(k ^ (trial_index + 0xD1B54A32D192ED03ULL));
  k = mix64(k ^ (static_cast<std::uint64_t>(subsystem_tag) + 0x8CB92BA72F3D8DD7ULL));
  return k;
}

double SnrPoint::noise_variance() const {
  if (is_noiseless()) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);  // Es = 1 by construction
}

void rayleigh_draw_into(Substream& rng, ChannelMatrix& h, unsigned rx_antennas,
                        unsigned tx_antennas) {
  if (rx_antennas == 0 || tx_antennas == 0 || tx_antennas > 2) {
    throw std::invalid_argument("unsupported antenna geometry");
  }
  h.rows.resize(rx_antennas);
  for (unsigned a = 0; a < rx_antennas; ++a) {
    for (unsigned t = 0; t < 2; ++t) {
      h.rows[a][t] = (t < tx_antennas) ? rng.next_cgauss(1.0) : cd(0.0, 0.0);
    }
  }
}

ChannelMatrix rayleigh_draw(Substream& rng, unsigned rx_antennas,
                            unsigned tx_antennas) {
  ChannelMatrix h;
  rayleigh_draw_into(rng, h, rx_antennas, tx_antennas);
  return h;
}

std::vector<cd> awgn_add(const std::vector<cd>& x, const SnrPoint& snr,
                         Substream& rng) {
  if (snr.is_noiseless()) return x;
  double var = snr.noise_variance();
  std::vector<cd> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] + rng.next_cgauss(var);
  }
  return out;
}

}  // namespace mcsim
