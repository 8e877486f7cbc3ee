#include "mcsim/modem.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mcsim {

namespace {

unsigned gray(unsigned x) { return x ^ (x >> 1); }

// Per-axis levels listed from most positive to most negative; axis index i gets
// label gray(i), so the all-zero label sits on the most positive corner.
std::vector<cd> square_grid(const std::vector<double>& levels, unsigned axis_bits,
                            double norm) {
  unsigned per_axis = 1u << axis_bits;
  std::vector<cd> pts(per_axis * per_axis);
  for (unsigned ii = 0; ii < per_axis; ++ii) {
    for (unsigned qi = 0; qi < per_axis; ++qi) {
      unsigned label = (gray(ii) << axis_bits) | gray(qi);
      pts[label] = cd(levels[ii] / norm, levels[qi] / norm);
    }
  }
  return pts;
}

std::vector<cd> make_qpsk() { return square_grid({1.0, -1.0}, 1, std::sqrt(2.0)); }

std::vector<cd> make_qam16() {
  return square_grid({3.0, 1.0, -1.0, -3.0}, 2, std::sqrt(10.0));
}

std::vector<cd> make_qam64() {
  return square_grid({7.0, 5.0, 3.0, 1.0, -1.0, -3.0, -5.0, -7.0}, 3, std::sqrt(42.0));
}

std::vector<cd> make_psk8() {
  std::vector<cd> pts(8);
  for (unsigned k = 0; k < 8; ++k) {
    double phase = std::numbers::pi / 4.0 * k;
    pts[gray(k)] = cd(std::cos(phase), std::sin(phase));
  }
  return pts;
}

// 4x2 rectangle: two Gray bits on I, one bit on Q, average energy 6 before
// normalisation.
std::vector<cd> make_qam8() {
  const double ilev[4] = {3.0, 1.0, -1.0, -3.0};
  const double qlev[2] = {1.0, -1.0};
  const double norm = std::sqrt(6.0);
  std::vector<cd> pts(8);
  for (unsigned ii = 0; ii < 4; ++ii) {
    for (unsigned qi = 0; qi < 2; ++qi) {
      unsigned label = (gray(ii) << 1) | qi;
      pts[label] = cd(ilev[ii] / norm, qlev[qi] / norm);
    }
  }
  return pts;
}

// 6x6 grid minus the four corners, average energy 20 before normalisation.
// Reflected-quadrant labeling: bit 4 holds the I sign, bit 3 the Q sign, bits
// 2..0 a Gray embedding of the quadrant's 3x3-minus-corner block, mirrored
// across both axes so every axis-crossing neighbour pair differs only in a
// sign bit. 48 of the 52 nearest-neighbour pairs differ in exactly one bit
// (the quadrant block has a degree-4 vertex, so a full Gray embedding into
// the 3-cube does not exist); among such quasi-Gray labelings this one
// minimises expected decoded bit flips at the low-SNR operating region.
std::vector<cd> make_qam32() {
  const double norm = std::sqrt(20.0);
  auto quad_code = [](int ax, int ay) -> unsigned {
    if (ay == 1) return ax == 1 ? 0u : ax == 3 ? 1u : 3u;
    if (ay == 3) return ax == 1 ? 4u : ax == 3 ? 5u : 7u;
    return ax == 1 ? 6u : 2u;  // ay == 5 row has no ax == 5 point
  };
  std::vector<cd> pts(32);
  for (int x = -5; x <= 5; x += 2) {
    for (int y = -5; y <= 5; y += 2) {
      if (std::abs(x) == 5 && std::abs(y) == 5) continue;  // corners removed
      unsigned label = (unsigned(x < 0) << 4) | (unsigned(y < 0) << 3) |
                       quad_code(std::abs(x), std::abs(y));
      pts[label] = cd(x / norm, y / norm);
    }
  }
  return pts;
}

double min_pair_distance(const std::vector<cd>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      best = std::min(best, std::abs(pts[a] - pts[b]));
    }
  }
  return best;
}

ModScheme make_scheme(Modulation id, const char* name, unsigned bps,
                      std::vector<cd> pts) {
  double dmin = min_pair_distance(pts);
  return ModScheme{id, name, bps, std::move(pts), dmin};
}

const ModScheme& scheme_slot(Modulation m) {
  static const std::array<ModScheme, 6> all = {
      make_scheme(Modulation::QPSK, "QPSK", 2, make_qpsk()),
      make_scheme(Modulation::PSK8, "PSK8", 3, make_psk8()),
      make_scheme(Modulation::QAM8, "QAM8", 3, make_qam8()),
      make_scheme(Modulation::QAM16, "QAM16", 4, make_qam16()),
      make_scheme(Modulation::QAM32, "QAM32", 5, make_qam32()),
      make_scheme(Modulation::QAM64, "QAM64", 6, make_qam64()),
  };
  return all[static_cast<std::size_t>(m)];
}

}  // namespace

const ModScheme& scheme(Modulation m) { return scheme_slot(m); }

const char* modulation_name(Modulation m) { return scheme(m).name; }

std::optional<Modulation> modulation_from_name(std::string_view name) {
  for (Modulation m : kAllModulations) {
    if (name == scheme(m).name) return m;
  }
  return std::nullopt;
}

std::vector<cd> modulate(const BitStream& bits, Modulation m) {
  const ModScheme& s = scheme(m);
  if (bits.size() % s.bits_per_symbol != 0) {
    throw std::invalid_argument("bit count not divisible by bits_per_symbol");
  }
  std::vector<cd> out;
  out.reserve(bits.size() / s.bits_per_symbol);
  for (std::size_t i = 0; i < bits.size(); i += s.bits_per_symbol) {
    unsigned label = 0;
    for (unsigned b = 0; b < s.bits_per_symbol; ++b) {
      label = (label << 1) | (bits[i + b] & 1u);
    }
    out.push_back(s.points[label]);
  }
  return out;
}

BitStream demodulate(std::span<const cd> symbols, Modulation m) {
  const ModScheme& s = scheme(m);
  BitStream out;
  out.reserve(symbols.size() * s.bits_per_symbol);
  for (cd y : symbols) {
    unsigned best_label = 0;
    double best_d = std::numeric_limits<double>::infinity();
    // Scanning labels in ascending order with strict improvement resolves exact
    // distance ties to the lowest label.
    for (unsigned label = 0; label < s.points.size(); ++label) {
      double d = std::norm(y - s.points[label]);
      if (d < best_d) {
        best_d = d;
        best_label = label;
      }
    }
    for (unsigned b = s.bits_per_symbol; b-- > 0;) {
      out.push_back(static_cast<std::uint8_t>((best_label >> b) & 1u));
    }
  }
  return out;
}

}  // namespace mcsim
