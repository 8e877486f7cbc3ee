#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcsim/bits.hpp"

namespace mcsim {

using cd = std::complex<double>;

enum class Modulation { QPSK, PSK8, QAM8, QAM16, QAM32, QAM64 };
inline constexpr Modulation kAllModulations[] = {
    Modulation::QPSK,  Modulation::PSK8,  Modulation::QAM8,
    Modulation::QAM16, Modulation::QAM32, Modulation::QAM64};

// Constellation table, indexed by label value. All tables are normalised to unit
// average symbol energy. QPSK/16-QAM/64-QAM are square grids with per-axis Gray
// labels (all-zero label on the most positive corner); 8-PSK is Gray around the
// circle at phases k*pi/4; 8-QAM is a 4x2 rectangle; 32-QAM is the 6x6 cross with
// corners removed, labelled along a snake path so neighbours mostly differ in one
// bit (quasi-Gray; no exact Gray labelling exists for the cross).
struct ModScheme {
  Modulation id;
  const char* name;
  unsigned bits_per_symbol;
  std::vector<cd> points;
  double min_distance;
};

const ModScheme& scheme(Modulation m);
const char* modulation_name(Modulation m);
std::optional<Modulation> modulation_from_name(std::string_view name);

// Groups bits most-significant-first into labels. Bit count must be a multiple of
// bits_per_symbol ("bit count not divisible by bits_per_symbol").
std::vector<cd> modulate(const BitStream& bits, Modulation m);

// Minimum-Euclidean-distance decision; exact distance ties resolve to the lowest
// label value.
BitStream demodulate(std::span<const cd> symbols, Modulation m);

}  // namespace mcsim
