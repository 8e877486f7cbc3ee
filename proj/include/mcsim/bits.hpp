#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mcsim {

using BitStream = std::vector<std::uint8_t>;

// Bipolar convention used throughout: bit 0 -> +1, bit 1 -> -1.
inline double bipolar(std::uint8_t bit) { return bit ? -1.0 : 1.0; }

// Number of positions where the streams differ; both must have the same length.
inline std::size_t hamming_distance(const BitStream& a, const BitStream& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
  return d;
}

}  // namespace mcsim
