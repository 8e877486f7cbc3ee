#pragma once

#include <array>
#include <complex>
#include <vector>

#include "mcsim/modem.hpp"

namespace mcsim {

// One Alamouti block over two transmit antennas and two symbol slots:
// slot 1 sends (s1, s2), slot 2 sends (-conj(s2), conj(s1)), everything scaled by
// 1/sqrt(2) so the block radiates |s1|^2 + |s2|^2 in total, matching a SISO
// transmitter's energy per two symbols.
struct StbcBlock {
  // slot[t][antenna]
  std::array<std::array<cd, 2>, 2> slot;
};

StbcBlock stbc_encode(cd s1, cd s2);

// Flat channel matrix for one subcarrier, rows = receive antennas, columns = the
// two transmit antennas.
struct ChannelMatrix {
  std::vector<std::array<cd, 2>> rows;
  double frob_sq() const;
  std::size_t rx_antennas() const { return rows.size(); }
};

struct ZfOutput {
  cd s1, s2;
  double gain;  // ||H||_F^2
};

// Zero-forcing combiner for one Alamouti block. Stacking each antenna's two slots
// (second slot conjugated) gives y = (1/sqrt(2)) A s + n with A^H A = ||H||_F^2 I,
// so the pseudo-inverse collapses to matched-filter combining:
//   s_hat = sqrt(2) A^H y / ||H||_F^2.
// y rows are {y_slot1, y_slot2} per receive antenna. Throws "singular channel draw"
// when ||H||_F^2 < 1e-12.
ZfOutput zf_combine(const std::vector<std::array<cd, 2>>& y, const ChannelMatrix& h);

}  // namespace mcsim
