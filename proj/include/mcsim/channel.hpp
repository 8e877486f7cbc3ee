#pragma once

#include <limits>
#include <vector>

#include "mcsim/rng.hpp"
#include "mcsim/stbc.hpp"

namespace mcsim {

// Operating point on the Es/N0-per-receive-antenna axis. The constellations and
// the Alamouti power split keep the average received symbol energy on data
// subcarriers at Es = 1, so the total complex noise variance is
// sigma^2 = 10^(-snr_db / 10). snr_db = +infinity is the exact noiseless mode.
struct SnrPoint {
  double snr_db = 0.0;

  static SnrPoint noiseless() {
    return SnrPoint{std::numeric_limits<double>::infinity()};
  }
  bool is_noiseless() const {
    return snr_db == std::numeric_limits<double>::infinity();
  }
  double noise_variance() const;
};

// One flat Rayleigh draw: i.i.d. CN(0,1) entries (real/imag variance 1/2 each),
// rows filled in antenna order, column 0 before column 1.
ChannelMatrix rayleigh_draw(Substream& rng, unsigned rx_antennas = 3,
                            unsigned tx_antennas = 2);
// Same draw order, reusing the caller's storage (hot path of the sweep engine).
void rayleigh_draw_into(Substream& rng, ChannelMatrix& h, unsigned rx_antennas,
                        unsigned tx_antennas);

// Channel state handed to the combiner; noise_var is filled by the link layer from
// the active SnrPoint (rayleigh_draw alone has no noise context).
struct ChannelRealization {
  ChannelMatrix H;
  double noise_var = 0.0;
};

// Adds circularly symmetric white Gaussian noise of total variance
// snr.noise_variance() per sample; the noiseless point returns the input bit-exact
// without consuming any draws.
std::vector<cd> awgn_add(const std::vector<cd>& x, const SnrPoint& snr, Substream& rng);

}  // namespace mcsim
