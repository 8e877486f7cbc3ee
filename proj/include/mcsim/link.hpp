#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcsim/channel.hpp"
#include "mcsim/conv_code.hpp"
#include "mcsim/modem.hpp"
#include "mcsim/ofdm.hpp"
#include "mcsim/pn.hpp"

namespace mcsim {

enum class Profile { Desk, Paper };

struct SnrGrid {
  double start_db = -10.0;
  double stop_db = 20.0;
  double step_db = 1.0;

  void validate() const;  // step > 0, stop >= start
  std::vector<double> points() const;
};

// Full configuration of one simulated link. Defaults are the desk-scale profile:
// 64 subcarriers / CP 12; Profile::Paper scales the transform to 6400 / 1280.
struct LinkConfig {
  Profile profile = Profile::Desk;
  std::vector<Modulation> modulations{Modulation::QPSK,  Modulation::PSK8,
                                      Modulation::QAM8,  Modulation::QAM16,
                                      Modulation::QAM32, Modulation::QAM64};
  unsigned conv_g1 = 015;
  unsigned conv_g2 = 017;
  unsigned pn_taps = 013;  // x^3 + x + 1: separable co-user phases at factor 8
  std::uint32_t pn_seed = 1;
  unsigned spreading_factor = 8;
  unsigned users = 1;
  std::size_t subcarriers = 64;
  std::size_t cp_len = 12;
  unsigned tx_antennas = 2;  // 1 selects the SISO reference chain
  unsigned rx_antennas = 3;
  SnrGrid snr{};
  std::uint64_t seed = 1;
  std::size_t frame_bits = 1024;
  std::uint64_t max_bits = 10'000'000;
  std::uint64_t target_errors = 200;
  bool enable_fec = true;
  bool enable_spreading = true;
  bool enable_channel = true;  // off: unit gain, for loopback calibration

  void validate() const;
  // Information bits per channel symbol, with the exact terminated code rate.
  double info_bits_per_symbol(Modulation m) const;
  double eb_n0_db(Modulation m, double snr_db) const;
};

struct BerRecord {
  Modulation modulation;
  double snr_db;
  double eb_n0_db;
  std::uint64_t bits;
  std::uint64_t errors;
  double ber;
  std::uint64_t trials;
};

struct TrialResult {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
  std::uint64_t resampled_channels = 0;
};

// Simulates one frame of frame_bits information bits for user 0 and counts the
// post-decoder bit errors. Deterministic in (cfg.seed, trial_index): all draws come
// from counter-based substreams keyed by (seed, trial, subsystem).
//
// Transmit path: per-user payload -> convolutional encode -> PN spread; co-user
// chip streams add and the composite is re-binarised by sign (tie -> bit 0); the
// composite bit stream is padded to a whole number of space-time OFDM blocks,
// constellation-mapped, Alamouti-encoded per subcarrier across consecutive OFDM
// symbol pairs, and OFDM-modulated per antenna. The flat Rayleigh channel applies
// one i.i.d. matrix per subcarrier per block (held over the pair) to the
// demodulated waveforms, with AWGN per subcarrier at the given operating point.
// Receive path: per-subcarrier ZF combining, hard demapping, despreading of user
// 0's phase, Viterbi decoding.
TrialResult run_trial(const LinkConfig& cfg, Modulation m, SnrPoint snr,
                      std::uint64_t trial_index);

// Monte-Carlo sweep over cfg.modulations x cfg.snr.points(). Each point
// accumulates whole waves of trials until target_errors errors have been seen or
// max_bits bits are exhausted, whichever comes first; stopping is evaluated only
// on wave boundaries so the executed trial set is independent of thread count.
// Cross-trial tallies are integers, so results are byte-identical for any
// `threads` value.
std::vector<BerRecord> run_sweep(const LinkConfig& cfg, unsigned threads = 1);

// Average BER of coherent binary signalling over `branches` i.i.d. Rayleigh paths
// with mean SNR per branch gamma_c (linear): the classical diversity closed form
//   p = (1 - sqrt(gamma_c / (1 + gamma_c))) / 2,
//   BER = p^L * sum_{k<L} C(L-1+k, k) (1-p)^k.
// With L = 1 this is the flat-fading reference 0.5 * (1 - sqrt(g/(1+g))). Used by
// the calibration suite as the independent oracle for the simulated chains.
double rayleigh_diversity_ber(double gamma_c, unsigned branches);

}  // namespace mcsim
