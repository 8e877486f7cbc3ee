#pragma once

#include <complex>
#include <cstdint>

namespace mcsim {

// Counter-based random substream (SplitMix64). The state advances by a fixed odd
// increment and every output is a bijective mix of the counter, so draw i of a
// stream is a pure function of (key, i). Substreams keyed by (master seed, trial,
// subsystem) therefore produce identical sequences regardless of thread count or
// scheduling order, which is what makes parallel sweeps byte-reproducible.
class Substream {
 public:
  explicit Substream(std::uint64_t key) : counter_(key) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1).
  double next_unit();
  // Standard normal via Box-Muller; the paired draw is cached. Hand-rolled rather
  // than std::normal_distribution because the latter's algorithm is
  // implementation-defined and would break cross-platform reproducibility.
  double next_gaussian();
  // Circularly symmetric complex Gaussian with E|z|^2 = total_variance.
  std::complex<double> next_cgauss(double total_variance);
  std::uint8_t next_bit();

 private:
  std::uint64_t counter_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Mixes (master seed, trial index, subsystem tag) into a substream key. Two
// finalizer rounds per word so that neighbouring tuples map to unrelated keys.
std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t trial_index,
                                std::uint32_t subsystem_tag);

// Subsystem tags for the link chain. Per-user payload streams are kTagInfoBits + u.
inline constexpr std::uint32_t kTagInfoBits = 0x100;
inline constexpr std::uint32_t kTagChannel = 0x200;
inline constexpr std::uint32_t kTagNoise = 0x300;

}  // namespace mcsim
