#pragma once

#include <cstdint>

#include "mcsim/bits.hpp"

namespace mcsim {

// Real-valued chip sequence. Freshly spread streams hold exact bipolar values
// (+1/-1); despreading also accepts superposed or noisy chips.
using ChipStream = std::vector<double>;

// Maximal-length LFSR chip generator, Fibonacci form.
//
// `taps` is the characteristic polynomial including the x^m term, written in the
// usual octal shorthand: 013 is x^3 + x + 1, 045 is x^5 + x^2 + 1. State bit 0
// holds the oldest symbol and is emitted first; the feedback bit is the XOR of the
// state bits selected by the low m bits of `taps`. Symbols map to chips by the
// bipolar convention (0 -> +1, 1 -> -1).
//
// Co-users of one code family run the same polynomial at staggered phases:
// user u starts kUserPhaseStride * u steps into the sequence. For the default
// x^3 + x + 1 code an 8-chip window spans a full period plus one chip, and at any
// nonzero stride the sign-quantised sum of two users' chips correlates back to
// either user's bit with margin >= 2 at every window alignment (verified
// exhaustively in the tests); longer registers admit no such stride at factor 8.
inline constexpr unsigned kUserPhaseStride = 3;

class PnCode {
 public:
  PnCode(unsigned taps, std::uint32_t seed, unsigned chips_per_bit,
         unsigned user_index = 0);

  double next_chip();
  void reset();  // back to this user's initial phase
  unsigned period() const { return period_; }
  unsigned chips_per_bit() const { return chips_per_bit_; }
  unsigned degree() const { return degree_; }

 private:
  std::uint32_t step_state(std::uint32_t s) const;

  unsigned feedback_mask_;
  unsigned degree_;
  unsigned period_;
  unsigned chips_per_bit_;
  std::uint32_t initial_state_;
  std::uint32_t state_;
};

// One chip run of `chips_per_bit` chips per bit: chip = bipolar(bit) * pn chip.
// The PN phase is taken from the code's initial state; len(out) = len(bits) * cpb.
ChipStream spread(const BitStream& bits, const PnCode& code);

// Per-bit correlation against the same PN phase: sign of sum(chip * pn chip) over
// each window; ties resolve to bit 0. Input length must be a multiple of the
// spreading factor.
BitStream despread(const ChipStream& chips, const PnCode& code);

}  // namespace mcsim
