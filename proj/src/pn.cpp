#include "mcsim/pn.hpp"

#include <bit>
#include <stdexcept>

namespace mcsim {

PnCode::PnCode(unsigned taps, std::uint32_t seed, unsigned chips_per_bit,
               unsigned user_index)
    : chips_per_bit_(chips_per_bit) {
  if (chips_per_bit_ == 0) {
    throw std::invalid_argument("chips_per_bit must be positive");
  }
  unsigned width = std::bit_width(taps);
  if (width < 3) {
    throw std::invalid_argument("pn_taps must include an x^m term with m >= 2");
  }
  degree_ = width - 1;
  if (degree_ > 20) {
    throw std::invalid_argument("LFSR degree above 20 is not supported");
  }
  feedback_mask_ = taps & ((1u << degree_) - 1u);

  std::uint32_t masked_seed = seed & ((1u << degree_) - 1u);
  if (masked_seed == 0) {
    throw std::invalid_argument("degenerate LFSR seed");
  }

  // A maximal polynomial visits every nonzero state exactly once per period;
  // anything shorter would break the balance and correlation contracts.
  period_ = 0;
  std::uint32_t s = masked_seed;
  do {
    s = step_state(s);
    ++period_;
  } while (s != masked_seed && period_ <= (1u << degree_));
  if (period_ != (1u << degree_) - 1u) {
    throw std::invalid_argument("pn_taps is not a maximal-length polynomial");
  }

  initial_state_ = masked_seed;
  for (unsigned i = 0; i < kUserPhaseStride * user_index; ++i) {
    initial_state_ = step_state(initial_state_);
  }
  state_ = initial_state_;
}

std::uint32_t PnCode::step_state(std::uint32_t s) const {
  std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(s & feedback_mask_) & 1);
  return (s >> 1) | (fb << (degree_ - 1));
}

double PnCode::next_chip() {
  std::uint8_t symbol = static_cast<std::uint8_t>(state_ & 1u);
  state_ = step_state(state_);
  return bipolar(symbol);
}

void PnCode::reset() { state_ = initial_state_; }

ChipStream spread(const BitStream& bits, const PnCode& code) {
  PnCode pn = code;
  pn.reset();
  ChipStream chips;
  chips.reserve(bits.size() * pn.chips_per_bit());
  for (std::uint8_t b : bits) {
    double sign = bipolar(b & 1u);
    for (unsigned c = 0; c < pn.chips_per_bit(); ++c) {
      chips.push_back(sign * pn.next_chip());
    }
  }
  return chips;
}

BitStream despread(const ChipStream& chips, const PnCode& code) {
  PnCode pn = code;
  pn.reset();
  unsigned cpb = pn.chips_per_bit();
  if (chips.size() % cpb != 0) {
    throw std::invalid_argument("chip count not divisible by spreading factor");
  }
  BitStream bits;
  bits.reserve(chips.size() / cpb);
  for (std::size_t i = 0; i < chips.size(); i += cpb) {
    double corr = 0.0;
    for (unsigned c = 0; c < cpb; ++c) {
      corr += chips[i + c] * pn.next_chip();
    }
    bits.push_back(corr < 0.0 ? 1 : 0);  // ties resolve to bit 0
  }
  return bits;
}

}  // namespace mcsim
