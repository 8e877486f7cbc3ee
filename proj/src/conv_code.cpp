#include "mcsim/conv_code.hpp"

#include <bit>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mcsim {

namespace {

inline std::uint8_t parity(unsigned x) {
  return static_cast<std::uint8_t>(std::popcount(x) & 1u);
}

}  // namespace

ConvCode::ConvCode(unsigned g1, unsigned g2) : gen_{g1, g2} {
  if (g1 == 0 || g2 == 0) {
    throw std::invalid_argument("generator polynomial must be nonzero");
  }
  unsigned width = std::bit_width(g1 | g2);
  memory_ = width - 1;
  if (memory_ == 0) {
    throw std::invalid_argument("generator polynomials define no memory");
  }
  if (memory_ > 16) {
    throw std::invalid_argument("generator memory above 16 is not supported");
  }
  states_ = 1u << memory_;
}

BitStream ConvCode::encode(const BitStream& info) const {
  if (info.empty()) {
    throw std::invalid_argument("empty message");
  }
  BitStream out;
  out.reserve(coded_length(info.size()));
  unsigned state = 0;  // last v bits, most recent highest
  auto push = [&](std::uint8_t bit) {
    unsigned window = (static_cast<unsigned>(bit) << memory_) | state;
    out.push_back(parity(window & gen_[0]));
    out.push_back(parity(window & gen_[1]));
    state = window >> 1;
  };
  for (std::uint8_t b : info) push(b & 1u);
  for (unsigned i = 0; i < memory_; ++i) push(0);
  // Termination drives the register back to zero by construction.
  return out;
}

BitStream ConvCode::decode(const BitStream& coded) const {
  if (coded.size() % 2 != 0) {
    throw std::invalid_argument("misaligned codeword");
  }
  const std::size_t steps = coded.size() / 2;
  if (steps < memory_ + 1) {
    throw std::invalid_argument("codeword shorter than one terminated trellis");
  }

  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max() / 2;
  std::vector<std::uint32_t> metric(states_, kInf);
  std::vector<std::uint32_t> next(states_, kInf);
  metric[0] = 0;  // encoder starts in the all-zero state
  std::vector<std::uint8_t> survivor(steps * states_);

  for (std::size_t t = 0; t < steps; ++t) {
    std::fill(next.begin(), next.end(), kInf);
    std::uint8_t r0 = coded[2 * t] & 1u;
    std::uint8_t r1 = coded[2 * t + 1] & 1u;
    // Ascending predecessor order makes strict improvement implement the
    // lower-numbered-predecessor tie rule.
    for (unsigned s = 0; s < states_; ++s) {
      if (metric[s] >= kInf) continue;
      for (unsigned b = 0; b <= 1; ++b) {
        unsigned window = (b << memory_) | s;
        std::uint32_t branch = (parity(window & gen_[0]) != r0) +
                               (parity(window & gen_[1]) != r1);
        unsigned ns = window >> 1;
        std::uint32_t cand = metric[s] + branch;
        if (cand < next[ns]) {
          next[ns] = cand;
          survivor[t * states_ + ns] = static_cast<std::uint8_t>(s);
        }
      }
    }
    metric.swap(next);
  }

  // Terminated trellis: trace back from state 0.
  BitStream decoded(steps);
  unsigned s = 0;
  for (std::size_t t = steps; t-- > 0;) {
    decoded[t] = static_cast<std::uint8_t>(s >> (memory_ - 1));  // input bit = state MSB
    s = survivor[t * states_ + s];
  }
  decoded.resize(steps - memory_);  // drop the tail
  return decoded;
}

}  // namespace mcsim
