#pragma once

#include <cstdint>

#include "mcsim/bits.hpp"

namespace mcsim {

// Rate-1/2 non-systematic feedforward convolutional code with terminated trellis.
//
// Generators are tap masks over the window (d_i, d_{i-1}, ..., d_{i-v}) with the
// current bit at the most significant position, so the usual octal notation can be
// written directly as an octal literal: ConvCode(015, 017) is the memory-3 pair
// with free distance 6. The encoder state is the last v input bits in natural
// binary, most recent bit highest.
class ConvCode {
 public:
  // Defaults to generators (15, 17) octal, memory 3.
  ConvCode() : ConvCode(015, 017) {}
  ConvCode(unsigned g1, unsigned g2);

  // Appends v zero tail bits, so output length is exactly 2 * (len + v) and the
  // trellis ends in state 0. Throws on empty input ("empty message").
  BitStream encode(const BitStream& info) const;

  // Hard-decision Viterbi with Hamming metric over the terminated trellis.
  // Input length must be even ("misaligned codeword") and at least 2 * (v + 1).
  // On equal path metrics the lower-numbered predecessor state wins. Returns the
  // len/2 - v information bits (tail stripped).
  BitStream decode(const BitStream& coded) const;

  unsigned memory() const { return memory_; }
  unsigned g1() const { return gen_[0]; }
  unsigned g2() const { return gen_[1]; }
  std::size_t coded_length(std::size_t info_len) const {
    return 2 * (info_len + memory_);
  }

 private:
  unsigned gen_[2];
  unsigned memory_;
  unsigned states_;
};

inline BitStream conv_encode(const ConvCode& code, const BitStream& info) {
  return code.encode(info);
}
inline BitStream viterbi_decode(const ConvCode& code, const BitStream& coded) {
  return code.decode(coded);
}

}  // namespace mcsim
