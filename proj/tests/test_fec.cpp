#include <algorithm>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mcsim/conv_code.hpp"
#include "mcsim/rng.hpp"

using namespace mcsim;

namespace {

// Reference encoder, written independently of the library: direct GF(2)
// convolution of the input (plus tail zeros) with each generator's taps.
BitStream reference_encode(unsigned g1, unsigned g2, const BitStream& info) {
  unsigned memory = 0;
  unsigned both = g1 | g2;
  while (both >> (memory + 1)) ++memory;
  std::vector<std::uint8_t> padded(info.begin(), info.end());
  padded.insert(padded.end(), memory, 0);
  BitStream out;
  for (std::size_t i = 0; i < padded.size(); ++i) {
    for (unsigned g : {g1, g2}) {
      unsigned acc = 0;
      for (unsigned k = 0; k <= memory; ++k) {
        std::uint8_t past = (i >= k) ? padded[i - k] : 0;
        acc ^= ((g >> (memory - k)) & 1u) & past;
      }
      out.push_back(static_cast<std::uint8_t>(acc));
    }
  }
  return out;
}

BitStream bits_of(std::uint32_t value, unsigned len) {
  BitStream b(len);
  for (unsigned i = 0; i < len; ++i) b[i] = (value >> i) & 1u;
  return b;
}

// Exhaustive maximum-likelihood decision: the message whose codeword is nearest
// in Hamming distance, scanning messages in ascending numeric order.
struct MlResult {
  BitStream message;
  unsigned distance;
};

MlResult ml_decode(const ConvCode& code, const BitStream& received, unsigned len) {
  MlResult best{{}, ~0u};
  for (std::uint32_t v = 0; v < (1u << len); ++v) {
    BitStream msg = bits_of(v, len);
    BitStream cw = code.encode(msg);
    unsigned d = static_cast<unsigned>(hamming_distance(cw, received));
    if (d < best.distance) best = {msg, d};
  }
  return best;
}

}  // namespace

TEST_CASE("impulse response of the default generators") {
  ConvCode code;
  CHECK(code.memory() == 3);
  CHECK(code.coded_length(4) == 14);
  // First information bit 1, then zeros: output pairs 11 11 01 11 00 00 00,
  // frozen from stepping the (15, 17) shift register by hand.
  BitStream expect{1, 1, 1, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  CHECK(code.encode({1, 0, 0, 0}) == expect);
}

TEST_CASE("encoder matches the direct-convolution reference") {
  Substream rng(101);
  for (auto [g1, g2] : {std::pair<unsigned, unsigned>{015, 017},
                        std::pair<unsigned, unsigned>{05, 07},
                        std::pair<unsigned, unsigned>{0133, 0171}}) {
    ConvCode code(g1, g2);
    for (int rep = 0; rep < 50; ++rep) {
      std::size_t len = 1 + rng.next_u64() % 64;
      BitStream msg(len);
      for (auto& b : msg) b = rng.next_bit();
      CHECK(code.encode(msg) == reference_encode(g1, g2, msg));
    }
  }
}

TEST_CASE("encoding is linear over GF(2)") {
  ConvCode code;
  Substream rng(102);
  for (int rep = 0; rep < 100; ++rep) {
    BitStream a(24), b(24);
    for (std::size_t i = 0; i < 24; ++i) {
      a[i] = rng.next_bit();
      b[i] = rng.next_bit();
    }
    BitStream sum(24);
    for (std::size_t i = 0; i < 24; ++i) sum[i] = a[i] ^ b[i];
    BitStream ca = code.encode(a), cb = code.encode(b), cs = code.encode(sum);
    for (std::size_t i = 0; i < cs.size(); ++i) CHECK(cs[i] == (ca[i] ^ cb[i]));
  }
}

TEST_CASE("length contract and zero message") {
  ConvCode code;
  BitStream zeros(8, 0);
  BitStream coded = code.encode(zeros);
  CHECK(coded.size() == 22);
  CHECK(std::count(coded.begin(), coded.end(), 0) == 22);
  CHECK(code.encode(BitStream(100, 0)).size() == 206);
}

TEST_CASE("clean round trip over every 10-bit message") {
  ConvCode code;
  for (std::uint32_t v = 0; v < (1u << 10); ++v) {
    BitStream msg = bits_of(v, 10);
    CHECK(code.decode(code.encode(msg)) == msg);
  }
}

TEST_CASE("up to two flips are always corrected (free distance 6)") {
  ConvCode code;
  // All messages of length 8, all 0-, 1- and 2-flip patterns on the codeword.
  for (std::uint32_t v = 0; v < (1u << 8); ++v) {
    BitStream msg = bits_of(v, 8);
    BitStream clean = code.encode(msg);
    const std::size_t n = clean.size();
    REQUIRE(code.decode(clean) == msg);
    for (std::size_t i = 0; i < n; ++i) {
      BitStream r1 = clean;
      r1[i] ^= 1;
      CHECK(code.decode(r1) == msg);
      for (std::size_t j = i + 1; j < n; ++j) {
        BitStream r2 = r1;
        r2[j] ^= 1;
        CHECK(code.decode(r2) == msg);
      }
    }
  }
}

TEST_CASE("Viterbi reaches the exhaustive maximum-likelihood distance") {
  ConvCode code;
  Substream rng(103);
  const unsigned len = 10;
  for (int rep = 0; rep < 60; ++rep) {
    BitStream msg(len);
    for (auto& b : msg) b = rng.next_bit();
    BitStream received = code.encode(msg);
    unsigned flips = 3;
    for (unsigned f = 0; f < flips; ++f) {
      received[rng.next_u64() % received.size()] ^= 1;
    }
    MlResult ml = ml_decode(code, received, len);
    BitStream got = code.decode(received);
    unsigned viterbi_dist =
        static_cast<unsigned>(hamming_distance(code.encode(got), received));
    // Three flips can sit equidistant between codewords; the decoder must still
    // land on some codeword at the minimum distance.
    CHECK(viterbi_dist == ml.distance);
    if (ml.distance < 3) CHECK(got == ml.message);
  }
}

TEST_CASE("error reporting") {
  ConvCode code;
  CHECK_THROWS_WITH(code.encode({}), "empty message");
  CHECK_THROWS_WITH(code.decode(BitStream(15, 0)), "misaligned codeword");
  CHECK_THROWS_AS(code.decode(BitStream(4, 0)), std::invalid_argument);
  CHECK_THROWS_AS(ConvCode(0, 017), std::invalid_argument);
}

TEST_CASE("wrapper functions delegate") {
  ConvCode code;
  BitStream msg{1, 0, 1, 1, 0, 1};
  CHECK(conv_encode(code, msg) == code.encode(msg));
  CHECK(viterbi_decode(code, code.encode(msg)) == msg);
}
