#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mcsim/pn.hpp"
#include "mcsim/rng.hpp"

using namespace mcsim;

namespace {

std::vector<double> one_period(PnCode code) {
  std::vector<double> c(code.period());
  for (auto& v : c) v = code.next_chip();
  return c;
}

// Binarise a superposed chip stream by sign (tie -> +1), as the transmit chain
// does between the spreaders and the modulator.
ChipStream sign_quantise(const ChipStream& x) {
  ChipStream out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] < 0.0 ? -1.0 : 1.0;
  return out;
}

}  // namespace

TEST_CASE("hand-stepped chips of the degree-3 register") {
  // taps x^3 + x + 1, seed 001: states 001,100,010,101,110,111,011 emit bits
  // 1,0,0,1,0,1,1 (stepped by hand), i.e. chips -+-++-- in bipolar form.
  PnCode code(013, 1, 8);
  std::vector<double> expect{-1, 1, 1, -1, 1, -1, -1};
  CHECK(one_period(code) == expect);
  CHECK(code.period() == 7);
  CHECK(code.degree() == 3);
}

TEST_CASE("sequence satisfies the independent shift recurrence") {
  // For x^3 + x + 1 the output bits obey b[n+3] = b[n+1] xor b[n]; check three
  // full periods against chips regenerated through the recurrence alone.
  PnCode code(013, 1, 8);
  std::vector<double> chips(21);
  for (auto& v : chips) v = code.next_chip();
  for (std::size_t n = 0; n + 3 < chips.size(); ++n) {
    int b0 = chips[n] < 0, b1 = chips[n + 1] < 0, b3 = chips[n + 3] < 0;
    CHECK(b3 == (b1 ^ b0));
  }
}

TEST_CASE("maximal period and balance for several polynomials") {
  struct Poly {
    unsigned taps;
    unsigned degree;
  };
  for (Poly p : {Poly{07, 2}, Poly{013, 3}, Poly{023, 4}, Poly{045, 5},
                 Poly{0103, 6}, Poly{0211, 7}}) {
    PnCode code(p.taps, 1, 8);
    CHECK(code.degree() == p.degree);
    CHECK(code.period() == (1u << p.degree) - 1);
    std::vector<double> c = one_period(code);
    double sum = 0;
    for (double v : c) sum += v;
    // One more -1 than +1 over a period.
    CHECK(sum == -1.0);
  }
}

TEST_CASE("periodic autocorrelation is two-valued") {
  for (unsigned taps : {013u, 023u, 045u}) {
    PnCode code(taps, 1, 8);
    std::vector<double> c = one_period(code);
    const std::size_t P = c.size();
    for (std::size_t lag = 0; lag < P; ++lag) {
      double acc = 0;
      for (std::size_t i = 0; i < P; ++i) acc += c[i] * c[(i + lag) % P];
      if (lag == 0) {
        CHECK(acc == doctest::Approx(static_cast<double>(P)));
      } else {
        CHECK(acc == doctest::Approx(-1.0));
      }
    }
  }
}

TEST_CASE("spreading length contract and all-zeros identity") {
  PnCode code(013, 1, 8);
  BitStream bits(10, 0);
  ChipStream chips = spread(bits, code);
  CHECK(chips.size() == 80);
  // Spreading the all-zero stream reproduces the PN chips themselves.
  PnCode gen(013, 1, 8);
  for (double v : chips) CHECK(v == gen.next_chip());
}

TEST_CASE("round trip for every phase and several factors") {
  Substream rng(201);
  for (unsigned cpb : {1u, 4u, 8u}) {
    for (unsigned user = 0; user < 3; ++user) {
      PnCode code(013, 1, cpb, user);
      BitStream bits(40);
      for (auto& b : bits) b = rng.next_bit();
      ChipStream chips = spread(bits, code);
      CHECK(chips.size() == bits.size() * cpb);
      CHECK(despread(chips, code) == bits);
    }
  }
}

TEST_CASE("any three chip flips per window are absorbed") {
  PnCode code(013, 1, 8);
  BitStream bits{1, 0, 1, 1, 0};
  ChipStream clean = spread(bits, code);
  // Exhaust all <=3-flip patterns inside one window (the middle bit's chips);
  // the 8-chip correlation retains the bit's sign at margin >= 2.
  const std::size_t base = 2 * 8;
  for (unsigned mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(mask) > 3) continue;
    ChipStream noisy = clean;
    for (unsigned i = 0; i < 8; ++i) {
      if (mask >> i & 1u) noisy[base + i] = -noisy[base + i];
    }
    CHECK(despread(noisy, code) == bits);
  }
}

TEST_CASE("zero correlation resolves to bit 0") {
  PnCode code(013, 1, 8);
  ChipStream window = spread(BitStream{0}, code);
  for (int i = 0; i < 4; ++i) window[i] = -window[i];  // exactly half disagree
  CHECK(despread(window, code) == BitStream{0});
  window[4] = -window[4];  // five disagreements flip the sign
  CHECK(despread(window, code) == BitStream{1});
}

TEST_CASE("co-user phase stagger") {
  PnCode u0(013, 1, 8, 0);
  PnCode u1(013, 1, 8, 1);
  std::vector<double> c0(14), c1(7);
  for (auto& v : c0) v = u0.next_chip();
  for (auto& v : c1) v = u1.next_chip();
  for (int i = 0; i < 7; ++i) CHECK(c1[i] == c0[i + kUserPhaseStride]);
}

TEST_CASE("two staggered users separate exactly after sign quantisation") {
  PnCode u0(013, 1, 8, 0);
  PnCode u1(013, 1, 8, 1);
  // Constant bit pairs cover every (alignment, b0, b1) combination: the window
  // alignment advances one chip per bit (8 mod 7), so 14 bits visit each of the
  // 7 phases twice.
  for (int pattern = 0; pattern < 4; ++pattern) {
    BitStream b0(14, pattern & 1), b1(14, pattern >> 1);
    ChipStream s0 = spread(b0, u0), s1 = spread(b1, u1);
    ChipStream sum(s0.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = s0[i] + s1[i];
    ChipStream q = sign_quantise(sum);
    CHECK(despread(q, u0) == b0);
    CHECK(despread(q, u1) == b1);
  }
  // And random payloads.
  Substream rng(202);
  for (int rep = 0; rep < 100; ++rep) {
    BitStream b0(64), b1(64);
    for (auto& b : b0) b = rng.next_bit();
    for (auto& b : b1) b = rng.next_bit();
    ChipStream s0 = spread(b0, u0), s1 = spread(b1, u1);
    ChipStream sum(s0.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = s0[i] + s1[i];
    ChipStream q = sign_quantise(sum);
    CHECK(despread(q, u0) == b0);
    CHECK(despread(q, u1) == b1);
  }
}

TEST_CASE("user of interest stays decodable under co-user noise at 10 dB") {
  // Two users on different maximal polynomials, superposed chip streams plus
  // white noise at 10 dB chip SNR; the desired user's raw bit error rate must
  // stay below coin flipping.
  PnCode want(013, 1, 8);
  PnCode other(023, 1, 8);
  Substream rng(203);
  Substream noise(204);
  const double sigma = std::sqrt(0.1);  // real chips at 10 dB chip SNR
  std::size_t errors = 0;
  const std::size_t nbits = 4000;
  BitStream b0(nbits), b1(nbits);
  for (auto& b : b0) b = rng.next_bit();
  for (auto& b : b1) b = rng.next_bit();
  ChipStream s0 = spread(b0, want), s1 = spread(b1, other);
  ChipStream rx(s0.size());
  for (std::size_t i = 0; i < rx.size(); ++i) {
    rx[i] = s0[i] + s1[i] + sigma * noise.next_gaussian();
  }
  BitStream hat = despread(rx, want);
  for (std::size_t i = 0; i < nbits; ++i) errors += hat[i] != b0[i];
  CHECK(static_cast<double>(errors) / nbits < 0.5);
}

TEST_CASE("error reporting") {
  CHECK_THROWS_WITH(PnCode(013, 0, 8), "degenerate LFSR seed");
  CHECK_THROWS_WITH(PnCode(013, 8, 8), "degenerate LFSR seed");  // masked to zero
  CHECK_THROWS_WITH(PnCode(017, 1, 8), "pn_taps is not a maximal-length polynomial");
  CHECK_THROWS_WITH(PnCode(03, 1, 8), "pn_taps must include an x^m term with m >= 2");
  CHECK_THROWS_WITH(PnCode(013, 1, 0), "chips_per_bit must be positive");
  PnCode code(013, 1, 8);
  CHECK_THROWS_WITH(despread(ChipStream(12, 1.0), code),
                    "chip count not divisible by spreading factor");
}
