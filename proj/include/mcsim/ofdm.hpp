#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "mcsim/modem.hpp"

namespace mcsim {

// Unitary discrete Fourier transform (1/sqrt(N) both directions) for arbitrary
// composite lengths. Mixed-radix Cooley-Tukey recursion over the smallest prime
// factor with a direct O(p^2) kernel for prime remainders, so smooth sizes such as
// 64 or 6400 = 2^8 * 5^2 cost O(N log N). All stage twiddles are powers of the
// N-th root, so one root table serves every level.
class Dft {
 public:
  explicit Dft(std::size_t n);  // throws on n == 0

  std::vector<cd> forward(const std::vector<cd>& x) const;
  std::vector<cd> inverse(const std::vector<cd>& x) const;
  std::size_t size() const { return n_; }

 private:
  void transform(const cd* in, std::size_t stride, cd* out, std::size_t n,
                 std::size_t w_mul, cd* scratch, bool inv) const;
  cd root(std::size_t idx, bool inv) const;

  std::size_t n_;
  std::vector<cd> roots_;  // exp(-2*pi*i*k / n)
};

// One-shot conveniences for tests and small callers.
std::vector<cd> dft(const std::vector<cd>& x);
std::vector<cd> idft(const std::vector<cd>& x);

struct OfdmParams {
  std::size_t subcarriers = 64;
  std::size_t cp_len = 12;
  void validate() const;  // "cp_len must be < subcarriers", subcarriers >= 1
};

// IDFT of one subcarrier block plus cyclic prefix: output is the last cp_len body
// samples followed by the body, length subcarriers + cp_len.
class OfdmModem {
 public:
  explicit OfdmModem(const OfdmParams& p);

  std::vector<cd> modulate(const std::vector<cd>& freq_symbols) const;
  std::vector<cd> demodulate(const std::vector<cd>& samples) const;
  const OfdmParams& params() const { return params_; }

 private:
  OfdmParams params_;
  Dft dft_;
};

std::vector<cd> ofdm_modulate(const std::vector<cd>& freq_symbols, const OfdmModem& m);
std::vector<cd> ofdm_demodulate(const std::vector<cd>& samples, const OfdmModem& m);

}  // namespace mcsim
