#include "mcsim/ofdm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mcsim {

namespace {

std::size_t smallest_prime_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return p;
  }
  return n;
}

}  // namespace

Dft::Dft(std::size_t n) : n_(n) {
  if (n == 0) {
    throw std::invalid_argument("transform length must be positive");
  }
  roots_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    roots_[k] = cd(std::cos(a), std::sin(a));
  }
}

cd Dft::root(std::size_t idx, bool inv) const {
  return inv ? std::conj(roots_[idx]) : roots_[idx];
}

// Decimation in time over r = smallest prime factor: the n inputs split into r
// interleaved length-m sub-transforms recombined with twiddles W_n^{j(k1 + m k2)}.
// Every twiddle of every level is a power of the top-level root, so indices are
// computed mod n_ against the shared table. `scratch` must hold 2n cells: n for
// this level's sub-results, the rest for the recursion.
void Dft::transform(const cd* in, std::size_t stride, cd* out, std::size_t n,
                    std::size_t w_mul, cd* scratch, bool inv) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  std::size_t r = smallest_prime_factor(n);
  if (r == n) {
    for (std::size_t k = 0; k < n; ++k) {
      cd acc(0.0, 0.0);
      for (std::size_t t = 0; t < n; ++t) {
        acc += in[t * stride] * root(w_mul * ((t * k) % n) % n_, inv);
      }
      out[k] = acc;
    }
    return;
  }
  std::size_t m = n / r;
  for (std::size_t j = 0; j < r; ++j) {
    transform(in + j * stride, stride * r, scratch + j * m, m, w_mul * r, scratch + n,
              inv);
  }
  for (std::size_t k1 = 0; k1 < m; ++k1) {
    for (std::size_t k2 = 0; k2 < r; ++k2) {
      cd acc(0.0, 0.0);
      for (std::size_t j = 0; j < r; ++j) {
        acc += scratch[j * m + k1] * root(w_mul * ((j * (k1 + m * k2)) % n) % n_, inv);
      }
      out[k1 + m * k2] = acc;
    }
  }
}

std::vector<cd> Dft::forward(const std::vector<cd>& x) const {
  if (x.size() != n_) {
    throw std::invalid_argument("input length does not match transform size");
  }
  std::vector<cd> out(n_);
  std::vector<cd> scratch(2 * n_);
  transform(x.data(), 1, out.data(), n_, 1, scratch.data(), false);
  double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (cd& v : out) v *= scale;
  return out;
}

std::vector<cd> Dft::inverse(const std::vector<cd>& x) const {
  if (x.size() != n_) {
    throw std::invalid_argument("input length does not match transform size");
  }
  std::vector<cd> out(n_);
  std::vector<cd> scratch(2 * n_);
  transform(x.data(), 1, out.data(), n_, 1, scratch.data(), true);
  double scale = 1.0 / std::sqrt(static_cast<double>(n_));
  for (cd& v : out) v *= scale;
  return out;
}

std::vector<cd> dft(const std::vector<cd>& x) { return Dft(x.size()).forward(x); }
std::vector<cd> idft(const std::vector<cd>& x) { return Dft(x.size()).inverse(x); }

void OfdmParams::validate() const {
  if (subcarriers == 0) {
    throw std::invalid_argument("subcarriers must be positive");
  }
  if (cp_len >= subcarriers) {
    throw std::invalid_argument("cp_len must be < subcarriers");
  }
}

namespace {
const OfdmParams& validated(const OfdmParams& p) {
  p.validate();
  return p;
}
}  // namespace

OfdmModem::OfdmModem(const OfdmParams& p)
    : params_(validated(p)), dft_(p.subcarriers) {}

std::vector<cd> OfdmModem::modulate(const std::vector<cd>& freq_symbols) const {
  if (freq_symbols.size() != params_.subcarriers) {
    throw std::invalid_argument("block length does not match subcarrier count");
  }
  std::vector<cd> body = dft_.inverse(freq_symbols);
  std::vector<cd> out;
  out.reserve(params_.subcarriers + params_.cp_len);
  out.insert(out.end(), body.end() - static_cast<std::ptrdiff_t>(params_.cp_len),
             body.end());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::vector<cd> OfdmModem::demodulate(const std::vector<cd>& samples) const {
  if (samples.size() != params_.subcarriers + params_.cp_len) {
    throw std::invalid_argument("sample count must equal subcarriers + cp_len");
  }
  std::vector<cd> body(samples.begin() + static_cast<std::ptrdiff_t>(params_.cp_len),
                       samples.end());
  return dft_.forward(body);
}

std::vector<cd> ofdm_modulate(const std::vector<cd>& freq_symbols, const OfdmModem& m) {
  return m.modulate(freq_symbols);
}
std::vector<cd> ofdm_demodulate(const std::vector<cd>& samples, const OfdmModem& m) {
  return m.demodulate(samples);
}

}  // namespace mcsim
