#include "mcsim/stbc.hpp"

#include <cmath>
#include <stdexcept>

namespace mcsim {

StbcBlock stbc_encode(cd s1, cd s2) {
  const double a = 1.0 / std::sqrt(2.0);
  StbcBlock b;
  b.slot[0] = {a * s1, a * s2};
  b.slot[1] = {-a * std::conj(s2), a * std::conj(s1)};
  return b;
}

double ChannelMatrix::frob_sq() const {
  double g = 0.0;
  for (const auto& row : rows) {
    g += std::norm(row[0]) + std::norm(row[1]);
  }
  return g;
}

ZfOutput zf_combine(const std::vector<std::array<cd, 2>>& y, const ChannelMatrix& h) {
  if (y.size() != h.rows.size() || y.empty()) {
    throw std::invalid_argument("received block shape does not match channel matrix");
  }
  double gain = h.frob_sq();
  if (gain < 1e-12) {
    throw std::invalid_argument("singular channel draw");
  }
  // s_hat = sqrt(2) A^H z / gain with z = (y_a1, conj(y_a2)) stacked per antenna
  // and A rows (h_a1, h_a2) and (conj(h_a2), -conj(h_a1)); orthogonality makes
  // this the full pseudo-inverse, not an approximation.
  cd acc1(0.0, 0.0);
  cd acc2(0.0, 0.0);
  for (std::size_t a = 0; a < y.size(); ++a) {
    cd h1 = h.rows[a][0];
    cd h2 = h.rows[a][1];
    cd y1 = y[a][0];
    cd y2c = std::conj(y[a][1]);
    acc1 += std::conj(h1) * y1 + h2 * y2c;
    acc2 += std::conj(h2) * y1 - h1 * y2c;
  }
  const double s = std::sqrt(2.0) / gain;
  return ZfOutput{s * acc1, s * acc2, gain};
}

}  // namespace mcsim
