#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "mcsim/channel.hpp"
#include "mcsim/stbc.hpp"

using namespace mcsim;

namespace {

// Oracle: solve the stacked linear model with an explicit pseudo-inverse. The
// two-slot receive samples per antenna stack into y = (1/sqrt(2)) A s + n with
//   rows (h_a1, h_a2) for slot 1 and (conj(h_a2), -conj(h_a1)) for conj(slot 2),
// so the zero-forcing estimate is sqrt(2) pinv(A) y_stack.
std::pair<cd, cd> pinv_estimate(const std::vector<std::array<cd, 2>>& y,
                                const ChannelMatrix& h) {
  const int m = static_cast<int>(h.rows.size());
  Eigen::MatrixXcd a(2 * m, 2);
  Eigen::VectorXcd ys(2 * m);
  for (int r = 0; r < m; ++r) {
    a(2 * r, 0) = h.rows[r][0];
    a(2 * r, 1) = h.rows[r][1];
    a(2 * r + 1, 0) = std::conj(h.rows[r][1]);
    a(2 * r + 1, 1) = -std::conj(h.rows[r][0]);
    ys(2 * r) = y[r][0];
    ys(2 * r + 1) = std::conj(y[r][1]);
  }
  Eigen::MatrixXcd pinv = a.completeOrthogonalDecomposition().pseudoInverse();
  Eigen::VectorXcd s = std::sqrt(2.0) * (pinv * ys);
  return {s(0), s(1)};
}

ChannelMatrix draw(Substream& rng, unsigned rx) { return rayleigh_draw(rng, rx, 2); }

}  // namespace

TEST_CASE("encoder output layout and power split") {
  const double a = 1.0 / std::sqrt(2.0);
  StbcBlock b = stbc_encode(cd(1, 0), cd(0, 0));
  CHECK(b.slot[0][0] == cd(a, 0));
  CHECK(b.slot[0][1] == cd(0, 0));
  CHECK(b.slot[1][0] == cd(0, 0));
  CHECK(b.slot[1][1] == cd(a, 0));

  cd s1(0.6, -0.8), s2(-0.3, 0.4);
  StbcBlock c = stbc_encode(s1, s2);
  CHECK(c.slot[0][0] == a * s1);
  CHECK(c.slot[0][1] == a * s2);
  CHECK(c.slot[1][0] == -a * std::conj(s2));
  CHECK(c.slot[1][1] == a * std::conj(s1));

  // Total transmitted energy equals the symbol energy.
  double e = 0;
  for (int t = 0; t < 2; ++t) {
    for (int ant = 0; ant < 2; ++ant) e += std::norm(c.slot[t][ant]);
  }
  CHECK(e == doctest::Approx(std::norm(s1) + std::norm(s2)).epsilon(1e-12));
}

TEST_CASE("code matrix is orthogonal") {
  cd s1(1.3, 0.7), s2(-0.2, 2.1);
  // Unsplit code matrix M = [s1 s2; -s2* s1*]: columns are orthogonal with
  // squared norm |s1|^2 + |s2|^2.
  cd m[2][2] = {{s1, s2}, {-std::conj(s2), std::conj(s1)}};
  cd g00(0, 0), g01(0, 0), g11(0, 0);
  for (int t = 0; t < 2; ++t) {
    g00 += std::conj(m[t][0]) * m[t][0];
    g01 += std::conj(m[t][0]) * m[t][1];
    g11 += std::conj(m[t][1]) * m[t][1];
  }
  double p = std::norm(s1) + std::norm(s2);
  CHECK(std::abs(g00 - cd(p, 0)) < 1e-12);
  CHECK(std::abs(g11 - cd(p, 0)) < 1e-12);
  CHECK(std::abs(g01) < 1e-12);
}

TEST_CASE("noiseless combining is exact for 1 to 4 receive antennas") {
  Substream rng(600);
  for (unsigned rx : {1u, 2u, 3u, 4u}) {
    for (int rep = 0; rep < 50; ++rep) {
      ChannelMatrix h = draw(rng, rx);
      cd s1 = rng.next_cgauss(1.0), s2 = rng.next_cgauss(1.0);
      StbcBlock b = stbc_encode(s1, s2);
      std::vector<std::array<cd, 2>> y(rx);
      for (unsigned a = 0; a < rx; ++a) {
        for (int t = 0; t < 2; ++t) {
          y[a][t] = h.rows[a][0] * b.slot[t][0] + h.rows[a][1] * b.slot[t][1];
        }
      }
      ZfOutput zf = zf_combine(y, h);
      CHECK(std::abs(zf.s1 - s1) < 1e-12);
      CHECK(std::abs(zf.s2 - s2) < 1e-12);
      CHECK(zf.gain == doctest::Approx(h.frob_sq()).epsilon(1e-12));
    }
  }
}

TEST_CASE("combiner equals the explicit pseudo-inverse on noisy blocks") {
  Substream rng(601);
  double worst = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    unsigned rx = 1 + static_cast<unsigned>(rng.next_u64() % 4);
    ChannelMatrix h = draw(rng, rx);
    cd s1 = rng.next_cgauss(1.0), s2 = rng.next_cgauss(1.0);
    StbcBlock b = stbc_encode(s1, s2);
    std::vector<std::array<cd, 2>> y(rx);
    for (unsigned a = 0; a < rx; ++a) {
      for (int t = 0; t < 2; ++t) {
        y[a][t] = h.rows[a][0] * b.slot[t][0] + h.rows[a][1] * b.slot[t][1] +
                  rng.next_cgauss(0.25);
      }
    }
    ZfOutput zf = zf_combine(y, h);
    auto [o1, o2] = pinv_estimate(y, h);
    worst = std::max({worst, std::abs(zf.s1 - o1), std::abs(zf.s2 - o2)});
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("single-path channel reduces to slot passthrough") {
  // h = [1, 0]: the receiver sees y11 = s1/sqrt(2), y12 = -conj(s2)/sqrt(2), so
  // the estimates are sqrt(2) y11 and -sqrt(2) conj(y12).
  ChannelMatrix h;
  h.rows = {{cd(1, 0), cd(0, 0)}};
  cd s1(0.4, 0.9), s2(-1.2, 0.1);
  StbcBlock b = stbc_encode(s1, s2);
  std::vector<std::array<cd, 2>> y(1);
  for (int t = 0; t < 2; ++t) y[0][t] = b.slot[t][0];
  ZfOutput zf = zf_combine(y, h);
  CHECK(std::abs(zf.s1 - std::sqrt(2.0) * y[0][0]) < 1e-12);
  CHECK(std::abs(zf.s2 - (-std::sqrt(2.0) * std::conj(y[0][1]))) < 1e-12);
  CHECK(std::abs(zf.s1 - s1) < 1e-12);
  CHECK(std::abs(zf.s2 - s2) < 1e-12);
}

TEST_CASE("error reporting") {
  ChannelMatrix zero;
  zero.rows = {{cd(0, 0), cd(0, 0)}};
  std::vector<std::array<cd, 2>> y(1, {cd(1, 0), cd(1, 0)});
  CHECK_THROWS_WITH(zf_combine(y, zero), "singular channel draw");
  Substream rng(602);
  ChannelMatrix h = draw(rng, 3);
  CHECK_THROWS_WITH(zf_combine(y, h),
                    "received block shape does not match channel matrix");
}
