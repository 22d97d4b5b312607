#include <cmath>
#include <complex>

#include "doctest.h"
#include "test_util.hpp"
#include "torushol/theta.hpp"

using namespace torushol;
using testutil::theta_oracle;

TEST_SUITE("theta") {
  TEST_CASE("vanishes exactly at the origin") {
    const ThetaValue tv = theta(0.0);
    CHECK(tv.value.real() == 0.0);
    CHECK(tv.value.imag() == 0.0);
  }

  // The functional-equation residuals are measured relative to the largest
  // participating magnitude: theta grows like exp(pi Im(w)^2), so an absolute
  // bound is meaningless away from the real axis.
  TEST_CASE("quasi-periodicity laws") {
    const auto qp_residuals = [](cplx w) {
      const cplx v = theta(w).value;
      const cplx v1 = theta(w + 1.0).value;
      const cplx vi = theta(w + kI).value;
      const cplx factor = v * std::exp(-2.0 * kPi * kI * w);
      const double s1 = std::max({1.0, std::abs(v), std::abs(v1)});
      const double si = std::max({1.0, std::abs(vi), std::abs(factor)});
      return std::pair<double, double>{std::abs(v1 - v) / s1, std::abs(vi + factor) / si};
    };
    const cplx pts[] = {cplx{0.3, 0.2}, cplx{-0.7, 1.9}, cplx{0.11, -1.4}, cplx{2.6, 0.05}};
    for (cplx w : pts) {
      const auto [r1, ri] = qp_residuals(w);
      CHECK(r1 < 1e-12);
      CHECK(ri < 1e-12);
    }
    for (int i = 0; i < 50; ++i) {
      const cplx w{testutil::uniform(-2.0, 2.0), testutil::uniform(-2.0, 2.0)};
      const auto [r1, ri] = qp_residuals(w);
      CHECK(r1 < 1e-12);
      CHECK(ri < 1e-12);
    }
  }

  TEST_CASE("matches the direct-summation oracle at quadruple depth") {
    const cplx w{0.37, 0.21};
    const cplx mine = theta(w).value;
    const cplx ref = theta_oracle(w, 48);
    CHECK(std::abs(mine - ref) < 1e-13);
    for (int i = 0; i < 10; ++i) {
      const cplx p{testutil::uniform(-1.0, 1.0), testutil::uniform(-1.0, 1.0)};
      CHECK(std::abs(theta(p).value - theta_oracle(p, 48)) <
            1e-13 * std::max(1.0, std::abs(theta(p).value)));
    }
  }

  TEST_CASE("derivative at zero: nonzero, matches finite differences") {
    const cplx d = theta_prime_zero();
    CHECK(std::abs(d) > 1.0);
    const double h = 1e-5;
    const cplx fd = (theta(cplx{h, 0.0}).value - theta(cplx{-h, 0.0}).value) / (2.0 * h);
    CHECK(std::abs(fd - d) < 1e-8);
  }

  TEST_CASE("normalization constant cancels in every ratio") {
    const cplx w{0.41, -0.33};
    const cplx v{-0.15, 0.27};
    const cplx base_ratio = theta(w).value / theta(v).value;
    const cplx base_dratio = theta_prime_zero() / theta(v).value;
    for (int i = 0; i < 10; ++i) {
      const double c = testutil::uniform(0.1, 10.0) * (i % 2 ? -1.0 : 1.0);
      const cplx r = theta(w, c).value / theta(v, c).value;
      const cplx dr = theta_prime_zero(c) / theta(v, c).value;
      CHECK(std::abs(r - base_ratio) < 5e-15 * std::abs(base_ratio));
      CHECK(std::abs(dr - base_dratio) < 5e-15 * std::abs(base_dratio));
    }
  }

  TEST_CASE("t_section with zero shift is the constant one") {
    for (cplx w : {cplx{0.3, 0.4}, cplx{-0.2, 0.7}, cplx{0.45, -0.45}}) {
      const SectionValue sv = t_section(0.0, w);
      CHECK(sv.value == cplx{1.0, 0.0});
    }
  }

  TEST_CASE("t_section refuses points near its pole lattice") {
    CHECK_THROWS_AS(t_section(cplx{0.2, 0.1}, cplx{0.01, 0.02}), PoleProximity);
    CHECK_THROWS_AS(t_section(cplx{0.2, 0.1}, cplx{1.003, -0.004}), PoleProximity);
    CHECK_NOTHROW(t_section(cplx{0.2, 0.1}, cplx{0.5, 0.5}));
  }

  TEST_CASE("simple zero at the shift parameter") {
    const cplx x{0.23, 0.31};
    double prev_ratio = 0.0;
    for (double h : {1e-3, 1e-4, 1e-5}) {
      const double ratio = std::abs(t_section(x, x + h).value) / h;
      CHECK(ratio > 0.1);
      CHECK(ratio < 100.0);
      if (prev_ratio != 0.0) CHECK(std::abs(ratio / prev_ratio - 1.0) < 0.05);
      prev_ratio = ratio;
    }
  }

  TEST_CASE("simple pole on the lattice: (w - p) t_x(w) has a finite nonzero limit") {
    const cplx x{0.23, 0.31};
    const cplx pole{1.0, 1.0};
    for (double ang : {0.4, 2.2, 4.4}) {
      const cplx dir = std::exp(kI * ang);
      cplx prev = 0.0;
      for (double eps : {1e-3, 1e-4}) {
        const cplx w = pole + eps * dir;
        const cplx scaled = (w - pole) * t_section(x, w, 1e-9).value;
        CHECK(std::abs(scaled) > 1e-3);
        if (prev != cplx{0.0, 0.0}) CHECK(std::abs(scaled - prev) < 5e-3 * std::abs(prev));
        prev = scaled;
      }
    }
  }

  TEST_CASE("double periodicity away from poles") {
    for (int i = 0; i < 20; ++i) {
      cplx w{testutil::uniform(0.1, 0.9), testutil::uniform(0.1, 0.9)};
      if (lattice_distance(w) < 0.08) w += cplx{0.15, 0.1};
      const cplx x = 0.3 * testutil::random_cplx();
      const cplx v = t_section(x, w).value;
      CHECK(std::abs(t_section(x, w + 1.0).value - v) < 1e-10 * std::max(1.0, std::abs(v)));
      CHECK(std::abs(t_section(x, w + kI).value - v) < 1e-10 * std::max(1.0, std::abs(v)));
    }
  }

  TEST_CASE("dbar equation via finite differences") {
    const cplx x = 0.25 * cplx{1.0, 1.0};
    const cplx w{0.1, 0.7};
    const double d = 1e-6;
    const auto val = [&](cplx p) { return t_section(x, p).value; };
    const cplx d_re = (val(w + d) - val(w - d)) / (2.0 * d);
    const cplx d_im = (val(w + d * kI) - val(w - d * kI)) / (2.0 * d);
    const cplx dbar = 0.5 * (d_re + kI * d_im);
    CHECK(std::abs(dbar - kPi * x * val(w)) < 1e-6);
  }

  TEST_CASE("lattice distances") {
    CHECK(lattice_distance(cplx{0.0, 0.0}) == 0.0);
    CHECK(lattice_distance(cplx{3.0, -2.0}) == doctest::Approx(0.0));
    CHECK(lattice_distance(cplx{0.5, 0.5}) == doctest::Approx(std::sqrt(0.5)));
    CHECK(puncture_distance(cplx{0.5, 0.5}) == doctest::Approx(0.0));
    CHECK(puncture_distance(cplx{1.5, 0.5}) == doctest::Approx(0.0));
    CHECK(puncture_distance(cplx{0.0, 0.0}) == doctest::Approx(std::sqrt(0.5)));
    CHECK(Lattice::base().valid());
    CHECK(Lattice::doubled().valid());
  }
}
