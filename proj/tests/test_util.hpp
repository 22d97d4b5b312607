#pragma once

#include <cmath>
#include <random>

#include "torushol/matrix2.hpp"

namespace testutil {

using torushol::cplx;
using torushol::Matrix2;

inline std::mt19937& rng() {
  static std::mt19937 gen(987654321u);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

inline cplx random_cplx(double lo = -1.0, double hi = 1.0) {
  return {uniform(lo, hi), uniform(lo, hi)};
}

inline Matrix2 random_unimodular() {
  for (;;) {
    Matrix2 m{random_cplx(), random_cplx(), random_cplx(), random_cplx()};
    const cplx d = m.det();
    if (std::abs(d) > 0.05) return m * (1.0 / std::sqrt(d));
  }
}

/// Independent direct summation of the theta Fourier series, one term per
/// integer index, with a caller-chosen (oversized) truncation depth.
inline cplx theta_oracle(cplx w, int depth) {
  const cplx two_pi_i = 2.0 * torushol::kPi * torushol::kI;
  cplx sum = 0.0;
  for (int m = -depth; m <= depth + 1; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const double coeff = std::exp(-torushol::kPi * ((m - 0.5) * (m - 0.5) - 0.25));
    sum += sign * coeff * std::exp(two_pi_i * static_cast<double>(m) * w);
  }
  return sum;
}

}  // namespace testutil
