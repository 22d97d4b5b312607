#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "torushol/connection.hpp"
#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"
#include "torushol/path.hpp"
#include "torushol/representation.hpp"

namespace torushol {

struct HolonomyResult {
  Matrix2 matrix{Matrix2::identity()};
  double det_drift{0.0};
  long steps{0};
  double est_error{0.0};
};

struct TransportOptions {
  double rtol{1e-12};
  double atol{1e-12};
  double pole_radius{kDefaultPoleRadius};
  long max_steps{4'000'000};
  // When positive, integrate each segment with this many equal steps instead
  // of adaptive control. A fixed grid makes the holonomy a smooth function of
  // the connection parameters, which root finders need.
  long fixed_steps{0};
};

namespace detail {

// Dormand-Prince 5(4) pair.
inline constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
inline constexpr double kB5[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                                  -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double kB4[7] = {5179.0 / 57600,  0.0,           7571.0 / 16695, 393.0 / 640,
                                  -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct SegmentSystem {
  const CoefficientEvaluator& eval;
  const Segment& seg;

  Matrix2 rhs(double t, const Matrix2& y) const {
    const cplx z = segment_point(seg, t);
    const cplx v = segment_velocity(seg, t);
    const CoefficientPair cp = eval(z);
    const Matrix2 m = cp.A * v + cp.B * std::conj(v);
    return -(m * y);
  }
};

inline double error_ratio(const Matrix2& err, const Matrix2& y0, const Matrix2& y1,
                          double atol, double rtol) {
  const auto e = err.row_major();
  const auto a = y0.row_major();
  const auto b = y1.row_major();
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double scale = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    worst = std::max(worst, std::abs(e[i]) / scale);
  }
  return worst;
}

inline void integrate_segment_fixed(const SegmentSystem& sys, Matrix2& y, long& steps,
                                    double& est_error, long n) {
  const double h = 1.0 / static_cast<double>(n);
  Matrix2 k[7];
  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * h;
    k[0] = sys.rhs(t, y);
    for (int s = 1; s < 7; ++s) {
      Matrix2 acc = y;
      for (int j = 0; j < s; ++j) acc = acc + (h * kA[s][j]) * k[j];
      k[s] = sys.rhs(t + kC[s] * h, acc);
    }
    Matrix2 y5 = y;
    Matrix2 err = Matrix2::zero();
    for (int s = 0; s < 7; ++s) {
      if (kB5[s] != 0.0) y5 = y5 + (h * kB5[s]) * k[s];
      err = err + (h * (kB5[s] - kB4[s])) * k[s];
    }
    est_error += frobenius_norm(err);
    y = y5;
    ++steps;
  }
}

inline void integrate_segment(const SegmentSystem& sys, Matrix2& y, long& steps,
                              double& est_error, const TransportOptions& opt) {
  double t = 0.0;
  double h = 0.05;
  Matrix2 k[7];
  k[0] = sys.rhs(0.0, y);
  bool have_k0 = true;
  while (t < 1.0) {
    h = std::min(h, 1.0 - t);
    if (h < 1e-14) {
      throw StepUnderflow("transport: step size underflow at t=" + std::to_string(t));
    }
    if (!have_k0) k[0] = sys.rhs(t, y);
    for (int s = 1; s < 7; ++s) {
      Matrix2 acc = y;
      for (int j = 0; j < s; ++j) acc = acc + (h * kA[s][j]) * k[j];
      k[s] = sys.rhs(t + kC[s] * h, acc);
    }
    Matrix2 y5 = y;
    Matrix2 err = Matrix2::zero();
    for (int s = 0; s < 7; ++s) {
      if (kB5[s] != 0.0) y5 = y5 + (h * kB5[s]) * k[s];
      err = err + (h * (kB5[s] - kB4[s])) * k[s];
    }
    const double ratio = error_ratio(err, y, y5, opt.atol, opt.rtol);
    if (ratio <= 1.0) {
      t += h;
      est_error += frobenius_norm(err);
      y = y5;
      k[0] = k[6];  // FSAL
      have_k0 = true;
    } else {
      have_k0 = true;  // k[0] still valid at unchanged t
    }
    const double grow = 0.9 * std::pow(std::max(ratio, 1e-10), -0.2);
    h *= std::clamp(grow, 0.2, 5.0);
    if (++steps > opt.max_steps) {
      throw StepUnderflow("transport: step budget exhausted");
    }
  }
}

}  // namespace detail

/// Parallel transport of the frame around the loop: solves
///   Psi'(t) = -(A(g(t)) g'(t) + B(g(t)) conj(g'(t))) Psi(t),  Psi(0) = Id,
/// and returns Psi at the end of the loop. Holonomies compose as
/// h(first delta, then gamma) = h(gamma) * h(delta).
inline HolonomyResult transport(const ConnectionFamily& family, const PathSpec& path,
                                const TransportOptions& opt) {
  if (!path.closed()) {
    throw PathError("transport: path '" + path.label + "' is not a closed loop");
  }
  if (family.rho > 0.0 && path.min_puncture_distance() < opt.pole_radius) {
    throw PoleProximity("transport: path '" + path.label + "' enters the pole exclusion zone");
  }
  const CoefficientEvaluator eval(family, opt.pole_radius);
  HolonomyResult res;
  for (const auto& seg : path.segments) {
    detail::SegmentSystem sys{eval, seg};
    if (opt.fixed_steps > 0) {
      detail::integrate_segment_fixed(sys, res.matrix, res.steps, res.est_error, opt.fixed_steps);
    } else {
      detail::integrate_segment(sys, res.matrix, res.steps, res.est_error, opt);
    }
  }
  res.det_drift = det_drift(res.matrix);
  return res;
}

inline HolonomyResult transport(const ConnectionFamily& family, const PathSpec& path,
                                double tol = 1e-12) {
  TransportOptions opt;
  opt.rtol = opt.atol = tol;
  return transport(family, path, opt);
}

enum class Level { base, doubled };

/// Holonomy matrices of the straight generator loops based at q = 0:
/// {alpha, beta} on the base torus, {alphahat, betahat} on the 4:1 cover.
inline Representation holonomy_generators(const ConnectionFamily& family, Level level,
                                          const TransportOptions& opt = {}) {
  Representation rep;
  if (level == Level::base) {
    rep.add("alpha", transport(family, loop_alpha(), opt).matrix);
    rep.add("beta", transport(family, loop_beta(), opt).matrix);
  } else {
    rep.add("alphahat", transport(family, loop_alpha_hat(), opt).matrix);
    rep.add("betahat", transport(family, loop_beta_hat(), opt).matrix);
  }
  return rep;
}

/// Operator-norm distance of the two holonomies; small values certify
/// flatness plus integration accuracy for homotopic inputs.
inline double homotopy_check(const ConnectionFamily& family, const PathSpec& path1,
                             const PathSpec& path2, const TransportOptions& opt = {}) {
  const Matrix2 m1 = transport(family, path1, opt).matrix;
  const Matrix2 m2 = transport(family, path2, opt).matrix;
  return operator_norm(m1 - m2);
}

}  // namespace torushol
