#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace torushol {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cplx kI{0.0, 1.0};

/// 2x2 complex matrix, row-major entries [[a, b], [c, d]].
struct Matrix2 {
  cplx a{0.0}, b{0.0}, c{0.0}, d{0.0};

  static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Matrix2 zero() { return {}; }
  static Matrix2 diagonal(cplx p, cplx q) { return {p, 0.0, 0.0, q}; }

  cplx trace() const { return a + d; }
  cplx det() const { return a * d - b * c; }

  Matrix2 operator+(const Matrix2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Matrix2 operator-(const Matrix2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Matrix2 operator*(const Matrix2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Matrix2 operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
  Matrix2 operator-() const { return {-a, -b, -c, -d}; }

  /// General inverse (adjugate over determinant).
  Matrix2 inverse() const {
    const cplx dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  Matrix2 conjugate() const { return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)}; }
  Matrix2 transpose() const { return {a, c, b, d}; }
  Matrix2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

  double max_abs() const {
    return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
  }

  std::array<cplx, 4> row_major() const { return {a, b, c, d}; }
};

inline Matrix2 operator*(cplx s, const Matrix2& m) { return m * s; }

inline double frobenius_norm(const Matrix2& m) {
  return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

/// Largest singular value, from the closed-form eigenvalues of m^H m.
inline double operator_norm(const Matrix2& m) {
  const double p = std::norm(m.a) + std::norm(m.c);
  const double r = std::norm(m.b) + std::norm(m.d);
  const cplx q = std::conj(m.a) * m.b + std::conj(m.c) * m.d;
  const double disc = std::sqrt((p - r) * (p - r) + 4.0 * std::norm(q));
  const double lam_max = 0.5 * ((p + r) + disc);
  return std::sqrt(std::max(lam_max, 0.0));
}

/// Both eigenvalues; for unimodular input these are lambda and 1/lambda.
inline std::array<cplx, 2> eigenvalues(const Matrix2& m) {
  const cplx t = m.trace();
  const cplx s = std::sqrt(t * t - 4.0 * m.det());
  return {0.5 * (t + s), 0.5 * (t - s)};
}

inline double det_drift(const Matrix2& m) { return std::abs(m.det() - 1.0); }

inline double distance(const Matrix2& x, const Matrix2& y) { return operator_norm(x - y); }

inline Matrix2 pow_int(Matrix2 m, int n) {
  if (n < 0) {
    m = m.inverse();
    n = -n;
  }
  Matrix2 acc = Matrix2::identity();
  while (n > 0) {
    if (n & 1) acc = acc * m;
    m = m * m;
    n >>= 1;
  }
  return acc;
}

}  // namespace torushol
