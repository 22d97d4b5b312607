#pragma once

#include <cmath>
#include <complex>

#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"

namespace torushol {

/// The square lattice Z + iZ, or its index-4 sublattice 2Z + 2iZ.
struct Lattice {
  cplx generator1{1.0, 0.0};
  cplx generator2{0.0, 1.0};
  int scale{1};  // 1 for the base torus, 2 for the 4:1 cover

  static Lattice base() { return {cplx{1.0, 0.0}, cplx{0.0, 1.0}, 1}; }
  static Lattice doubled() { return {cplx{1.0, 0.0}, cplx{0.0, 1.0}, 2}; }

  bool valid() const {
    const double cross = generator1.real() * generator2.imag() - generator1.imag() * generator2.real();
    return std::abs(cross) > 1e-12 && (scale == 1 || scale == 2);
  }
};

/// Distance from w to the lattice scale*(Z + iZ).
inline double lattice_distance(cplx w, int scale = 1) {
  const double s = static_cast<double>(scale);
  const double dx = w.real() / s - std::round(w.real() / s);
  const double dy = w.imag() / s - std::round(w.imag() / s);
  return s * std::hypot(dx, dy);
}

/// Distance from w to the translated lattice (1+i)/2 + Z + iZ, the singular
/// locus of the connection coefficients. The four marked points of the 4:1
/// cover are exactly the unit-lattice translates of (1+i)/2 modulo 2Z + 2iZ,
/// so the locus is the same on both tori.
inline double puncture_distance(cplx w) {
  return lattice_distance(w - cplx{0.5, 0.5}, 1);
}

inline constexpr double kDefaultPoleRadius = 0.05;
inline constexpr double kSeriesTolerance = 1e-16;

struct ThetaValue {
  cplx value{};
  cplx argument{};
  double truncation_error{0.0};
};

struct SectionValue {
  cplx value{};
  cplx shift{};     // the parameter x of t_x
  cplx argument{};  // the evaluation point w
};

/// Entire function with simple zeros exactly on Z + iZ, fixed by
///   theta(w + 1) = theta(w),
///   theta(w + i) = -theta(w) * exp(-2*pi*i*w),
/// realized as the Fourier series
///   theta(w) = sum_{k>=0} (-1)^k exp(-pi k(k+1)) (exp(-2 pi i k w) - exp(2 pi i (k+1) w))
/// normalized so the k=0 cosine pair has unit coefficient. The pairing makes
/// theta(0) evaluate to exactly zero in floating point.
inline ThetaValue theta(cplx w, double normalization = 1.0) {
  const cplx two_pi_i = 2.0 * kPi * kI;
  cplx sum = 0.0;
  double peak = 0.0;
  double tail = 0.0;
  int quiet = 0;
  for (int k = 0; k < 64; ++k) {
    const double coeff = ((k & 1) ? -1.0 : 1.0) * std::exp(-kPi * k * (k + 1.0));
    const cplx e_neg = std::exp(-two_pi_i * static_cast<double>(k) * w);
    const cplx e_pos = std::exp(two_pi_i * static_cast<double>(k + 1) * w);
    const cplx pair = coeff * (e_neg - e_pos);
    sum += pair;
    const double mag = std::abs(coeff) * (std::abs(e_neg) + std::abs(e_pos));
    peak = std::max(peak, mag);
    tail = mag;
    if (k > 0 && mag < kSeriesTolerance * std::max(peak, 1.0)) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
  }
  return {normalization * sum, w, normalization * tail};
}

/// theta'(0) from the termwise differentiated series; nonzero (simple zero).
inline cplx theta_prime_zero(double normalization = 1.0) {
  double s = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double term = ((k & 1) ? -1.0 : 1.0) * (2.0 * k + 1.0) * std::exp(-kPi * k * (k + 1.0));
    s += term;
    if (std::abs(term) < kSeriesTolerance * std::abs(s)) break;
  }
  return normalization * (-2.0 * kPi * kI) * s;
}

/// Meromorphic section value
///   t_x(w) = theta(w - x)/theta(w) * exp(-pi x (w - conj(w))),
/// doubly periodic for Z + iZ, with a simple zero at w = x and simple poles
/// on the lattice itself. The caller-facing argument w is the coordinate on
/// the right-hand side of the defining formula; the connection module shifts
/// by (1+i)/2 so that its pole sits at the marked point of the torus.
inline SectionValue t_section(cplx x_shift, cplx w, double pole_radius = kDefaultPoleRadius) {
  if (lattice_distance(w) < pole_radius) {
    throw PoleProximity("t_section: argument within exclusion radius of the pole lattice");
  }
  const cplx num = theta(w - x_shift).value;
  const cplx den = theta(w).value;
  const cplx expo = std::exp(-kPi * x_shift * (w - std::conj(w)));
  return {num / den * expo, x_shift, w};
}

}  // namespace torushol
