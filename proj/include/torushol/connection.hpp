#pragma once

#include <cmath>
#include <complex>

#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"
#include "torushol/theta.hpp"

namespace torushol {

/// Parameters (a, chi, rho) of the diagonal-plus-theta connection family on
/// the once-marked square torus, pulled back unchanged to the 4:1 cover.
/// The associated line-bundle shift is x = -chi/pi; for rho > 0 it must stay
/// off the half lattice, otherwise the off-diagonal bundles degenerate.
struct ConnectionFamily {
  cplx a{};
  cplx chi{};
  double rho{0.0};
  Lattice lattice{Lattice::base()};

  cplx theta_shift() const { return -chi / kPi; }

  void validate() const {
    if (!(rho >= 0.0 && rho < 0.5)) {
      throw Error("ConnectionFamily: rho must lie in [0, 1/2)");
    }
    if (!lattice.valid()) {
      throw Error("ConnectionFamily: invalid lattice");
    }
    if (rho > 0.0 && half_lattice_degenerate()) {
      throw DegenerateBundle("ConnectionFamily: theta shift on the half lattice with rho > 0");
    }
  }

  bool half_lattice_degenerate() const {
    return lattice_distance(2.0 * theta_shift()) < 1e-9;
  }
};

/// Matrix 1-form coefficients at a point: d + A dw + B d(conj w); both traceless.
struct CoefficientPair {
  Matrix2 A{};  // dw part
  Matrix2 B{};  // d(conj w) part
  cplx at{};
};

/// Precomputes the w-independent theta ratios of the off-diagonal forms.
/// Pure evaluation afterwards; safe to share across threads.
class CoefficientEvaluator {
 public:
  explicit CoefficientEvaluator(const ConnectionFamily& family,
                                double pole_radius = kDefaultPoleRadius)
      : family_(family), pole_radius_(pole_radius) {
    family_.validate();
    abelian_ = (family_.rho == 0.0);
    if (!abelian_) {
      const cplx x = family_.theta_shift();
      two_x_ = 2.0 * x;
      const cplx dtheta0 = theta_prime_zero();
      scale_plus_ = family_.rho * dtheta0 / theta(-two_x_).value;
      scale_minus_ = family_.rho * dtheta0 / theta(two_x_).value;
    }
  }

  const ConnectionFamily& family() const { return family_; }
  double pole_radius() const { return pole_radius_; }

  CoefficientPair operator()(cplx w) const {
    CoefficientPair out;
    out.at = w;
    out.B = Matrix2::diagonal(family_.chi, -family_.chi);
    if (abelian_) {
      out.A = Matrix2::diagonal(family_.a, -family_.a);
      return out;
    }
    // Reduce to the fundamental cell; every coefficient below is periodic
    // for the unit lattice, so this is evaluation, not approximation.
    const cplx wr{w.real() - std::floor(w.real()), w.imag() - std::floor(w.imag())};
    const cplx half{0.5, 0.5};
    if (std::abs(wr - half) < pole_radius_) {
      throw PoleProximity("coefficients: point within exclusion radius of the marked point");
    }
    // Evaluate the sections at the torus point, i.e. with argument shifted by
    // (1+i)/2 so the simple pole sits at the marked point o.
    const cplx u = wr + half;
    const cplx th_den = theta(u).value;
    const cplx th_plus = theta(u - two_x_).value;
    const cplx th_minus = theta(u + two_x_).value;
    const cplx u_anti = u - std::conj(u);
    const cplx e_plus = std::exp(-kPi * two_x_ * u_anti);
    const cplx e_minus = std::exp(kPi * two_x_ * u_anti);
    const cplx a12 = scale_plus_ * th_plus / th_den * e_plus;
    const cplx a21 = scale_minus_ * th_minus / th_den * e_minus;
    out.A = Matrix2{family_.a, a12, a21, -family_.a};
    return out;
  }

 private:
  ConnectionFamily family_;
  double pole_radius_;
  bool abelian_{true};
  cplx two_x_{};
  cplx scale_plus_{};
  cplx scale_minus_{};
};

inline CoefficientPair coefficients(const ConnectionFamily& family, cplx w,
                                    double pole_radius = kDefaultPoleRadius) {
  return CoefficientEvaluator(family, pole_radius)(w);
}

/// Coefficients of the pullback connection on C/(2Z + 2iZ). The coefficient
/// functions are already periodic for the unit lattice, so the pullback is
/// plain evaluation; the four singular points are the preimages of o.
inline CoefficientPair pullback_coefficients(const ConnectionFamily& family, cplx w,
                                             double pole_radius = kDefaultPoleRadius) {
  return coefficients(family, w, pole_radius);
}

}  // namespace torushol
