#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "torushol/character.hpp"
#include "torushol/connection.hpp"
#include "torushol/covering.hpp"
#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"
#include "torushol/representation.hpp"
#include "torushol/transport.hpp"

namespace torushol {

/// The fixed Dolbeault parameter and the seed points a_k of the real-trace
/// search: chi = pi/4 (1 - i), a_k = -pi/4 (1 + i) + k pi (1 + i).
inline cplx chi_fix() { return 0.25 * kPi * cplx{1.0, -1.0}; }
inline cplx a_seed(int k) {
  return -0.25 * kPi * cplx{1.0, 1.0} + static_cast<double>(k) * kPi * cplx{1.0, 1.0};
}

struct SolveConfig {
  double residual_tol{1e-11};
  int max_iterations{60};
  double fd_step{1e-7};
  double damping{1.0};
  std::vector<double> rho_grid{1e-3, 5e-3, 1e-2, 5e-2, 0.1, 1.0 / 6.0};
  double transport_tol{1e-12};
  double pole_radius{kDefaultPoleRadius};
  int word_depth{6};
  int k{1};

  void validate() const {
    if (residual_tol <= 0.0 || fd_step <= 0.0 || transport_tol <= 0.0) {
      throw ConfigError("SolveConfig: tolerances must be positive");
    }
    if (damping <= 0.0 || damping > 1.0) {
      throw ConfigError("SolveConfig: damping must lie in (0, 1]");
    }
    for (double r : rho_grid) {
      if (!(r > 0.0 && r < 0.5)) throw ConfigError("SolveConfig: rho grid values must lie in (0, 1/2)");
    }
  }
};

namespace detail {

/// Picks a fixed step count for the solver's transports from one adaptive
/// pilot run, so that every objective evaluation uses the same grid.
inline long calibrate_steps(const ConnectionFamily& family, const PathSpec& path,
                            const SolveConfig& cfg) {
  TransportOptions opt;
  opt.rtol = opt.atol = cfg.transport_tol;
  opt.pole_radius = cfg.pole_radius;
  const HolonomyResult pilot = transport(family, path, opt);
  const long per_segment =
      pilot.steps / std::max<long>(1, static_cast<long>(path.segments.size()));
  return std::max<long>(96, per_segment + per_segment / 2);
}

struct Objective2 {
  std::array<double, 2> f{};
  cplx t1{}, t2{};
};

inline double norm_inf(const std::array<double, 2>& v) {
  return std::max(std::abs(v[0]), std::abs(v[1]));
}

}  // namespace detail

struct RealSolveResult {
  cplx a{};
  double residual{0.0};
  int iterations{0};
  double jacobian_cond{0.0};
  cplx T1{}, T2{};
  long fixed_steps{0};
};

/// Newton iteration on (s, t) -> (Im T1, Im T2)(a_k + s + i t), where T1, T2
/// are the transported traces along the doubled straight loops. Converges to
/// the parameter with real monodromy traces near a_k; the converged traces
/// must satisfy Re T1 < -2 and Re T2 < -2.
inline RealSolveResult find_real_parameter(cplx chi, double rho, int k, const SolveConfig& cfg,
                                           const cplx* seed_override = nullptr) {
  cfg.validate();
  if (k == 0) throw Error("find_real_parameter: k must be nonzero");
  if (!(rho >= 0.0 && rho < 0.5)) throw Error("find_real_parameter: rho out of range");

  const cplx seed = seed_override ? *seed_override : a_seed(k);
  ConnectionFamily family{seed, chi, rho, Lattice::doubled()};
  family.validate();

  TransportOptions opt;
  opt.pole_radius = cfg.pole_radius;
  opt.rtol = opt.atol = cfg.transport_tol;
  const PathSpec pa = loop_alpha_hat();
  const PathSpec pb = loop_beta_hat();
  opt.fixed_steps = detail::calibrate_steps(family, pa, cfg);

  const auto eval = [&](cplx a) {
    ConnectionFamily fam{a, chi, rho, Lattice::doubled()};
    detail::Objective2 obj;
    obj.t1 = transport(fam, pa, opt).matrix.trace();
    obj.t2 = transport(fam, pb, opt).matrix.trace();
    obj.f = {obj.t1.imag(), obj.t2.imag()};
    return obj;
  };

  cplx a = seed;
  detail::Objective2 cur = eval(a);
  double residual = detail::norm_inf(cur.f);
  double cond = 0.0;
  int it = 0;
  for (; it < cfg.max_iterations && residual >= cfg.residual_tol; ++it) {
    const double h = cfg.fd_step;
    const detail::Objective2 fplus_s = eval(a + h);
    const detail::Objective2 fminus_s = eval(a - h);
    const detail::Objective2 fplus_t = eval(a + h * kI);
    const detail::Objective2 fminus_t = eval(a - h * kI);
    const double j11 = (fplus_s.f[0] - fminus_s.f[0]) / (2 * h);
    const double j21 = (fplus_s.f[1] - fminus_s.f[1]) / (2 * h);
    const double j12 = (fplus_t.f[0] - fminus_t.f[0]) / (2 * h);
    const double j22 = (fplus_t.f[1] - fminus_t.f[1]) / (2 * h);
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-300) {
      throw NoConvergence("find_real_parameter: singular Jacobian at iteration " +
                          std::to_string(it));
    }
    // condition number of the 2x2 Jacobian
    const double p = j11 * j11 + j21 * j21;
    const double r = j12 * j12 + j22 * j22;
    const double q = j11 * j12 + j21 * j22;
    const double disc = std::sqrt(std::max((p - r) * (p - r) + 4.0 * q * q, 0.0));
    const double smax = std::sqrt(0.5 * (p + r + disc));
    const double smin = std::sqrt(std::max(0.5 * (p + r - disc), 1e-300));
    cond = smax / smin;

    const double ds = (-cur.f[0] * j22 + cur.f[1] * j12) / det;
    const double dt = (-cur.f[1] * j11 + cur.f[0] * j21) / det;
    double lambda = cfg.damping;
    bool accepted = false;
    for (int cut = 0; cut < 14; ++cut) {
      const cplx trial = a + lambda * cplx{ds, dt};
      const detail::Objective2 fres = eval(trial);
      const double rn = detail::norm_inf(fres.f);
      if (rn < residual * (1.0 - 0.25 * lambda) || rn < cfg.residual_tol) {
        a = trial;
        cur = fres;
        residual = rn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      throw NoConvergence("find_real_parameter: line search stalled at iteration " +
                          std::to_string(it) + ", residual " + detail::fmt_sci(residual));
    }
  }
  if (residual >= cfg.residual_tol) {
    throw NoConvergence("find_real_parameter: residual " + detail::fmt_sci(residual) + " after " +
                        std::to_string(it) + " iterations");
  }
  if (!(cur.t1.real() < -2.0) || !(cur.t2.real() < -2.0)) {
    throw HyperbolicityViolated("find_real_parameter: converged traces not below -2 (T1 = " +
                                detail::fmt_sci(cur.t1.real()) + ", T2 = " +
                                detail::fmt_sci(cur.t2.real()) + ")");
  }
  return {a, residual, it, cond, cur.t1, cur.t2, opt.fixed_steps};
}

struct UnitarySolveResult {
  cplx a{};
  cplx x{}, y{}, z{};
  double residual{0.0};  // max(|x|, |y|)
  int iterations{0};
  double z_deviation{0.0};  // |z - 2 cos(pi rho)|
  double unitarity_after_conjugation{0.0};
  long fixed_steps{0};
};

/// Gauss-Newton search (with Levenberg damping) for the parameter a at which
/// the base-torus generator traces x, y both vanish; the overdetermined
/// 4-equation system has an exact root at the unitarizing parameter. At
/// rho = 0 the root is a = -conj(chi) in closed form.
inline UnitarySolveResult find_unitary_parameter(cplx chi, double rho, const SolveConfig& cfg) {
  cfg.validate();
  if (!(rho >= 0.0 && rho < 0.5)) throw Error("find_unitary_parameter: rho out of range");

  const cplx seed = -std::conj(chi);
  ConnectionFamily family{seed, chi, rho, Lattice::base()};
  family.validate();

  TransportOptions opt;
  opt.pole_radius = cfg.pole_radius;
  opt.rtol = opt.atol = cfg.transport_tol;
  const PathSpec pa = loop_alpha();
  const PathSpec pb = loop_beta();
  opt.fixed_steps = detail::calibrate_steps(family, pa, cfg);

  struct Eval {
    std::array<double, 4> r;
    cplx x, y;
    Matrix2 ma, mb;
  };
  const auto eval = [&](cplx a) {
    ConnectionFamily fam{a, chi, rho, Lattice::base()};
    Eval e;
    e.ma = transport(fam, pa, opt).matrix;
    e.mb = transport(fam, pb, opt).matrix;
    e.x = e.ma.trace();
    e.y = e.mb.trace();
    e.r = {e.x.real(), e.x.imag(), e.y.real(), e.y.imag()};
    return e;
  };
  const auto sq_norm = [](const std::array<double, 4>& r) {
    return r[0] * r[0] + r[1] * r[1] + r[2] * r[2] + r[3] * r[3];
  };

  cplx a = seed;
  Eval cur = eval(a);
  double lm = 1e-4;
  int it = 0;
  const auto converged = [&](const Eval& e) {
    return std::max(std::abs(e.x), std::abs(e.y)) < 1e-8;
  };
  for (; it < cfg.max_iterations && !converged(cur); ++it) {
    const double h = cfg.fd_step;
    const Eval ps = eval(a + h);
    const Eval ms = eval(a - h);
    const Eval pt = eval(a + h * kI);
    const Eval mt = eval(a - h * kI);
    double J[4][2];
    for (int i = 0; i < 4; ++i) {
      J[i][0] = (ps.r[i] - ms.r[i]) / (2 * h);
      J[i][1] = (pt.r[i] - mt.r[i]) / (2 * h);
    }
    // normal equations with Levenberg damping
    double g11 = 0, g12 = 0, g22 = 0, b1 = 0, b2 = 0;
    for (int i = 0; i < 4; ++i) {
      g11 += J[i][0] * J[i][0];
      g12 += J[i][0] * J[i][1];
      g22 += J[i][1] * J[i][1];
      b1 -= J[i][0] * cur.r[i];
      b2 -= J[i][1] * cur.r[i];
    }
    bool accepted = false;
    for (int tries = 0; tries < 16; ++tries) {
      const double m11 = g11 + lm * g11, m22 = g22 + lm * g22, m12 = g12;
      const double det = m11 * m22 - m12 * m12;
      if (std::abs(det) < 1e-300) {
        lm *= 10.0;
        continue;
      }
      const double ds = (b1 * m22 - b2 * m12) / det;
      const double dt = (b2 * m11 - b1 * m12) / det;
      const Eval trial = eval(a + cplx{ds, dt});
      if (sq_norm(trial.r) < sq_norm(cur.r) || converged(trial)) {
        a += cplx{ds, dt};
        cur = trial;
        lm = std::max(lm / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lm *= 10.0;
    }
    if (!accepted) {
      throw NoConvergence("find_unitary_parameter: damping stalled at iteration " +
                          std::to_string(it) + ", |x| = " + detail::fmt_sci(std::abs(cur.x)) +
                          ", |y| = " + detail::fmt_sci(std::abs(cur.y)));
    }
  }
  if (!converged(cur)) {
    throw NoConvergence("find_unitary_parameter: no convergence after " + std::to_string(it) +
                        " iterations");
  }

  UnitarySolveResult res;
  res.a = a;
  res.x = cur.x;
  res.y = cur.y;
  res.z = (cur.mb * cur.ma).trace();
  res.residual = std::max(std::abs(cur.x), std::abs(cur.y));
  res.iterations = it;
  res.z_deviation = std::abs(res.z - 2.0 * std::cos(kPi * rho));
  res.fixed_steps = opt.fixed_steps;
  if (rho > 0.0) {
    Representation base;
    base.add("alpha", cur.ma);
    base.add("beta", cur.mb);
    const RealizationCertificate rc = realize_real(base, 1e-6, cfg.word_depth);
    if (rc.branch == RealizationBranch::unitary_form) {
      res.unitarity_after_conjugation = rc.residual;
    } else {
      res.unitarity_after_conjugation = 0.0;  // already real: defect not applicable
    }
  }
  return res;
}

struct ContinuationPoint {
  double rho{0.0};
  cplx a{};
  bool converged{false};
  bool certified{false};
  double residual{0.0};
  std::string note;
};

struct ContinuationResult {
  std::vector<ContinuationPoint> points;
  double frontier{0.0};  // largest rho with full certification
};

/// Walks the rho grid, warm-starting each solve from the previous solution,
/// and reports the empirical convergence frontier.
inline ContinuationResult continuation(cplx chi, int k, const std::vector<double>& grid,
                                       const SolveConfig& cfg) {
  ContinuationResult out;
  cplx seed = a_seed(k);
  for (double rho : grid) {
    ContinuationPoint pt;
    pt.rho = rho;
    try {
      const RealSolveResult sol = find_real_parameter(chi, rho, k, cfg, &seed);
      pt.a = sol.a;
      pt.converged = true;
      pt.residual = sol.residual;
      seed = sol.a;
      // certification: Fricke residual of the base traces at the solved point
      ConnectionFamily fam{sol.a, chi, rho, Lattice::base()};
      TransportOptions opt;
      opt.rtol = opt.atol = cfg.transport_tol;
      opt.pole_radius = cfg.pole_radius;
      const Representation base = holonomy_generators(fam, Level::base, opt);
      const TraceCoordinates tc = trace_coordinates(base, rho);
      const double fr = fricke_residual(tc);
      const double margin = squares_reducible(base).margin;
      if (fr < 1e-8 && margin > kMarginTolerance) {
        pt.certified = true;
        out.frontier = std::max(out.frontier, rho);
      } else {
        pt.note = "fricke " + detail::fmt_sci(fr) + ", margin " + detail::fmt_sci(margin);
      }
    } catch (const Error& e) {
      pt.note = e.what();
    }
    out.points.push_back(pt);
  }
  return out;
}

struct MainCertificate {
  int p{0};
  double rho{0.0};
  int k{1};
  cplx chi{}, a_solved{};
  RealSolveResult solve;
  cplx x{}, y{}, z{};
  double fricke{0.0};
  double squares_margin{0.0};
  RealityAudit reality;
  RealizationCertificate realization;
  CyclicCharacter character;
  SchreierGenerators schreier;
  SubgroupReport subgroup;
  SigmaTraceReport sigma;
  std::array<Matrix2, 4> punctures{};
  double puncture_eig_deviation{0.0};
  Representation base;       // transported alpha, beta
  Representation cover;      // ahat..c3 built from the base matrices
  double ahat_consistency{0.0};
  double det_drift_max{0.0};
  SolveConfig config;
};

/// Deviation of the eigenvalue multiset of m from {exp(2 pi i rho), exp(-2 pi i rho)}.
inline double puncture_eigenvalue_deviation(const Matrix2& m, double rho) {
  const auto eig = eigenvalues(m);
  const cplx lp = std::exp(cplx{0.0, 2.0 * kPi * rho});
  const cplx lm = std::exp(cplx{0.0, -2.0 * kPi * rho});
  const double straight = std::max(std::abs(eig[0] - lp), std::abs(eig[1] - lm));
  const double swapped = std::max(std::abs(eig[0] - lm), std::abs(eig[1] - lp));
  return std::min(straight, swapped);
}

/// End-to-end pipeline behind `certify-main`: solve for the real-monodromy
/// parameter at rho = 1/(2p), audit the trace data, realize the cover
/// representation in SL(2,R), and run the covering-space checks against the
/// unitary reference representation. Any stage failure aborts with the stage
/// name in the message.
inline MainCertificate certify_main(int p, const SolveConfig& cfg) {
  if (p < 3 || p % 2 == 0) {
    throw Error("certify-main: p must be an odd integer >= 3");
  }
  MainCertificate cert;
  cert.p = p;
  cert.rho = 1.0 / (2.0 * p);
  cert.k = cfg.k;
  cert.chi = chi_fix();
  cert.config = cfg;

  // stage: real-parameter solve
  cert.solve = find_real_parameter(cert.chi, cert.rho, cfg.k, cfg);
  cert.a_solved = cert.solve.a;

  // stage: transported generators
  ConnectionFamily fam{cert.a_solved, cert.chi, cert.rho, Lattice::doubled()};
  TransportOptions opt;
  opt.rtol = opt.atol = cfg.transport_tol;
  opt.pole_radius = cfg.pole_radius;
  HolonomyResult ha = transport(fam, loop_alpha(), opt);
  HolonomyResult hb = transport(fam, loop_beta(), opt);
  HolonomyResult hahat = transport(fam, loop_alpha_hat(), opt);
  cert.det_drift_max = std::max({ha.det_drift, hb.det_drift, hahat.det_drift});
  if (cert.det_drift_max > 1e-9) {
    throw Error("certify-main stage transport: det drift " + detail::fmt_sci(cert.det_drift_max));
  }
  cert.base.add("alpha", ha.matrix);
  cert.base.add("beta", hb.matrix);
  cert.ahat_consistency = operator_norm(hahat.matrix - ha.matrix * ha.matrix);
  if (cert.ahat_consistency > 1e-7) {
    throw Error("certify-main stage transport: doubled loop disagrees with squared generator by " +
                detail::fmt_sci(cert.ahat_consistency));
  }

  // stage: trace audit
  const TraceCoordinates tc = trace_coordinates(cert.base, cert.rho);
  cert.x = tc.x;
  cert.y = tc.y;
  cert.z = tc.z;
  cert.fricke = fricke_residual(tc);
  if (cert.fricke > 1e-8) {
    throw Error("certify-main stage fricke: residual " + detail::fmt_sci(cert.fricke));
  }
  const SquaresReport sq = squares_reducible(cert.base);
  cert.squares_margin = sq.margin;
  if (sq.reducible || sq.margin < 1e-4) {
    throw Error("certify-main stage irreducibility: squares margin " + detail::fmt_sci(sq.margin));
  }

  // stage: cover representation and reality audit
  cert.cover = cover_representation(cert.base);
  cert.reality = audit_trace_reality(cert.cover, cfg.word_depth);
  if (cert.reality.worst > 1e-6) {
    throw Error("certify-main stage reality: word '" + cert.reality.worst_word +
                "' imaginary trace " + detail::fmt_sci(cert.reality.worst));
  }

  // stage: SL(2,R) realization
  cert.realization = realize_real(cert.cover, 1e-6, cfg.word_depth);
  if (cert.realization.branch != RealizationBranch::real_form) {
    throw Error("certify-main stage realization: expected the real branch");
  }
  if (cert.realization.residual > 1e-6) {
    throw Error("certify-main stage realization: residual " +
                detail::fmt_sci(cert.realization.residual));
  }

  // stage: puncture monodromies
  cert.punctures = puncture_monodromies(cert.base);
  double dev = 0.0;
  for (const auto& m : cert.punctures) {
    dev = std::max(dev, puncture_eigenvalue_deviation(m, cert.rho));
  }
  cert.puncture_eig_deviation = dev;
  if (dev > 1e-6) {
    throw Error("certify-main stage punctures: eigenvalue deviation " + detail::fmt_sci(dev));
  }

  // stage: covering checks against the unitary reference
  cert.character = CyclicCharacter::standard(p);
  cert.schreier = reidemeister_schreier(cert.character);
  const Representation unitary_ref = standard_rep(0.0, 0.0, 2.0 * std::cos(kPi * cert.rho));
  cert.subgroup = twisted_subgroup_evaluation(unitary_ref, cert.schreier.words, p);
  cert.sigma = sigma_trace_report(cert.base);
  if (!cert.sigma.irreducible) {
    throw Error("certify-main stage sigma: lifted representation not irreducible");
  }
  return cert;
}

}  // namespace torushol
