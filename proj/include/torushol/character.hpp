#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"
#include "torushol/representation.hpp"
#include "torushol/svd.hpp"
#include "torushol/word.hpp"

namespace torushol {

inline constexpr double kMarginTolerance = 1e-9;

/// Trace coordinates of a once-punctured-torus representation:
/// x = tr h(alpha), y = tr h(beta), z = tr h(beta alpha).
struct TraceCoordinates {
  cplx x{}, y{}, z{};
  double rho{0.0};
};

inline double fricke_residual(cplx x, cplx y, cplx z, double rho) {
  return std::abs(x * x + y * y + z * z - x * y * z - 2.0 - 2.0 * std::cos(2.0 * kPi * rho));
}

inline double fricke_residual(const TraceCoordinates& tc) {
  return fricke_residual(tc.x, tc.y, tc.z, tc.rho);
}

inline TraceCoordinates trace_coordinates(const Representation& rep, double rho) {
  const Matrix2& a = rep.of("alpha");
  const Matrix2& b = rep.of("beta");
  return {a.trace(), b.trace(), (b * a).trace(), rho};
}

/// Root of zeta^2 - z zeta + 1 = 0 with |zeta| > 1, ties broken toward
/// nonnegative imaginary part.
inline cplx select_zeta(cplx z) {
  const cplx r = std::sqrt(z * z - 4.0);
  const cplx z1 = 0.5 * (z + r);
  const cplx z2 = 0.5 * (z - r);
  const double m1 = std::abs(z1), m2 = std::abs(z2);
  if (m1 > m2 * (1.0 + 1e-12)) return z1;
  if (m2 > m1 * (1.0 + 1e-12)) return z2;
  if (z1.imag() >= 0.0) return z1;
  return z2;
}

/// The normal form of a representation with given trace coordinates:
///   h(alpha) = [[x, 1], [-1, 0]],   h(beta) = [[0, -zeta], [1/zeta, y]]
/// with zeta + 1/zeta = z.
inline Representation standard_rep(cplx x, cplx y, cplx z) {
  const cplx zeta = select_zeta(z);
  Representation rep;
  rep.add("alpha", Matrix2{x, 1.0, -1.0, 0.0});
  rep.add("beta", Matrix2{0.0, -zeta, 1.0 / zeta, y});
  return rep;
}

inline cplx trace_word(const Representation& rep, const FreeWord& w) {
  return rep.evaluate(w).trace();
}

/// |det(AB - BA)|: zero exactly when the pair has a common invariant line.
inline double irreducibility_margin(const Matrix2& a, const Matrix2& b) {
  return std::abs((a * b - b * a).det());
}

/// Largest pairwise margin across the generators of a representation.
inline double representation_margin(const Representation& rep) {
  double best = 0.0;
  for (std::size_t i = 0; i < rep.size(); ++i) {
    for (std::size_t j = i + 1; j < rep.size(); ++j) {
      best = std::max(best, irreducibility_margin(rep.of(static_cast<int>(i)),
                                                  rep.of(static_cast<int>(j))));
    }
  }
  return best;
}

struct SquaresReport {
  double margin{0.0};
  cplx xy{};
  bool reducible{false};
};

/// Reducibility of the pair (h(alpha)^2, h(beta)^2). The margin satisfies the
/// algebraic identity det(XY - YX) = -(xy)^2 (x^2 + y^2 + z^2 - xyz - 4),
/// which doubles as an internal consistency check between the matrix margin
/// and the trace predicate xy = 0.
inline SquaresReport squares_reducible(const Representation& rep,
                                       double margin_tol = kMarginTolerance) {
  // Renormalize the determinants first: for large entries the identity below
  // degrades like |A|^2 |B|^2 |det - 1| otherwise.
  const Matrix2 a = rep.of("alpha") * (1.0 / std::sqrt(rep.of("alpha").det()));
  const Matrix2 b = rep.of("beta") * (1.0 / std::sqrt(rep.of("beta").det()));
  const Matrix2 x2 = a * a;
  const Matrix2 y2 = b * b;
  SquaresReport rpt;
  rpt.margin = irreducibility_margin(x2, y2);
  const cplx x = a.trace();
  const cplx y = b.trace();
  const cplx z = (b * a).trace();
  rpt.xy = x * y;
  const double expected = std::norm(rpt.xy) * std::abs(x * x + y * y + z * z - x * y * z - 4.0);
  const double scale = std::max({1.0, rpt.margin, expected, std::norm(rpt.xy) * 1e-8});
  if (std::abs(rpt.margin - expected) > 1e-6 * scale) {
    throw Inconsistent("squares_reducible: margin disagrees with the trace predicate");
  }
  rpt.reducible = rpt.margin < margin_tol;
  return rpt;
}

/// Visits every freely reduced word of length 1..depth over the generators of
/// rep (with inverses), carrying the running matrix product and the largest
/// entry magnitude seen among the prefix products (the conditioning scale of
/// the evaluation).
inline void for_each_reduced_word(
    const Representation& rep, int depth,
    const std::function<void(const FreeWord&, const Matrix2&, double)>& visit) {
  const int n = static_cast<int>(rep.size());
  std::vector<Matrix2> inv(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) inv[static_cast<std::size_t>(g)] = rep.of(g).inverse();
  FreeWord word;
  std::vector<Matrix2> stack{Matrix2::identity()};
  std::vector<double> scale{1.0};
  std::function<void(int, int, int)> rec = [&](int level, int last_gen, int last_exp) {
    if (level == depth) return;
    for (int g = 0; g < n; ++g) {
      for (int e : {1, -1}) {
        if (g == last_gen && e == -last_exp) continue;  // stay reduced
        const Matrix2& m = e == 1 ? rep.of(g) : inv[static_cast<std::size_t>(g)];
        stack.push_back(stack.back() * m);
        scale.push_back(std::max(scale.back(), stack.back().max_abs()));
        word.push(g, e);
        visit(word, stack.back(), scale.back());
        rec(level + 1, g, e);
        stack.pop_back();
        scale.pop_back();
        word.push(g, -e);  // cancels the letter just added
      }
    }
  };
  rec(0, -1, 0);
}

struct RealityAudit {
  double worst{0.0};  // max |Im tr| / max(1, prefix-product entry scale)
  std::string worst_word;
  long words{0};
};

/// Reality of all word traces up to the given depth. The imaginary part is
/// measured against the largest entry magnitude of the prefix products: a
/// depth-6 word here can pass through intermediates around 1e13 on its way to
/// an order-one trace, and no fixed-precision evaluation determines such a
/// trace more tightly than eps times that scale.
inline RealityAudit audit_trace_reality(const Representation& rep, int depth) {
  RealityAudit audit;
  for_each_reduced_word(rep, depth, [&](const FreeWord& w, const Matrix2& m, double scale) {
    ++audit.words;
    const cplx t = m.trace();
    const double rel = std::abs(t.imag()) / std::max(1.0, scale);
    if (rel > audit.worst) {
      audit.worst = rel;
      audit.worst_word = w.str(rep.names());
    }
  });
  return audit;
}

/// Operator-norm distance of M M^H from the identity.
inline double unitarity_defect(const Matrix2& m) {
  return operator_norm(m * m.adjoint() - Matrix2::identity());
}

enum class RealizationBranch { real_form, unitary_form };

struct RealizationCertificate {
  RealizationBranch branch{RealizationBranch::real_form};
  Matrix2 C{};  // conjugation intertwiner, conj(G) C = C G, det C = 1
  Matrix2 D{};  // realizing conjugator: D G D^-1 real (or unitary)
  Representation conjugated;
  double residual{0.0};
  double margin{0.0};
  int audit_depth{0};
  double audit_worst{0.0};
};

namespace detail {

inline std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

inline Matrix2 solve_conjugation_intertwiner(const Representation& rep, double* gap_out) {
  // conj(G) C - C G = 0, unknown C as the complex 4-vector
  // (c00, c01, c10, c11); four rows per generator.
  std::vector<std::array<cplx, 4>> rows;
  for (std::size_t g = 0; g < rep.size(); ++g) {
    const Matrix2 gc = rep.of(static_cast<int>(g)).conjugate();
    const Matrix2& gm = rep.of(static_cast<int>(g));
    // index helpers: C entries c[k][j] at position 2k + j
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        std::array<cplx, 4> row{};
        const cplx gci0 = (i == 0) ? gc.a : gc.c;
        const cplx gci1 = (i == 0) ? gc.b : gc.d;
        row[static_cast<std::size_t>(0 + j)] += gci0;      // conj(G)_{i0} C_{0j}
        row[static_cast<std::size_t>(2 + j)] += gci1;      // conj(G)_{i1} C_{1j}
        const cplx g0j = (j == 0) ? gm.a : gm.b;
        const cplx g1j = (j == 0) ? gm.c : gm.d;
        row[static_cast<std::size_t>(2 * i + 0)] -= g0j;   // -C_{i0} G_{0j}
        row[static_cast<std::size_t>(2 * i + 1)] -= g1j;   // -C_{i1} G_{1j}
        rows.push_back(row);
      }
    }
  }
  const SmallSvd svd = svd_four_columns(std::move(rows));
  const int mi = svd.min_index();
  if (gap_out) {
    *gap_out = svd.second_smallest() / std::max(svd.sigma[static_cast<std::size_t>(mi)], 1e-300);
  }
  const auto& nv = svd.v[static_cast<std::size_t>(mi)];
  return Matrix2{nv[0], nv[1], nv[2], nv[3]};
}

/// Invariant Hermitian form H with G^H H G = H for all generators, as a real
/// 4-vector (h00, h11, Re h01, Im h01).
inline Matrix2 solve_invariant_hermitian_form(const Representation& rep) {
  std::vector<std::array<cplx, 4>> rows;
  const auto entry = [](const Matrix2& m, int i, int j) -> cplx {
    return i == 0 ? (j == 0 ? m.a : m.b) : (j == 0 ? m.c : m.d);
  };
  for (std::size_t g = 0; g < rep.size(); ++g) {
    const Matrix2& gm = rep.of(static_cast<int>(g));
    const Matrix2 gh = gm.adjoint();
    // (G^H H G - H)_{ij} = sum_{k,l} Gh_{ik} H_{kl} G_{lj} - H_{ij}
    // H parametrized by u = (h00, h11, Re h01, Im h01):
    //   H00 = u0, H11 = u1, H01 = u2 + i u3, H10 = u2 - i u3.
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        std::array<cplx, 4> coeff{};
        for (int k = 0; k < 2; ++k) {
          for (int l = 0; l < 2; ++l) {
            const cplx w = entry(gh, i, k) * entry(gm, l, j);
            if (k == 0 && l == 0) coeff[0] += w;
            if (k == 1 && l == 1) coeff[1] += w;
            if (k == 0 && l == 1) { coeff[2] += w; coeff[3] += kI * w; }
            if (k == 1 && l == 0) { coeff[2] += w; coeff[3] -= kI * w; }
          }
        }
        if (i == 0 && j == 0) coeff[0] -= 1.0;
        if (i == 1 && j == 1) coeff[1] -= 1.0;
        if (i == 0 && j == 1) { coeff[2] -= 1.0; coeff[3] -= kI; }
        // split the complex equation into real and imaginary rows with real
        // unknowns: rows are real 4-vectors embedded as complex
        std::array<cplx, 4> re_row{}, im_row{};
        for (int t = 0; t < 4; ++t) {
          re_row[static_cast<std::size_t>(t)] = coeff[static_cast<std::size_t>(t)].real();
          im_row[static_cast<std::size_t>(t)] = coeff[static_cast<std::size_t>(t)].imag();
        }
        rows.push_back(re_row);
        rows.push_back(im_row);
      }
    }
  }
  const SmallSvd svd = svd_four_columns(std::move(rows));
  const auto& nv = svd.v[static_cast<std::size_t>(svd.min_index())];
  // null vector of a real system; remove any stray phase
  cplx phase = 0.0;
  double best = -1.0;
  for (const auto& c : nv) {
    if (std::abs(c) > best) {
      best = std::abs(c);
      phase = c / std::abs(c);
    }
  }
  const double u0 = (nv[0] / phase).real();
  const double u1 = (nv[1] / phase).real();
  const double u2 = (nv[2] / phase).real();
  const double u3 = (nv[3] / phase).real();
  return Matrix2{u0, cplx{u2, u3}, cplx{u2, -u3}, u1};
}

}  // namespace detail

/// Conjugates a representation with all-real word traces into SL(2,R) or
/// SU(2). Solves conj(G) C = C G across all generators, normalizes det C = 1,
/// and branches on conj(C) C = +Id or -Id. On the real branch the conjugator
/// is D = E + conj(E) C for a probe E (so conj(D) C = D); on the unitary
/// branch it is the Cholesky factor of the invariant Hermitian form.
inline RealizationCertificate realize_real(const Representation& rep, double tol = 1e-6,
                                           int word_depth = 6) {
  RealizationCertificate cert;
  cert.margin = representation_margin(rep);
  cert.audit_depth = word_depth;
  if (cert.margin < kMarginTolerance) {
    throw ReducibleInput("realize_real: generator pair margins all below threshold");
  }
  const RealityAudit audit = audit_trace_reality(rep, word_depth);
  cert.audit_worst = audit.worst;
  if (audit.worst > tol) {
    throw NotRealTraces("realize_real: word '" + audit.worst_word +
                        "' has relative imaginary trace " + detail::fmt_sci(audit.worst));
  }

  double gap = 0.0;
  Matrix2 c0 = detail::solve_conjugation_intertwiner(rep, &gap);
  if (gap < 1e3) {
    throw Inconsistent("realize_real: intertwiner null space not one-dimensional (gap " +
                       detail::fmt_sci(gap) + ")");
  }
  const cplx dc = c0.det();
  if (std::abs(dc) < 1e-12) {
    throw Inconsistent("realize_real: intertwiner is singular");
  }
  const Matrix2 C = c0 * (1.0 / std::sqrt(dc));
  cert.C = C;

  const Matrix2 s = C.conjugate() * C;
  const double lambda = 0.5 * s.trace().real();
  if (operator_norm(s - lambda * Matrix2::identity()) > 1e-6 ||
      std::abs(std::abs(lambda) - 1.0) > 1e-6) {
    throw Inconsistent("realize_real: conj(C) C is not +-Id");
  }

  if (lambda > 0.0) {
    cert.branch = RealizationBranch::real_form;
    std::mt19937 rng(0x5eed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Matrix2 D;
    bool found = false;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      const Matrix2 probe = attempt == 0
                                ? Matrix2::identity() * cplx{0.5, 0.0}
                                : Matrix2{cplx{uni(rng), uni(rng)}, cplx{uni(rng), uni(rng)},
                                          cplx{uni(rng), uni(rng)}, cplx{uni(rng), uni(rng)}};
      const Matrix2 cand = probe + probe.conjugate() * C;
      if (std::abs(cand.det()) > 1e-3) {
        D = cand * (1.0 / std::sqrt(std::abs(cand.det())));
        found = true;
      }
    }
    if (!found) throw Inconsistent("realize_real: could not find a nonsingular probe");
    cert.D = D;
    const Matrix2 dinv = D.inverse();
    double worst = 0.0;
    for (std::size_t g = 0; g < rep.size(); ++g) {
      const Matrix2 conj_g = D * rep.of(static_cast<int>(g)) * dinv;
      cert.conjugated.add(rep.names()[g], conj_g);
      const double imag_norm =
          std::max(std::max(std::abs(conj_g.a.imag()), std::abs(conj_g.b.imag())),
                   std::max(std::abs(conj_g.c.imag()), std::abs(conj_g.d.imag())));
      worst = std::max(worst, imag_norm / std::max(1.0, conj_g.max_abs()));
    }
    cert.residual = worst;
  } else {
    cert.branch = RealizationBranch::unitary_form;
    Matrix2 H = detail::solve_invariant_hermitian_form(rep);
    const double tr = (H.a + H.d).real();
    const double dt = (H.a * H.d - H.b * H.c).real();
    if (dt <= 0.0) throw Inconsistent("realize_real: invariant form is indefinite");
    if (tr < 0.0) H = -H;
    const double h00 = H.a.real();
    const cplx h01 = H.b;
    const double p11 = std::sqrt(h00);
    const double s22sq = H.d.real() - std::norm(h01) / h00;
    if (!(p11 > 0.0) || !(s22sq > 0.0)) {
      throw Inconsistent("realize_real: invariant form not positive definite");
    }
    const Matrix2 P{p11, h01 / p11, 0.0, std::sqrt(s22sq)};
    cert.D = P;
    const Matrix2 pinv = P.inverse();
    double worst = 0.0;
    for (std::size_t g = 0; g < rep.size(); ++g) {
      const Matrix2 conj_g = P * rep.of(static_cast<int>(g)) * pinv;
      cert.conjugated.add(rep.names()[g], conj_g);
      worst = std::max(worst, unitarity_defect(conj_g));
    }
    cert.residual = worst;
  }

  // conjugation must not move traces
  for (std::size_t g = 0; g < rep.size(); ++g) {
    const cplx t0 = rep.of(static_cast<int>(g)).trace();
    const cplx t1 = cert.conjugated.of(static_cast<int>(g)).trace();
    if (std::abs(t0 - t1) > 1e-8 * std::max(1.0, std::abs(t0))) {
      throw Inconsistent("realize_real: conjugation moved a generator trace");
    }
  }
  return cert;
}

}  // namespace torushol
