#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "torushol/character.hpp"
#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"
#include "torushol/representation.hpp"
#include "torushol/word.hpp"

namespace torushol {

// Base alphabet {alpha, beta} and cover alphabet {ahat, bhat, c1, c2, c3}.
inline const std::vector<std::string>& base_alphabet() {
  static const std::vector<std::string> names{"alpha", "beta"};
  return names;
}

inline const std::vector<std::string>& cover_alphabet() {
  static const std::vector<std::string> names{"ahat", "bhat", "c1", "c2", "c3"};
  return names;
}

/// The four puncture loops of the 4:1 cover, based at q = 0, as words in the
/// base generators. c2, c3, c4 are the conjugates of c1 by the coset
/// representatives alpha, beta*alpha, alpha^-1*beta*alpha respectively.
struct PuncturedTorusPresentation {
  FreeWord c1, c2, c3, c4;

  static PuncturedTorusPresentation standard() {
    PuncturedTorusPresentation p;
    p.c1 = parse_word("beta'.alpha'.beta.alpha", base_alphabet());
    p.c2 = parse_word("alpha.beta'.alpha'.beta", base_alphabet());
    p.c3 = parse_word("beta.alpha.beta'.alpha'", base_alphabet());
    p.c4 = parse_word("alpha'.beta.alpha.beta'", base_alphabet());
    return p;
  }

  std::array<FreeWord, 4> all() const { return {c1, c2, c3, c4}; }
};

/// Images of the cover generators {ahat, bhat, c1, c2, c3} inside the base
/// free group on {alpha, beta}.
inline const std::vector<FreeWord>& cover_generator_images() {
  static const std::vector<FreeWord> images = [] {
    const auto pres = PuncturedTorusPresentation::standard();
    std::vector<FreeWord> v;
    v.push_back(parse_word("alpha.alpha", base_alphabet()));
    v.push_back(parse_word("beta.beta", base_alphabet()));
    v.push_back(pres.c1);
    v.push_back(pres.c2);
    v.push_back(pres.c3);
    return v;
  }();
  return images;
}

/// c4 rewritten in the free generators of the cover group; substituting the
/// images above reproduces the printed base word exactly. This is the surface
/// relation in the chosen presentation.
inline FreeWord c4_in_cover_generators() {
  return parse_word("ahat'.c3'.bhat.c2'.ahat.c1'.bhat'", cover_alphabet());
}

/// Evaluates the four puncture words on a base representation.
inline std::array<Matrix2, 4> puncture_monodromies(const Representation& rep) {
  const auto pres = PuncturedTorusPresentation::standard();
  return {rep.evaluate(pres.c1), rep.evaluate(pres.c2), rep.evaluate(pres.c3),
          rep.evaluate(pres.c4)};
}

struct DoubleCoverGenerators {
  Representation rep;        // over {ahat, bhat}
  bool sign_ambiguous{true};  // the curve-level identification may flip signs
};

/// h(alpha)^2, h(beta)^2: monodromies along the doubled straight loops.
inline DoubleCoverGenerators double_cover_generators(const Representation& base) {
  DoubleCoverGenerators out;
  const Matrix2& a = base.of("alpha");
  const Matrix2& b = base.of("beta");
  out.rep.add("ahat", a * a);
  out.rep.add("bhat", b * b);
  return out;
}

/// Full 5-generator representation of the 4-punctured cover induced from a
/// base representation.
inline Representation cover_representation(const Representation& base) {
  const auto pres = PuncturedTorusPresentation::standard();
  const Matrix2& a = base.of("alpha");
  const Matrix2& b = base.of("beta");
  Representation rep;
  rep.add("ahat", a * a);
  rep.add("bhat", b * b);
  rep.add("c1", base.evaluate(pres.c1));
  rep.add("c2", base.evaluate(pres.c2));
  rep.add("c3", base.evaluate(pres.c3));
  return rep;
}

/// Z/p character of the cover group determining the cyclic p-fold covering:
/// 0 on ahat, bhat and +1, -1, +1 on c1, c2, c3 (additively); the derived
/// value on c4 is -1 and the four puncture values sum to zero.
struct CyclicCharacter {
  int p{3};
  std::array<int, 5> weights{0, 0, 1, -1, 1};

  static CyclicCharacter standard(int p) {
    CyclicCharacter c;
    c.p = p;
    return c;
  }

  int value(const FreeWord& w) const {
    const long s = w.character_sum(std::vector<int>(weights.begin(), weights.end()));
    return static_cast<int>(((s % p) + p) % p);
  }

  int c4_value() const {
    const long s = -(weights[2] + weights[3] + weights[4]);
    return static_cast<int>(((s % p) + p) % p);
  }

  void validate() const {
    if (p < 1 || p % 2 == 0) throw InvalidCharacter("CyclicCharacter: modulus must be odd");
    if (weights[0] != 0 || weights[1] != 0) {
      throw InvalidCharacter("CyclicCharacter: ahat, bhat must map to zero");
    }
    const auto mod = [&](int v) { return ((v % p) + p) % p; };
    if (mod(weights[2]) != mod(1) || mod(weights[3]) != mod(-1) || mod(weights[4]) != mod(1)) {
      throw InvalidCharacter("CyclicCharacter: puncture values must be +1, -1, +1");
    }
    if (mod(weights[2] + weights[3] + weights[4] + c4_value()) != 0) {
      throw InvalidCharacter("CyclicCharacter: puncture values do not sum to zero");
    }
  }
};

struct SchreierGenerators {
  std::vector<FreeWord> words;  // over the cover alphabet, freely reduced
  std::string transversal;      // human-readable description
};

/// Schreier generators of the kernel of the character, with transversal
/// {c1^j : 0 <= j < p}. Rank is 1 + p(5-1); every word lies in the kernel by
/// construction (exact integer arithmetic).
inline SchreierGenerators reidemeister_schreier(const CyclicCharacter& chi) {
  chi.validate();
  const int p = chi.p;
  const int c1_index = 2;
  SchreierGenerators out;
  out.transversal = "powers c1^j, j = 0.." + std::to_string(p - 1);
  const auto coset_rep = [&](int j) { return FreeWord::generator(c1_index, 1).pow(j); };
  for (int j = 0; j < p; ++j) {
    const FreeWord tj = coset_rep(j);
    for (int g = 0; g < 5; ++g) {
      const int target = ((j + chi.weights[static_cast<std::size_t>(g)]) % p + p) % p;
      FreeWord w = tj * FreeWord::generator(g, 1) * coset_rep(target).inverse();
      if (!w.empty()) out.words.push_back(std::move(w));
    }
  }
  return out;
}

/// Sign character on the subgroup generators.
struct SpinTwist {
  std::vector<int> signs;  // +-1 per generator, aligned with the word list

  bool squares_trivial() const {
    for (int s : signs) {
      if (s * s != 1) return false;
    }
    return true;
  }
};

struct SubgroupReport {
  int p{0};
  SpinTwist twist;
  double max_central_deviation{0.0};   // distance of each evaluation from +-Id
  double max_twisted_deviation{0.0};   // distance of sign-corrected evaluation from Id
  double max_product_deviation{0.0};   // homomorphism spot check on generator products
  std::size_t words{0};
};

/// Evaluates a base representation on subgroup words (given over the cover
/// alphabet); each must land on +-Id. The observed signs define the sign
/// character that trivializes the evaluation. Intended for the unitary
/// reducible representation at rho = 1/(2p).
inline SubgroupReport twisted_subgroup_evaluation(const Representation& base,
                                                  const std::vector<FreeWord>& subgroup_words,
                                                  int p, double tol = 1e-8) {
  if (p % 2 == 0) throw InvalidCharacter("twisted_subgroup_evaluation: p must be odd");
  if (p < 3) {
    throw InvalidCharacter("twisted_subgroup_evaluation: p = 1 puts rho = 1/2 out of range");
  }
  SubgroupReport rpt;
  rpt.p = p;
  rpt.words = subgroup_words.size();
  const auto& images = cover_generator_images();
  const Matrix2 id = Matrix2::identity();
  std::vector<Matrix2> evals;
  for (const auto& w : subgroup_words) {
    const Matrix2 m = base.evaluate(w.substituted(images));
    const double dev_plus = operator_norm(m - id);
    const double dev_minus = operator_norm(m + id);
    if (std::min(dev_plus, dev_minus) > tol) {
      throw NotCentral("twisted_subgroup_evaluation: word '" + w.str(cover_alphabet()) +
                       "' evaluates off +-Id by " + [&]{ char b[32]; std::snprintf(b, sizeof(b), "%.3e", std::min(dev_plus, dev_minus)); return std::string(b); }());
    }
    const int sign = dev_plus <= dev_minus ? 1 : -1;
    rpt.twist.signs.push_back(sign);
    rpt.max_central_deviation = std::max(rpt.max_central_deviation, std::min(dev_plus, dev_minus));
    const Matrix2 twisted = m * cplx{static_cast<double>(sign), 0.0};
    rpt.max_twisted_deviation = std::max(rpt.max_twisted_deviation, operator_norm(twisted - id));
    evals.push_back(m);
  }
  // The subgroup is free on these words, so any sign assignment extends to a
  // homomorphism; spot-check multiplicativity on consecutive products anyway.
  for (std::size_t i = 0; i + 1 < evals.size(); ++i) {
    const Matrix2 prod = evals[i] * evals[i + 1];
    const double expected = static_cast<double>(rpt.twist.signs[i] * rpt.twist.signs[i + 1]);
    rpt.max_product_deviation =
        std::max(rpt.max_product_deviation, operator_norm(prod - expected * id));
  }
  return rpt;
}

struct SigmaTraceReport {
  cplx trace_a2{};        // trace of +h(alpha)^2; the other sign negates it
  cplx trace_b2{};
  double reality_deviation{0.0};
  cplx xy{};
  double squares_margin{0.0};
  bool irreducible{false};
};

/// Traces of the lifted generators (both sign choices differ only by sign)
/// and the reducibility verdict for the curve-level representation.
inline SigmaTraceReport sigma_trace_report(const Representation& base,
                                           double xy_threshold = 1e-6) {
  SigmaTraceReport rpt;
  const Matrix2& a = base.of("alpha");
  const Matrix2& b = base.of("beta");
  const Matrix2 a2 = a * a;
  const Matrix2 b2 = b * b;
  rpt.trace_a2 = a2.trace();
  rpt.trace_b2 = b2.trace();
  rpt.reality_deviation =
      std::max(std::abs(rpt.trace_a2.imag()) / std::max(1.0, std::abs(rpt.trace_a2)),
               std::abs(rpt.trace_b2.imag()) / std::max(1.0, std::abs(rpt.trace_b2)));
  rpt.xy = a.trace() * b.trace();
  rpt.squares_margin = irreducibility_margin(a2, b2);
  rpt.irreducible = std::abs(rpt.xy) > xy_threshold;
  return rpt;
}

}  // namespace torushol
