#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "torushol/covering.hpp"

using namespace torushol;

TEST_SUITE("covering") {
  TEST_CASE("puncture words are the printed conjugates of the base commutator") {
    const auto pres = PuncturedTorusPresentation::standard();
    const FreeWord alpha = FreeWord::generator(0);
    const FreeWord beta = FreeWord::generator(1);
    CHECK(pres.c2 == pres.c1.conjugated_by(alpha));
    CHECK(pres.c3 == pres.c2.conjugated_by(beta));
    CHECK(pres.c4 == pres.c3.conjugated_by(alpha.inverse()));
  }

  TEST_CASE("surface relation: c4 rewritten in the cover generators") {
    const auto pres = PuncturedTorusPresentation::standard();
    const FreeWord rewritten = c4_in_cover_generators().substituted(cover_generator_images());
    CHECK(rewritten == pres.c4);  // exact free-group identity
  }

  TEST_CASE("surface relation holds at matrix level") {
    for (int i = 0; i < 5; ++i) {
      Representation base;
      base.add("alpha", testutil::random_unimodular());
      base.add("beta", testutil::random_unimodular());
      const Representation cover = cover_representation(base);
      const Matrix2 via_cover = cover.evaluate(c4_in_cover_generators());
      const Matrix2 direct = base.evaluate(PuncturedTorusPresentation::standard().c4);
      CHECK(operator_norm(via_cover - direct) < 1e-10 * std::max(1.0, operator_norm(direct)));
    }
  }

  TEST_CASE("puncture monodromies of the unitary reducible representation") {
    const double rho = 1.0 / 6.0;
    const Representation rep = standard_rep(0.0, 0.0, 2.0 * std::cos(kPi * rho));
    const auto mats = puncture_monodromies(rep);
    const cplx lp = std::exp(cplx{0.0, 2.0 * kPi * rho});
    const cplx lm = std::conj(lp);
    // printed alternation: +,-,+,- in the first diagonal slot
    const cplx expected_first[4] = {lp, lm, lp, lm};
    for (int i = 0; i < 4; ++i) {
      const auto eig = eigenvalues(mats[static_cast<std::size_t>(i)]);
      const double dev = std::min(std::abs(eig[0] - expected_first[static_cast<std::size_t>(i)]),
                                  std::abs(eig[1] - expected_first[static_cast<std::size_t>(i)]));
      CHECK(dev < 1e-10);
      // diagonal in this model: check the entries directly
      CHECK(std::abs(mats[static_cast<std::size_t>(i)].a -
                     expected_first[static_cast<std::size_t>(i)]) < 1e-12);
      CHECK(std::abs(mats[static_cast<std::size_t>(i)].b) < 1e-12);
    }
  }

  TEST_CASE("puncture monodromies of the trivial representation are trivial") {
    Representation rep;
    rep.add("alpha", Matrix2::identity());
    rep.add("beta", Matrix2::identity());
    for (const auto& m : puncture_monodromies(rep)) {
      CHECK(operator_norm(m - Matrix2::identity()) == 0.0);
    }
  }

  TEST_CASE("double cover generators square to -Id on traceless input") {
    const Representation rep = standard_rep(0.0, 0.0, 2.0 * std::cos(kPi / 6.0));
    const DoubleCoverGenerators dc = double_cover_generators(rep);
    CHECK(operator_norm(dc.rep.of("ahat") + Matrix2::identity()) < 1e-12);
    CHECK(operator_norm(dc.rep.of("bhat") + Matrix2::identity()) < 1e-12);
    CHECK(dc.sign_ambiguous);
  }

  TEST_CASE("cyclic character: standard values and validation") {
    const CyclicCharacter chi = CyclicCharacter::standard(3);
    CHECK_NOTHROW(chi.validate());
    CHECK(chi.c4_value() == ((-1 % 3) + 3) % 3);
    CHECK(chi.value(c4_in_cover_generators()) == 2);  // -1 mod 3
    CyclicCharacter even = chi;
    even.p = 4;
    CHECK_THROWS_AS(even.validate(), InvalidCharacter);
    CyclicCharacter wrong = chi;
    wrong.weights[0] = 1;
    CHECK_THROWS_AS(wrong.validate(), InvalidCharacter);
  }

  TEST_CASE("reidemeister-schreier: rank formula and kernel membership") {
    for (int p : {1, 3, 5, 7}) {
      const CyclicCharacter chi = CyclicCharacter::standard(p);
      const SchreierGenerators sg = reidemeister_schreier(chi);
      CHECK(static_cast<int>(sg.words.size()) == 1 + p * 4);
      for (const auto& w : sg.words) {
        CHECK(chi.value(w) == 0);
        CHECK(!w.empty());
      }
    }
    SUBCASE("p = 1 returns the original five generators") {
      const SchreierGenerators sg = reidemeister_schreier(CyclicCharacter::standard(1));
      REQUIRE(sg.words.size() == 5);
      for (int g = 0; g < 5; ++g) {
        CHECK(sg.words[static_cast<std::size_t>(g)] == FreeWord::generator(g));
      }
    }
  }

  TEST_CASE("subgroup evaluation of the unitary representation at p = 3") {
    const int p = 3;
    const double rho = 1.0 / (2.0 * p);
    const Representation uref = standard_rep(0.0, 0.0, 2.0 * std::cos(kPi * rho));
    const SchreierGenerators sg = reidemeister_schreier(CyclicCharacter::standard(p));
    REQUIRE(sg.words.size() == 13);
    const SubgroupReport rpt = twisted_subgroup_evaluation(uref, sg.words, p);
    CHECK(rpt.max_central_deviation < 1e-8);
    CHECK(rpt.max_twisted_deviation < 1e-8);
    CHECK(rpt.max_product_deviation < 1e-8);
    CHECK(rpt.twist.squares_trivial());
    CHECK(rpt.twist.signs.size() == 13);
    int minus = 0;
    for (int s : rpt.twist.signs) minus += (s == -1);
    CHECK(minus == 2 * p + 3);
  }

  TEST_CASE("p-th powers of the puncture monodromies are -Id at rho = 1/(2p)") {
    for (int p : {3, 5}) {
      const double rho = 1.0 / (2.0 * p);
      const Representation rep = standard_rep(0.0, 0.0, 2.0 * std::cos(kPi * rho));
      for (const auto& m : puncture_monodromies(rep)) {
        CHECK(operator_norm(pow_int(m, p) + Matrix2::identity()) < 1e-8);
      }
    }
  }

  TEST_CASE("degenerate p = 1 is rejected by the evaluation") {
    const Representation uref = standard_rep(0.0, 0.0, 2.0);
    const SchreierGenerators sg = reidemeister_schreier(CyclicCharacter::standard(1));
    CHECK_THROWS_AS(twisted_subgroup_evaluation(uref, sg.words, 1), InvalidCharacter);
  }

  TEST_CASE("off-center evaluation raises NotCentral") {
    Representation generic;
    generic.add("alpha", standard_rep(0.9, 0.4, 1.7).of("alpha"));
    generic.add("beta", standard_rep(0.9, 0.4, 1.7).of("beta"));
    const SchreierGenerators sg = reidemeister_schreier(CyclicCharacter::standard(3));
    CHECK_THROWS_AS(twisted_subgroup_evaluation(generic, sg.words, 3), NotCentral);
  }

  TEST_CASE("sigma trace report") {
    SUBCASE("unitary point is reducible upstairs") {
      const SigmaTraceReport rpt =
          sigma_trace_report(standard_rep(0.0, 0.0, 2.0 * std::cos(kPi / 6.0)));
      CHECK_FALSE(rpt.irreducible);
      CHECK(std::abs(rpt.xy) < 1e-14);
    }
    SUBCASE("imaginary x, y with real squares") {
      const cplx x{0.0, 1.3}, y{0.0, -0.8};
      const double rho = 1.0 / 6.0;
      const cplx c = x * x + y * y - 2.0 - 2.0 * std::cos(2.0 * kPi * rho);
      const cplx z = 0.5 * (x * y + std::sqrt(x * x * y * y - 4.0 * c));
      const Representation rep = standard_rep(x, y, z);
      const SigmaTraceReport rpt = sigma_trace_report(rep);
      CHECK(rpt.irreducible);
      // tr(h(alpha)^2) = x^2 - 2 is real for purely imaginary x
      CHECK(rpt.reality_deviation < 1e-12);
      CHECK(std::abs(rpt.trace_a2 - (x * x - 2.0)) < 1e-12);
      // the sign flip only negates the traces
      CHECK(std::abs(-rpt.trace_a2) == std::abs(rpt.trace_a2));
    }
  }
}
