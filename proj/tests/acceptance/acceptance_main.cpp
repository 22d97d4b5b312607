// Acceptance suite: one line of output per criterion, nonzero exit if any
// criterion fails. Criteria with runtime budgets are timed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "torushol/certificate.hpp"
#include "torushol/character.hpp"
#include "torushol/covering.hpp"
#include "torushol/solver.hpp"
#include "torushol/theta.hpp"
#include "torushol/transport.hpp"

using namespace torushol;

namespace {

int g_failures = 0;
std::vector<double> g_det_drifts;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void report(int n, const std::string& what, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", n, what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

HolonomyResult tracked_transport(const ConnectionFamily& fam, const PathSpec& path,
                                 const TransportOptions& opt = {}) {
  HolonomyResult res = transport(fam, path, opt);
  g_det_drifts.push_back(res.det_drift);
  return res;
}

// --- criterion 1: closed-form anchor at rho = 0 ----------------------------
void criterion_1() {
  bool pass = true;
  std::string detail;
  for (int k : {0, 1}) {
    const auto t0 = std::chrono::steady_clock::now();
    ConnectionFamily fam{a_seed(k), chi_fix(), 0.0, Lattice::doubled()};
    const cplx t1 = tracked_transport(fam, loop_alpha_hat()).matrix.trace();
    const cplx t2 = tracked_transport(fam, loop_beta_hat()).matrix.trace();
    const double elapsed = seconds_since(t0);
    const double expect = -(std::exp(-2.0 * kPi * k) + std::exp(2.0 * kPi * k));
    const double dev = std::max(std::abs(t1 - expect), std::abs(t2 - expect)) / std::abs(expect);
    if (dev > 1e-8 || elapsed > 5.0) pass = false;
    detail += "k=" + std::to_string(k) + ": rel dev " + fmt(dev) + ", " +
              fmt(elapsed) + " s; ";
  }
  report(1, "closed-form doubled-loop traces at rho = 0", pass, detail);
}

// --- criterion 2: Fricke suite over random parameters -----------------------
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(20260808u);
  std::uniform_real_distribution<double> box(-1.2, 1.2);
  double worst = 0.0;
  int count = 0;
  for (double rho : {0.0, 0.1, 1.0 / 6.0}) {
    for (int i = 0; i < 20; ++i) {
      const cplx a{box(rng), box(rng)};
      cplx chi{box(rng), box(rng)};
      while (lattice_distance(-2.0 * chi / kPi) < 0.1) chi = cplx{box(rng), box(rng)};
      ConnectionFamily fam{a, chi, rho, Lattice::base()};
      const Matrix2 ma = tracked_transport(fam, loop_alpha()).matrix;
      const Matrix2 mb = tracked_transport(fam, loop_beta()).matrix;
      worst = std::max(worst,
                       fricke_residual(ma.trace(), mb.trace(), (mb * ma).trace(), rho));
      ++count;
    }
  }
  const double elapsed = seconds_since(t0);
  report(2, "Fricke relation on transported traces", worst < 1e-8 && elapsed < 120.0,
         std::to_string(count) + " samples, worst residual " + fmt(worst) + ", " +
             fmt(elapsed) + " s");
}

// --- criterion 3: local exponents ------------------------------------------
void criterion_3() {
  bool pass = true;
  std::string detail;
  for (double rho : {0.1, 1.0 / 6.0}) {
    ConnectionFamily fam{a_seed(1), chi_fix(), rho, Lattice::base()};
    Representation rep;
    rep.add("alpha", tracked_transport(fam, loop_alpha()).matrix);
    rep.add("beta", tracked_transport(fam, loop_beta()).matrix);
    const Matrix2 comm = rep.evaluate(parse_word("beta'.alpha'.beta.alpha", base_alphabet()));
    const double dev = puncture_eigenvalue_deviation(comm, rho);
    if (dev > 1e-6) pass = false;
    detail += "rho=" + std::to_string(rho) + ": dev " + fmt(dev) + "; ";
  }
  report(3, "commutator eigenvalues exp(+-2 pi i rho)", pass, detail);
}

// --- criterion 4: unitary solve ---------------------------------------------
void criterion_4() {
  SolveConfig cfg;
  bool pass = true;
  std::string detail;

  const UnitarySolveResult sol = find_unitary_parameter(chi_fix(), 1.0 / 6.0, cfg);
  if (sol.residual >= 1e-8) pass = false;
  detail += "max|x|,|y| = " + fmt(sol.residual) + "; ";
  const double z_dev = std::abs(sol.z - std::sqrt(3.0));
  if (z_dev >= 1e-6) pass = false;
  detail += "|z - sqrt(3)| = " + fmt(z_dev) + " (z = " + fmt(sol.z.real()) +
            ", |z + sqrt(3)| = " + fmt(std::abs(sol.z + std::sqrt(3.0))) + "); ";

  const UnitarySolveResult sol0 = find_unitary_parameter(chi_fix(), 0.0, cfg);
  const double a_dev = std::abs(sol0.a + std::conj(chi_fix()));
  if (a_dev >= 1e-9) pass = false;
  detail += "rho=0: |a_u + conj(chi)| = " + fmt(a_dev) + "; ";

  // puncture monodromy pattern at the solved unitary point: all four blocks
  // have eigenvalues exp(+-2 pi i rho) and alternate, so c1 c2 = c3 c4 = Id
  // and c1 = c3, c2 = c4.
  ConnectionFamily fam{sol.a, chi_fix(), 1.0 / 6.0, Lattice::base()};
  Representation base;
  base.add("alpha", tracked_transport(fam, loop_alpha()).matrix);
  base.add("beta", tracked_transport(fam, loop_beta()).matrix);
  const auto punct = puncture_monodromies(base);
  double pattern_dev = 0.0;
  for (const auto& m : punct) {
    pattern_dev = std::max(pattern_dev, puncture_eigenvalue_deviation(m, 1.0 / 6.0));
  }
  pattern_dev = std::max(pattern_dev, operator_norm(punct[0] * punct[1] - Matrix2::identity()));
  pattern_dev = std::max(pattern_dev, operator_norm(punct[2] * punct[3] - Matrix2::identity()));
  pattern_dev = std::max(pattern_dev, operator_norm(punct[0] - punct[2]));
  pattern_dev = std::max(pattern_dev, operator_norm(punct[1] - punct[3]));
  if (pattern_dev >= 1e-6) pass = false;
  detail += "puncture pattern dev = " + fmt(pattern_dev);

  report(4, "unitary solve at rho = 1/6 and rho = 0", pass, detail);
}

// --- criteria 5 and 7: real solve, realization, oracle equivalence ----------
void criterion_5_and_7() {
  SolveConfig cfg;
  bool pass = true;
  std::string detail;
  const double rho = 1.0 / 6.0;

  RealSolveResult sol;
  try {
    sol = find_real_parameter(chi_fix(), rho, 1, cfg);
  } catch (const Error& e) {
    report(5, "real solve + realization at rho = 1/6, k = 1", false, e.what());
    report(7, "oracle equivalence for the puncture loop", false, "skipped: solve failed");
    return;
  }
  if (sol.residual >= 1e-10) pass = false;
  detail += "residual " + fmt(sol.residual) + "; ";
  if (!(sol.T1.real() < -2.0 && sol.T2.real() < -2.0)) pass = false;

  ConnectionFamily fam{sol.a, chi_fix(), rho, Lattice::doubled()};
  Representation base;
  base.add("alpha", tracked_transport(fam, loop_alpha()).matrix);
  base.add("beta", tracked_transport(fam, loop_beta()).matrix);
  const Representation cover = cover_representation(base);
  const RealityAudit audit = audit_trace_reality(cover, 6);
  if (audit.worst >= 1e-6) pass = false;
  detail += "worst relative Im trace (depth 6, " + std::to_string(audit.words) + " words) " +
            fmt(audit.worst) + "; ";

  const SquaresReport sq = squares_reducible(base);
  if (sq.margin <= 1e-4) pass = false;
  detail += "squares margin " + fmt(sq.margin) + "; ";

  try {
    const RealizationCertificate rc = realize_real(cover, 1e-6, 6);
    if (rc.branch != RealizationBranch::real_form) pass = false;
    if (rc.residual >= 1e-6) pass = false;
    detail += "realization residual " + fmt(rc.residual);
  } catch (const Error& e) {
    pass = false;
    detail += std::string("realization failed: ") + e.what();
  }
  report(5, "real solve + realization at rho = 1/6, k = 1", pass, detail);

  // criterion 7: word-built puncture monodromy vs small-circle integration
  const Matrix2 word_built = base.evaluate(PuncturedTorusPresentation::standard().c1);
  const PathSpec circle = loop_circle_about(cplx{0.5, 0.5}, 0.1, 0.0, "around_p1");
  const Matrix2 integrated = tracked_transport(fam, circle).matrix;
  const double dev =
      operator_norm(integrated - word_built) / std::max(1.0, operator_norm(word_built));
  report(7, "oracle equivalence for the puncture loop", dev < 1e-6,
         "word-built vs integrated: " + fmt(dev));
}

// --- criterion 6: covering suite --------------------------------------------
void criterion_6() {
  const int p = 3;
  const double rho = 1.0 / (2.0 * p);
  bool pass = true;
  std::string detail;
  const CyclicCharacter chi = CyclicCharacter::standard(p);
  const SchreierGenerators sg = reidemeister_schreier(chi);
  if (sg.words.size() != 13) pass = false;
  detail += std::to_string(sg.words.size()) + " generators; ";
  for (const auto& w : sg.words) {
    if (chi.value(w) != 0) pass = false;
  }
  const Representation uref = standard_rep(0.0, 0.0, 2.0 * std::cos(kPi * rho));
  try {
    const SubgroupReport rpt = twisted_subgroup_evaluation(uref, sg.words, p);
    if (rpt.max_central_deviation >= 1e-8 || !rpt.twist.squares_trivial()) pass = false;
    detail += "central dev " + fmt(rpt.max_central_deviation) + "; ";
  } catch (const Error& e) {
    pass = false;
    detail += std::string("evaluation failed: ") + e.what();
  }
  double power_dev = 0.0;
  for (const auto& m : puncture_monodromies(uref)) {
    power_dev = std::max(power_dev, operator_norm(pow_int(m, p) + Matrix2::identity()));
  }
  if (power_dev >= 1e-8) pass = false;
  detail += "puncture p-th power dev " + fmt(power_dev);
  report(6, "covering suite at p = 3", pass, detail);
}

// --- criterion 8: property tests ---------------------------------------------
void criterion_8() {
  bool pass = true;
  std::string detail;
  std::mt19937 rng(424242u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const auto rand_unimodular = [&]() {
    for (;;) {
      Matrix2 m{cplx{uni(rng), uni(rng)}, cplx{uni(rng), uni(rng)}, cplx{uni(rng), uni(rng)},
                cplx{uni(rng), uni(rng)}};
      if (std::abs(m.det()) > 0.05) return m * (1.0 / std::sqrt(m.det()));
    }
  };

  double worst_txy = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Matrix2 x = rand_unimodular();
    const Matrix2 y = rand_unimodular();
    const cplx lhs = x.trace() * y.trace();
    const cplx rhs = (x * y).trace() + (x * y.inverse()).trace();
    worst_txy = std::max(worst_txy, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  if (worst_txy >= 1e-12) pass = false;
  detail += "trace identity " + fmt(worst_txy) + "; ";

  double worst_qp = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx w{2.0 * uni(rng), 2.0 * uni(rng)};
    const cplx v = theta(w).value;
    const cplx v1 = theta(w + 1.0).value;
    const cplx vi = theta(w + kI).value;
    const cplx factor = v * std::exp(-2.0 * kPi * kI * w);
    worst_qp = std::max(worst_qp, std::abs(v1 - v) / std::max({1.0, std::abs(v), std::abs(v1)}));
    worst_qp = std::max(worst_qp,
                        std::abs(vi + factor) / std::max({1.0, std::abs(vi), std::abs(factor)}));
  }
  if (worst_qp >= 1e-12) pass = false;
  detail += "theta quasi-periodicity " + fmt(worst_qp) + "; ";

  double worst_dbar = 0.0;
  for (int i = 0; i < 20; ++i) {
    cplx w{uni(rng), uni(rng)};
    if (lattice_distance(w) < 0.1) w += cplx{0.3, 0.3};
    const cplx x = 0.4 * cplx{uni(rng), uni(rng)};
    const double d = 1e-6;
    const auto val = [&](cplx pnt) { return t_section(x, pnt).value; };
    const cplx dre = (val(w + d) - val(w - d)) / (2.0 * d);
    const cplx dim = (val(w + d * kI) - val(w - d * kI)) / (2.0 * d);
    const cplx dbar = 0.5 * (dre + kI * dim);
    worst_dbar = std::max(worst_dbar, std::abs(dbar - kPi * x * val(w)));
  }
  if (worst_dbar >= 1e-6) pass = false;
  detail += "dbar equation " + fmt(worst_dbar) + "; ";

  ConnectionFamily fam{a_seed(1), chi_fix(), 1.0 / 6.0, Lattice::doubled()};
  const PathSpec straight = loop_alpha_hat();
  double worst_homotopy = 0.0;
  for (double amp : {-0.15, -0.12, -0.08, -0.18, -0.05}) {
    const PathSpec bumped = PathSpec::polyline(
        "bump", {0.0, cplx{0.5, amp}, cplx{1.5, amp}, cplx{2.0, 0.0}});
    worst_homotopy = std::max(worst_homotopy, homotopy_check(fam, straight, bumped));
  }
  if (worst_homotopy >= 1e-8) pass = false;
  detail += "homotopy invariance " + fmt(worst_homotopy) + "; ";

  double worst_drift = 0.0;
  for (double d : g_det_drifts) worst_drift = std::max(worst_drift, d);
  if (worst_drift >= 1e-9) pass = false;
  detail += "max det drift over " + std::to_string(g_det_drifts.size()) + " transports " +
            fmt(worst_drift);

  report(8, "property tests", pass, detail);
}

// --- criterion 9: end-to-end CLI run -----------------------------------------
void criterion_9() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cli = TORUSHOL_CLI_PATH;
  const std::string cert_path = "acceptance-certify-main.json";
  const std::string cmd = cli + " --quiet --out " + cert_path + " certify-main --p 3";
  const int rc = std::system(cmd.c_str());
  bool pass = (rc == 0);
  std::string detail = "certify-main exit " + std::to_string(rc);
  if (pass) {
    const int rv = std::system((cli + " --quiet validate " + cert_path).c_str());
    pass = (rv == 0);
    detail += ", validate exit " + std::to_string(rv);
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= 600.0) pass = false;
  detail += ", " + fmt(elapsed) + " s";
  report(9, "end-to-end certify-main --p 3 with re-validation", pass, detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5_and_7();
  criterion_6();
  criterion_8();
  criterion_9();
  std::printf("acceptance total: %.1f s, %d failing criterion(s)\n", seconds_since(t0),
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
