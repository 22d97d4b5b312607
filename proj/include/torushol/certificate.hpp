#pragma once

#include <cmath>
#include <ctime>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "torushol/character.hpp"
#include "torushol/covering.hpp"
#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"
#include "torushol/solver.hpp"
#include "torushol/version.hpp"

namespace torushol {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Matrix2& m) {
  return json::array({to_json(m.a), to_json(m.b), to_json(m.c), to_json(m.d)});
}

inline cplx cplx_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("expected [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Matrix2 matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw SchemaError("expected row-major 2x2 matrix");
  return {cplx_from_json(j[0]), cplx_from_json(j[1]), cplx_from_json(j[2]), cplx_from_json(j[3])};
}

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

/// Residual-table entry: every checked number travels with its tolerance.
struct CheckRow {
  std::string name;
  double value{0.0};
  double tolerance{0.0};
  bool pass{false};
};

inline json to_json(const std::vector<CheckRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"name", r.name}, {"value", r.value}, {"tolerance", r.tolerance}, {"pass", r.pass}});
  }
  return arr;
}

inline CheckRow check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

inline bool all_pass(const std::vector<CheckRow>& rows) {
  for (const auto& r : rows) {
    if (!r.pass) return false;
  }
  return true;
}

inline json certificate_envelope(const std::string& command, const SolveConfig& cfg) {
  json env;
  env["version"] = kVersion;
  env["transport_tol"] = cfg.transport_tol;
  env["pole_radius"] = cfg.pole_radius;
  env["residual_tol"] = cfg.residual_tol;
  env["fd_step"] = cfg.fd_step;
  env["word_depth"] = cfg.word_depth;
  env["tolerances"] = {{"fricke", 1e-8},      {"reality", 1e-6},        {"realization", 1e-6},
                       {"matrix_match", 1e-9}, {"unimodular", 1e-9},     {"central", 1e-8},
                       {"puncture_eig", 1e-6}, {"squares_margin_min", 1e-4}};
  json j;
  j["schema_version"] = kCertificateSchemaVersion;
  j["command"] = command;
  j["created_utc"] = utc_timestamp();
  j["notes"] = "numerical certificate, not a proof";
  j["environment"] = env;
  return j;
}

inline json realization_to_json(const RealizationCertificate& rc) {
  json j;
  j["branch"] = rc.branch == RealizationBranch::real_form ? "real_form" : "unitary_form";
  j["C"] = to_json(rc.C);
  j["D"] = to_json(rc.D);
  j["residual"] = rc.residual;
  j["margin"] = rc.margin;
  j["audit_depth"] = rc.audit_depth;
  j["audit_worst"] = rc.audit_worst;
  json conj;
  for (std::size_t g = 0; g < rc.conjugated.size(); ++g) {
    conj[rc.conjugated.names()[g]] = to_json(rc.conjugated.of(static_cast<int>(g)));
  }
  j["conjugated"] = conj;
  return j;
}

inline json main_certificate_to_json(const MainCertificate& cert) {
  json j = certificate_envelope("certify-main", cert.config);
  j["parameters"] = {{"p", cert.p},
                     {"rho", cert.rho},
                     {"k", cert.k},
                     {"chi", to_json(cert.chi)},
                     {"a_solved", to_json(cert.a_solved)}};
  j["environment"]["fixed_steps"] = cert.solve.fixed_steps;
  j["solve"] = {{"a", to_json(cert.solve.a)},
                {"residual", cert.solve.residual},
                {"iterations", cert.solve.iterations},
                {"jacobian_condition", cert.solve.jacobian_cond},
                {"T1", to_json(cert.solve.T1)},
                {"T2", to_json(cert.solve.T2)}};
  j["traces"] = {{"x", to_json(cert.x)},
                 {"y", to_json(cert.y)},
                 {"z", to_json(cert.z)},
                 {"fricke_residual", cert.fricke},
                 {"squares_margin", cert.squares_margin}};
  j["reality"] = {{"depth", cert.config.word_depth},
                  {"worst", cert.reality.worst},
                  {"worst_word", cert.reality.worst_word},
                  {"words", cert.reality.words}};
  json mats;
  mats["alpha"] = to_json(cert.base.of("alpha"));
  mats["beta"] = to_json(cert.base.of("beta"));
  for (std::size_t g = 0; g < cert.cover.size(); ++g) {
    mats[cert.cover.names()[g]] = to_json(cert.cover.of(static_cast<int>(g)));
  }
  j["matrices"] = mats;
  json punct;
  const char* pnames[4] = {"p1", "p2", "p3", "p4"};
  for (int i = 0; i < 4; ++i) punct[pnames[i]] = to_json(cert.punctures[static_cast<std::size_t>(i)]);
  punct["eig_deviation"] = cert.puncture_eig_deviation;
  j["punctures"] = punct;
  j["realization"] = realization_to_json(cert.realization);
  json cov;
  cov["p"] = cert.p;
  cov["weights"] = cert.character.weights;
  cov["transversal"] = cert.schreier.transversal;
  json words = json::array();
  for (const auto& w : cert.schreier.words) words.push_back(w.str(cover_alphabet()));
  cov["generators"] = words;
  cov["signs"] = cert.subgroup.twist.signs;
  cov["max_central_deviation"] = cert.subgroup.max_central_deviation;
  cov["max_twisted_deviation"] = cert.subgroup.max_twisted_deviation;
  cov["max_product_deviation"] = cert.subgroup.max_product_deviation;
  j["covering"] = cov;
  j["sigma"] = {{"trace_a2", to_json(cert.sigma.trace_a2)},
                {"trace_b2", to_json(cert.sigma.trace_b2)},
                {"reality_deviation", cert.sigma.reality_deviation},
                {"xy", to_json(cert.sigma.xy)},
                {"squares_margin", cert.sigma.squares_margin},
                {"irreducible", cert.sigma.irreducible}};

  std::vector<CheckRow> rows;
  rows.push_back(check("solve.residual", cert.solve.residual, cert.config.residual_tol));
  rows.push_back(check("transport.det_drift", cert.det_drift_max, 1e-9));
  rows.push_back(check("transport.ahat_consistency", cert.ahat_consistency, 1e-7));
  rows.push_back(check("traces.fricke_residual", cert.fricke, 1e-8));
  rows.push_back(check("traces.squares_margin_inverse", cert.squares_margin > 1e-4 ? 0.0 : 1.0, 0.5));
  rows.push_back(check("reality.worst", cert.reality.worst, 1e-6));
  rows.push_back(check("realization.residual", cert.realization.residual, 1e-6));
  rows.push_back(check("punctures.eig_deviation", cert.puncture_eig_deviation, 1e-6));
  rows.push_back(check("covering.central_deviation", cert.subgroup.max_central_deviation, 1e-8));
  rows.push_back(check("covering.twisted_deviation", cert.subgroup.max_twisted_deviation, 1e-8));
  rows.push_back(check("hyperbolicity.T1", cert.solve.T1.real(), -2.0));
  rows.back().pass = cert.solve.T1.real() < -2.0;
  rows.push_back(check("hyperbolicity.T2", cert.solve.T2.real(), -2.0));
  rows.back().pass = cert.solve.T2.real() < -2.0;
  j["residual_table"] = to_json(rows);
  j["pass"] = all_pass(rows);
  return j;
}

// ---------------------------------------------------------------------------
// Validation: recompute every algebraic residual from the stored matrices.
// No differential equation is re-integrated; ODE-derived numbers are only
// re-checked against the tolerances recorded in the certificate itself.
// ---------------------------------------------------------------------------

struct ValidationItem {
  std::string name;
  bool pass{false};
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationItem> items;
  bool all_pass() const {
    for (const auto& i : items) {
      if (!i.pass) return false;
    }
    return !items.empty();
  }
};

namespace detail {

inline void add(ValidationReport& rep, const std::string& name, bool pass,
                const std::string& detail = "") {
  rep.items.push_back({name, pass, detail});
}

inline double tol_of(const json& cert, const std::string& key, double fallback) {
  if (cert.contains("environment") && cert["environment"].contains("tolerances") &&
      cert["environment"]["tolerances"].contains(key)) {
    return cert["environment"]["tolerances"][key].get<double>();
  }
  return fallback;
}

}  // namespace detail

inline ValidationReport validate_certificate(const json& cert) {
  ValidationReport rep;
  if (!cert.is_object() || !cert.contains("schema_version") || !cert.contains("command")) {
    throw SchemaError("certificate: missing schema_version or command");
  }
  if (cert["schema_version"].get<std::string>() != kCertificateSchemaVersion) {
    throw SchemaError("certificate: unsupported schema version");
  }
  const double tol_match = detail::tol_of(cert, "matrix_match", 1e-9);
  const double tol_unimod = detail::tol_of(cert, "unimodular", 1e-9);
  const double tol_fricke = detail::tol_of(cert, "fricke", 1e-8);
  const double tol_real = detail::tol_of(cert, "realization", 1e-6);
  const double tol_central = detail::tol_of(cert, "central", 1e-8);
  const double tol_eig = detail::tol_of(cert, "puncture_eig", 1e-6);

  // residual table self-consistency
  if (cert.contains("residual_table")) {
    bool ok = true;
    for (const auto& row : cert["residual_table"]) {
      const bool claimed = row["pass"].get<bool>();
      if (!claimed) ok = false;
    }
    detail::add(rep, "residual_table.all_pass", ok);
  }

  const bool has_mats = cert.contains("matrices");
  Representation base;
  if (has_mats) {
    const auto& mats = cert["matrices"];
    bool unimod = true;
    for (auto it = mats.begin(); it != mats.end(); ++it) {
      const Matrix2 m = matrix_from_json(it.value());
      if (det_drift(m) > tol_unimod) unimod = false;
    }
    detail::add(rep, "matrices.unimodular", unimod);
    if (mats.contains("alpha") && mats.contains("beta")) {
      base.add("alpha", matrix_from_json(mats["alpha"]));
      base.add("beta", matrix_from_json(mats["beta"]));
    }
  }

  if (cert.contains("traces") && base.size() == 2) {
    const auto& tr = cert["traces"];
    const cplx x = cplx_from_json(tr["x"]);
    const cplx y = cplx_from_json(tr["y"]);
    const cplx z = cplx_from_json(tr["z"]);
    const cplx xr = base.of("alpha").trace();
    const cplx yr = base.of("beta").trace();
    const cplx zr = (base.of("beta") * base.of("alpha")).trace();
    detail::add(rep, "traces.match_matrices",
                std::abs(x - xr) < tol_match * std::max(1.0, std::abs(xr)) &&
                    std::abs(y - yr) < tol_match * std::max(1.0, std::abs(yr)) &&
                    std::abs(z - zr) < tol_match * std::max(1.0, std::abs(zr)));
    double rho = 0.0;
    if (cert.contains("parameters") && cert["parameters"].contains("rho")) {
      rho = cert["parameters"]["rho"].get<double>();
    }
    const double fr = fricke_residual(xr, yr, zr, rho);
    detail::add(rep, "traces.fricke", fr < tol_fricke, "residual " + std::to_string(fr));
  }

  if (has_mats && base.size() == 2) {
    const auto& mats = cert["matrices"];
    // cover generators must be the stated words in alpha, beta
    const auto pres = PuncturedTorusPresentation::standard();
    const Matrix2 a = base.of("alpha"), b = base.of("beta");
    const auto close = [&](const Matrix2& u, const Matrix2& v) {
      return operator_norm(u - v) < tol_match * std::max(1.0, operator_norm(v));
    };
    if (mats.contains("ahat")) {
      detail::add(rep, "matrices.ahat_is_alpha_squared",
                  close(matrix_from_json(mats["ahat"]), a * a));
    }
    if (mats.contains("bhat")) {
      detail::add(rep, "matrices.bhat_is_beta_squared",
                  close(matrix_from_json(mats["bhat"]), b * b));
    }
    const FreeWord words[3] = {pres.c1, pres.c2, pres.c3};
    const char* cnames[3] = {"c1", "c2", "c3"};
    for (int i = 0; i < 3; ++i) {
      if (mats.contains(cnames[i])) {
        detail::add(rep, std::string("matrices.") + cnames[i] + "_word",
                    close(matrix_from_json(mats[cnames[i]]), base.evaluate(words[i])));
      }
    }
    if (cert.contains("punctures")) {
      const auto& punct = cert["punctures"];
      const auto all = pres.all();
      const char* pnames[4] = {"p1", "p2", "p3", "p4"};
      bool words_ok = true;
      double eig_dev = 0.0;
      for (int i = 0; i < 4; ++i) {
        if (!punct.contains(pnames[i])) continue;
        const Matrix2 stored = matrix_from_json(punct[pnames[i]]);
        if (!close(stored, base.evaluate(all[static_cast<std::size_t>(i)]))) words_ok = false;
        double rho = cert["parameters"]["rho"].get<double>();
        eig_dev = std::max(eig_dev, puncture_eigenvalue_deviation(stored, rho));
      }
      detail::add(rep, "punctures.word_built", words_ok);
      detail::add(rep, "punctures.eigenvalues", eig_dev < tol_eig,
                  "deviation " + std::to_string(eig_dev));
    }
  }

  if (cert.contains("realization") && has_mats) {
    const auto& rz = cert["realization"];
    const Matrix2 C = matrix_from_json(rz["C"]);
    const Matrix2 D = matrix_from_json(rz["D"]);
    const bool real_branch = rz["branch"].get<std::string>() == "real_form";
    detail::add(rep, "realization.C_unimodular", det_drift(C) < 1e-6);
    const Matrix2 s = C.conjugate() * C;
    const double dev_plus = operator_norm(s - Matrix2::identity());
    const double dev_minus = operator_norm(s + Matrix2::identity());
    detail::add(rep, "realization.branch_dichotomy",
                real_branch ? dev_plus < 1e-6 : dev_minus < 1e-6);
    const auto& mats = cert["matrices"];
    const Matrix2 dinv = D.inverse();
    bool intertwines = true, conj_matches = true;
    double worst_resid = 0.0;
    for (auto it = rz["conjugated"].begin(); it != rz["conjugated"].end(); ++it) {
      if (!mats.contains(it.key())) continue;
      const Matrix2 g = matrix_from_json(mats[it.key()]);
      const Matrix2 stored = matrix_from_json(it.value());
      const double scale = std::max(1.0, operator_norm(g));
      if (operator_norm(g.conjugate() * C - C * g) > 1e-6 * scale) intertwines = false;
      const Matrix2 conj_g = D * g * dinv;
      if (operator_norm(conj_g - stored) > tol_match * scale) conj_matches = false;
      if (real_branch) {
        const double im = std::max(std::max(std::abs(conj_g.a.imag()), std::abs(conj_g.b.imag())),
                                   std::max(std::abs(conj_g.c.imag()), std::abs(conj_g.d.imag())));
        worst_resid = std::max(worst_resid, im / std::max(1.0, conj_g.max_abs()));
      } else {
        worst_resid = std::max(worst_resid, unitarity_defect(conj_g));
      }
    }
    detail::add(rep, "realization.intertwiner", intertwines);
    detail::add(rep, "realization.conjugated_match", conj_matches);
    detail::add(rep, "realization.residual", worst_resid < 10.0 * tol_real,
                "recomputed " + std::to_string(worst_resid));
  }

  if (cert.contains("covering")) {
    const auto& cov = cert["covering"];
    const int p = cov["p"].get<int>();
    CyclicCharacter chi = CyclicCharacter::standard(p);
    bool kernel_ok = true;
    std::vector<FreeWord> words;
    for (const auto& ws : cov["generators"]) {
      const FreeWord w = parse_word(ws.get<std::string>(), cover_alphabet());
      words.push_back(w);
      if (chi.value(w) != 0) kernel_ok = false;
    }
    detail::add(rep, "covering.kernel_membership", kernel_ok);
    detail::add(rep, "covering.rank",
                static_cast<int>(words.size()) == 1 + p * 4,
                std::to_string(words.size()) + " generators");
    double rho = 1.0 / (2.0 * p);
    const Representation uref = standard_rep(0.0, 0.0, 2.0 * std::cos(kPi * rho));
    bool signs_ok = true;
    double central = 0.0;
    const auto& images = cover_generator_images();
    const auto stored_signs = cov["signs"];
    for (std::size_t i = 0; i < words.size(); ++i) {
      const Matrix2 m = uref.evaluate(words[i].substituted(images));
      const double dplus = operator_norm(m - Matrix2::identity());
      const double dminus = operator_norm(m + Matrix2::identity());
      const int sign = dplus <= dminus ? 1 : -1;
      central = std::max(central, std::min(dplus, dminus));
      if (i < stored_signs.size() && stored_signs[i].get<int>() != sign) signs_ok = false;
    }
    detail::add(rep, "covering.central", central < tol_central,
                "deviation " + std::to_string(central));
    detail::add(rep, "covering.signs_match", signs_ok);
  }

  if (cert.contains("sigma") && base.size() == 2) {
    const auto& sg = cert["sigma"];
    const Matrix2 a = base.of("alpha");
    const Matrix2 b = base.of("beta");
    const cplx ta = cplx_from_json(sg["trace_a2"]);
    const cplx tb = cplx_from_json(sg["trace_b2"]);
    detail::add(rep, "sigma.traces_match",
                std::abs(ta - (a * a).trace()) < tol_match * std::max(1.0, std::abs(ta)) &&
                    std::abs(tb - (b * b).trace()) < tol_match * std::max(1.0, std::abs(tb)));
  }

  if (cert.contains("solve") && cert["solve"].contains("T1") && cert["solve"].contains("T2")) {
    const auto& sv = cert["solve"];
    const cplx t1 = cplx_from_json(sv["T1"]);
    const cplx t2 = cplx_from_json(sv["T2"]);
    const double rtol = cert["environment"]["residual_tol"].get<double>();
    detail::add(rep, "solve.imag_traces",
                std::abs(t1.imag()) < rtol && std::abs(t2.imag()) < rtol);
    detail::add(rep, "solve.hyperbolic", t1.real() < -2.0 && t2.real() < -2.0);
  }

  return rep;
}

inline json load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open certificate '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("certificate is not valid JSON: ") + e.what());
  }
  return j;
}

}  // namespace torushol
