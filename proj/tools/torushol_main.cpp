// Command-line front end: holonomy computations, parameter solves, covering
// checks, and machine-readable certificates for the flat-connection family on
// the square torus.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "torushol/certificate.hpp"
#include "torushol/config.hpp"
#include "torushol/covering.hpp"
#include "torushol/solver.hpp"
#include "torushol/theta.hpp"
#include "torushol/transport.hpp"
#include "torushol/version.hpp"

namespace th = torushol;

namespace {

th::cplx parse_cplx(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {std::stod(s), 0.0};
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

std::string show(th::cplx z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

void write_certificate(const th::json& j, const std::string& path, bool quiet) {
  std::ofstream out(path);
  if (!out) throw th::Error("cannot write certificate to '" + path + "'");
  out << j.dump(2) << "\n";
  if (!quiet) std::cout << "certificate written to " << path << "\n";
}

int report_rows(const std::vector<th::CheckRow>& rows, bool quiet) {
  bool ok = true;
  for (const auto& r : rows) {
    if (!quiet) {
      std::printf("  %-34s %12.4e  (tol %.1e)  %s\n", r.name.c_str(), r.value, r.tolerance,
                  r.pass ? "pass" : "FAIL");
    }
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  bool quiet{false};

  th::SolveConfig solve_config() const {
    if (config_path.empty()) {
      th::Config empty;
      return empty.solve_config();
    }
    return th::Config::from_file(config_path).solve_config();
  }
};

th::PathSpec named_loop(const std::string& name) {
  if (name == "alpha") return th::loop_alpha();
  if (name == "beta") return th::loop_beta();
  if (name == "alphahat") return th::loop_alpha_hat();
  if (name == "betahat") return th::loop_beta_hat();
  throw th::Error("unknown loop '" + name + "' (expected alpha|beta|alphahat|betahat)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holonomy and SL(2,R)-realization toolkit for flat connections on the square torus"};
  app.set_version_flag("--version", th::kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // allow --out/--config/--quiet after the subcommand

  CommonOpts common;
  app.add_option("--config", common.config_path, "configuration file (key = value with [sections])");
  app.add_option("--out", common.out_path, "certificate output path");
  app.add_flag("--quiet", common.quiet, "suppress the human-readable summary");

  // --- theta ---------------------------------------------------------------
  auto* cmd_theta = app.add_subcommand("theta", "evaluate the lattice theta function");
  std::string theta_w = "0.3,0.2";
  cmd_theta->add_option("--w", theta_w, "argument as re,im");

  // --- holonomy ------------------------------------------------------------
  auto* cmd_hol = app.add_subcommand("holonomy", "parallel transport around a loop");
  std::string hol_a = "0,0", hol_chi = "0,0", hol_loop = "alpha", hol_file, hol_label;
  double hol_rho = 0.0, hol_tol = 1e-12;
  cmd_hol->add_option("--a", hol_a, "diagonal parameter a as re,im");
  cmd_hol->add_option("--chi", hol_chi, "Dolbeault parameter chi as re,im");
  cmd_hol->add_option("--rho", hol_rho, "weight rho in [0, 1/2)");
  cmd_hol->add_option("--loop", hol_loop, "named loop: alpha|beta|alphahat|betahat");
  cmd_hol->add_option("--path-file", hol_file, "loop corpus file");
  cmd_hol->add_option("--label", hol_label, "loop label inside the corpus file");
  cmd_hol->add_option("--tol", hol_tol, "integration tolerance");

  // --- fricke ---------------------------------------------------------------
  auto* cmd_fricke = app.add_subcommand("fricke", "residual of the trace-coordinate relation");
  std::string fx = "2", fy = "2", fz = "2";
  double frho = 0.0, ftol = 1e-8;
  cmd_fricke->add_option("--x", fx, "trace x as re[,im]");
  cmd_fricke->add_option("--y", fy, "trace y as re[,im]");
  cmd_fricke->add_option("--z", fz, "trace z as re[,im]");
  cmd_fricke->add_option("--rho", frho, "weight rho");
  cmd_fricke->add_option("--tol", ftol, "pass threshold");

  // --- find-real-a -----------------------------------------------------------
  auto* cmd_real = app.add_subcommand("find-real-a", "solve for the real-trace parameter near a_k");
  double rr_rho = 1.0 / 6.0;
  int rr_k = 1;
  std::string rr_chi;
  cmd_real->add_option("--rho", rr_rho, "weight rho in (0, 1/2)");
  cmd_real->add_option("--k", rr_k, "seed index k (nonzero)");
  cmd_real->add_option("--chi", rr_chi, "override chi as re,im (default pi/4 (1 - i))");

  // --- find-unitary-a ---------------------------------------------------------
  auto* cmd_uni = app.add_subcommand("find-unitary-a", "solve for the unitarizing parameter");
  double ur_rho = 1.0 / 6.0;
  std::string ur_chi;
  cmd_uni->add_option("--rho", ur_rho, "weight rho in [0, 1/2)");
  cmd_uni->add_option("--chi", ur_chi, "override chi as re,im (default pi/4 (1 - i))");

  // --- certify-sl2r ------------------------------------------------------------
  auto* cmd_sl2r = app.add_subcommand("certify-sl2r", "solve, audit, and realize in SL(2,R)");
  double sr_rho = 1.0 / 6.0;
  int sr_k = 1;
  cmd_sl2r->add_option("--rho", sr_rho, "weight rho in (0, 1/2)");
  cmd_sl2r->add_option("--k", sr_k, "seed index k (nonzero)");

  // --- covering ------------------------------------------------------------
  auto* cmd_cov = app.add_subcommand("covering", "cyclic covering checks at rho = 1/(2p)");
  int cov_p = 3;
  cmd_cov->add_option("--p", cov_p, "odd covering degree >= 3");

  // --- certify-main ----------------------------------------------------------
  auto* cmd_main = app.add_subcommand("certify-main", "full certification pipeline");
  int main_p = 3;
  cmd_main->add_option("--p", main_p, "odd covering degree >= 3");

  // --- validate ------------------------------------------------------------
  auto* cmd_val = app.add_subcommand("validate", "recheck a certificate's algebraic content");
  std::string val_path;
  cmd_val->add_option("file", val_path, "certificate JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    th::SolveConfig cfg = common.solve_config();

    if (cmd_theta->parsed()) {
      const th::cplx w = parse_cplx(theta_w);
      const th::ThetaValue tv = th::theta(w);
      const th::cplx v1 = th::theta(w + 1.0).value;
      const th::cplx vi = th::theta(w + th::kI).value;
      const th::cplx factor = tv.value * std::exp(-2.0 * th::kPi * th::kI * w);
      const double s1 = std::max({1.0, std::abs(tv.value), std::abs(v1)});
      const double si = std::max({1.0, std::abs(vi), std::abs(factor)});
      std::vector<th::CheckRow> rows{
          th::check("theta.period_1_residual", std::abs(v1 - tv.value) / s1, 1e-12),
          th::check("theta.period_i_residual", std::abs(vi + factor) / si, 1e-12)};
      if (!common.quiet) {
        std::cout << "theta(" << show(w) << ") = " << show(tv.value) << "\n";
        std::cout << "theta'(0) = " << show(th::theta_prime_zero()) << "\n";
      }
      th::json j = th::certificate_envelope("theta", cfg);
      j["parameters"] = {{"w", th::to_json(w)}};
      j["values"] = {{"theta", th::to_json(tv.value)},
                     {"theta_prime_zero", th::to_json(th::theta_prime_zero())},
                     {"truncation_error", tv.truncation_error}};
      j["residual_table"] = th::to_json(rows);
      j["pass"] = th::all_pass(rows);
      if (!common.out_path.empty()) write_certificate(j, common.out_path, common.quiet);
      return report_rows(rows, common.quiet);
    }

    if (cmd_hol->parsed()) {
      th::PathSpec path;
      if (!hol_file.empty()) {
        std::ifstream in(hol_file);
        if (!in) throw th::Error("cannot open path file '" + hol_file + "'");
        const auto loops = th::parse_loop_corpus(in);
        bool found = false;
        for (const auto& l : loops) {
          if (l.label == hol_label) {
            path = l;
            found = true;
          }
        }
        if (!found) throw th::Error("no loop labelled '" + hol_label + "' in " + hol_file);
      } else {
        path = named_loop(hol_loop);
      }
      th::ConnectionFamily fam{parse_cplx(hol_a), parse_cplx(hol_chi), hol_rho,
                               th::Lattice::doubled()};
      const th::HolonomyResult res = th::transport(fam, path, hol_tol);
      std::vector<th::CheckRow> rows{th::check("holonomy.det_drift", res.det_drift, 1e-9)};
      if (!common.quiet) {
        std::cout << "holonomy along " << path.label << ":\n";
        std::cout << "  [" << show(res.matrix.a) << ", " << show(res.matrix.b) << "]\n";
        std::cout << "  [" << show(res.matrix.c) << ", " << show(res.matrix.d) << "]\n";
        std::cout << "  trace = " << show(res.matrix.trace()) << ", steps = " << res.steps
                  << ", est_error = " << res.est_error << "\n";
      }
      th::json j = th::certificate_envelope("holonomy", cfg);
      j["parameters"] = {{"a", th::to_json(fam.a)},
                         {"chi", th::to_json(fam.chi)},
                         {"rho", fam.rho},
                         {"loop", path.label},
                         {"tol", hol_tol}};
      j["matrices"] = {{"holonomy", th::to_json(res.matrix)}};
      j["values"] = {{"trace", th::to_json(res.matrix.trace())},
                     {"steps", res.steps},
                     {"est_error", res.est_error}};
      j["residual_table"] = th::to_json(rows);
      j["pass"] = th::all_pass(rows);
      if (!common.out_path.empty()) write_certificate(j, common.out_path, common.quiet);
      return report_rows(rows, common.quiet);
    }

    if (cmd_fricke->parsed()) {
      const th::cplx x = parse_cplx(fx), y = parse_cplx(fy), z = parse_cplx(fz);
      const double res = th::fricke_residual(x, y, z, frho);
      std::vector<th::CheckRow> rows{th::check("fricke.residual", res, ftol)};
      if (!common.quiet) std::cout << "fricke residual = " << res << "\n";
      th::json j = th::certificate_envelope("fricke", cfg);
      j["parameters"] = {{"x", th::to_json(x)},
                         {"y", th::to_json(y)},
                         {"z", th::to_json(z)},
                         {"rho", frho}};
      j["residual_table"] = th::to_json(rows);
      j["pass"] = th::all_pass(rows);
      if (!common.out_path.empty()) write_certificate(j, common.out_path, common.quiet);
      return report_rows(rows, common.quiet);
    }

    if (cmd_real->parsed()) {
      const th::cplx chi = rr_chi.empty() ? th::chi_fix() : parse_cplx(rr_chi);
      const th::RealSolveResult sol = th::find_real_parameter(chi, rr_rho, rr_k, cfg);
      th::ConnectionFamily fam{sol.a, chi, rr_rho, th::Lattice::base()};
      th::TransportOptions topt;
      topt.rtol = topt.atol = cfg.transport_tol;
      const th::Representation base = th::holonomy_generators(fam, th::Level::base, topt);
      const th::TraceCoordinates tc = th::trace_coordinates(base, rr_rho);
      std::vector<th::CheckRow> rows{
          th::check("solve.residual", sol.residual, cfg.residual_tol),
          th::check("traces.fricke_residual", th::fricke_residual(tc), 1e-8)};
      th::CheckRow hyp{"hyperbolicity.T1_T2_below_-2",
                       std::max(sol.T1.real(), sol.T2.real()), -2.0,
                       sol.T1.real() < -2.0 && sol.T2.real() < -2.0};
      rows.push_back(hyp);
      if (!common.quiet) {
        std::cout << "a = " << show(sol.a) << "  (" << sol.iterations << " iterations)\n";
        std::cout << "T1 = " << show(sol.T1) << "\nT2 = " << show(sol.T2) << "\n";
        std::cout << "residual = " << sol.residual << ", jacobian condition = "
                  << sol.jacobian_cond << "\n";
        std::cout << "x = " << show(tc.x) << ", y = " << show(tc.y) << ", z = " << show(tc.z)
                  << "\n";
      }
      th::json j = th::certificate_envelope("find-real-a", cfg);
      j["parameters"] = {{"rho", rr_rho}, {"k", rr_k}, {"chi", th::to_json(chi)}};
      j["solve"] = {{"a", th::to_json(sol.a)},
                    {"residual", sol.residual},
                    {"iterations", sol.iterations},
                    {"jacobian_condition", sol.jacobian_cond},
                    {"T1", th::to_json(sol.T1)},
                    {"T2", th::to_json(sol.T2)}};
      j["traces"] = {{"x", th::to_json(tc.x)},
                     {"y", th::to_json(tc.y)},
                     {"z", th::to_json(tc.z)},
                     {"fricke_residual", th::fricke_residual(tc)}};
      j["matrices"] = {{"alpha", th::to_json(base.of("alpha"))},
                       {"beta", th::to_json(base.of("beta"))}};
      j["residual_table"] = th::to_json(rows);
      j["pass"] = th::all_pass(rows);
      if (!common.out_path.empty()) write_certificate(j, common.out_path, common.quiet);
      return report_rows(rows, common.quiet);
    }

    if (cmd_uni->parsed()) {
      const th::cplx chi = ur_chi.empty() ? th::chi_fix() : parse_cplx(ur_chi);
      const th::UnitarySolveResult sol = th::find_unitary_parameter(chi, ur_rho, cfg);
      std::vector<th::CheckRow> rows{
          th::check("solve.max_xy", sol.residual, 1e-8),
          th::check("solve.z_deviation", sol.z_deviation, 1e-6),
          th::check("solve.unitarity_after_conjugation", sol.unitarity_after_conjugation, 1e-6)};
      if (!common.quiet) {
        std::cout << "a_u = " << show(sol.a) << "  (" << sol.iterations << " iterations)\n";
        std::cout << "x = " << show(sol.x) << ", y = " << show(sol.y) << "\n";
        std::cout << "z = " << show(sol.z) << "   (target 2 cos(pi rho) = "
                  << 2.0 * std::cos(th::kPi * ur_rho) << ", |z - target| = " << sol.z_deviation
                  << ", |z + target| = "
                  << std::abs(sol.z + 2.0 * std::cos(th::kPi * ur_rho)) << ")\n";
      }
      th::json j = th::certificate_envelope("find-unitary-a", cfg);
      j["parameters"] = {{"rho", ur_rho}, {"chi", th::to_json(chi)}};
      j["solve"] = {{"a", th::to_json(sol.a)},
                    {"x", th::to_json(sol.x)},
                    {"y", th::to_json(sol.y)},
                    {"z", th::to_json(sol.z)},
                    {"iterations", sol.iterations},
                    {"z_deviation", sol.z_deviation},
                    {"z_deviation_mirror", std::abs(sol.z + 2.0 * std::cos(th::kPi * ur_rho))}};
      j["residual_table"] = th::to_json(rows);
      j["pass"] = th::all_pass(rows);
      if (!common.out_path.empty()) write_certificate(j, common.out_path, common.quiet);
      return report_rows(rows, common.quiet);
    }

    if (cmd_sl2r->parsed()) {
      const th::cplx chi = th::chi_fix();
      const th::RealSolveResult sol = th::find_real_parameter(chi, sr_rho, sr_k, cfg);
      th::ConnectionFamily fam{sol.a, chi, sr_rho, th::Lattice::doubled()};
      th::TransportOptions topt;
      topt.rtol = topt.atol = cfg.transport_tol;
      const th::Representation base = th::holonomy_generators(fam, th::Level::base, topt);
      const th::TraceCoordinates tc = th::trace_coordinates(base, sr_rho);
      const th::Representation cover = th::cover_representation(base);
      const th::RealityAudit audit = th::audit_trace_reality(cover, cfg.word_depth);
      const th::RealizationCertificate rc = th::realize_real(cover, 1e-6, cfg.word_depth);
      std::vector<th::CheckRow> rows{
          th::check("solve.residual", sol.residual, cfg.residual_tol),
          th::check("traces.fricke_residual", th::fricke_residual(tc), 1e-8),
          th::check("reality.worst", audit.worst, 1e-6),
          th::check("realization.residual", rc.residual, 1e-6)};
      th::CheckRow branch_row{"realization.branch_real",
                              rc.branch == th::RealizationBranch::real_form ? 0.0 : 1.0, 0.5,
                              rc.branch == th::RealizationBranch::real_form};
      rows.push_back(branch_row);
      if (!common.quiet) {
        std::cout << "a = " << show(sol.a) << ", realization branch = "
                  << (rc.branch == th::RealizationBranch::real_form ? "real_form" : "unitary_form")
                  << ", residual = " << rc.residual << "\n";
      }
      th::json j = th::certificate_envelope("certify-sl2r", cfg);
      j["parameters"] = {{"rho", sr_rho}, {"k", sr_k}, {"chi", th::to_json(chi)}};
      j["solve"] = {{"a", th::to_json(sol.a)},
                    {"residual", sol.residual},
                    {"iterations", sol.iterations},
                    {"jacobian_condition", sol.jacobian_cond},
                    {"T1", th::to_json(sol.T1)},
                    {"T2", th::to_json(sol.T2)}};
      j["traces"] = {{"x", th::to_json(tc.x)},
                     {"y", th::to_json(tc.y)},
                     {"z", th::to_json(tc.z)},
                     {"fricke_residual", th::fricke_residual(tc)}};
      th::json mats;
      mats["alpha"] = th::to_json(base.of("alpha"));
      mats["beta"] = th::to_json(base.of("beta"));
      for (std::size_t g = 0; g < cover.size(); ++g) {
        mats[cover.names()[g]] = th::to_json(cover.of(static_cast<int>(g)));
      }
      j["matrices"] = mats;
      j["reality"] = {{"depth", cfg.word_depth},
                      {"worst", audit.worst},
                      {"worst_word", audit.worst_word},
                      {"words", audit.words}};
      j["realization"] = th::realization_to_json(rc);
      j["residual_table"] = th::to_json(rows);
      j["pass"] = th::all_pass(rows);
      if (!common.out_path.empty()) write_certificate(j, common.out_path, common.quiet);
      return report_rows(rows, common.quiet);
    }

    if (cmd_cov->parsed()) {
      const double rho = 1.0 / (2.0 * cov_p);
      const th::CyclicCharacter chi = th::CyclicCharacter::standard(cov_p);
      const th::SchreierGenerators sg = th::reidemeister_schreier(chi);
      const th::Representation uref = th::standard_rep(0.0, 0.0, 2.0 * std::cos(th::kPi * rho));
      const th::SubgroupReport rpt = th::twisted_subgroup_evaluation(uref, sg.words, cov_p);
      const int expected_rank = 1 + cov_p * 4;
      std::vector<th::CheckRow> rows{
          th::check("covering.central_deviation", rpt.max_central_deviation, 1e-8),
          th::check("covering.twisted_deviation", rpt.max_twisted_deviation, 1e-8),
          th::check("covering.product_deviation", rpt.max_product_deviation, 1e-8)};
      th::CheckRow rank_row{"covering.rank", static_cast<double>(sg.words.size()),
                            static_cast<double>(expected_rank),
                            static_cast<int>(sg.words.size()) == expected_rank};
      rows.push_back(rank_row);
      if (!common.quiet) {
        std::cout << "p = " << cov_p << ", rho = " << rho << ", " << sg.words.size()
                  << " subgroup generators (transversal " << sg.transversal << ")\n";
        std::cout << "all evaluations within " << rpt.max_central_deviation << " of +-Id\n";
      }
      th::json j = th::certificate_envelope("covering", cfg);
      j["parameters"] = {{"p", cov_p}, {"rho", rho}};
      th::json cov;
      cov["p"] = cov_p;
      cov["weights"] = chi.weights;
      cov["transversal"] = sg.transversal;
      th::json words = th::json::array();
      for (const auto& w : sg.words) words.push_back(w.str(th::cover_alphabet()));
      cov["generators"] = words;
      cov["signs"] = rpt.twist.signs;
      cov["max_central_deviation"] = rpt.max_central_deviation;
      cov["max_twisted_deviation"] = rpt.max_twisted_deviation;
      j["covering"] = cov;
      j["residual_table"] = th::to_json(rows);
      j["pass"] = th::all_pass(rows);
      if (!common.out_path.empty()) write_certificate(j, common.out_path, common.quiet);
      return report_rows(rows, common.quiet);
    }

    if (cmd_main->parsed()) {
      const th::MainCertificate cert = th::certify_main(main_p, cfg);
      const th::json j = th::main_certificate_to_json(cert);
      if (!common.quiet) {
        std::cout << "p = " << cert.p << ", rho = " << cert.rho << ", a = " << show(cert.a_solved)
                  << "\n";
        std::cout << "T1 = " << show(cert.solve.T1) << "\nT2 = " << show(cert.solve.T2) << "\n";
        std::cout << "x = " << show(cert.x) << ", y = " << show(cert.y) << ", z = "
                  << show(cert.z) << "\n";
        std::cout << "realization branch: real_form, residual " << cert.realization.residual
                  << "\n";
        std::cout << "covering: " << cert.schreier.words.size() << " generators, central dev "
                  << cert.subgroup.max_central_deviation << "\n";
      }
      const std::string out = common.out_path.empty() ? "certify-main.json" : common.out_path;
      write_certificate(j, out, common.quiet);
      std::vector<th::CheckRow> rows;
      for (const auto& row : j["residual_table"]) {
        rows.push_back({row["name"].get<std::string>(), row["value"].get<double>(),
                        row["tolerance"].get<double>(), row["pass"].get<bool>()});
      }
      return report_rows(rows, common.quiet);
    }

    if (cmd_val->parsed()) {
      const th::json cert = th::load_certificate(val_path);
      const th::ValidationReport rep = th::validate_certificate(cert);
      for (const auto& item : rep.items) {
        if (!common.quiet) {
          std::printf("  %-34s %s  %s\n", item.name.c_str(), item.pass ? "pass" : "FAIL",
                      item.detail.c_str());
        }
      }
      if (!common.quiet) {
        std::cout << (rep.all_pass() ? "certificate valid" : "certificate INVALID") << "\n";
      }
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const th::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
