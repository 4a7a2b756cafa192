// Batch front-end: solve fuzzy integral equations, run compactness
// diagnostics, evaluate the existence horizon, and verify the oracle suite.
//
// Exit codes: 0 success, 1 oracle failure, 2 invalid input,
//             3 non-convergence, 4 ball-invariance violation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fuzzband/analysis.hpp"
#include "fuzzband/io.hpp"
#include "fuzzband/solver.hpp"
#include "fuzzband/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOracleFailure = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitBallViolation = 4;

int run_solve(const std::string& problem_path, const std::string& out_path,
              int levels, int steps, double tol, int max_iter) {
  fuzzband::ProblemSpec spec = fuzzband::parse_problem_file(problem_path);
  if (levels > 0) spec.alpha_cells = levels;
  if (steps > 0) spec.time_cells = steps;
  if (tol > 0) spec.tol = tol;
  if (max_iter > 0) spec.max_iter = max_iter;
  fuzzband::validate_problem(spec);

  fuzzband::SolveReport report = fuzzband::picard_solve(spec);

  fuzzband::write_band_csv(out_path, *report.solution);
  fuzzband::check_band_csv(out_path);
  const std::string report_path = out_path + ".report.json";
  {
    std::ofstream out(report_path);
    out << fuzzband::report_to_json(report, spec).dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing " + report_path);
  }

  std::printf("status          %s\n",
              report.status == fuzzband::SolveStatus::converged
                  ? "converged"
                  : "non-converged");
  std::printf("N (initial)     %.12g\n", report.initial_bound);
  std::printf("M (rhs bound)   %.12g   [%s]\n", report.rhs_bound,
              report.rhs_bound_method.c_str());
  std::printf("eta (horizon)   %.12g\n", report.horizon);
  std::printf("iterations      %d (windows %d)\n", report.iterations,
              report.windows);
  std::printf("final residual  %.6g\n", report.final_residual);
  for (const auto& [name, check] : report.checks) {
    std::printf("check %-22s %s (measured %.6g, bound %.6g)\n", name.c_str(),
                check.pass ? "pass" : "FAIL", check.measured, check.bound);
  }
  for (const auto& w : report.warnings)
    std::printf("warning: %s\n", w.c_str());
  std::printf("bands  -> %s\n", out_path.c_str());
  std::printf("report -> %s\n", report_path.c_str());

  if (!report.checks.at("self_map").pass) return kExitBallViolation;
  if (report.status != fuzzband::SolveStatus::converged)
    return kExitNonConvergence;
  return kExitOk;
}

int run_diagnose(const std::string& family_path, double eps, double cap,
                 double delta, const std::string& out_path) {
  fuzzband::FamilySample family = fuzzband::parse_family_file(family_path);
  fuzzband::CompactnessReport report =
      fuzzband::compactness_verdict(family, cap, eps, delta);

  // Alpha-grid sensitivity: the same modulus on a band subsampled to K/2.
  double refinement_delta = 0.0;
  if (family.grid.cells % 2 == 0 && family.grid.cells >= 4) {
    std::vector<fuzzband::FuzzyNumber> coarse;
    coarse.reserve(family.members.size());
    for (const auto& u : family.members) coarse.push_back(coarsen(u));
    const double coarse_mod = fuzzband::equicontinuity_modulus(
        fuzzband::FamilySample(std::move(coarse), family.label), delta);
    refinement_delta = std::abs(report.modulus_at_delta - coarse_mod);
  }

  nlohmann::json doc = fuzzband::compactness_to_json(
      report, family.label, family.members.size(), family.grid.cells,
      refinement_delta);
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << doc.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing " + out_path);
    std::printf("report -> %s\n", out_path.c_str());
  }
  std::printf("bound %.12g (cap %.12g) -> %s\n", report.bound,
              report.bound_cap, report.bounded_verdict ? "bounded" : "UNBOUNDED");
  std::printf("modulus(%.6g) = %.12g (eps %.6g) -> %s\n", report.delta,
              report.modulus_at_delta, report.epsilon,
              report.equicontinuous_verdict ? "equicontinuous"
                                            : "NOT equicontinuous");
  std::printf("verdict: %s (%s)\n", report.verdict ? "true" : "false",
              report.evidence.c_str());
  return kExitOk;  // the verdict is data, not an error
}

int run_eta(double a, double q, double r_cap, double n_bound, double m_bound) {
  const double eta =
      fuzzband::existence_horizon(a, q, r_cap, n_bound, m_bound);
  std::printf("%.12g\n", eta);
  return kExitOk;
}

int run_verify(double gamma_tolerance) {
  const auto results = fuzzband::oracle_suite(gamma_tolerance);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%-4s %-55s computed %.15g  reference %.15g  err %.3g  tol %.3g\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.computed,
                r.reference, r.abs_err, r.tolerance);
    all_pass = all_pass && r.pass;
  }
  std::printf("%s (%zu oracles)\n", all_pass ? "all oracles pass"
                                             : "ORACLE FAILURE",
              results.size());
  return all_pass ? kExitOk : kExitOracleFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzzy integral equations over alpha-level bands"};
  app.require_subcommand(1);

  std::string problem_path, out_path = "bands.csv";
  int levels = 0, steps = 0, max_iter = 0;
  double tol = 0.0;
  CLI::App* solve = app.add_subcommand("solve", "solve a problem file");
  solve->add_option("--problem", problem_path, "problem JSON file")
      ->required();
  solve->add_option("--out", out_path, "band table output (CSV)")->required();
  solve->add_option("--levels", levels, "override alpha cells K");
  solve->add_option("--steps", steps, "override time cells n");
  solve->add_option("--tol", tol, "override tolerance");
  solve->add_option("--max-iter", max_iter, "override iteration cap");

  std::string family_path, diag_out;
  double eps = 0.0, cap = 0.0, delta = 0.015625;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "compactness diagnostics for a family");
  diagnose->add_option("--family", family_path, "family JSON file")
      ->required();
  diagnose->add_option("--eps", eps, "equicontinuity threshold")->required();
  diagnose->add_option("--cap", cap, "uniform bound cap")->required();
  diagnose->add_option("--delta", delta, "level gap for the verdict");
  diagnose->add_option("--out", diag_out, "write the JSON report here");

  double eta_a = 0.0, eta_q = 0.0, eta_r = 0.0, eta_n = 0.0, eta_m = 0.0;
  CLI::App* eta = app.add_subcommand("eta", "print the existence horizon");
  eta->add_option("--a", eta_a, "data horizon")->required();
  eta->add_option("--q", eta_q, "kernel exponent")->required();
  eta->add_option("--R", eta_r, "ball radius")->required();
  eta->add_option("--N", eta_n, "initial data bound")->required();
  eta->add_option("--M", eta_m, "rhs bound")->required();

  double gamma_tolerance = 1e-12;
  CLI::App* verify = app.add_subcommand("verify", "run the oracle suite");
  verify->add_option("--gamma-tolerance", gamma_tolerance,
                     "tolerance for the gamma oracles (test hook)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return run_solve(problem_path, out_path, levels, steps, tol, max_iter);
    if (diagnose->parsed())
      return run_diagnose(family_path, eps, cap, delta, diag_out);
    if (eta->parsed()) return run_eta(eta_a, eta_q, eta_r, eta_n, eta_m);
    if (verify->parsed()) return run_verify(gamma_tolerance);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
