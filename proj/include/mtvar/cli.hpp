#pragma once

// Command-line front end. Every report starts with machine-readable
// "key: value" lines, then a blank line, then a short human-readable summary.
//
// Exit codes: 0 positive or complete, 1 negative verdict (refuted,
// inconclusive, infeasible, conditions not satisfied, divergence), 2 usage or
// input error.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mtvar/conditions.hpp"
#include "mtvar/error.hpp"
#include "mtvar/fractional.hpp"
#include "mtvar/grid.hpp"
#include "mtvar/invexity.hpp"
#include "mtvar/problem.hpp"
#include "mtvar/problem_file.hpp"
#include "mtvar/solver.hpp"

namespace mtvar::cli {

namespace fs = std::filesystem;

class Report {
 public:
  explicit Report(const std::string& command) {
    add("command", command);
    add("orientation", "minimize");
  }

  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void note(const std::string& text) { prose_.push_back(text); }

  void print(std::ostream& os) const {
    for (const auto& [k, v] : lines_) os << k << ": " << v << '\n';
    os << '\n';
    for (const auto& p : prose_) os << p << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
  std::vector<std::string> prose_;
};

// Shortest text that reads back to the same double.
inline std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string list(const std::vector<double>& v) {
  if (v.empty()) return "-";
  std::string s;
  for (std::size_t j = 0; j < v.size(); ++j) s += (j ? "," : "") + num(v[j]);
  return s;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  return parse_problem(in);
}

inline GridField load_field(const std::string& path, const ProblemSpec& ps) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open candidate file '" + path + "'");
  GridField x = read_field_csv(in, ps.domain);
  if (x.n() != ps.n) throw InputError("candidate '" + path + "' has " + std::to_string(x.n()) + " state columns, problem has n = " + std::to_string(ps.n));
  return x;
}

inline Multipliers load_multipliers(const std::string& csv_path, const std::string& tau_path, const ProblemSpec& ps) {
  std::ifstream csv(csv_path);
  if (!csv) throw InputError("cannot open multiplier file '" + csv_path + "'");
  std::ifstream tau(tau_path);
  if (!tau) throw InputError("cannot open tau file '" + tau_path + "'");
  return read_multipliers(csv, tau, ps);
}

inline void save_multipliers(const std::string& csv_path, const Multipliers& m) {
  std::ofstream csv(csv_path);
  std::ofstream tau(csv_path + ".tau");
  if (!csv || !tau) throw InputError("cannot write multiplier file '" + csv_path + "'");
  write_multipliers_csv(csv, m);
  write_tau_line(tau, m);
}

inline void save_field(const std::string& path, const GridField& x) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_field_csv(out, x);
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& cell : detail::split(text, ',')) out.push_back(detail::parse_double(detail::trim(cell)));
  return out;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_validate(const std::string& file, std::ostream& out) {
  const ProblemSpec ps = load_problem(file);
  Report r("validate");
  r.add("kind", to_string(ps.kind));
  r.add("m", std::to_string(ps.domain.m()));
  r.add("n", std::to_string(ps.n));
  std::string grid;
  for (int v = 0; v < ps.domain.m(); ++v) grid += (v ? "x" : "") + std::to_string(ps.domain.resolution(v));
  r.add("grid", grid);
  r.add("objectives", std::to_string(ps.p()));
  r.add("denominators", std::to_string(ps.k.size()));
  r.add("inequality_constraints", std::to_string(ps.g.size()));
  r.add("equality_constraints", std::to_string(ps.h.size()));
  r.add("integral_constraints", std::to_string(ps.integral.size()));
  r.add("boundary", ps.u.empty() ? "free" : "fixed");
  r.add("status", "valid");
  r.note("Normalized problem (every objective is minimized):");
  r.note(print_problem(ps));
  r.print(out);
  return 0;
}

inline int cmd_eval(const std::string& file, const std::string& cand, double tol, std::ostream& out) {
  const ProblemSpec ps = load_problem(file);
  const GridField x = load_field(cand, ps);
  const FeasibilityReport f = feasibility_check(ps, x, tol);
  const ObjectiveValues v = eval_objectives(ps, x);
  Report r("eval");
  r.add("F", list(v.F));
  if (ps.fractional()) {
    r.add("K", list(v.K));
    r.add("J", list(v.J));
  }
  r.add("minimized", ps.fractional() ? "J" : "F");
  r.add("g_worst", list(f.g_worst));
  r.add("h_worst", list(f.h_worst));
  r.add("integral", list(f.integral_value));
  r.add("boundary_mismatch", f.has_boundary ? num(f.boundary_mismatch) : "-");
  r.add("tol", num(tol));
  r.add("feasible", yes_no(f.feasible));
  r.note(f.feasible ? "The candidate is feasible within the tolerance."
                    : "The candidate violates at least one constraint by more than the tolerance.");
  r.print(out);
  return f.feasible ? 0 : 1;
}

inline int cmd_residual(const std::string& file, const std::string& cand, int objective, const std::string& dump,
                        std::ostream& out) {
  const ProblemSpec ps = load_problem(file);
  const GridField x = load_field(cand, ps);
  if (objective < 1 || objective > ps.p()) throw InputError("--objective out of range");
  const Expr& X = ps.f[objective - 1];
  const GridField res = eo_residual(X, x);
  Report r("residual");
  r.add("lagrangian", to_string(X));
  r.add("max_residual", num(max_abs(res.values())));
  r.add("l2_residual", num(interior_norm(res)));
  if (!dump.empty()) {
    std::ofstream os(dump);
    if (!os) throw InputError("cannot write '" + dump + "'");
    std::vector<std::string> names;
    for (int i = 0; i < ps.n; ++i) names.push_back("r" + std::to_string(i + 1));
    write_grid_csv(os, ps.domain, names, res.values());
    r.add("residual_csv", dump);
  }
  r.note("Euler-Ostrogradsky residual of f" + std::to_string(objective) + " at interior nodes (boundary rows are 0).");
  r.print(out);
  return 0;
}

struct MultiplierArgs {
  std::string file, cand, system, out;
  double tol = 1e-6;
  double slack_tol = 1e-6;
};

inline int cmd_multipliers(const MultiplierArgs& a, std::ostream& out) {
  const ProblemSpec ps = load_problem(a.file);
  const GridField x0 = load_field(a.cand, ps);
  const WeightingScheme scheme = make_scheme(parse_system(a.system), ps, x0);
  RecoveryOptions opts;
  opts.slack_tol = a.slack_tol;
  opts.feas_tol = a.tol;
  opts.report_tol = a.tol;
  const RecoveryResult rec = recover_multipliers(ps, x0, scheme, opts);
  const NormalityResult normal = normality_check(rec.multipliers, scheme, a.tol);
  const Multipliers written = normalize_for_scheme(rec.multipliers, scheme);
  Report r("multipliers");
  r.add("system", to_string(scheme.variant));
  r.add("tau", list(written.tau));
  r.add("nu", list(written.nu));
  r.add("residual_norm", num(rec.residual_norm));
  r.add("max_residual", num(rec.max_residual));
  r.add("active_lambda", std::to_string(rec.active_lambda));
  r.add("pure_mu", yes_no(rec.pure_mu));
  r.add("normal", yes_no(normal.normal));
  r.add("conditions", rec.satisfied ? "satisfied" : "not satisfied");
  if (!a.out.empty()) {
    save_multipliers(a.out, written);
    r.add("multipliers_csv", a.out);
    r.add("tau_file", a.out + ".tau");
  }
  r.note("Multipliers minimize the stationarity residual under |tau|_1 + |nu|_1 + int|lambda| + int|mu| = 1.");
  if (scheme.sum_normalized() && normal.normal) r.note("Reported and written multipliers are rescaled to <e,tau> = 1.");
  r.note("Normality: " + normal.diagnosis + ".");
  r.print(out);
  return rec.satisfied ? 0 : 1;
}

inline int cmd_check_necessary(const std::string& file, const std::string& cand, const std::string& system,
                               const std::string& mfile, const std::string& taufile, double tol, std::ostream& out) {
  const ProblemSpec ps = load_problem(file);
  const GridField x0 = load_field(cand, ps);
  const WeightingScheme scheme = make_scheme(parse_system(system), ps, x0);
  const Multipliers m = load_multipliers(mfile, taufile.empty() ? mfile + ".tau" : taufile, ps);
  const StationarityReport rep = stationarity_residual(ps, x0, m, scheme, tol);
  const NormalityResult normal = normality_check(m, scheme, tol);
  Report r("check-necessary");
  r.add("system", to_string(scheme.variant));
  r.add("max_residual", num(rep.max_abs));
  r.add("l2_residual", num(rep.norm));
  r.add("slackness_max", num(rep.slackness_max));
  r.add("slackness_violations", std::to_string(rep.slackness_violations));
  r.add("tau_sign_violations", std::to_string(rep.tau_sign_violations));
  r.add("lambda_sign_violations", std::to_string(rep.lambda_sign_violations));
  r.add("nu_sign_violations", std::to_string(rep.nu_sign_violations));
  r.add("normalization_error", std::isnan(rep.normalization_error) ? "-" : num(rep.normalization_error));
  r.add("degenerate", yes_no(rep.degenerate));
  r.add("normal", yes_no(normal.normal));
  r.add("tol", num(tol));
  r.add("verdict", rep.satisfied() ? "satisfied" : "not satisfied");
  r.note(rep.satisfied() ? "The multipliers satisfy the stationarity, slackness and sign conditions."
                         : "The multipliers fail at least one stationarity, slackness, sign or normalization check.");
  r.print(out);
  return rep.satisfied() ? 0 : 1;
}

inline int cmd_transform(const std::string& file, const std::string& cand, int r1, const std::string& form_text,
                         const std::string& dest, std::ostream& out) {
  const ProblemSpec ps = load_problem(file);
  const GridField x0 = load_field(cand, ps);
  const ParametricForm form = parse_form(form_text);
  const ProblemSpec inst = build_parametric(ps, x0, r1 - 1, form);
  const std::string text = print_problem(inst);
  Report r("transform");
  r.add("form", to_string(form));
  r.add("r", std::to_string(r1));
  r.add("R0", list(compute_R0(ps, x0)));
  r.add("kind", to_string(inst.kind));
  r.add("added_integral_constraints", std::to_string(inst.integral.size() - ps.integral.size()));
  if (!dest.empty()) {
    std::ofstream os(dest);
    if (!os) throw InputError("cannot write '" + dest + "'");
    os << text;
    r.add("problem_file", dest);
  }
  r.note("Parametric instance at the reference candidate:");
  r.note(text);
  r.print(out);
  return 0;
}

struct SufficientArgs {
  std::string file, cand, mfile, taufile, variant = "t5", rho, strict = "a1", b, eta = "flat", premise = "equality",
                                               dump;
  std::size_t samples = 500;
  std::uint64_t seed = 42;
  double tol = 1e-6;
};

inline std::string hypothesis_line(const HypothesisResult& h) {
  const QuasiReport& q = h.report;
  std::string s = h.verdict() + " mode=" + to_string(h.mode) + " rho=" + num(h.rho) + " tested=" +
                  std::to_string(q.tested) + " vacuous=" + std::to_string(q.vacuous) + " b_zero=" +
                  std::to_string(q.b_zero) + " inadmissible=" + std::to_string(q.inadmissible) +
                  " counterexamples=" + std::to_string(q.counterexamples.size());
  if (!q.counterexamples.empty()) s += " first=" + std::to_string(q.counterexamples.front().sample);
  return s;
}

inline int cmd_check_sufficient(const SufficientArgs& a, std::ostream& out) {
  const ProblemSpec ps = load_problem(a.file);
  const GridField x0 = load_field(a.cand, ps);
  const CertificateVariant variant = parse_variant(a.variant);
  const WeightingScheme scheme = make_scheme(required_system(variant), ps, x0);
  const Multipliers m = load_multipliers(a.mfile, a.taufile.empty() ? a.mfile + ".tau" : a.taufile, ps);

  RhoBudget budget;
  std::vector<double> rho = a.rho.empty() ? std::vector<double>{} : parse_list(a.rho);
  const std::size_t p = static_cast<std::size_t>(ps.p());
  if (rho.size() > p + 2) throw InputError("--rho takes at most p + 2 values (rho1..., rho2, rho3)");
  rho.resize(p + 2, 0.0);
  budget.rho1.assign(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(p));
  budget.rho2 = rho[p];
  budget.rho3 = rho[p + 1];
  if (!a.b.empty()) budget.b = BFunctional::parse(a.b);
  const EtaGenerator gen = a.eta == "flat" ? EtaGenerator::flat() : EtaGenerator::parse(a.eta, ps.dims());

  CertificateOptions opts;
  opts.samples = a.samples;
  opts.seed = a.seed;
  opts.tol = a.tol;
  opts.feas_tol = a.tol;
  opts.strict = a.strict;
  if (a.premise == "inequality") opts.quasi.monotonic_premise = PremiseMode::inequality;
  else if (a.premise != "equality") throw InputError("--premise must be equality or inequality");
  opts.keep_samples = !a.dump.empty();

  const CertificateReport rep = sufficiency_certificate(ps, x0, m, scheme, budget, variant, gen, opts);
  Report r("check-sufficient");
  r.add("variant", to_string(variant));
  r.add("system", to_string(scheme.variant));
  r.add("stationarity_max", num(rep.stationarity.max_abs));
  r.add("samples", std::to_string(rep.samples_generated));
  r.add("feasible_samples", std::to_string(rep.feasible_labels.size()));
  r.add("infeasible_samples", std::to_string(rep.samples_infeasible));
  r.add("inadmissible_samples", std::to_string(rep.samples_inadmissible));
  r.add("seed", std::to_string(a.seed));
  for (const auto& h : rep.hypotheses) r.add("hypothesis_" + h.label, hypothesis_line(h));
  std::string strict_key = "hypothesis_" + rep.strictness.label;
  std::replace(strict_key.begin(), strict_key.end(), ':', '_');
  r.add(strict_key, hypothesis_line(rep.strictness));
  r.add("rho_value", num(rep.rho_value));
  r.add("rho_inequality", rep.rho_holds ? "pass" : "fail");
  r.add("verdict", to_string(rep.overall));
  if (opts.keep_samples) {
    fs::create_directories(a.dump);
    for (std::size_t j = 0; j < rep.feasible_samples.size(); ++j) {
      char name[32];
      std::snprintf(name, sizeof name, "sample_%06zu.csv", rep.feasible_labels[j]);
      save_field((fs::path(a.dump) / name).string(), rep.feasible_samples[j]);
    }
    r.add("dumped_samples", std::to_string(rep.feasible_samples.size()));
  }
  for (const auto& h : rep.hypotheses) r.note(h.label + ": " + h.functional);
  r.note(rep.diagnosis + ".");
  if (rep.overall == Verdict::certified_on_samples)
    r.note("This is evidence, not a proof: only the sampled candidates were tested.");
  r.print(out);
  return rep.overall == Verdict::certified_on_samples ? 0 : 1;
}

inline int cmd_pareto(const std::string& file, const std::string& dir, double tol, std::ostream& out) {
  const ProblemSpec ps = load_problem(file);
  if (!fs::is_directory(dir)) throw InputError("'" + dir + "' is not a directory");
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  if (paths.empty()) throw InputError("no *.csv candidates in '" + dir + "'");
  std::vector<GridField> family;
  for (const auto& p : paths) family.push_back(load_field(p.string(), ps));
  std::vector<std::size_t> efficient;
  try {
    efficient = pareto_oracle(ps, family, tol);
  } catch (const PreconditionError& e) {
    // Name the file instead of the index.
    std::string msg = e.what();
    const auto pos = msg.find("candidate ");
    if (pos != std::string::npos) {
      const std::size_t idx = std::stoul(msg.substr(pos + 10));
      msg = "candidate " + paths[idx].filename().string() + " is infeasible";
    }
    throw PreconditionError(msg);
  }
  Report r("pareto");
  r.add("candidates", std::to_string(family.size()));
  r.add("efficient_count", std::to_string(efficient.size()));
  std::string names;
  for (std::size_t j = 0; j < efficient.size(); ++j)
    names += (j ? "," : "") + paths[efficient[j]].filename().string();
  r.add("efficient", names);
  r.add("tol", num(tol));
  r.note("A candidate is efficient when no other candidate is <= it componentwise with at least one strict component.");
  r.print(out);
  return 0;
}

struct SolveArgs {
  std::string file, init, out;
  SolveConfig cfg;
};

inline int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const ProblemSpec ps = load_problem(a.file);
  const GridField init = a.init.empty() ? boundary_field(ps) : load_field(a.init, ps);
  const SolveResult res = solve_scalar(ps, a.cfg, init);
  if (!a.out.empty()) save_field(a.out, res.x);
  const GridField res_field = Functional(ps.f[0], ps.dims()).residual(res.x);
  Report r("solve");
  r.add("iterations", std::to_string(res.iterations));
  r.add("converged", yes_no(res.converged));
  r.add("penalized_objective", num(res.objective));
  r.add("objective", list(eval_objectives(ps, res.x).F));
  r.add("max_gradient", num(res.max_gradient));
  r.add("max_residual", num(max_abs(res_field.values())));
  r.add("forced_increases", std::to_string(res.increases));
  if (!a.out.empty()) r.add("solution_csv", a.out);
  r.note("Stopped: " + res.reason + ".");
  r.print(out);
  return res.converged ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mtvar: multitime variational problems, optimality conditions and sufficiency certificates", "mtvar"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mtvar 1.0");

  std::string file, cand, system, mfile, taufile, dest, form, dir;
  double tol = 1e-6;
  int objective = 1, r_index = 1;
  MultiplierArgs ma;
  SufficientArgs sa;
  SolveArgs so;

  auto* validate = app.add_subcommand("validate", "Parse a problem file and echo the normalized problem");
  validate->add_option("file", file, "Problem file")->required();

  auto* eval = app.add_subcommand("eval", "Objectives, ratios and feasibility of a candidate");
  eval->add_option("file", file, "Problem file")->required();
  eval->add_option("--candidate", cand, "Candidate CSV")->required();
  eval->add_option("--tol", tol, "Feasibility tolerance")->capture_default_str();

  auto* residual = app.add_subcommand("residual", "Euler-Ostrogradsky residual of an objective integrand");
  residual->add_option("file", file, "Problem file")->required();
  residual->add_option("--candidate", cand, "Candidate CSV")->required();
  residual->add_option("--objective", objective, "Objective index (1-based)")->capture_default_str();
  residual->add_option("--out", dest, "Write the residual field as CSV");

  auto* mult = app.add_subcommand("multipliers", "Recover multipliers by bounded least squares");
  mult->add_option("file", ma.file, "Problem file")->required();
  mult->add_option("--candidate", ma.cand, "Candidate CSV")->required();
  mult->add_option("--system", ma.system, "sfj, vfj, mfj or mfj0")->required();
  mult->add_option("--out", ma.out, "Multiplier CSV (tau goes to <out>.tau)");
  mult->add_option("--tol", ma.tol, "Reporting and feasibility tolerance")->capture_default_str();
  mult->add_option("--slack-tol", ma.slack_tol, "g below -slack_tol forces lambda = 0")->capture_default_str();

  auto* nec = app.add_subcommand("check-necessary", "Stationarity, slackness and sign report for given multipliers");
  nec->add_option("file", file, "Problem file")->required();
  nec->add_option("--candidate", cand, "Candidate CSV")->required();
  nec->add_option("--system", system, "sfj, vfj, mfj or mfj0")->required();
  nec->add_option("--multipliers", mfile, "Multiplier CSV")->required();
  nec->add_option("--tau", taufile, "Tau file (default <multipliers>.tau)");
  nec->add_option("--tol", tol, "Tolerance")->capture_default_str();

  auto* tr = app.add_subcommand("transform", "Emit the parametric instance (FPR or SPR) for objective r");
  tr->add_option("file", file, "Problem file")->required();
  tr->add_option("--candidate", cand, "Reference candidate CSV")->required();
  tr->add_option("--r", r_index, "Objective index (1-based)")->required();
  tr->add_option("--form", form, "fpr or spr")->required();
  tr->add_option("--out", dest, "Output problem file");

  auto* suf = app.add_subcommand("check-sufficient", "Sampled sufficiency certificate");
  suf->add_option("file", sa.file, "Problem file")->required();
  suf->add_option("--candidate", sa.cand, "Candidate CSV")->required();
  suf->add_option("--multipliers", sa.mfile, "Multiplier CSV")->required();
  suf->add_option("--tau", sa.taufile, "Tau file (default <multipliers>.tau)");
  suf->add_option("--variant", sa.variant, "t5, t6, t7, c1, c2, c3 or c4")->capture_default_str();
  suf->add_option("--rho", sa.rho, "rho1 (one per objective), rho2, rho3; missing entries are 0");
  suf->add_option("--strict", sa.strict, "Hypothesis carrying the strict inequality")->capture_default_str();
  suf->add_option("--b", sa.b, "b as an expression in dist (default 1)");
  suf->add_option("--eta", sa.eta, "flat, or n expressions separated by ';'")->capture_default_str();
  suf->add_option("--premise", sa.premise, "Monotonic premise: equality or inequality")->capture_default_str();
  suf->add_option("--samples", sa.samples, "Number of samples")->capture_default_str();
  suf->add_option("--seed", sa.seed, "Sampler seed")->capture_default_str();
  suf->add_option("--tol", sa.tol, "Stationarity and feasibility tolerance")->capture_default_str();
  suf->add_option("--dump-samples", sa.dump, "Write feasible samples as CSV into this directory");

  auto* par = app.add_subcommand("pareto", "Efficient subset of a candidate directory");
  par->add_option("file", file, "Problem file")->required();
  par->add_option("--candidates", dir, "Directory of candidate CSVs")->required();
  par->add_option("--tol", tol, "Feasibility tolerance")->capture_default_str();

  auto* sol = app.add_subcommand("solve", "Penalized gradient descent for a scalar problem");
  sol->add_option("file", so.file, "Problem file")->required();
  sol->add_option("--init", so.init, "Initial guess CSV (default: boundary data extended inside)");
  sol->add_option("--out", so.out, "Solution CSV");
  sol->add_option("--step", so.cfg.step, "Step size (0 = h^2/(8m))")->capture_default_str();
  sol->add_option("--max-iter", so.cfg.max_iterations, "Iteration cap")->capture_default_str();
  sol->add_option("--tol", so.cfg.tolerance, "Relative decrease that stops the descent")->capture_default_str();
  sol->add_option("--gradient-tol", so.cfg.gradient_tolerance, "Residual that stops the descent")->capture_default_str();
  sol->add_option("--w-ineq", so.cfg.inequality_weight, "Inequality penalty weight")->capture_default_str();
  sol->add_option("--w-eq", so.cfg.equality_weight, "Equality penalty weight")->capture_default_str();

  std::vector<const char*> argv{"mtvar"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(file, out);
    if (*eval) return cmd_eval(file, cand, tol, out);
    if (*residual) return cmd_residual(file, cand, objective, dest, out);
    if (*mult) return cmd_multipliers(ma, out);
    if (*nec) return cmd_check_necessary(file, cand, system, mfile, taufile, tol, out);
    if (*tr) return cmd_transform(file, cand, r_index, form, dest, out);
    if (*suf) return cmd_check_sufficient(sa, out);
    if (*par) return cmd_pareto(file, dir, tol, out);
    if (*sol) return cmd_solve(so, out);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace mtvar::cli
