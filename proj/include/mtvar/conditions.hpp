#pragma once

// Euler-Ostrogradsky residuals and the four multiplier systems
//
//   SFJ   tau X
//   VFJ   tau^r f_r
//   MFJ   tau^r (f_r - R_r k_r)
//   MFJ0  tau^r (K_r(x0) f_r - F_r(x0) k_r)
//
// each completed by lambda^a(t) g_a + mu^s(t) h_s + nu^j c_j and tested at the
// interior nodes. Multiplier recovery is a bounded least-squares problem
// assembled from the same residual engine.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mtvar/detail/nnls.hpp"
#include "mtvar/error.hpp"
#include "mtvar/functional.hpp"
#include "mtvar/grid.hpp"
#include "mtvar/problem.hpp"

namespace mtvar {

/// Discrete E-O residual of a single Lagrangian. Boundary nodes are zero.
inline GridField eo_residual(const Expr& X, const GridField& x) {
  return Functional(X, {x.domain().m(), x.n()}).residual(x);
}

enum class SystemVariant { sfj, vfj, mfj, mfj0 };

inline const char* to_string(SystemVariant v) {
  switch (v) {
    case SystemVariant::sfj: return "sfj";
    case SystemVariant::vfj: return "vfj";
    case SystemVariant::mfj: return "mfj";
    case SystemVariant::mfj0: return "mfj0";
  }
  return "?";
}

inline SystemVariant parse_system(std::string_view s) {
  if (s == "sfj") return SystemVariant::sfj;
  if (s == "vfj") return SystemVariant::vfj;
  if (s == "mfj") return SystemVariant::mfj;
  if (s == "mfj0") return SystemVariant::mfj0;
  throw InputError("unknown system '" + std::string(s) + "' (expected sfj, vfj, mfj or mfj0)");
}

/// Objective weight term of a multiplier system.
struct WeightingScheme {
  SystemVariant variant = SystemVariant::vfj;
  std::vector<double> ratios;   // R_r at x0 (MFJ)
  std::vector<double> k_at_x0;  // K_r(x0) (MFJ0)
  std::vector<double> f_at_x0;  // F_r(x0) (MFJ0)

  static WeightingScheme sfj() { return {SystemVariant::sfj, {}, {}, {}}; }
  static WeightingScheme vfj() { return {SystemVariant::vfj, {}, {}, {}}; }
  static WeightingScheme mfj(std::vector<double> r0) { return {SystemVariant::mfj, std::move(r0), {}, {}}; }
  static WeightingScheme mfj0(std::vector<double> k, std::vector<double> f) {
    return {SystemVariant::mfj0, {}, std::move(k), std::move(f)};
  }

  void validate(const ProblemSpec& ps) const {
    const auto p = static_cast<std::size_t>(ps.p());
    switch (variant) {
      case SystemVariant::sfj:
        if (p != 1 || ps.fractional()) throw InputError("sfj needs a single non-fractional objective");
        break;
      case SystemVariant::vfj:
        if (ps.fractional()) throw InputError("vfj needs a non-fractional problem");
        break;
      case SystemVariant::mfj:
        if (!ps.fractional()) throw InputError("mfj needs a fractional problem");
        if (ratios.size() != p) throw InputError("mfj needs one ratio per objective");
        break;
      case SystemVariant::mfj0:
        if (!ps.fractional()) throw InputError("mfj0 needs a fractional problem");
        if (k_at_x0.size() != p || f_at_x0.size() != p) throw InputError("mfj0 needs K(x0) and F(x0) per objective");
        break;
    }
  }

  /// Coefficients (on f_r, on k_r) of the r-th objective weight.
  std::pair<double, double> objective_coefficients(std::size_t r) const {
    switch (variant) {
      case SystemVariant::mfj: return {1.0, -ratios[r]};
      case SystemVariant::mfj0: return {k_at_x0[r], -f_at_x0[r]};
      default: return {1.0, 0.0};
    }
  }

  /// True for the systems whose normal form fixes <e, tau> = 1.
  bool sum_normalized() const { return variant != SystemVariant::sfj; }
};

/// Scheme for `variant` with its auxiliary data computed at x0.
inline WeightingScheme make_scheme(SystemVariant variant, const ProblemSpec& ps, const GridField& x0) {
  WeightingScheme s{variant, {}, {}, {}};
  if (variant == SystemVariant::mfj || variant == SystemVariant::mfj0) {
    if (!ps.fractional()) throw InputError(std::string(to_string(variant)) + " needs a fractional problem");
    const ObjectiveValues v = eval_objectives(ps, x0);
    if (variant == SystemVariant::mfj) {
      s.ratios = v.J;
    } else {
      s.k_at_x0 = v.K;
      s.f_at_x0 = v.F;
    }
  }
  s.validate(ps);
  return s;
}

struct Multipliers {
  std::vector<double> tau;  // p
  GridField lambda;         // one component per g
  GridField mu;             // one component per h
  std::vector<double> nu;   // one per integral constraint

  static Multipliers zero(const ProblemSpec& ps) {
    return {std::vector<double>(ps.p(), 0.0), GridField(ps.domain, static_cast<int>(ps.g.size())),
            GridField(ps.domain, static_cast<int>(ps.h.size())), std::vector<double>(ps.integral.size(), 0.0)};
  }

  void check(const ProblemSpec& ps) const {
    if (static_cast<int>(tau.size()) != ps.p()) throw InputError("tau has wrong length");
    if (!(lambda.domain() == ps.domain) || lambda.n() != static_cast<int>(ps.g.size()))
      throw InputError("lambda does not match the problem's grid/inequality count");
    if (!(mu.domain() == ps.domain) || mu.n() != static_cast<int>(ps.h.size()))
      throw InputError("mu does not match the problem's grid/equality count");
    if (nu.size() != ps.integral.size()) throw InputError("nu has wrong length");
  }

  Multipliers scaled(double s) const {
    Multipliers out = *this;
    for (auto& v : out.tau) v *= s;
    for (auto& v : out.lambda.values()) v *= s;
    for (auto& v : out.mu.values()) v *= s;
    for (auto& v : out.nu) v *= s;
    return out;
  }
};

/// The stationarity operator of one problem linearized at x0. Linear in the
/// multipliers; boundary rows are zero.
class StationaritySystem {
 public:
  StationaritySystem(const ProblemSpec& ps, const GridField& x0, WeightingScheme scheme)
      : ps_(ps), x0_(x0), scheme_(std::move(scheme)), corners_(ps.domain) {
    ps_.validate();
    check_field(ps_, x0_);
    scheme_.validate(ps_);
    const FieldJets jets(x0_);
    const Dims d = ps_.dims();
    auto lin = [&](const std::vector<Expr>& list) {
      std::vector<LinearizedTerm> out;
      for (const auto& e : list) out.push_back(linearize(JetGradient(e, d), x0_, corners_));
      return out;
    };
    f_ = lin(ps_.f);
    if (ps_.fractional() && scheme_.variant != SystemVariant::vfj && scheme_.variant != SystemVariant::sfj)
      k_ = lin(ps_.k);
    g_ = lin(ps_.g);
    h_ = lin(ps_.h);
    c_ = lin(ps_.integral);
    for (const auto& e : ps_.g) g_values_.push_back(lagrangian_values(e, jets));
    for (const auto& c : c_) c_values_.push_back(integrate_points(corners_, c.value));
  }

  const ProblemSpec& problem() const { return ps_; }
  const GridField& point() const { return x0_; }
  const WeightingScheme& scheme() const { return scheme_; }
  const std::vector<std::vector<double>>& g_values() const { return g_values_; }
  const std::vector<double>& integral_values() const { return c_values_; }

  GridField residual(const Multipliers& mult) const {
    mult.check(ps_);
    std::vector<WeightedTerm> terms;
    for (std::size_t r = 0; r < f_.size(); ++r) {
      const auto [cf, ck] = scheme_.objective_coefficients(r);
      terms.push_back({&f_[r], {mult.tau[r] * cf, {}, {}}});
      if (!k_.empty() && ck != 0.0) terms.push_back({&k_[r], {mult.tau[r] * ck, {}, {}}});
    }
    const auto lam = components(mult.lambda);
    const auto mu = components(mult.mu);
    for (std::size_t a = 0; a < g_.size(); ++a) terms.push_back({&g_[a], {1.0, lam[a], {}}});
    for (std::size_t s = 0; s < h_.size(); ++s) terms.push_back({&h_[s], {1.0, mu[s], {}}});
    for (std::size_t j = 0; j < c_.size(); ++j) terms.push_back({&c_[j], {mult.nu[j], {}, {}}});
    return weighted_residual(corners_, ps_.n, terms);
  }

 private:
  static std::vector<std::vector<double>> components(const GridField& f) {
    std::vector<std::vector<double>> out(f.n(), std::vector<double>(f.node_count()));
    for (std::size_t node = 0; node < f.node_count(); ++node)
      for (int i = 0; i < f.n(); ++i) out[i][node] = f(node, i);
    return out;
  }

  ProblemSpec ps_;
  GridField x0_;
  WeightingScheme scheme_;
  CellCorners corners_;
  std::vector<LinearizedTerm> f_, k_, g_, h_, c_;
  std::vector<std::vector<double>> g_values_;
  std::vector<double> c_values_;
};

/// sqrt of the trapezoid integral of |r|^2 over interior nodes.
inline double interior_norm(const GridField& r) {
  const Domain& d = r.domain();
  double s = 0.0;
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    if (d.is_boundary(node)) continue;
    for (int i = 0; i < r.n(); ++i) s += d.weights()[node] * r(node, i) * r(node, i);
  }
  return std::sqrt(s);
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double z : v) m = std::max(m, std::abs(z));
  return m;
}

struct StationarityReport {
  GridField field;
  double max_abs = 0.0;
  double norm = 0.0;                    // interior_norm(field)
  double slackness_max = 0.0;           // max |lambda^a g_a| over nodes, |nu_j C_j|
  std::size_t slackness_violations = 0;
  std::size_t tau_sign_violations = 0;
  std::size_t lambda_sign_violations = 0;
  std::size_t nu_sign_violations = 0;
  double normalization_error = std::numeric_limits<double>::quiet_NaN();  // |<e,tau> - 1|, MFJ/MFJ0
  bool degenerate = false;  // every multiplier within tol of zero
  double tol = 0.0;

  std::size_t sign_violations() const { return tau_sign_violations + lambda_sign_violations + nu_sign_violations; }

  bool satisfied() const {
    return max_abs <= tol && slackness_violations == 0 && sign_violations() == 0 && !degenerate &&
           (std::isnan(normalization_error) || normalization_error <= tol);
  }
};

inline StationarityReport stationarity_residual(const StationaritySystem& sys, const Multipliers& mult,
                                                double tol = 1e-6) {
  const ProblemSpec& ps = sys.problem();
  StationarityReport rep;
  rep.tol = tol;
  rep.field = sys.residual(mult);
  rep.max_abs = max_abs(rep.field.values());
  rep.norm = interior_norm(rep.field);
  for (std::size_t a = 0; a < ps.g.size(); ++a)
    for (std::size_t node = 0; node < ps.domain.node_count(); ++node) {
      const double lam = mult.lambda(node, static_cast<int>(a));
      const double slack = std::abs(lam * sys.g_values()[a][node]);
      rep.slackness_max = std::max(rep.slackness_max, slack);
      if (slack > tol) ++rep.slackness_violations;
      if (lam < -tol) ++rep.lambda_sign_violations;
    }
  for (std::size_t j = 0; j < ps.integral.size(); ++j) {
    const double slack = std::abs(mult.nu[j] * sys.integral_values()[j]);
    rep.slackness_max = std::max(rep.slackness_max, slack);
    if (slack > tol) ++rep.slackness_violations;
    if (mult.nu[j] < -tol) ++rep.nu_sign_violations;
  }
  double tau_sum = 0.0;
  for (double t : mult.tau) {
    if (t < -tol) ++rep.tau_sign_violations;
    tau_sum += t;
  }
  const auto v = sys.scheme().variant;
  if (v == SystemVariant::mfj || v == SystemVariant::mfj0) rep.normalization_error = std::abs(tau_sum - 1.0);
  rep.degenerate = max_abs(mult.tau) <= tol && max_abs(mult.lambda.values()) <= tol &&
                   max_abs(mult.mu.values()) <= tol && max_abs(mult.nu) <= tol;
  return rep;
}

inline StationarityReport stationarity_residual(const ProblemSpec& ps, const GridField& x0, const Multipliers& mult,
                                                const WeightingScheme& scheme, double tol = 1e-6) {
  return stationarity_residual(StationaritySystem(ps, x0, scheme), mult, tol);
}

// ---------------------------------------------------------------------------
// Normality

struct NormalityResult {
  bool normal = false;
  std::string diagnosis;
  std::vector<double> tau;  // tau / <e,tau> for the vector systems, tau for sfj
};

inline NormalityResult normality_check(const Multipliers& mult, const WeightingScheme& scheme, double tol = 1e-6) {
  NormalityResult out;
  out.tau = mult.tau;
  if (mult.tau.empty()) {
    out.diagnosis = "no objective multiplier";
    return out;
  }
  if (!scheme.sum_normalized()) {
    out.normal = mult.tau[0] > tol;
    out.diagnosis = out.normal ? "tau > 0" : "tau = " + detail::format_17g(mult.tau[0]) + " is not positive";
    return out;
  }
  double sum = 0.0;
  for (std::size_t r = 0; r < mult.tau.size(); ++r) {
    if (mult.tau[r] < -tol) {
      out.diagnosis = "tau" + std::to_string(r + 1) + " is negative";
      return out;
    }
    sum += mult.tau[r];
  }
  if (!(sum > tol)) {
    out.diagnosis = "<e,tau> = " + detail::format_17g(sum) + " vanishes; no normalization <e,tau> = 1 exists";
    return out;
  }
  for (auto& t : out.tau) t /= sum;
  out.normal = true;
  out.diagnosis = "tau >= 0 and <e,tau> = 1 after normalization";
  return out;
}

/// The same multipliers scaled so the scheme's normal form holds
/// (<e,tau> = 1 for the vector systems). Unchanged when tau sums to zero.
inline Multipliers normalize_for_scheme(const Multipliers& mult, const WeightingScheme& scheme) {
  if (!scheme.sum_normalized()) return mult;
  double sum = 0.0;
  for (double t : mult.tau) sum += t;
  if (!(sum > 0.0)) return mult;
  return mult.scaled(1.0 / sum);
}

// ---------------------------------------------------------------------------
// Multiplier recovery

struct RecoveryOptions {
  double slack_tol = 1e-6;  // g_a < -slack_tol forces lambda^a = 0
  double feas_tol = 1e-6;
  double report_tol = 1e-6;  // residual_norm threshold for "conditions satisfied"
};

struct RecoveryResult {
  Multipliers multipliers;  // normalized: |tau|_1 + |nu|_1 + int|lambda| + int|mu| = 1
  double residual_norm = 0.0;
  double max_residual = 0.0;
  std::size_t active_lambda = 0;  // free lambda unknowns after the active-set reduction
  bool pure_mu = false;           // best solution has tau = lambda = nu = 0
  bool satisfied = false;         // residual_norm <= report_tol
};

namespace detail {

/// Interior representative of a node: every coordinate index clamped into
/// [1, N-2]. Multiplier fields are parametrized by their interior values.
inline std::size_t interior_representative(const Domain& d, std::size_t node) {
  std::size_t out = 0;
  for (int v = 0; v < d.m(); ++v) {
    const int k = std::clamp(d.coordinate_index(node, v), 1, d.resolution(v) - 2);
    out += d.stride(v) * k;
  }
  return out;
}

inline double multiplier_mass(const Multipliers& m) {
  double s = 0.0;
  for (double t : m.tau) s += std::abs(t);
  for (double t : m.nu) s += std::abs(t);
  const Domain& d = m.lambda.domain();
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    for (int a = 0; a < m.lambda.n(); ++a) s += d.weights()[node] * std::abs(m.lambda(node, a));
    for (int b = 0; b < m.mu.n(); ++b) s += d.weights()[node] * std::abs(m.mu(node, b));
  }
  return s;
}

}  // namespace detail

inline RecoveryResult recover_multipliers(const ProblemSpec& ps, const GridField& x0, const WeightingScheme& scheme,
                                          const RecoveryOptions& opts = {}) {
  const FeasibilityReport feas = feasibility_check(ps, x0, opts.feas_tol);
  if (!feas.feasible) throw PreconditionError("candidate is infeasible; multipliers are only recovered at feasible points");
  const StationaritySystem sys(ps, x0, scheme);
  const Domain& d = ps.domain;
  const int n = ps.n;

  std::vector<std::size_t> interior;
  std::vector<std::vector<std::size_t>> members(d.node_count());
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    if (!d.is_boundary(node)) interior.push_back(node);
    members[detail::interior_representative(d, node)].push_back(node);
  }

  // Unknown layout: tau | nu | lambda (active pairs) | mu (interior x q).
  struct Unknown {
    enum Kind { tau, nu, lambda, mu } kind;
    int index;
    std::size_t node;  // interior representative for field multipliers
  };
  std::vector<Unknown> unknowns;
  for (int r = 0; r < ps.p(); ++r) unknowns.push_back({Unknown::tau, r, 0});
  for (std::size_t j = 0; j < ps.integral.size(); ++j)
    if (sys.integral_values()[j] >= -opts.slack_tol) unknowns.push_back({Unknown::nu, static_cast<int>(j), 0});
  std::size_t active_lambda = 0;
  for (std::size_t a = 0; a < ps.g.size(); ++a)
    for (std::size_t node : interior) {
      bool active = true;
      for (std::size_t member : members[node]) active = active && sys.g_values()[a][member] >= -opts.slack_tol;
      if (active) {
        unknowns.push_back({Unknown::lambda, static_cast<int>(a), node});
        ++active_lambda;
      }
    }
  const std::size_t first_mu = unknowns.size();
  for (std::size_t s = 0; s < ps.h.size(); ++s)
    for (std::size_t node : interior) unknowns.push_back({Unknown::mu, static_cast<int>(s), node});

  auto assign = [&](Multipliers& m, const Unknown& u, double value) {
    switch (u.kind) {
      case Unknown::tau: m.tau[u.index] = value; break;
      case Unknown::nu: m.nu[u.index] = value; break;
      case Unknown::lambda:
        for (std::size_t member : members[u.node]) m.lambda(member, u.index) = value;
        break;
      case Unknown::mu:
        for (std::size_t member : members[u.node]) m.mu(member, u.index) = value;
        break;
    }
  };
  auto mass_coefficient = [&](const Unknown& u) {
    if (u.kind == Unknown::tau || u.kind == Unknown::nu) return 1.0;
    double w = 0.0;
    for (std::size_t member : members[u.node]) w += d.weights()[member];
    return w;
  };

  const auto rows = static_cast<Eigen::Index>(interior.size() * n);
  const auto cols = static_cast<Eigen::Index>(unknowns.size());
  Eigen::MatrixXd A(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    Multipliers probe = Multipliers::zero(ps);
    assign(probe, unknowns[c], 1.0);
    const GridField r = sys.residual(probe);
    for (std::size_t k = 0; k < interior.size(); ++k) {
      const double sw = std::sqrt(d.weights()[interior[k]]);
      for (int i = 0; i < n; ++i) A(static_cast<Eigen::Index>(k * n + i), c) = sw * r(interior[k], i);
    }
  }

  auto build = [&](const Eigen::VectorXd& z) {
    Multipliers m = Multipliers::zero(ps);
    for (Eigen::Index c = 0; c < cols; ++c) assign(m, unknowns[c], z[c]);
    return m;
  };
  auto finish = [&](Multipliers m) {
    const double mass = detail::multiplier_mass(m);
    if (mass > 0.0) m = m.scaled(1.0 / mass);
    return m;
  };

  // Phase 1: the sign-constrained unknowns carry the normalization.
  Multipliers best;
  double best_norm = std::numeric_limits<double>::infinity();
  if (first_mu > 0) {
    const double scale = std::max(1.0, A.norm());
    Eigen::MatrixXd Ab(rows + 1, cols);
    Ab.topRows(rows) = A;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows + 1);
    for (Eigen::Index c = 0; c < cols; ++c)
      Ab(rows, c) = static_cast<std::size_t>(c) < first_mu ? scale * mass_coefficient(unknowns[c]) : 0.0;
    b[rows] = scale;
    std::vector<bool> is_free(cols, false);
    for (auto c = static_cast<Eigen::Index>(first_mu); c < cols; ++c) is_free[c] = true;
    // Unconstrained solution first; it is optimal whenever it is sign-feasible.
    Eigen::VectorXd z = Ab.completeOrthogonalDecomposition().solve(b);
    bool sign_ok = true;
    for (std::size_t c = 0; c < first_mu; ++c) sign_ok = sign_ok && z[static_cast<Eigen::Index>(c)] >= 0.0;
    if (!sign_ok) z = detail::bounded_least_squares(Ab, b, is_free).z;
    best = finish(build(z));
    best_norm = interior_norm(sys.residual(best));
  }

  // Phase 2: tau = nu = lambda = 0 and mu the smallest right singular vector.
  bool pure_mu = false;
  if (static_cast<Eigen::Index>(first_mu) < cols) {
    const Eigen::MatrixXd Amu = A.rightCols(cols - static_cast<Eigen::Index>(first_mu));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Amu, Eigen::ComputeFullV);
    const Eigen::VectorXd v = svd.matrixV().col(Amu.cols() - 1);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
    z.tail(Amu.cols()) = v;
    Multipliers m = finish(build(z));
    const double norm = interior_norm(sys.residual(m));
    if (norm < best_norm) {
      best = std::move(m);
      best_norm = norm;
      pure_mu = true;
    }
  }
  if (!std::isfinite(best_norm)) {
    // No unknowns at all: only the zero multipliers exist.
    best = Multipliers::zero(ps);
    best_norm = interior_norm(sys.residual(best));
  }

  RecoveryResult out;
  out.multipliers = std::move(best);
  out.residual_norm = best_norm;
  out.max_residual = max_abs(sys.residual(out.multipliers).values());
  out.active_lambda = active_lambda;
  out.pure_mu = pure_mu;
  out.satisfied = best_norm <= opts.report_tol && detail::multiplier_mass(out.multipliers) > 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Multiplier files: CSV t1..tm,lambda1..,mu1.. plus a one-line sidecar
// "tau=<list>[ nu=<list>]".

inline void write_multipliers_csv(std::ostream& os, const Multipliers& m) {
  const Domain& d = m.lambda.domain();
  std::vector<std::string> names;
  for (int a = 0; a < m.lambda.n(); ++a) names.push_back("lambda" + std::to_string(a + 1));
  for (int s = 0; s < m.mu.n(); ++s) names.push_back("mu" + std::to_string(s + 1));
  const std::size_t cols = names.size();
  std::vector<double> values(d.node_count() * cols);
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    for (int a = 0; a < m.lambda.n(); ++a) values[node * cols + a] = m.lambda(node, a);
    for (int s = 0; s < m.mu.n(); ++s) values[node * cols + m.lambda.n() + s] = m.mu(node, s);
  }
  write_grid_csv(os, d, names, values);
}

inline void write_tau_line(std::ostream& os, const Multipliers& m) {
  os << "tau=";
  for (std::size_t r = 0; r < m.tau.size(); ++r) os << (r ? "," : "") << detail::format_17g(m.tau[r]);
  if (!m.nu.empty()) {
    os << " nu=";
    for (std::size_t j = 0; j < m.nu.size(); ++j) os << (j ? "," : "") << detail::format_17g(m.nu[j]);
  }
  os << '\n';
}

inline Multipliers read_multipliers(std::istream& csv, std::istream& tau_line, const ProblemSpec& ps) {
  Multipliers m = Multipliers::zero(ps);
  const GridTable table = read_grid_csv(csv, ps.domain);
  const std::size_t mc = ps.g.size();
  const std::size_t q = ps.h.size();
  if (table.names.size() != mc + q) throw InputError("multiplier CSV needs " + std::to_string(mc + q) + " columns");
  for (std::size_t a = 0; a < mc; ++a)
    if (table.names[a] != "lambda" + std::to_string(a + 1))
      throw InputError("multiplier column " + std::to_string(a + 1) + " must be lambda" + std::to_string(a + 1));
  for (std::size_t s = 0; s < q; ++s)
    if (table.names[mc + s] != "mu" + std::to_string(s + 1))
      throw InputError("multiplier column must be mu" + std::to_string(s + 1));
  const std::size_t cols = mc + q;
  for (std::size_t node = 0; node < ps.domain.node_count(); ++node) {
    for (std::size_t a = 0; a < mc; ++a) m.lambda(node, static_cast<int>(a)) = table.values[node * cols + a];
    for (std::size_t s = 0; s < q; ++s) m.mu(node, static_cast<int>(s)) = table.values[node * cols + mc + s];
  }

  std::string line;
  if (!std::getline(tau_line, line)) throw InputError("empty tau file");
  auto parse_list = [](const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    for (const auto& cell : detail::split(text, ',')) out.push_back(detail::parse_double(cell));
    return out;
  };
  std::istringstream is(line);
  std::string token;
  bool have_tau = false;
  while (is >> token) {
    if (token.rfind("tau=", 0) == 0) {
      m.tau = parse_list(token.substr(4));
      have_tau = true;
    } else if (token.rfind("nu=", 0) == 0) {
      m.nu = parse_list(token.substr(3));
    } else {
      throw InputError("unexpected token '" + token + "' in tau file");
    }
  }
  if (!have_tau) throw InputError("tau file has no tau= entry");
  m.check(ps);
  return m;
}

}  // namespace mtvar
