#pragma once

// Problem instances (scalar, vector and vector-fractional), objective
// evaluation, feasibility and Pareto comparison.
//
// Every problem is a minimization. Vector-fractional instances minimize the
// ratios F_r / K_r and require K_r > 0 wherever they are evaluated.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mtvar/error.hpp"
#include "mtvar/expr.hpp"
#include "mtvar/functional.hpp"
#include "mtvar/grid.hpp"

namespace mtvar {

enum class ProblemKind { svp, vvp, vfp };

inline const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::svp: return "SVP";
    case ProblemKind::vvp: return "VVP";
    case ProblemKind::vfp: return "VFP";
  }
  return "?";
}

struct ProblemSpec {
  Domain domain;
  int n = 1;
  ProblemKind kind = ProblemKind::svp;
  std::vector<Expr> f;         // objective integrands (numerators)
  std::vector<Expr> k;         // denominators, VFP only
  std::vector<Expr> g;         // pointwise g(j^1 x) <= 0
  std::vector<Expr> h;         // pointwise h(j^1 x) = 0
  std::vector<Expr> integral;  // integral of c(j^1 x) dv <= 0
  std::vector<Expr> u;         // boundary values x|dOmega = u(t); empty means free
  std::vector<std::string> state_names;

  Dims dims() const { return {domain.m(), n}; }
  int p() const { return static_cast<int>(f.size()); }
  bool fractional() const { return kind == ProblemKind::vfp; }

  void validate() const {
    const Dims d = dims();
    if (n < 1) throw InputError("state dimension n must be >= 1");
    if (f.empty()) throw InputError("problem has no objective");
    switch (kind) {
      case ProblemKind::svp:
        if (f.size() != 1) throw InputError("SVP requires exactly one objective");
        if (!k.empty()) throw InputError("SVP cannot have denominators");
        break;
      case ProblemKind::vvp:
        if (!k.empty()) throw InputError("VVP cannot have denominators");
        break;
      case ProblemKind::vfp:
        if (k.size() != f.size()) throw InputError("VFP requires one denominator per objective");
        break;
    }
    for (const auto* list : {&f, &k, &g, &h, &integral, &u})
      for (const auto& e : *list) check_dims(e, d);
    if (!u.empty()) {
      if (static_cast<int>(u.size()) != n) throw InputError("boundary needs one expression per state component");
      for (const auto& e : u)
        for (int i = 0; i < n; ++i) {
          bool bad = depends_on(e, Variable::state(i));
          for (int v = 0; v < d.m && !bad; ++v) bad = depends_on(e, Variable::jet(i, v));
          if (bad) throw InputError("boundary expressions may depend on t only");
        }
    }
    if (!state_names.empty() && static_cast<int>(state_names.size()) != n)
      throw InputError("state names do not match n");
  }
};

/// u(t) evaluated at every node (used for boundary checks and initial guesses).
inline GridField boundary_field(const ProblemSpec& ps) {
  if (ps.u.empty()) throw InputError("problem has no boundary data");
  JetPoint p(ps.domain.m(), ps.n);
  return GridField::sample(ps.domain, ps.n, [&](std::span<const double> t, std::span<double> out) {
    std::copy(t.begin(), t.end(), p.t.begin());
    for (int i = 0; i < ps.n; ++i) out[i] = evaluate(ps.u[i], p);
  });
}

struct ObjectiveValues {
  std::vector<double> F;
  std::vector<double> K;  // empty unless fractional
  std::vector<double> J;  // F_r / K_r, empty unless fractional

  /// The vector that is minimized: J for fractional problems, F otherwise.
  const std::vector<double>& minimized() const { return J.empty() ? F : J; }
};

inline void check_field(const ProblemSpec& ps, const GridField& x) {
  if (!(x.domain() == ps.domain) || x.n() != ps.n) throw InputError("candidate does not match problem grid/state");
}

inline ObjectiveValues eval_objectives(const ProblemSpec& ps, const GridField& x) {
  check_field(ps, x);
  ObjectiveValues out;
  for (const auto& e : ps.f) out.F.push_back(integrate_lagrangian(e, x));
  if (ps.fractional()) {
    for (std::size_t r = 0; r < ps.k.size(); ++r) {
      const double K = integrate_lagrangian(ps.k[r], x);
      if (!(K > 0.0))
        throw PreconditionError("non-positive denominator K" + std::to_string(r + 1) + " = " + detail::format_17g(K));
      out.K.push_back(K);
      out.J.push_back(out.F[r] / K);
    }
  }
  return out;
}

struct FeasibilityReport {
  std::vector<double> g_worst;         // max over nodes of g_a
  std::vector<double> h_worst;         // max over nodes of |h_s|
  std::vector<double> integral_value;  // integral of c_j
  double boundary_mismatch = 0.0;      // max over boundary nodes of |x - u|
  bool has_boundary = false;
  double tol = 0.0;
  bool feasible = true;
};

inline FeasibilityReport feasibility_check(const ProblemSpec& ps, const GridField& x, double tol = 1e-6) {
  if (!(tol > 0.0)) throw InputError("feasibility tolerance must be positive");
  check_field(ps, x);
  const FieldJets jets(x);
  FeasibilityReport rep;
  rep.tol = tol;
  for (const auto& e : ps.g) {
    auto vals = lagrangian_values(e, jets);
    rep.g_worst.push_back(*std::max_element(vals.begin(), vals.end()));
    if (rep.g_worst.back() > tol) rep.feasible = false;
  }
  for (const auto& e : ps.h) {
    auto vals = lagrangian_values(e, jets);
    double worst = 0.0;
    for (double v : vals) worst = std::max(worst, std::abs(v));
    rep.h_worst.push_back(worst);
    if (worst > tol) rep.feasible = false;
  }
  for (const auto& e : ps.integral) {
    rep.integral_value.push_back(integrate_lagrangian(e, x));
    if (rep.integral_value.back() > tol) rep.feasible = false;
  }
  if (!ps.u.empty()) {
    rep.has_boundary = true;
    const GridField u = boundary_field(ps);
    for (std::size_t node = 0; node < ps.domain.node_count(); ++node) {
      if (!ps.domain.is_boundary(node)) continue;
      for (int i = 0; i < ps.n; ++i) rep.boundary_mismatch = std::max(rep.boundary_mismatch, std::abs(x(node, i) - u(node, i)));
    }
    if (rep.boundary_mismatch > tol) rep.feasible = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Pareto orders on R^p

/// Most specific relation of v to w. `leq` is part of the vocabulary but is
/// never the most specific answer: v <= w componentwise is either `equal` or
/// `less_and_not_equal`.
enum class ParetoRelation { equal, strictly_less, leq, less_and_not_equal, incomparable };

inline const char* to_string(ParetoRelation r) {
  switch (r) {
    case ParetoRelation::equal: return "equal";
    case ParetoRelation::strictly_less: return "strictly_less";
    case ParetoRelation::leq: return "leq";
    case ParetoRelation::less_and_not_equal: return "less_and_not_equal";
    case ParetoRelation::incomparable: return "incomparable";
  }
  return "?";
}

inline void check_lengths(std::span<const double> v, std::span<const double> w) {
  if (v.size() != w.size()) throw InputError("pareto comparison of vectors with different lengths");
}

/// v ⪯ w: every component <=.
inline bool pareto_leq(std::span<const double> v, std::span<const double> w) {
  check_lengths(v, w);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] <= w[i])) return false;
  return true;
}

/// v < w: every component strictly less.
inline bool pareto_less(std::span<const double> v, std::span<const double> w) {
  check_lengths(v, w);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] < w[i])) return false;
  return true;
}

/// v ≤ w: v ⪯ w and v != w.
inline bool pareto_dominates(std::span<const double> v, std::span<const double> w) {
  return pareto_leq(v, w) && !std::equal(v.begin(), v.end(), w.begin(), w.end());
}

inline ParetoRelation pareto_compare(std::span<const double> v, std::span<const double> w) {
  check_lengths(v, w);
  if (std::equal(v.begin(), v.end(), w.begin(), w.end())) return ParetoRelation::equal;
  if (pareto_less(v, w)) return ParetoRelation::strictly_less;
  if (pareto_leq(v, w)) return ParetoRelation::less_and_not_equal;
  return ParetoRelation::incomparable;
}

/// Indices of candidates not dominated (in the ≤ sense) by any other
/// candidate. Throws PreconditionError naming the first infeasible candidate.
inline std::vector<std::size_t> pareto_oracle(const ProblemSpec& ps, std::span<const GridField> candidates,
                                              double tol = 1e-6) {
  std::vector<std::vector<double>> values;
  values.reserve(candidates.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (!feasibility_check(ps, candidates[j], tol).feasible)
      throw PreconditionError("candidate " + std::to_string(j) + " is infeasible");
    values.push_back(eval_objectives(ps, candidates[j]).minimized());
  }
  std::vector<std::size_t> efficient;
  for (std::size_t i = 0; i < values.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < values.size() && !dominated; ++j)
      dominated = j != i && pareto_dominates(values[j], values[i]);
    if (!dominated) efficient.push_back(i);
  }
  return efficient;
}

}  // namespace mtvar
