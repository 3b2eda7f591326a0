#pragma once

// Parametric forms of a vector-fractional problem at a reference point x0
// with ratios R_j = F_j(x0) / K_j(x0):
//
//   FPR_r   minimize F_r / K_r    s.t. original constraints and
//   SPR_r   minimize F_r - R_r K_r       F_j - R_j K_j <= 0 for j != r.
//
// The added constraints are integral constraints (one scalar multiplier each).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mtvar/conditions.hpp"
#include "mtvar/error.hpp"
#include "mtvar/problem.hpp"

namespace mtvar {

enum class ParametricForm { fpr, spr };

inline const char* to_string(ParametricForm f) { return f == ParametricForm::fpr ? "fpr" : "spr"; }

inline ParametricForm parse_form(std::string_view s) {
  if (s == "fpr") return ParametricForm::fpr;
  if (s == "spr") return ParametricForm::spr;
  throw InputError("unknown form '" + std::string(s) + "' (expected fpr or spr)");
}

inline void require_fractional(const ProblemSpec& ps) {
  if (!ps.fractional()) throw InputError("operation needs a fractional (VFP) problem");
}

inline std::vector<double> compute_R0(const ProblemSpec& ps, const GridField& x0) {
  require_fractional(ps);
  return eval_objectives(ps, x0).J;
}

/// The parametric instance for objective r (0-based). SPR is returned as a
/// scalar problem, FPR as a single-ratio fractional problem.
inline ProblemSpec build_parametric(const ProblemSpec& ps, const GridField& x0, int r, ParametricForm form) {
  require_fractional(ps);
  if (r < 0 || r >= ps.p()) throw InputError("objective index out of range");
  const std::vector<double> R = compute_R0(ps, x0);
  auto combo = [&](int j) { return ps.f[j] - Expr::constant(R[j]) * ps.k[j]; };

  ProblemSpec out = ps;
  out.f.clear();
  out.k.clear();
  for (int j = 0; j < ps.p(); ++j)
    if (j != r) out.integral.push_back(combo(j));
  if (form == ParametricForm::spr) {
    out.kind = ProblemKind::svp;
    out.f = {combo(r)};
  } else {
    out.kind = ProblemKind::vfp;
    out.f = {ps.f[r]};
    out.k = {ps.k[r]};
  }
  out.validate();
  return out;
}

struct EquivalenceReport {
  std::vector<double> R0;
  std::size_t r = 0;
  std::size_t x0_index = 0;
  std::vector<std::size_t> feasible;     // candidate indices satisfying the added constraints
  std::vector<std::size_t> fpr_argmin;   // ties within tol
  std::vector<std::size_t> spr_argmin;
  double fpr_min = 0.0;
  double spr_min = 0.0;
  bool coincide = false;
  bool premise_holds = false;  // x0 minimizes the ratio over the feasible family
};

/// Compares the argmin sets of FPR_r and SPR_r over a finite family. The
/// candidates must satisfy the original constraints; those violating an added
/// constraint by more than tol are excluded.
inline EquivalenceReport equivalence_check(const ProblemSpec& ps, const GridField& x0, int r,
                                           std::span<const GridField> candidates, double tol = 1e-6) {
  require_fractional(ps);
  if (r < 0 || r >= ps.p()) throw InputError("objective index out of range");
  EquivalenceReport rep;
  rep.r = static_cast<std::size_t>(r);
  rep.R0 = compute_R0(ps, x0);

  bool found = false;
  std::vector<double> ratio(candidates.size()), param(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!feasibility_check(ps, candidates[c], tol).feasible)
      throw PreconditionError("candidate " + std::to_string(c) + " violates the original constraints");
    if (!found && candidates[c] == x0) {
      rep.x0_index = c;
      found = true;
    }
    const ObjectiveValues v = eval_objectives(ps, candidates[c]);
    bool ok = true;
    for (int j = 0; j < ps.p() && ok; ++j)
      if (j != r) ok = v.F[j] - rep.R0[j] * v.K[j] <= tol;
    ratio[c] = v.J[r];
    param[c] = v.F[r] - rep.R0[r] * v.K[r];
    if (ok) rep.feasible.push_back(c);
  }
  if (!found) throw PreconditionError("x0 is not a member of the candidate family");
  if (rep.feasible.empty()) throw PreconditionError("no candidate satisfies the added constraints");

  auto argmin = [&](const std::vector<double>& value, double& best) {
    best = value[rep.feasible.front()];
    for (std::size_t c : rep.feasible) best = std::min(best, value[c]);
    std::vector<std::size_t> out;
    for (std::size_t c : rep.feasible)
      if (value[c] <= best + tol) out.push_back(c);
    return out;
  };
  rep.fpr_argmin = argmin(ratio, rep.fpr_min);
  rep.spr_argmin = argmin(param, rep.spr_min);
  rep.coincide = rep.fpr_argmin == rep.spr_argmin;
  rep.premise_holds = std::find(rep.fpr_argmin.begin(), rep.fpr_argmin.end(), rep.x0_index) != rep.fpr_argmin.end();
  return rep;
}

/// lambda, mu (and the scalar nu) scaled by K_r(x0); tau unchanged. For p > 1
/// the scaling index is the caller's choice.
inline Multipliers rescale_multipliers(const Multipliers& mult, const ProblemSpec& ps, const GridField& x0, int r) {
  require_fractional(ps);
  if (r < 0 || r >= ps.p()) throw InputError("objective index out of range");
  const double K = eval_objectives(ps, x0).K[r];
  Multipliers out = mult;
  for (auto& v : out.lambda.values()) v *= K;
  for (auto& v : out.mu.values()) v *= K;
  for (auto& v : out.nu) v *= K;
  return out;
}

}  // namespace mtvar
