#pragma once

// Penalized steepest descent for scalar problems:
//
//   P(x) = E(x) + w1 sum_a int max(g_a, 0)^2 + w2 sum_s int h_s^2
//               + w1 sum_j max(int c_j, 0)^2
//
// The descent direction is minus the discrete E-O residual of P, which is its
// gradient divided by the nodal quadrature weights; boundary nodes are never
// touched. The step is halved while the objective increases (at most 30
// times); a step that still increases is taken anyway and counted, and 10
// such steps in a row abort.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mtvar/error.hpp"
#include "mtvar/functional.hpp"
#include "mtvar/grid.hpp"
#include "mtvar/problem.hpp"

namespace mtvar {

struct SolveConfig {
  double inequality_weight = 1e3;
  double equality_weight = 1e3;
  double step = 0.0;  // 0 selects h_min^2 / (8 m)
  int max_iterations = 200000;
  double tolerance = 1e-14;           // relative decrease of P that stops the descent
  double gradient_tolerance = 1e-10;  // max |residual| that stops the descent
  std::uint64_t seed = 42;            // initial-guess noise (used by callers)
};

struct SolveResult {
  GridField x;
  int iterations = 0;
  bool converged = false;
  double objective = 0.0;  // penalized
  double max_gradient = 0.0;
  int increases = 0;  // forced steps that raised the objective
  std::string reason;
};

namespace detail {

class PenalizedObjective {
 public:
  PenalizedObjective(const ProblemSpec& ps, const SolveConfig& cfg) : ps_(ps), cfg_(cfg), corners_(ps.domain) {
    const Dims d = ps.dims();
    objective_ = std::make_unique<JetGradient>(ps.f[0], d);
    for (const auto& e : ps.g) g_.emplace_back(e, d);
    for (const auto& e : ps.h) h_.emplace_back(e, d);
    for (const auto& e : ps.integral) c_.emplace_back(e, d);
  }

  double value(const GridField& x) const {
    std::vector<double> total = quadrature_values(objective_->lagrangian, x, corners_);
    for (const auto& g : g_) {
      const auto v = quadrature_values(g.lagrangian, x, corners_);
      for (std::size_t q = 0; q < v.size(); ++q) total[q] += cfg_.inequality_weight * std::pow(std::max(v[q], 0.0), 2);
    }
    for (const auto& h : h_) {
      const auto v = quadrature_values(h.lagrangian, x, corners_);
      for (std::size_t q = 0; q < v.size(); ++q) total[q] += cfg_.equality_weight * v[q] * v[q];
    }
    double out = integrate_points(corners_, total);
    for (const auto& c : c_)
      out += cfg_.inequality_weight * std::pow(std::max(integrate_points(corners_, quadrature_values(c.lagrangian, x, corners_)), 0.0), 2);
    return out;
  }

  GridField gradient(const GridField& x) const {
    std::vector<LinearizedTerm> lin;
    std::vector<std::vector<double>> point;
    lin.reserve(1 + g_.size() + h_.size() + c_.size());
    point.reserve(lin.capacity());
    std::vector<WeightedTerm> terms;
    lin.push_back(linearize(*objective_, x, corners_));
    point.emplace_back();
    for (const auto& g : g_) {
      lin.push_back(linearize(g, x, corners_));
      auto& w = point.emplace_back(lin.back().value);
      for (auto& z : w) z = 2.0 * cfg_.inequality_weight * std::max(z, 0.0);
    }
    for (const auto& h : h_) {
      lin.push_back(linearize(h, x, corners_));
      auto& w = point.emplace_back(lin.back().value);
      for (auto& z : w) z *= 2.0 * cfg_.equality_weight;
    }
    std::vector<double> coef(lin.size(), 1.0);
    for (const auto& c : c_) {
      lin.push_back(linearize(c, x, corners_));
      point.emplace_back();
      coef.push_back(2.0 * cfg_.inequality_weight * std::max(integrate_points(corners_, lin.back().value), 0.0));
    }
    for (std::size_t j = 0; j < lin.size(); ++j) terms.push_back({&lin[j], TermWeight{coef[j], {}, point[j]}});
    return weighted_residual(corners_, ps_.n, terms);
  }

 private:
  const ProblemSpec& ps_;
  const SolveConfig& cfg_;
  CellCorners corners_;
  std::unique_ptr<JetGradient> objective_;
  std::vector<JetGradient> g_, h_, c_;
};

}  // namespace detail

inline double default_step(const Domain& d) {
  double h = std::numeric_limits<double>::infinity();
  for (int v = 0; v < d.m(); ++v) h = std::min(h, d.spacing(v));
  return h * h / (8.0 * d.m());
}

inline double penalized_objective(const ProblemSpec& ps, const SolveConfig& cfg, const GridField& x) {
  return detail::PenalizedObjective(ps, cfg).value(x);
}

inline SolveResult solve_scalar(const ProblemSpec& ps, const SolveConfig& cfg, const GridField& init) {
  ps.validate();
  if (ps.p() != 1 || ps.fractional()) throw InputError("solve_scalar needs a single non-fractional objective");
  if (!(cfg.inequality_weight > 0.0) || !(cfg.equality_weight > 0.0)) throw InputError("penalty weights must be positive");
  if (!(cfg.step >= 0.0) || !(cfg.tolerance > 0.0) || !(cfg.gradient_tolerance > 0.0) || cfg.max_iterations < 0)
    throw InputError("invalid solver configuration");
  check_field(ps, init);
  if (!ps.u.empty()) {
    const FeasibilityReport f = feasibility_check(ps, init, 1e-12);
    if (f.boundary_mismatch > 1e-12) throw PreconditionError("initial guess violates the boundary condition");
  }

  const detail::PenalizedObjective P(ps, cfg);
  const double base_step = cfg.step > 0.0 ? cfg.step : default_step(ps.domain);
  const double min_step = base_step * std::ldexp(1.0, -30);

  SolveResult out;
  out.x = init;
  double value = P.value(out.x);
  double step = base_step;
  int consecutive = 0;
  auto trial_value = [&](const GridField& x) {
    try {
      return P.value(x);
    } catch (const DomainViolation&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  for (out.iterations = 0; out.iterations < cfg.max_iterations; ++out.iterations) {
    const GridField grad = P.gradient(out.x);
    double gmax = 0.0;
    for (double v : grad.values()) gmax = std::max(gmax, std::abs(v));
    out.max_gradient = gmax;
    if (gmax <= cfg.gradient_tolerance) {
      out.converged = true;
      out.reason = "gradient below tolerance";
      break;
    }
    GridField trial = out.x;
    double next = 0.0;
    for (;;) {
      for (std::size_t j = 0; j < trial.values().size(); ++j)
        trial.values()[j] = out.x.values()[j] - step * grad.values()[j];
      next = trial_value(trial);
      if (next <= value || step * 0.5 < min_step) break;
      step *= 0.5;
    }
    if (next <= value) {
      const double decrease = value - next;
      out.x = std::move(trial);
      value = next;
      consecutive = 0;
      if (decrease <= cfg.tolerance * std::max(1.0, std::abs(value))) {
        ++out.iterations;
        out.converged = true;
        out.reason = "objective decrease below tolerance";
        break;
      }
      continue;
    }
    ++out.increases;
    if (!std::isfinite(next) || ++consecutive >= 10)
      throw DivergenceError("objective increased for " + std::to_string(consecutive) +
                            " consecutive steps (step " + detail::format_17g(step) + ")");
    out.x = std::move(trial);
    value = next;
  }
  if (!out.converged) out.reason = "iteration limit reached";
  out.objective = value;
  return out;
}

}  // namespace mtvar
