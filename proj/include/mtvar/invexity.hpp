#pragma once

// (rho, b)-geodesic quasiinvexity on samples and the sufficiency
// certificates built from it.
//
// A functional E is tested at x0 against sampled fields x:
//
//   E(x) <= E(x0)   implies   b * P(eta) <= -rho * b * d(x, x0)^2
//
// where P(eta) is the first variation of E at x0 in the direction
// eta(x0, x). Only refutation is conclusive; a pass means "no counterexample
// among the samples".

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtvar/conditions.hpp"
#include "mtvar/error.hpp"
#include "mtvar/expr.hpp"
#include "mtvar/functional.hpp"
#include "mtvar/grid.hpp"
#include "mtvar/problem.hpp"

namespace mtvar {

// ---------------------------------------------------------------------------
// Deformations and eta fields

/// A family phi(s) joining x0 (s = 0) to x (s = 1) that is a geodesic of the
/// target manifold for every t. Only the flat case ships; curved targets plug
/// in here.
class GeodesicDeformation {
 public:
  virtual ~GeodesicDeformation() = default;
  virtual GridField point(const GridField& x0, const GridField& x, double s) const = 0;
  /// d phi / ds at s = 0.
  virtual GridField velocity(const GridField& x0, const GridField& x) const = 0;
};

class FlatDeformation : public GeodesicDeformation {
 public:
  GridField point(const GridField& x0, const GridField& x, double s) const override {
    GridField out = x0;
    for (std::size_t j = 0; j < out.values().size(); ++j) out.values()[j] += s * (x.values()[j] - x0.values()[j]);
    return out;
  }
  GridField velocity(const GridField& x0, const GridField& x) const override {
    GridField out = x;
    for (std::size_t j = 0; j < out.values().size(); ++j) out.values()[j] -= x0.values()[j];
    return out;
  }
};

enum class EtaMode { flat_difference, user_expression, deformation };

/// User expressions read x<i> as x0 at the node, y<i> as x at the node and
/// `dist` as d(x, x0).
struct EtaGenerator {
  EtaMode mode = EtaMode::flat_difference;
  std::vector<Expr> exprs;
  std::shared_ptr<const GeodesicDeformation> deformation;

  static EtaGenerator flat() { return {}; }
  static EtaGenerator user(std::vector<Expr> e) { return {EtaMode::user_expression, std::move(e), nullptr}; }
  static EtaGenerator from(std::shared_ptr<const GeodesicDeformation> d) {
    return {EtaMode::deformation, {}, std::move(d)};
  }

  /// Parses n expressions separated by ';'.
  static EtaGenerator parse(std::string_view text, Dims dims) {
    std::vector<Expr> out;
    std::size_t start = 0;
    for (;;) {
      const std::size_t end = text.find(';', start);
      out.push_back(mtvar::parse(text.substr(start, end == std::string_view::npos ? end : end - start), dims,
                                 {.sample_variables = true}));
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    if (static_cast<int>(out.size()) != dims.n)
      throw InputError("eta needs " + std::to_string(dims.n) + " expressions separated by ';'");
    return user(std::move(out));
  }
};

inline void zero_boundary(GridField& f) {
  const Domain& d = f.domain();
  for (std::size_t node = 0; node < d.node_count(); ++node)
    if (d.is_boundary(node))
      for (int i = 0; i < f.n(); ++i) f(node, i) = 0.0;
}

inline GridField make_eta(const EtaGenerator& gen, const GridField& x0, const GridField& x) {
  if (!(x0.domain() == x.domain()) || x0.n() != x.n()) throw InputError("make_eta: fields do not match");
  GridField eta;
  switch (gen.mode) {
    case EtaMode::flat_difference:
      eta = FlatDeformation().velocity(x0, x);
      break;
    case EtaMode::deformation:
      if (!gen.deformation) throw InputError("eta generator has no deformation");
      eta = gen.deformation->velocity(x0, x);
      break;
    case EtaMode::user_expression: {
      if (static_cast<int>(gen.exprs.size()) != x.n()) throw InputError("eta needs one expression per component");
      const Domain& d = x.domain();
      eta = GridField(d, x.n());
      const double dist = field_distance(x, x0);
      const FieldJets jets(x0);
      JetPoint p(d.m(), x.n());
      p.y.assign(x.n(), 0.0);
      p.dist = dist;
      for (std::size_t node = 0; node < d.node_count(); ++node) {
        if (d.is_boundary(node)) continue;
        jets.nodal(node, p);
        for (int i = 0; i < x.n(); ++i) p.y[i] = x(node, i);
        try {
          for (int i = 0; i < x.n(); ++i) eta(node, i) = evaluate(gen.exprs[i], p);
        } catch (const DomainViolation& e) {
          detail::rethrow_at_node(e, d, node);
        }
      }
      break;
    }
  }
  zero_boundary(eta);
  return eta;
}

inline bool boundary_zero(const GridField& f) {
  const Domain& d = f.domain();
  for (std::size_t node = 0; node < d.node_count(); ++node)
    if (d.is_boundary(node))
      for (int i = 0; i < f.n(); ++i)
        if (f(node, i) != 0.0) return false;
  return true;
}

/// First variation of E at x0, linearized once and paired with many eta.
class LinearizedFunctional {
 public:
  LinearizedFunctional(const Functional& E, const GridField& x0) : E_(&E), corners_(x0.domain()), n_(x0.n()) {
    for (const auto& term : E.terms()) lin_.push_back(linearize(*term.lagrangian, x0, corners_));
    for (std::size_t j = 0; j < lin_.size(); ++j)
      weights_.push_back({&lin_[j], TermWeight{E.terms()[j].coef, E.terms()[j].weight, {}}});
  }
  LinearizedFunctional(const LinearizedFunctional&) = delete;
  LinearizedFunctional& operator=(const LinearizedFunctional&) = delete;

  double pairing(const GridField& eta) const { return weighted_pairing(corners_, n_, weights_, eta); }
  const Functional& functional() const { return *E_; }

 private:
  const Functional* E_;
  CellCorners corners_;
  int n_;
  std::vector<LinearizedTerm> lin_;
  std::vector<WeightedTerm> weights_;
};

inline double variational_pairing(const Expr& L, const GridField& x0, const GridField& eta) {
  if (!boundary_zero(eta)) throw PreconditionError("eta must vanish on the boundary");
  return Functional(L, {x0.domain().m(), x0.n()}).pairing(x0, eta);
}

// ---------------------------------------------------------------------------
// Budgets

/// b(x, x0) as an expression in `dist`; constant 1 by default.
struct BFunctional {
  std::optional<Expr> expr;

  static BFunctional parse(std::string_view text) {
    return {mtvar::parse(text, {0, 0}, {.sample_variables = true})};
  }

  double operator()(double dist) const {
    if (!expr) return 1.0;
    JetPoint p;
    p.dist = dist;
    const double v = evaluate(*expr, p);
    if (v < 0.0) throw InputError("b(x, x0) = " + detail::format_17g(v) + " is negative");
    return v;
  }
};

struct RhoBudget {
  std::vector<double> rho1;  // one per objective
  double rho2 = 0.0;
  double rho3 = 0.0;
  BFunctional b;
};

// ---------------------------------------------------------------------------
// Sampling

/// Boundary-zero perturbations of x0: sine bumps with random mode numbers,
/// smoothed nodal noise, or both. Amplitudes are log-uniform in
/// [amp_min, amp_max] with random sign. Sample k depends only on (seed, k).
struct PerturbationSampler {
  std::uint64_t seed = 42;
  double amp_min = 1e-3;
  double amp_max = 1.0;
  int max_smoothing = 4;

  GridField perturbation(const Domain& d, int n, std::size_t index) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(std::uint64_t(index) >> 32)};
    std::mt19937_64 rng(seq);
    auto uniform = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto gaussian = [&]() {
      const double u1 = 1.0 - uniform();
      const double u2 = uniform();
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    };
    auto amplitude = [&]() {
      const double a = std::exp(std::log(amp_min) + uniform() * (std::log(amp_max) - std::log(amp_min)));
      return uniform() < 0.5 ? -a : a;
    };

    const double shape = uniform();
    const bool bump = shape < 2.0 / 3.0;
    const bool noise = shape >= 1.0 / 3.0;
    GridField out(d, n);
    std::vector<double> t(d.m());
    if (bump) {
      for (int i = 0; i < n; ++i) {
        const double alpha = amplitude();
        std::vector<int> mode(d.m());
        for (auto& k : mode) k = 1 + static_cast<int>(uniform() * 3.0);
        for (std::size_t node = 0; node < d.node_count(); ++node) {
          d.coordinates(node, t);
          double s = alpha;
          for (int v = 0; v < d.m(); ++v)
            s *= std::sin(mode[v] * std::numbers::pi * (t[v] - d.bounds(v).lo) / (d.bounds(v).hi - d.bounds(v).lo));
          out(node, i) += s;
        }
      }
    }
    if (noise) {
      const int passes = static_cast<int>(uniform() * (max_smoothing + 1));
      for (int i = 0; i < n; ++i) {
        const double beta = amplitude();
        std::vector<double> z(d.node_count(), 0.0);
        for (std::size_t node = 0; node < d.node_count(); ++node)
          if (!d.is_boundary(node)) z[node] = gaussian();
        for (int pass = 0; pass < passes; ++pass) {
          std::vector<double> next(z.size(), 0.0);
          for (std::size_t node = 0; node < d.node_count(); ++node) {
            if (d.is_boundary(node)) continue;
            double s = z[node];
            for (int v = 0; v < d.m(); ++v) s += z[node - d.stride(v)] + z[node + d.stride(v)];
            next[node] = s / (1 + 2 * d.m());
          }
          z.swap(next);
        }
        double peak = 0.0;
        for (double v : z) peak = std::max(peak, std::abs(v));
        if (peak > 0.0)
          for (std::size_t node = 0; node < d.node_count(); ++node) out(node, i) += beta * z[node] / peak;
      }
    }
    zero_boundary(out);
    return out;
  }

  GridField sample(const GridField& x0, std::size_t index) const {
    GridField x = x0;
    const GridField dx = perturbation(x0.domain(), x0.n(), index);
    for (std::size_t j = 0; j < x.values().size(); ++j) x.values()[j] += dx.values()[j];
    return x;
  }
};

// ---------------------------------------------------------------------------
// Quasiinvexity on samples

enum class QuasiMode { plain, strict, monotonic };

inline const char* to_string(QuasiMode m) {
  switch (m) {
    case QuasiMode::plain: return "plain";
    case QuasiMode::strict: return "strict";
    case QuasiMode::monotonic: return "monotonic";
  }
  return "?";
}

/// Premise used by the monotonic mode: |E(x) - E(x0)| <= tie (equality, the
/// default) or E(x) <= E(x0) + tie (inequality).
enum class PremiseMode { equality, inequality };

struct QuasiOptions {
  double tie_tol = 1e-9;  // relative to max(1, |value|)
  PremiseMode monotonic_premise = PremiseMode::equality;
};

enum class SampleStatus { tested, vacuous, b_zero, inadmissible };

struct SampleOutcome {
  SampleStatus status = SampleStatus::vacuous;
  bool violated = false;
  double E_x = 0.0;
  double E_x0 = 0.0;
  double pairing = 0.0;
  double lhs = 0.0;  // b * pairing
  double rhs = 0.0;  // -rho * b * d^2
  double dist = 0.0;
  double b = 0.0;
  std::string note;  // domain violation message for inadmissible samples
};

struct Counterexample {
  std::size_t sample = 0;  // sampler index (or position in an explicit family)
  SampleOutcome outcome;
};

struct QuasiReport {
  std::size_t samples = 0;
  std::size_t tested = 0;
  std::size_t vacuous = 0;
  std::size_t b_zero = 0;
  std::size_t inadmissible = 0;
  double max_pairing = -std::numeric_limits<double>::infinity();  // over tested samples
  std::vector<Counterexample> counterexamples;

  bool passed() const { return counterexamples.empty(); }
};

inline double tie(double tol, double a, double b = 0.0) {
  return tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// One sample against a functional linearized at x0 (E_x0 = E(x0)).
inline SampleOutcome test_sample(const LinearizedFunctional& E, const GridField& x0, double E_x0, const GridField& x,
                                 double rho, const BFunctional& b, QuasiMode mode, const EtaGenerator& gen,
                                 const QuasiOptions& opts = {}) {
  SampleOutcome out;
  out.E_x0 = E_x0;
  try {
    out.E_x = E.functional().value(x);
    const double gap = out.E_x - E_x0;
    const double t = tie(opts.tie_tol, E_x0);
    const bool premise = mode == QuasiMode::monotonic && opts.monotonic_premise == PremiseMode::equality
                             ? std::abs(gap) <= t
                             : gap <= t;
    if (!premise) {
      out.status = SampleStatus::vacuous;
      return out;
    }
    out.dist = field_distance(x, x0);
    out.b = b(out.dist);
    if (out.b == 0.0) {
      out.status = SampleStatus::b_zero;
      return out;
    }
    const GridField eta = make_eta(gen, x0, x);
    out.pairing = E.pairing(eta);
  } catch (const DomainViolation& e) {
    out.status = SampleStatus::inadmissible;
    out.note = e.what();
    return out;
  }
  out.status = SampleStatus::tested;
  out.lhs = out.b * out.pairing;
  out.rhs = -rho * out.b * out.dist * out.dist;
  const double t = tie(opts.tie_tol, out.lhs, out.rhs);
  switch (mode) {
    case QuasiMode::plain: out.violated = !(out.lhs <= out.rhs + t); break;
    case QuasiMode::strict: out.violated = !(out.lhs < out.rhs); break;
    case QuasiMode::monotonic: out.violated = !(std::abs(out.lhs - out.rhs) <= t); break;
  }
  return out;
}

/// Checks an explicit family; labels default to positions.
inline QuasiReport quasiinvexity_check(const Functional& E, const GridField& x0, double rho, const BFunctional& b,
                                       QuasiMode mode, const EtaGenerator& gen, std::span<const GridField> samples,
                                       const QuasiOptions& opts = {}, std::span<const std::size_t> labels = {}) {
  if (!labels.empty() && labels.size() != samples.size()) throw InputError("labels do not match samples");
  const LinearizedFunctional lin(E, x0);
  const double E_x0 = E.value(x0);
  QuasiReport rep;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const SampleOutcome o = test_sample(lin, x0, E_x0, samples[k], rho, b, mode, gen, opts);
    ++rep.samples;
    switch (o.status) {
      case SampleStatus::vacuous: ++rep.vacuous; break;
      case SampleStatus::b_zero: ++rep.b_zero; break;
      case SampleStatus::inadmissible: ++rep.inadmissible; break;
      case SampleStatus::tested:
        ++rep.tested;
        rep.max_pairing = std::max(rep.max_pairing, o.pairing);
        if (o.violated) rep.counterexamples.push_back({labels.empty() ? k : labels[k], o});
        break;
    }
  }
  return rep;
}

/// Checks N samples drawn from `sampler` around x0.
inline QuasiReport quasiinvexity_check(const Functional& E, const GridField& x0, double rho, const BFunctional& b,
                                       QuasiMode mode, const EtaGenerator& gen, const PerturbationSampler& sampler,
                                       std::size_t N, const QuasiOptions& opts = {}) {
  if (N < 1) throw InputError("at least one sample is required");
  std::vector<GridField> samples;
  samples.reserve(N);
  for (std::size_t k = 0; k < N; ++k) samples.push_back(sampler.sample(x0, k));
  return quasiinvexity_check(E, x0, rho, b, mode, gen, samples, opts);
}

/// Re-tests sample `index` of `sampler`.
inline SampleOutcome replay(const Functional& E, const GridField& x0, double rho, const BFunctional& b, QuasiMode mode,
                            const EtaGenerator& gen, const PerturbationSampler& sampler, std::size_t index,
                            const QuasiOptions& opts = {}) {
  const LinearizedFunctional lin(E, x0);
  return test_sample(lin, x0, E.value(x0), sampler.sample(x0, index), rho, b, mode, gen, opts);
}

// ---------------------------------------------------------------------------
// Integration by parts on the grid

/// | int d(eta^i)/dt^v dV/dx^i_v dv + int eta^i D_v(dV/dx^i_v) dv | with
/// nodal jets and trapezoid quadrature. D_v differences dV/dx^i_v taken at the
/// midpoints between neighbouring nodes. Zero in the continuum for
/// boundary-zero eta; on the grid it is O(h^2).
inline double discrete_ibp_identity(const Expr& V, const GridField& x0, const GridField& eta) {
  if (!(eta.domain() == x0.domain()) || eta.n() != x0.n()) throw InputError("eta does not match x0");
  if (!boundary_zero(eta)) throw PreconditionError("eta must vanish on the boundary");
  const Domain& d = x0.domain();
  const int n = x0.n();
  const int m = d.m();
  const JetGradient grad(V, {m, n});
  if (grad.jet_free) return 0.0;
  const FieldJets jets(x0);
  const FieldJets eta_jets(eta);
  JetPoint p(m, n);
  std::vector<double> first(d.node_count(), 0.0), second(d.node_count(), 0.0);
  auto flux = [&](std::size_t node, int v, int i) {
    jets.staggered(node, v, p);
    return evaluate(grad.d_jet[i * m + v], p);
  };
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    jets.nodal(node, p);
    for (int i = 0; i < n; ++i)
      for (int v = 0; v < m; ++v) first[node] += eta_jets.deriv(node, i, v) * evaluate(grad.d_jet[i * m + v], p);
  }
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    if (d.is_boundary(node)) continue;
    for (int v = 0; v < m; ++v) {
      const std::size_t below = node - d.stride(v);
      for (int i = 0; i < n; ++i) second[node] += eta(node, i) * (flux(node, v, i) - flux(below, v, i)) / d.spacing(v);
    }
  }
  return std::abs(integrate(d, first) + integrate(d, second));
}

// ---------------------------------------------------------------------------
// Sufficiency certificates

enum class CertificateVariant { t5, t6, t7, c1, c2, c3, c4 };

inline const char* to_string(CertificateVariant v) {
  static constexpr const char* names[] = {"t5", "t6", "t7", "c1", "c2", "c3", "c4"};
  return names[static_cast<int>(v)];
}

inline CertificateVariant parse_variant(std::string_view s) {
  for (int k = 0; k < 7; ++k)
    if (s == to_string(static_cast<CertificateVariant>(k))) return static_cast<CertificateVariant>(k);
  throw InputError("unknown variant '" + std::string(s) + "' (expected t5, t6, t7, c1, c2, c3 or c4)");
}

inline SystemVariant required_system(CertificateVariant v) {
  switch (v) {
    case CertificateVariant::t5:
    case CertificateVariant::c1: return SystemVariant::vfj;
    case CertificateVariant::t6:
    case CertificateVariant::c2: return SystemVariant::mfj;
    case CertificateVariant::t7:
    case CertificateVariant::c3: return SystemVariant::mfj0;
    case CertificateVariant::c4: return SystemVariant::sfj;
  }
  return SystemVariant::vfj;
}

inline bool is_corollary(CertificateVariant v) { return v >= CertificateVariant::c1; }

enum class Verdict { certified_on_samples, refuted, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_on_samples: return "certified-on-samples";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct HypothesisResult {
  std::string label;       // a1..ap, b, c, b' (combined), d
  std::string functional;  // human-readable description
  QuasiMode mode = QuasiMode::plain;
  double rho = 0.0;
  QuasiReport report;

  /// "pass", "fail" or "vacuous" (no sample reached the inequality).
  std::string verdict() const {
    if (!report.passed()) return "fail";
    return report.tested == 0 ? "vacuous" : "pass";
  }
};

struct CertificateOptions {
  std::size_t samples = 500;
  std::uint64_t seed = 42;
  double tol = 1e-6;       // stationarity / sign / slackness
  double feas_tol = 1e-6;  // feasibility of sampled candidates
  QuasiOptions quasi;
  std::string strict = "a1";  // hypothesis carrying the strict inequality d)
  bool keep_samples = false;
};

struct CertificateReport {
  CertificateVariant variant = CertificateVariant::t5;
  StationarityReport stationarity;
  std::vector<HypothesisResult> hypotheses;  // a), b), c) or a), b')
  HypothesisResult strictness;               // d)
  double rho_value = 0.0;                    // left side of e)
  bool rho_holds = false;
  std::size_t samples_generated = 0;
  std::size_t samples_infeasible = 0;
  std::size_t samples_inadmissible = 0;  // feasible but outside a functional's domain
  std::vector<std::size_t> feasible_labels;
  std::vector<GridField> feasible_samples;  // filled when keep_samples
  Verdict overall = Verdict::inconclusive;
  std::string diagnosis;
};

namespace detail {

inline std::string describe(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? " + " : "") + parts[k];
  return "int(" + s + ")";
}

}  // namespace detail

inline CertificateReport sufficiency_certificate(const ProblemSpec& ps, const GridField& x0, const Multipliers& mult,
                                                 const WeightingScheme& scheme, const RhoBudget& budget,
                                                 CertificateVariant variant, const EtaGenerator& gen,
                                                 const CertificateOptions& opts = {}) {
  if (scheme.variant != required_system(variant))
    throw InputError(std::string("variant ") + to_string(variant) + " needs the " + to_string(required_system(variant)) +
                     " system");
  if (static_cast<int>(budget.rho1.size()) != ps.p()) throw InputError("rho1 needs one entry per objective");
  if (opts.samples < 1) throw InputError("at least one sample is required");
  mult.check(ps);

  CertificateReport rep;
  rep.variant = variant;
  rep.stationarity = stationarity_residual(ps, x0, mult, scheme, opts.tol);
  if (!rep.stationarity.satisfied()) {
    std::string why = "multipliers do not satisfy the " + std::string(to_string(scheme.variant)) + " system:";
    if (rep.stationarity.max_abs > opts.tol) why += " max residual " + detail::format_17g(rep.stationarity.max_abs);
    if (rep.stationarity.sign_violations() > 0) why += " sign violations " + std::to_string(rep.stationarity.sign_violations());
    if (rep.stationarity.slackness_violations > 0)
      why += " slackness violations " + std::to_string(rep.stationarity.slackness_violations);
    if (rep.stationarity.degenerate) why += " all multipliers vanish";
    if (!std::isnan(rep.stationarity.normalization_error) && rep.stationarity.normalization_error > opts.tol)
      why += " <e,tau> != 1";
    throw PreconditionError(why);
  }

  const Dims dims = ps.dims();
  const bool corollary = is_corollary(variant);

  // Objective functionals.
  std::vector<HypothesisResult> hyp;
  std::vector<Functional> functionals;
  for (int r = 0; r < ps.p(); ++r) {
    Functional F(dims);
    std::string text;
    const std::string idx = std::to_string(r + 1);
    switch (scheme.variant) {
      case SystemVariant::mfj:
        F.add(ps.f[r]).add(ps.k[r], -scheme.ratios[r]);
        text = "F" + idx + " - R" + idx + "*K" + idx;
        break;
      case SystemVariant::mfj0:
        F.add(ps.f[r], scheme.k_at_x0[r]).add(ps.k[r], -scheme.f_at_x0[r]);
        text = "K" + idx + "(x0)*F" + idx + " - F" + idx + "(x0)*K" + idx;
        break;
      default:
        F.add(ps.f[r]);
        text = "F" + idx;
        break;
    }
    functionals.push_back(std::move(F));
    hyp.push_back({"a" + idx, text, QuasiMode::plain, budget.rho1[r], {}});
  }

  // Constraint functionals.
  auto lambda_terms = [&](Functional& F, std::vector<std::string>& parts) {
    for (std::size_t a = 0; a < ps.g.size(); ++a) {
      std::vector<double> w(ps.domain.node_count());
      for (std::size_t node = 0; node < w.size(); ++node) w[node] = mult.lambda(node, static_cast<int>(a));
      F.add(ps.g[a], 1.0, std::move(w));
      parts.push_back("lambda" + std::to_string(a + 1) + "*g" + std::to_string(a + 1));
    }
    for (std::size_t j = 0; j < ps.integral.size(); ++j) {
      F.add(ps.integral[j], mult.nu[j]);
      parts.push_back("nu" + std::to_string(j + 1) + "*c" + std::to_string(j + 1));
    }
  };
  auto mu_terms = [&](Functional& F, std::vector<std::string>& parts) {
    for (std::size_t s = 0; s < ps.h.size(); ++s) {
      std::vector<double> w(ps.domain.node_count());
      for (std::size_t node = 0; node < w.size(); ++node) w[node] = mult.mu(node, static_cast<int>(s));
      F.add(ps.h[s], 1.0, std::move(w));
      parts.push_back("mu" + std::to_string(s + 1) + "*h" + std::to_string(s + 1));
    }
  };
  if (corollary) {
    Functional F(dims);
    std::vector<std::string> parts;
    lambda_terms(F, parts);
    mu_terms(F, parts);
    functionals.push_back(std::move(F));
    hyp.push_back({"b'", detail::describe(parts), QuasiMode::plain, budget.rho2, {}});
  } else {
    Functional G(dims), H(dims);
    std::vector<std::string> gp, hp;
    lambda_terms(G, gp);
    mu_terms(H, hp);
    functionals.push_back(std::move(G));
    functionals.push_back(std::move(H));
    hyp.push_back({"b", detail::describe(gp), QuasiMode::plain, budget.rho2, {}});
    // The fractional theorem with the MFJ system states c') without the
    // monotonic qualifier.
    const QuasiMode cmode = variant == CertificateVariant::t6 ? QuasiMode::plain : QuasiMode::monotonic;
    hyp.push_back({"c", detail::describe(hp), cmode, budget.rho3, {}});
  }

  // Designated strict functional.
  std::size_t strict_index = hyp.size();
  for (std::size_t k = 0; k < hyp.size(); ++k)
    if (hyp[k].label == opts.strict || (corollary && opts.strict == "b" && hyp[k].label == "b'")) strict_index = k;
  if (strict_index == hyp.size()) throw InputError("unknown strict hypothesis '" + opts.strict + "'");

  // Samples: feasible members of the perturbation family.
  const PerturbationSampler sampler{opts.seed};
  std::vector<GridField> feasible;
  for (std::size_t k = 0; k < opts.samples; ++k) {
    GridField x = sampler.sample(x0, k);
    ++rep.samples_generated;
    bool ok = false;
    try {
      ok = feasibility_check(ps, x, opts.feas_tol).feasible;
    } catch (const DomainViolation&) {
      ++rep.samples_inadmissible;
      continue;
    }
    if (!ok) {
      ++rep.samples_infeasible;
      continue;
    }
    rep.feasible_labels.push_back(k);
    feasible.push_back(std::move(x));
  }

  bool any_tested_sample = false;
  for (std::size_t k = 0; k < hyp.size(); ++k) {
    hyp[k].report = quasiinvexity_check(functionals[k], x0, hyp[k].rho, budget.b, hyp[k].mode, gen, feasible,
                                        opts.quasi, rep.feasible_labels);
    if (hyp[k].report.samples > hyp[k].report.inadmissible) any_tested_sample = true;
  }
  rep.strictness = hyp[strict_index];
  rep.strictness.label = "d:" + hyp[strict_index].label;
  rep.strictness.mode = QuasiMode::strict;
  rep.strictness.report = quasiinvexity_check(functionals[strict_index], x0, hyp[strict_index].rho, budget.b,
                                              QuasiMode::strict, gen, feasible, opts.quasi, rep.feasible_labels);
  rep.hypotheses = std::move(hyp);

  // e): transvected budget.
  double value = 0.0;
  for (int r = 0; r < ps.p(); ++r) value += mult.tau[r] * budget.rho1[r];
  value += budget.rho2;
  if (!corollary) value += budget.rho3;
  rep.rho_value = value;
  rep.rho_holds = value >= 0.0;

  bool refuted = !rep.strictness.report.passed();
  for (const auto& h : rep.hypotheses) refuted = refuted || !h.report.passed();
  if (refuted) {
    rep.overall = Verdict::refuted;
    rep.diagnosis = "a sampled feasible candidate violates a hypothesis";
  } else if (!rep.rho_holds) {
    rep.overall = Verdict::inconclusive;
    rep.diagnosis = "hypothesis e) fails: the transvected rho budget is negative";
  } else if (feasible.empty() || !any_tested_sample) {
    rep.overall = Verdict::inconclusive;
    rep.diagnosis = "no admissible feasible sample";
  } else {
    rep.overall = Verdict::certified_on_samples;
    rep.diagnosis = "no counterexample among " + std::to_string(feasible.size()) + " feasible samples";
  }
  if (opts.keep_samples) rep.feasible_samples = std::move(feasible);
  return rep;
}

}  // namespace mtvar
