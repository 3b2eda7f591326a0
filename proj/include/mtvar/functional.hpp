#pragma once

// Integral functionals  E(x) = sum_j c_j * integral of w_j(t) L_j(j^1 x) dv
// on a grid, together with their discrete Euler-Ostrogradsky residual
//
//   r^i = dL/dx^i - sum_v D_v (dL/dx^i_v)
//
// and the first variation (pairing) against a direction field eta.
//
// Integrals use the cell-corner rule: every grid cell contributes
// |cell| / 2^m * L at each of its 2^m corners, with x_v taken as the
// difference along the cell edge through that corner. For integrands without
// jet dependence this is the trapezoid rule. The residual at an interior node
// is the gradient of the discrete functional divided by the node's
// quadrature weight, so the pairing with a boundary-zero eta equals the
// quadrature of eta * r exactly (discrete integration by parts). In the
// interior it is a second-order flux difference without odd-even null space.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtvar/error.hpp"
#include "mtvar/expr.hpp"
#include "mtvar/grid.hpp"

namespace mtvar {

/// A Lagrangian and all its first partials in x and x_v.
struct JetGradient {
  Expr lagrangian;
  std::vector<Expr> d_state;  // n
  std::vector<Expr> d_jet;    // n*m, [i*m + v]
  bool jet_free = true;
  Dims dims;

  JetGradient(Expr e, Dims d) : lagrangian(std::move(e)), dims(d) {
    check_dims(lagrangian, d);
    d_state.reserve(d.n);
    d_jet.reserve(static_cast<std::size_t>(d.n) * d.m);
    for (int i = 0; i < d.n; ++i) {
      d_state.push_back(differentiate(lagrangian, Variable::state(i)));
      for (int v = 0; v < d.m; ++v) {
        d_jet.push_back(differentiate(lagrangian, Variable::jet(i, v)));
        if (!d_jet.back().is_zero()) jet_free = false;
      }
    }
  }
};

namespace detail {

[[noreturn]] inline void rethrow_at_node(const DomainViolation& e, const Domain& d, std::size_t node,
                                         const char* where = "node") {
  std::string msg = e.what();
  msg += std::string(" at ") + where + " (";
  for (int v = 0; v < d.m(); ++v) msg += (v ? "," : "") + std::to_string(d.coordinate_index(node, v));
  msg += ")";
  throw DomainViolation(msg);
}

}  // namespace detail

/// Nodal jets of one field, computed once.
class FieldJets {
 public:
  explicit FieldJets(const GridField& f) : field_(&f) {
    const Domain& d = f.domain();
    const int n = f.n();
    const int m = d.m();
    deriv_.resize(d.node_count() * n * m);
    for (std::size_t node = 0; node < d.node_count(); ++node)
      for (int i = 0; i < n; ++i)
        for (int v = 0; v < m; ++v) deriv_[(node * n + i) * m + v] = grid_derivative(f, node, i, v);
  }

  const GridField& field() const { return *field_; }
  double deriv(std::size_t node, int i, int v) const {
    return deriv_[(node * field_->n() + i) * field_->domain().m() + v];
  }

  void nodal(std::size_t node, JetPoint& p) const {
    const Domain& d = field_->domain();
    const int n = field_->n();
    const int m = d.m();
    d.coordinates(node, p.t);
    for (int i = 0; i < n; ++i) {
      p.x[i] = (*field_)(node, i);
      for (int v = 0; v < m; ++v) p.deriv(i, v) = deriv(node, i, v);
    }
  }

  /// Jet at the midpoint between `node` and its +axis neighbour.
  void staggered(std::size_t node, int axis, JetPoint& p) const {
    const Domain& d = field_->domain();
    const int n = field_->n();
    const int m = d.m();
    const std::size_t next = node + d.stride(axis);
    d.coordinates(node, p.t);
    const int k = d.coordinate_index(node, axis);
    p.t[axis] = 0.5 * (d.coordinate(axis, k) + d.coordinate(axis, k + 1));
    const double h = d.spacing(axis);
    for (int i = 0; i < n; ++i) {
      const double a = (*field_)(node, i);
      const double b = (*field_)(next, i);
      p.x[i] = 0.5 * (a + b);
      for (int v = 0; v < m; ++v)
        p.deriv(i, v) = v == axis ? (b - a) / h : 0.5 * (deriv(node, i, v) + deriv(next, i, v));
    }
  }

 private:
  const GridField* field_;
  std::vector<double> deriv_;
};

/// Quadrature points of the cell-corner rule, one per (cell, corner) pair.
class CellCorners {
 public:
  explicit CellCorners(const Domain& d) : domain_(d) {
    const int m = d.m();
    weight_ = 1.0;
    for (int v = 0; v < m; ++v) weight_ *= d.spacing(v) / 2.0;
    const unsigned corners = 1u << m;
    for (std::size_t cell = 0; cell < d.node_count(); ++cell) {
      bool lower = true;
      for (int v = 0; v < m && lower; ++v) lower = has_upper_neighbour(d, cell, v);
      if (!lower) continue;
      for (unsigned s = 0; s < corners; ++s) {
        std::size_t node = cell;
        for (int v = 0; v < m; ++v)
          if (s >> v & 1u) node += d.stride(v);
        node_.push_back(node);
        bits_.push_back(s);
      }
    }
  }

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return node_.size(); }
  double weight() const { return weight_; }
  std::size_t node(std::size_t q) const { return node_[q]; }
  /// Lower end of the cell edge along v through the corner.
  std::size_t lower(std::size_t q, int v) const { return node_[q] - (bits_[q] >> v & 1u) * domain_.stride(v); }
  std::size_t upper(std::size_t q, int v) const { return lower(q, v) + domain_.stride(v); }

  void jet(const GridField& f, std::size_t q, JetPoint& p) const {
    const int n = f.n();
    const std::size_t node = node_[q];
    domain_.coordinates(node, p.t);
    for (int i = 0; i < n; ++i) {
      p.x[i] = f(node, i);
      for (int v = 0; v < domain_.m(); ++v) p.deriv(i, v) = (f(upper(q, v), i) - f(lower(q, v), i)) / domain_.spacing(v);
    }
  }

 private:
  static bool has_upper_neighbour(const Domain& d, std::size_t node, int axis) {
    return d.coordinate_index(node, axis) < d.resolution(axis) - 1;
  }

  Domain domain_;
  double weight_ = 1.0;
  std::vector<std::size_t> node_;
  std::vector<unsigned> bits_;
};

/// Values and first partials of one Lagrangian at every quadrature point.
struct LinearizedTerm {
  std::vector<double> value;    // q
  std::vector<double> d_state;  // q*n + i
  std::vector<double> d_jet;    // (q*n + i)*m + v
  bool jet_free = true;
};

inline LinearizedTerm linearize(const JetGradient& g, const GridField& x, const CellCorners& cc) {
  const Domain& d = x.domain();
  const int n = x.n();
  const int m = d.m();
  if (g.dims.n != n || g.dims.m != m) throw InputError("Lagrangian dimensions do not match the field");
  LinearizedTerm out;
  out.jet_free = g.jet_free;
  out.value.assign(cc.size(), 0.0);
  out.d_state.assign(cc.size() * n, 0.0);
  if (!g.jet_free) out.d_jet.assign(cc.size() * n * m, 0.0);
  JetPoint p(m, n);
  for (std::size_t q = 0; q < cc.size(); ++q) {
    cc.jet(x, q, p);
    try {
      out.value[q] = evaluate(g.lagrangian, p);
      for (int i = 0; i < n; ++i) {
        out.d_state[q * n + i] = evaluate(g.d_state[i], p);
        if (g.jet_free) continue;
        for (int v = 0; v < m; ++v)
          if (!g.d_jet[i * m + v].is_zero()) out.d_jet[(q * n + i) * m + v] = evaluate(g.d_jet[i * m + v], p);
      }
    } catch (const DomainViolation& e) {
      detail::rethrow_at_node(e, d, cc.node(q), "quadrature corner");
    }
  }
  return out;
}

/// Scalar coefficient, optional nodal weight and optional per-point weight
/// multiplying one term.
struct TermWeight {
  double coef = 1.0;
  std::span<const double> nodal = {};  // per node; empty means 1
  std::span<const double> point = {};  // per quadrature point; empty means 1

  double at(std::size_t q, std::size_t node) const {
    double w = coef;
    if (!nodal.empty()) w *= nodal[node];
    if (!point.empty()) w *= point[q];
    return w;
  }
};

struct WeightedTerm {
  const LinearizedTerm* term = nullptr;
  TermWeight weight;
};

/// Discrete E-O residual of sum_j weight_j * L_j. Boundary nodes are zero.
inline GridField weighted_residual(const CellCorners& cc, int n, std::span<const WeightedTerm> terms) {
  const Domain& d = cc.domain();
  const int m = d.m();
  std::vector<double> grad(d.node_count() * n, 0.0);
  for (const auto& wt : terms) {
    for (std::size_t q = 0; q < cc.size(); ++q) {
      const std::size_t node = cc.node(q);
      const double a = cc.weight() * wt.weight.at(q, node);
      if (a == 0.0) continue;
      for (int i = 0; i < n; ++i) grad[node * n + i] += a * wt.term->d_state[q * n + i];
      if (wt.term->jet_free) continue;
      for (int v = 0; v < m; ++v) {
        const double c = a / d.spacing(v);
        const std::size_t up = cc.upper(q, v);
        const std::size_t low = cc.lower(q, v);
        for (int i = 0; i < n; ++i) {
          const double flux = c * wt.term->d_jet[(q * n + i) * m + v];
          grad[up * n + i] += flux;
          grad[low * n + i] -= flux;
        }
      }
    }
  }
  GridField r(d, n);
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    if (d.is_boundary(node)) continue;
    for (int i = 0; i < n; ++i) r(node, i) = grad[node * n + i] / d.weights()[node];
  }
  return r;
}

/// First variation: the quadrature of eta^i dL/dx^i + d(eta^i)/dt^v dL/dx^i_v
/// at the linearization point, weighted per term. Equals the directional
/// derivative of the discrete functional.
inline double weighted_pairing(const CellCorners& cc, int n, std::span<const WeightedTerm> terms,
                               const GridField& eta) {
  const Domain& d = cc.domain();
  if (!(eta.domain() == d) || eta.n() != n) throw InputError("pairing: eta dimensions do not match");
  const int m = d.m();
  double sum = 0.0;
  for (const auto& wt : terms) {
    for (std::size_t q = 0; q < cc.size(); ++q) {
      const std::size_t node = cc.node(q);
      const double a = wt.weight.at(q, node);
      if (a == 0.0) continue;
      double local = 0.0;
      for (int i = 0; i < n; ++i) {
        local += eta(node, i) * wt.term->d_state[q * n + i];
        if (wt.term->jet_free) continue;
        for (int v = 0; v < m; ++v)
          local += (eta(cc.upper(q, v), i) - eta(cc.lower(q, v), i)) / d.spacing(v) *
                   wt.term->d_jet[(q * n + i) * m + v];
      }
      sum += a * local;
    }
  }
  return cc.weight() * sum;
}

/// Nodal values of a Lagrangian on a field, with the jets of FieldJets. Used
/// for pointwise constraints.
inline std::vector<double> lagrangian_values(const Expr& e, const FieldJets& jets) {
  const Domain& d = jets.field().domain();
  std::vector<double> out(d.node_count());
  JetPoint p(d.m(), jets.field().n());
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    jets.nodal(node, p);
    try {
      out[node] = evaluate(e, p);
    } catch (const DomainViolation& ex) {
      detail::rethrow_at_node(ex, d, node);
    }
  }
  return out;
}

/// Values of a Lagrangian at the quadrature points.
inline std::vector<double> quadrature_values(const Expr& e, const GridField& x, const CellCorners& cc) {
  std::vector<double> out(cc.size());
  JetPoint p(x.domain().m(), x.n());
  for (std::size_t q = 0; q < cc.size(); ++q) {
    cc.jet(x, q, p);
    try {
      out[q] = evaluate(e, p);
    } catch (const DomainViolation& ex) {
      detail::rethrow_at_node(ex, x.domain(), cc.node(q), "quadrature corner");
    }
  }
  return out;
}

/// Cell-corner quadrature of point values, optionally weighted nodewise.
inline double integrate_points(const CellCorners& cc, std::span<const double> values,
                               std::span<const double> nodal = {}) {
  double s = 0.0;
  for (std::size_t q = 0; q < cc.size(); ++q) s += (nodal.empty() ? 1.0 : nodal[cc.node(q)]) * values[q];
  return cc.weight() * s;
}

/// integral of L(j^1 x) dv.
inline double integrate_lagrangian(const Expr& e, const GridField& x) {
  const CellCorners cc(x.domain());
  return integrate_points(cc, quadrature_values(e, x, cc));
}

/// A weighted sum of integral functionals with nodal weight fields, e.g.
/// integral of lambda^a(t) g_a(j^1 x) dv.
class Functional {
 public:
  struct Term {
    std::shared_ptr<const JetGradient> lagrangian;
    double coef = 1.0;
    std::vector<double> weight;  // nodal; empty means 1
  };

  explicit Functional(Dims dims) : dims_(dims) {}
  Functional(Expr e, Dims dims) : dims_(dims) { add(std::move(e)); }

  Functional& add(Expr e, double coef = 1.0, std::vector<double> weight = {}) {
    terms_.push_back({std::make_shared<const JetGradient>(std::move(e), dims_), coef, std::move(weight)});
    return *this;
  }

  Functional& add(std::shared_ptr<const JetGradient> g, double coef = 1.0, std::vector<double> weight = {}) {
    terms_.push_back({std::move(g), coef, std::move(weight)});
    return *this;
  }

  Dims dims() const { return dims_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double value(const GridField& x) const {
    check(x);
    const CellCorners cc(x.domain());
    double out = 0.0;
    for (const auto& term : terms_)
      out += term.coef * integrate_points(cc, quadrature_values(term.lagrangian->lagrangian, x, cc), term.weight);
    return out;
  }

  /// First variation at x0 in direction eta.
  double pairing(const GridField& x0, const GridField& eta) const {
    check(x0);
    const CellCorners cc(x0.domain());
    const auto lin = linearized(x0, cc);
    return weighted_pairing(cc, dims_.n, weighted(lin), eta);
  }

  /// Discrete Euler-Ostrogradsky residual (the L2 gradient of the functional).
  GridField residual(const GridField& x) const {
    check(x);
    const CellCorners cc(x.domain());
    const auto lin = linearized(x, cc);
    return weighted_residual(cc, dims_.n, weighted(lin));
  }

 private:
  void check(const GridField& x) const {
    if (x.n() != dims_.n || x.domain().m() != dims_.m) throw InputError("functional dimensions do not match field");
    for (const auto& term : terms_)
      if (!term.weight.empty() && term.weight.size() != x.node_count())
        throw InputError("functional weight field does not match grid");
  }

  std::vector<LinearizedTerm> linearized(const GridField& x, const CellCorners& cc) const {
    std::vector<LinearizedTerm> lin;
    lin.reserve(terms_.size());
    for (const auto& term : terms_) lin.push_back(linearize(*term.lagrangian, x, cc));
    return lin;
  }

  std::vector<WeightedTerm> weighted(const std::vector<LinearizedTerm>& lin) const {
    std::vector<WeightedTerm> out;
    for (std::size_t j = 0; j < terms_.size(); ++j)
      out.push_back({&lin[j], TermWeight{terms_[j].coef, terms_[j].weight, {}}});
    return out;
  }

  Dims dims_;
  std::vector<Term> terms_;
};

}  // namespace mtvar
