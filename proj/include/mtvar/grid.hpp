#pragma once

// Uniform tensor-product grids on a box, fields sampled on them, jet
// prolongation by finite differences, trapezoid quadrature and the
// sup-norm distance used for function-space comparisons.
//
// Node ordering is row-major with t1 slowest, which is also the row order of
// the CSV exchange format.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mtvar/error.hpp"
#include "mtvar/expr.hpp"

namespace mtvar {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

class Domain {
 public:
  Domain() = default;

  Domain(std::vector<Interval> bounds, std::vector<int> resolution)
      : bounds_(std::move(bounds)), resolution_(std::move(resolution)) {
    if (bounds_.empty()) throw InputError("domain needs at least one time dimension");
    if (bounds_.size() != resolution_.size())
      throw InputError("domain bounds and resolution have different lengths");
    for (std::size_t v = 0; v < bounds_.size(); ++v) {
      if (!(bounds_[v].lo < bounds_[v].hi))
        throw InputError("domain interval " + std::to_string(v + 1) + " is empty");
      if (resolution_[v] < 3) throw InputError("grid resolution must be >= 3 in every direction");
    }
    strides_.assign(bounds_.size(), 1);
    for (int v = m() - 2; v >= 0; --v) strides_[v] = strides_[v + 1] * resolution_[v + 1];
    count_ = strides_[0] * resolution_[0];
    build_weights();
  }

  /// Cube [lo, hi]^m with N nodes per direction.
  static Domain cube(int m, double lo, double hi, int nodes) {
    return Domain(std::vector<Interval>(m, Interval{lo, hi}), std::vector<int>(m, nodes));
  }

  int m() const { return static_cast<int>(bounds_.size()); }
  const Interval& bounds(int v) const { return bounds_[v]; }
  int resolution(int v) const { return resolution_[v]; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  const std::vector<int>& resolution() const { return resolution_; }
  std::size_t node_count() const { return count_; }
  std::size_t stride(int v) const { return strides_[v]; }
  double spacing(int v) const { return (bounds_[v].hi - bounds_[v].lo) / (resolution_[v] - 1); }
  double volume() const {
    double vol = 1.0;
    for (const auto& b : bounds_) vol *= b.hi - b.lo;
    return vol;
  }

  int coordinate_index(std::size_t node, int v) const {
    return static_cast<int>((node / strides_[v]) % static_cast<std::size_t>(resolution_[v]));
  }

  double coordinate(int v, int k) const {
    if (k == resolution_[v] - 1) return bounds_[v].hi;
    return bounds_[v].lo + (bounds_[v].hi - bounds_[v].lo) * k / (resolution_[v] - 1);
  }

  void coordinates(std::size_t node, std::span<double> t) const {
    for (int v = 0; v < m(); ++v) t[v] = coordinate(v, coordinate_index(node, v));
  }

  bool is_boundary(std::size_t node) const {
    for (int v = 0; v < m(); ++v) {
      const int k = coordinate_index(node, v);
      if (k == 0 || k == resolution_[v] - 1) return true;
    }
    return false;
  }

  /// Tensor-product trapezoid weights, one per node.
  const std::vector<double>& weights() const { return weights_; }

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.bounds_ == b.bounds_ && a.resolution_ == b.resolution_;
  }

 private:
  void build_weights() {
    weights_.assign(count_, 1.0);
    for (std::size_t node = 0; node < count_; ++node) {
      double w = 1.0;
      for (int v = 0; v < m(); ++v) {
        const int k = coordinate_index(node, v);
        const double h = spacing(v);
        w *= (k == 0 || k == resolution_[v] - 1) ? 0.5 * h : h;
      }
      weights_[node] = w;
    }
  }

  std::vector<Interval> bounds_;
  std::vector<int> resolution_;
  std::vector<std::size_t> strides_;
  std::size_t count_ = 0;
  std::vector<double> weights_;
};

/// A map Omega -> R^n sampled at the grid nodes. values[node * n + i].
class GridField {
 public:
  GridField() = default;

  GridField(Domain domain, int n) : domain_(std::move(domain)), n_(n), values_(domain_.node_count() * n, 0.0) {
    if (n < 0) throw InputError("field dimension must be non-negative");
  }

  GridField(Domain domain, int n, std::vector<double> values)
      : domain_(std::move(domain)), n_(n), values_(std::move(values)) {
    if (values_.size() != domain_.node_count() * static_cast<std::size_t>(n))
      throw InputError("field value count does not match grid");
    for (double v : values_)
      if (!std::isfinite(v)) throw InputError("field contains non-finite values");
  }

  /// Samples fn(t, out) at every node.
  static GridField sample(const Domain& domain, int n,
                          const std::function<void(std::span<const double>, std::span<double>)>& fn) {
    GridField f(domain, n);
    std::vector<double> t(domain.m());
    for (std::size_t node = 0; node < domain.node_count(); ++node) {
      domain.coordinates(node, t);
      fn(t, std::span<double>(f.values_).subspan(node * n, n));
    }
    return f;
  }

  static GridField scalar(const Domain& domain, const std::function<double(std::span<const double>)>& fn) {
    return sample(domain, 1, [&](std::span<const double> t, std::span<double> out) { out[0] = fn(t); });
  }

  const Domain& domain() const { return domain_; }
  int n() const { return n_; }
  std::size_t node_count() const { return domain_.node_count(); }

  double& operator()(std::size_t node, int i) { return values_[node * n_ + i]; }
  double operator()(std::size_t node, int i) const { return values_[node * n_ + i]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  /// Single component as a scalar field.
  GridField component(int i) const {
    GridField out(domain_, 1);
    for (std::size_t node = 0; node < node_count(); ++node) out(node, 0) = (*this)(node, i);
    return out;
  }

  friend bool operator==(const GridField& a, const GridField& b) {
    return a.n_ == b.n_ && a.domain_ == b.domain_ && a.values_ == b.values_;
  }

 private:
  Domain domain_;
  int n_ = 0;
  std::vector<double> values_;
};

/// Derivative along axis v of a nodal array laid out like a field with `n`
/// components. Central differences inside, one-sided second-order stencils on
/// the two faces.
inline double grid_derivative(const Domain& d, std::span<const double> values, int n, std::size_t node, int i,
                              int v) {
  const int k = d.coordinate_index(node, v);
  const int last = d.resolution(v) - 1;
  const std::size_t s = d.stride(v) * n;
  const std::size_t at = node * n + i;
  const double h = d.spacing(v);
  if (k == 0) return (-3.0 * values[at] + 4.0 * values[at + s] - values[at + 2 * s]) / (2.0 * h);
  if (k == last) return (3.0 * values[at] - 4.0 * values[at - s] + values[at - 2 * s]) / (2.0 * h);
  return (values[at + s] - values[at - s]) / (2.0 * h);
}

inline double grid_derivative(const GridField& f, std::size_t node, int i, int v) {
  return grid_derivative(f.domain(), f.values(), f.n(), node, i, v);
}

/// First prolongation j^1 x at a node.
inline JetPoint jet_prolongation(const GridField& f, std::size_t node) {
  const Domain& d = f.domain();
  JetPoint p(d.m(), f.n());
  d.coordinates(node, p.t);
  for (int i = 0; i < f.n(); ++i) {
    p.x[i] = f(node, i);
    for (int v = 0; v < d.m(); ++v) p.deriv(i, v) = grid_derivative(f, node, i, v);
  }
  return p;
}

/// Node index from a multi-index (k1, ..., km).
inline std::size_t node_index(const Domain& d, std::span<const int> multi) {
  if (static_cast<int>(multi.size()) != d.m()) throw InputError("multi-index has wrong length");
  std::size_t node = 0;
  for (int v = 0; v < d.m(); ++v) {
    if (multi[v] < 0 || multi[v] >= d.resolution(v)) throw InputError("multi-index outside grid");
    node += d.stride(v) * multi[v];
  }
  return node;
}

/// Trapezoid quadrature of nodal values.
inline double integrate(const Domain& d, std::span<const double> nodal) {
  const auto& w = d.weights();
  double sum = 0.0;
  for (std::size_t node = 0; node < d.node_count(); ++node) sum += w[node] * nodal[node];
  return sum;
}

inline double integrate(const GridField& s) {
  if (s.n() != 1) throw InputError("integrate expects a scalar field");
  return integrate(s.domain(), s.values());
}

/// ||x - y|| with ||z|| = sup|z| + sum over (v, k) of sup|z^k_v|.
inline double field_distance(const GridField& x, const GridField& y) {
  if (!(x.domain() == y.domain()) || x.n() != y.n()) throw InputError("field_distance: dimension mismatch");
  const Domain& d = x.domain();
  const int n = x.n();
  std::vector<double> diff(x.values().size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = x.values()[j] - y.values()[j];
  double sup = 0.0;
  for (double z : diff) sup = std::max(sup, std::abs(z));
  double jets = 0.0;
  for (int v = 0; v < d.m(); ++v) {
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t node = 0; node < d.node_count(); ++node)
        s = std::max(s, std::abs(grid_derivative(d, diff, n, node, k, v)));
      jets += s;
    }
  }
  return sup + jets;
}

// ---------------------------------------------------------------------------
// CSV exchange: header t1,...,tm,<columns>; one row per node.

namespace detail {

inline std::string format_17g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) {
    auto b = cur.find_first_not_of(" \t\r");
    auto e = cur.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw InputError("malformed number '" + s + "'");
  return v;
}

}  // namespace detail

/// Writes nodal columns (`ncols` values per node) with 17 significant digits.
inline void write_grid_csv(std::ostream& os, const Domain& d, const std::vector<std::string>& names,
                           std::span<const double> values) {
  const std::size_t ncols = names.size();
  for (int v = 0; v < d.m(); ++v) os << (v ? "," : "") << 't' << v + 1;
  for (const auto& name : names) os << ',' << name;
  os << '\n';
  std::vector<double> t(d.m());
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    d.coordinates(node, t);
    for (int v = 0; v < d.m(); ++v) os << (v ? "," : "") << detail::format_17g(t[v]);
    for (std::size_t c = 0; c < ncols; ++c) os << ',' << detail::format_17g(values[node * ncols + c]);
    os << '\n';
  }
}

struct GridTable {
  std::vector<std::string> names;  // non-coordinate column names
  std::vector<double> values;      // node-major
};

/// Reads a CSV written by write_grid_csv and checks it against `d`.
inline GridTable read_grid_csv(std::istream& is, const Domain& d) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("empty CSV");
  auto header = detail::split(line, ',');
  if (static_cast<int>(header.size()) < d.m()) throw InputError("CSV header has too few columns");
  for (int v = 0; v < d.m(); ++v)
    if (header[v] != "t" + std::to_string(v + 1))
      throw InputError("CSV header column " + std::to_string(v + 1) + " must be t" + std::to_string(v + 1));
  GridTable table;
  table.names.assign(header.begin() + d.m(), header.end());
  const std::size_t ncols = table.names.size();
  table.values.reserve(d.node_count() * ncols);
  std::vector<double> t(d.m());
  std::size_t node = 0;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (node >= d.node_count()) throw InputError("CSV has more rows than grid nodes");
    auto cells = detail::split(line, ',');
    if (cells.size() != header.size()) throw InputError("CSV row " + std::to_string(node + 2) + " has wrong width");
    d.coordinates(node, t);
    for (int v = 0; v < d.m(); ++v) {
      const double c = detail::parse_double(cells[v]);
      const double scale = std::max(1.0, d.bounds(v).hi - d.bounds(v).lo);
      if (std::abs(c - t[v]) > 1e-9 * scale)
        throw InputError("CSV row " + std::to_string(node + 2) + " does not match grid coordinates");
    }
    for (std::size_t c = 0; c < ncols; ++c) table.values.push_back(detail::parse_double(cells[d.m() + c]));
    ++node;
  }
  if (node != d.node_count())
    throw InputError("CSV has " + std::to_string(node) + " rows, grid has " + std::to_string(d.node_count()));
  return table;
}

inline void write_field_csv(std::ostream& os, const GridField& f) {
  std::vector<std::string> names;
  for (int i = 0; i < f.n(); ++i) names.push_back("x" + std::to_string(i + 1));
  write_grid_csv(os, f.domain(), names, f.values());
}

inline GridField read_field_csv(std::istream& is, const Domain& d) {
  GridTable table = read_grid_csv(is, d);
  for (std::size_t i = 0; i < table.names.size(); ++i)
    if (table.names[i] != "x" + std::to_string(i + 1))
      throw InputError("CSV state column " + std::to_string(i + 1) + " must be x" + std::to_string(i + 1));
  return GridField(d, static_cast<int>(table.names.size()), std::move(table.values));
}

}  // namespace mtvar
