#pragma once

// Lagrangian expressions over first-order jet variables.
//
// Grammar (whitespace insignificant):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'pi' | variable | func '(' expr ')' | '(' expr ')'
//   func    := ln | exp | sin | cos | sqrt
//   variable:= t<v> | x<i> | x<i>_d<v>       1-based indices
//
// Two extra variables are available when ParseOptions::sample_variables is
// set: y<i> (the value of a compared field at the node) and `dist` (the
// function-space distance between the two fields). They are used by
// user-supplied eta generators and b functionals.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mtvar/error.hpp"

namespace mtvar {

struct Dims {
  int m = 0;  // number of independent "times"
  int n = 0;  // number of state components
};

enum class Op : std::uint8_t {
  constant,
  time,
  state,
  jet,
  sample,
  distance,
  neg,
  ln,
  exp,
  sin,
  cos,
  sqrt,
  add,
  sub,
  mul,
  div,
  pow,
};

/// Point of the first jet bundle: (t, x, x_v). Partial derivatives are stored
/// row-major, xd[i * m + v] = dx^i/dt^v.
struct JetPoint {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> xd;
  std::vector<double> y;
  double dist = std::numeric_limits<double>::quiet_NaN();

  JetPoint() = default;
  JetPoint(int m, int n) : t(m, 0.0), x(n, 0.0), xd(static_cast<std::size_t>(n) * m, 0.0) {}

  int m() const { return static_cast<int>(t.size()); }
  int n() const { return static_cast<int>(x.size()); }
  double& deriv(int i, int v) { return xd[static_cast<std::size_t>(i) * t.size() + v]; }
  double deriv(int i, int v) const { return xd[static_cast<std::size_t>(i) * t.size() + v]; }
};

/// Differentiation target. Indices are 0-based.
struct Variable {
  Op kind = Op::state;
  int index = 0;
  int axis = 0;

  static Variable time(int v) { return {Op::time, 0, v}; }
  static Variable state(int i) { return {Op::state, i, 0}; }
  static Variable jet(int i, int v) { return {Op::jet, i, v}; }
};

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  struct Node;

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double value);
  static Expr time(int v);
  static Expr state(int i);
  static Expr jet(int i, int v);
  static Expr sample(int i);
  static Expr distance();
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const;
  double value() const;
  int index() const;
  int axis() const;
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const { return op() == Op::constant; }
  bool is_zero() const { return is_constant() && value() == 0.0; }
  bool is_one() const { return is_constant() && value() == 1.0; }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  Op op = Op::constant;
  double value = 0.0;
  int index = 0;
  int axis = 0;
  Expr lhs;
  Expr rhs;

  Node(Op o, double v, int i, int a) : op(o), value(v), index(i), axis(a), lhs(nullptr), rhs(nullptr) {}
};

inline Expr Expr::constant(double value) {
  return Expr(std::make_shared<const Node>(Op::constant, value, 0, 0));
}
inline Expr Expr::time(int v) { return Expr(std::make_shared<const Node>(Op::time, 0.0, 0, v)); }
inline Expr Expr::state(int i) { return Expr(std::make_shared<const Node>(Op::state, 0.0, i, 0)); }
inline Expr Expr::jet(int i, int v) { return Expr(std::make_shared<const Node>(Op::jet, 0.0, i, v)); }
inline Expr Expr::sample(int i) { return Expr(std::make_shared<const Node>(Op::sample, 0.0, i, 0)); }
inline Expr Expr::distance() { return Expr(std::make_shared<const Node>(Op::distance, 0.0, 0, 0)); }

inline Expr Expr::unary(Op op, Expr arg) {
  auto node = std::make_shared<Node>(op, 0.0, 0, 0);
  node->lhs = std::move(arg);
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

inline Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  auto node = std::make_shared<Node>(op, 0.0, 0, 0);
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

inline Op Expr::op() const { return node_->op; }
inline double Expr::value() const { return node_->value; }
inline int Expr::index() const { return node_->index; }
inline int Expr::axis() const { return node_->axis; }
inline const Expr& Expr::lhs() const { return node_->lhs; }
inline const Expr& Expr::rhs() const { return node_->rhs; }

inline bool is_unary(Op op) { return op >= Op::neg && op <= Op::sqrt; }
inline bool is_binary(Op op) { return op >= Op::add; }

// Structural constructors: they never rewrite the tree.
inline Expr operator+(Expr a, Expr b) { return Expr::binary(Op::add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(Op::sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(Op::mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(Op::div, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::unary(Op::neg, std::move(a)); }
inline Expr pow(Expr a, Expr b) { return Expr::binary(Op::pow, std::move(a), std::move(b)); }
inline Expr ln(Expr a) { return Expr::unary(Op::ln, std::move(a)); }
inline Expr exp(Expr a) { return Expr::unary(Op::exp, std::move(a)); }
inline Expr sin(Expr a) { return Expr::unary(Op::sin, std::move(a)); }
inline Expr cos(Expr a) { return Expr::unary(Op::cos, std::move(a)); }
inline Expr sqrt(Expr a) { return Expr::unary(Op::sqrt, std::move(a)); }

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::constant:
      return a.value() == b.value();
    case Op::time:
    case Op::state:
    case Op::jet:
    case Op::sample:
    case Op::distance:
      return a.index() == b.index() && a.axis() == b.axis();
    default:
      break;
  }
  if (is_unary(a.op())) return structurally_equal(a.lhs(), b.lhs());
  return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
}

inline bool depends_on(const Expr& e, const Variable& var) {
  switch (e.op()) {
    case Op::constant:
    case Op::sample:
    case Op::distance:
      return false;
    case Op::time:
      return var.kind == Op::time && e.axis() == var.axis;
    case Op::state:
      return var.kind == Op::state && e.index() == var.index;
    case Op::jet:
      return var.kind == Op::jet && e.index() == var.index && e.axis() == var.axis;
    default:
      break;
  }
  if (is_unary(e.op())) return depends_on(e.lhs(), var);
  return depends_on(e.lhs(), var) || depends_on(e.rhs(), var);
}

/// True if the expression reads any x^i_v.
inline bool has_jet_dependence(const Expr& e) {
  if (e.op() == Op::jet) return true;
  if (is_unary(e.op())) return has_jet_dependence(e.lhs());
  if (is_binary(e.op())) return has_jet_dependence(e.lhs()) || has_jet_dependence(e.rhs());
  return false;
}

/// Throws InputError if a variable index is outside `dims`.
inline void check_dims(const Expr& e, Dims dims) {
  switch (e.op()) {
    case Op::time:
      if (e.axis() >= dims.m)
        throw InputError("time index " + std::to_string(e.axis() + 1) + " exceeds m=" + std::to_string(dims.m));
      return;
    case Op::state:
    case Op::sample:
      if (e.index() >= dims.n)
        throw InputError("state index " + std::to_string(e.index() + 1) + " exceeds n=" + std::to_string(dims.n));
      return;
    case Op::jet:
      if (e.index() >= dims.n)
        throw InputError("state index " + std::to_string(e.index() + 1) + " exceeds n=" + std::to_string(dims.n));
      if (e.axis() >= dims.m)
        throw InputError("time index " + std::to_string(e.axis() + 1) + " exceeds m=" + std::to_string(dims.m));
      return;
    default:
      break;
  }
  if (is_unary(e.op())) check_dims(e.lhs(), dims);
  if (is_binary(e.op())) {
    check_dims(e.lhs(), dims);
    check_dims(e.rhs(), dims);
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::add:
    case Op::sub:
      return 1;
    case Op::mul:
    case Op::div:
      return 2;
    case Op::neg:
      return 3;
    case Op::pow:
      return 4;
    case Op::constant:
      return e.value() < 0.0 || std::signbit(e.value()) ? 3 : 5;
    default:
      return 5;
  }
}

inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw InputError("cannot print non-finite constant");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::ln: return "ln";
    case Op::exp: return "exp";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::sqrt: return "sqrt";
    default: return "?";
  }
}

inline void print(std::string& out, const Expr& e);

inline void print_child(std::string& out, const Expr& child, bool parens) {
  if (parens) out += '(';
  print(out, child);
  if (parens) out += ')';
}

inline void print(std::string& out, const Expr& e) {
  switch (e.op()) {
    case Op::constant:
      out += format_number(e.value());
      return;
    case Op::time:
      out += "t" + std::to_string(e.axis() + 1);
      return;
    case Op::state:
      out += "x" + std::to_string(e.index() + 1);
      return;
    case Op::jet:
      out += "x" + std::to_string(e.index() + 1) + "_d" + std::to_string(e.axis() + 1);
      return;
    case Op::sample:
      out += "y" + std::to_string(e.index() + 1);
      return;
    case Op::distance:
      out += "dist";
      return;
    case Op::neg:
      out += '-';
      print_child(out, e.lhs(), precedence(e.lhs()) < 3);
      return;
    case Op::ln:
    case Op::exp:
    case Op::sin:
    case Op::cos:
    case Op::sqrt:
      out += function_name(e.op());
      out += '(';
      print(out, e.lhs());
      out += ')';
      return;
    default:
      break;
  }
  const int own = precedence(e);
  const int lp = precedence(e.lhs());
  const int rp = precedence(e.rhs());
  const char* sym = "";
  bool lpar = false;
  bool rpar = false;
  switch (e.op()) {
    case Op::add:
    case Op::sub:
      sym = e.op() == Op::add ? " + " : " - ";
      lpar = lp < own;
      rpar = rp <= own || rp == 3;
      break;
    case Op::mul:
    case Op::div:
      sym = e.op() == Op::mul ? "*" : "/";
      lpar = lp < own;
      rpar = rp <= own || rp == 3;
      break;
    case Op::pow:
      sym = "^";
      lpar = lp <= own;
      rpar = rp < own;
      break;
    default:
      break;
  }
  print_child(out, e.lhs(), lpar);
  out += sym;
  print_child(out, e.rhs(), rpar);
}

}  // namespace detail

/// Prints in the same grammar `parse` accepts; constants use the shortest
/// representation that round-trips exactly.
inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print(out, e);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Parsing

struct ParseOptions {
  bool sample_variables = false;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, Dims dims, ParseOptions opts) : text_(text), dims_(dims), opts_(opts) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + parse_term();
      } else if (accept('-')) {
        lhs = lhs - parse_term();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * parse_unary();
      } else if (accept('/')) {
        lhs = lhs / parse_unary();
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return pow(base, parse_unary());
    return base;
  }

  int parse_index(std::string_view ident, std::size_t& i, std::size_t start) {
    const std::size_t begin = i;
    while (i < ident.size() && std::isdigit(static_cast<unsigned char>(ident[i]))) ++i;
    if (begin == i) {
      pos_ = start;
      fail("malformed variable '" + std::string(ident) + "'");
    }
    int value = 0;
    std::from_chars(ident.data() + begin, ident.data() + i, value);
    if (value < 1) {
      pos_ = start;
      fail("variable index must be >= 1 in '" + std::string(ident) + "'");
    }
    return value;
  }

  Expr make_variable(std::string_view ident, std::size_t start) {
    auto bad = [&]() {
      pos_ = start;
      fail("unknown identifier '" + std::string(ident) + "'");
    };
    auto range = [&](const char* what, int idx, int limit, const char* dim) {
      if (idx > limit) {
        pos_ = start;
        fail(std::string(what) + " index " + std::to_string(idx) + " exceeds " + dim + "=" + std::to_string(limit));
      }
    };
    if (ident == "pi") return Expr::constant(std::numbers::pi);
    if (ident == "dist") {
      if (!opts_.sample_variables) bad();
      return Expr::distance();
    }
    std::size_t i = 1;
    switch (ident[0]) {
      case 't': {
        const int v = parse_index(ident, i, start);
        if (i != ident.size()) bad();
        range("time", v, dims_.m, "m");
        return Expr::time(v - 1);
      }
      case 'y': {
        if (!opts_.sample_variables) bad();
        const int k = parse_index(ident, i, start);
        if (i != ident.size()) bad();
        range("state", k, dims_.n, "n");
        return Expr::sample(k - 1);
      }
      case 'x': {
        const int k = parse_index(ident, i, start);
        if (i == ident.size()) {
          range("state", k, dims_.n, "n");
          return Expr::state(k - 1);
        }
        if (ident.substr(i, 2) != "_d") bad();
        i += 2;
        const int v = parse_index(ident, i, start);
        if (i != ident.size()) bad();
        range("state", k, dims_.n, "n");
        range("time", v, dims_.m, "m");
        return Expr::jet(k - 1, v - 1);
      }
      default:
        break;
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(ident) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    std::size_t i = pos_;
    auto digits = [&]() {
      std::size_t b = i;
      while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
      return i - b;
    };
    std::size_t count = digits();
    if (i < text_.size() && text_[i] == '.') {
      ++i;
      count += digits();
    }
    if (count == 0) fail("malformed number");
    if (i < text_.size() && (text_[i] == 'e' || text_[i] == 'E')) {
      std::size_t save = i;
      ++i;
      if (i < text_.size() && (text_[i] == '+' || text_[i] == '-')) ++i;
      if (digits() == 0) i = save;
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + i, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + i) fail("malformed number");
    pos_ = i;
    return Expr::constant(value);
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view ident = text_.substr(start, pos_ - start);
      static constexpr std::pair<std::string_view, Op> functions[] = {
          {"ln", Op::ln}, {"exp", Op::exp}, {"sin", Op::sin}, {"cos", Op::cos}, {"sqrt", Op::sqrt}};
      for (const auto& [name, op] : functions) {
        if (ident == name) {
          if (!accept('(')) fail("expected '(' after " + std::string(name));
          Expr arg = parse_expr();
          if (!accept(')')) fail("expected ')'");
          return Expr::unary(op, arg);
        }
      }
      return make_variable(ident, start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  Dims dims_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view text, Dims dims, ParseOptions opts = {}) {
  return detail::Parser(text, dims, opts).run();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

[[noreturn]] inline void domain_violation(const Expr& e, const char* what, double value) {
  std::ostringstream os;
  os << what << " (value " << value << ") in '" << to_string(e) << "'";
  throw DomainViolation(os.str());
}

inline double eval(const Expr& e, const JetPoint& p) {
  switch (e.op()) {
    case Op::constant:
      return e.value();
    case Op::time:
      return p.t[e.axis()];
    case Op::state:
      return p.x[e.index()];
    case Op::jet:
      return p.deriv(e.index(), e.axis());
    case Op::sample:
      if (static_cast<std::size_t>(e.index()) >= p.y.size()) domain_violation(e, "sample value not bound", 0.0);
      return p.y[e.index()];
    case Op::distance:
      if (std::isnan(p.dist)) domain_violation(e, "distance not bound", p.dist);
      return p.dist;
    case Op::neg:
      return -eval(e.lhs(), p);
    case Op::ln: {
      const double a = eval(e.lhs(), p);
      if (!(a > 0.0)) domain_violation(e, "ln of non-positive argument", a);
      return std::log(a);
    }
    case Op::exp: {
      const double r = std::exp(eval(e.lhs(), p));
      if (!std::isfinite(r)) domain_violation(e, "exp overflow", r);
      return r;
    }
    case Op::sin:
      return std::sin(eval(e.lhs(), p));
    case Op::cos:
      return std::cos(eval(e.lhs(), p));
    case Op::sqrt: {
      const double a = eval(e.lhs(), p);
      if (a < 0.0) domain_violation(e, "sqrt of negative argument", a);
      return std::sqrt(a);
    }
    case Op::add:
      return eval(e.lhs(), p) + eval(e.rhs(), p);
    case Op::sub:
      return eval(e.lhs(), p) - eval(e.rhs(), p);
    case Op::mul:
      return eval(e.lhs(), p) * eval(e.rhs(), p);
    case Op::div: {
      const double num = eval(e.lhs(), p);
      const double den = eval(e.rhs(), p);
      if (den == 0.0) domain_violation(e, "division by zero", den);
      return num / den;
    }
    case Op::pow: {
      const double base = eval(e.lhs(), p);
      const double ex = eval(e.rhs(), p);
      const double r = std::pow(base, ex);
      if (!std::isfinite(r)) domain_violation(e, "power outside domain", base);
      return r;
    }
  }
  return 0.0;
}

}  // namespace detail

/// Evaluates `e` at `p`. Throws DomainViolation naming the offending
/// sub-expression when an operation leaves its domain.
inline double evaluate(const Expr& e, const JetPoint& p) { return detail::eval(e, p); }

// ---------------------------------------------------------------------------
// Symbolic differentiation

namespace detail {

// Local folding of 0/1 operands so derivative trees stay small. Evaluation
// semantics are unchanged.
inline Expr s_add(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  return a + b;
}
inline Expr s_neg(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.op() == Op::neg) return a.lhs();
  return -a;
}
inline Expr s_sub(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return s_neg(b);
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  return a - b;
}
inline Expr s_mul(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  return a * b;
}
inline Expr s_div(const Expr& a, const Expr& b) {
  if (a.is_zero()) return Expr::constant(0.0);
  if (b.is_one()) return a;
  return a / b;
}
inline Expr s_pow(const Expr& a, const Expr& b) {
  if (b.is_zero()) return Expr::constant(1.0);
  if (b.is_one()) return a;
  return pow(a, b);
}

inline Expr diff(const Expr& e, const Variable& v) {
  if (!depends_on(e, v)) return Expr::constant(0.0);
  switch (e.op()) {
    case Op::time:
    case Op::state:
    case Op::jet:
      return Expr::constant(1.0);
    case Op::neg:
      return s_neg(diff(e.lhs(), v));
    case Op::ln:
      return s_div(diff(e.lhs(), v), e.lhs());
    case Op::exp:
      return s_mul(e, diff(e.lhs(), v));
    case Op::sin:
      return s_mul(cos(e.lhs()), diff(e.lhs(), v));
    case Op::cos:
      return s_mul(s_neg(sin(e.lhs())), diff(e.lhs(), v));
    case Op::sqrt:
      return s_div(diff(e.lhs(), v), s_mul(Expr::constant(2.0), e));
    case Op::add:
      return s_add(diff(e.lhs(), v), diff(e.rhs(), v));
    case Op::sub:
      return s_sub(diff(e.lhs(), v), diff(e.rhs(), v));
    case Op::mul:
      return s_add(s_mul(diff(e.lhs(), v), e.rhs()), s_mul(e.lhs(), diff(e.rhs(), v)));
    case Op::div: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      if (!depends_on(b, v)) return s_div(diff(a, v), b);
      return s_div(s_sub(s_mul(diff(a, v), b), s_mul(a, diff(b, v))), s_pow(b, Expr::constant(2.0)));
    }
    case Op::pow: {
      const Expr& base = e.lhs();
      const Expr& ex = e.rhs();
      if (!depends_on(ex, v)) {
        Expr reduced = ex.is_constant() ? Expr::constant(ex.value() - 1.0) : s_sub(ex, Expr::constant(1.0));
        return s_mul(s_mul(ex, s_pow(base, reduced)), diff(base, v));
      }
      // d(a^b) = a^b * (b' ln a + b a'/a)
      return s_mul(e, s_add(s_mul(diff(ex, v), ln(base)), s_div(s_mul(ex, diff(base, v)), base)));
    }
    default:
      return Expr::constant(0.0);
  }
}

}  // namespace detail

/// Symbolic partial derivative. Returns the zero literal when `e` does not
/// depend on `wrt`.
inline Expr differentiate(const Expr& e, const Variable& wrt) { return detail::diff(e, wrt); }

}  // namespace mtvar
