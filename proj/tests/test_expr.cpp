#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>

#include "mtvar/expr.hpp"

using namespace mtvar;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

JetPoint point(Dims d, std::initializer_list<double> x, std::initializer_list<double> xd = {}) {
  JetPoint p(d.m, d.n);
  std::copy(x.begin(), x.end(), p.x.begin());
  std::copy(xd.begin(), xd.end(), p.xd.begin());
  return p;
}

// Random expression generator over (m, n) = (2, 2). Leaves are variables or
// small constants; ln/sqrt/div arguments are wrapped so they stay admissible
// for jet points with coordinates in [0.5, 1.5].
class RandomExpr {
 public:
  explicit RandomExpr(std::uint64_t seed) : rng_(seed) {}

  Expr make(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    switch (pick(10)) {
      case 0: return make(depth - 1) + make(depth - 1);
      case 1: return make(depth - 1) - make(depth - 1);
      case 2: return make(depth - 1) * make(depth - 1);
      case 3: return make(depth - 1) / (Expr::constant(2.0) + sin(make(depth - 1)));
      case 4: return -make(depth - 1);
      case 5: return ln(Expr::constant(2.0) + cos(make(depth - 1)));
      case 6: return exp(sin(make(depth - 1)));
      case 7: return sqrt(Expr::constant(1.5) + sin(make(depth - 1)));
      case 8: return pow(positive_leaf(), make(depth - 1) * Expr::constant(0.3));
      default: return pow(make(depth - 1), Expr::constant(static_cast<double>(pick(3) + 1)));
    }
  }

  JetPoint point() {
    JetPoint p(2, 2);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (auto& v : p.t) v = u(rng_);
    for (auto& v : p.x) v = u(rng_);
    for (auto& v : p.xd) v = u(rng_);
    return p;
  }

  Variable variable() {
    const int i = pick(2);
    return pick(2) == 0 ? Variable::state(i) : Variable::jet(i, pick(2));
  }

 private:
  int pick(int k) { return std::uniform_int_distribution<int>(0, k - 1)(rng_); }

  Expr leaf() {
    switch (pick(4)) {
      case 0: return Expr::constant(0.5 + pick(5));
      case 1: return Expr::time(pick(2));
      case 2: return Expr::state(pick(2));
      default: return Expr::jet(pick(2), pick(2));
    }
  }

  Expr positive_leaf() {
    switch (pick(3)) {
      case 0: return Expr::state(pick(2));
      case 1: return Expr::jet(pick(2), pick(2));
      default: return Expr::constant(1.5);
    }
  }

  std::mt19937_64 rng_;
};

double shifted(const Expr& e, JetPoint p, const Variable& v, double h) {
  if (v.kind == Op::state)
    p.x[v.index] += h;
  else
    p.deriv(v.index, v.axis) += h;
  return evaluate(e, p);
}

}  // namespace

TEST_CASE("parse builds the expected trees", "[expr]") {
  const Expr e = parse("x1_d1^2 + x1_d2^2", {2, 1});
  CHECK(structurally_equal(e, pow(Expr::jet(0, 0), Expr::constant(2)) + pow(Expr::jet(0, 1), Expr::constant(2))));

  const Expr bs = parse("x1*ln(x1)", {1, 1});
  CHECK(structurally_equal(bs, Expr::state(0) * ln(Expr::state(0))));

  CHECK(structurally_equal(parse("2^3^2", {1, 1}), pow(Expr::constant(2), pow(Expr::constant(3), Expr::constant(2)))));
  CHECK(structurally_equal(parse("-x1^2", {1, 1}), -pow(Expr::state(0), Expr::constant(2))));
  CHECK(structurally_equal(parse("1 - 2 - 3", {1, 1}), (Expr::constant(1) - Expr::constant(2)) - Expr::constant(3)));
  CHECK(structurally_equal(parse("t2 * (x1 + 1e-3)", {2, 1}), Expr::time(1) * (Expr::state(0) + Expr::constant(1e-3))));
}

TEST_CASE("parse reports errors", "[expr]") {
  CHECK_THROWS_WITH(parse("x3", {2, 1}), Catch::Matchers::ContainsSubstring("state index 3 exceeds n=1"));
  CHECK_THROWS_WITH(parse("t3", {2, 1}), Catch::Matchers::ContainsSubstring("time index 3 exceeds m=2"));
  CHECK_THROWS_AS(parse("x1_d3", {2, 1}), ParseError);
  CHECK_THROWS_AS(parse("x0", {1, 1}), ParseError);
  CHECK_THROWS_AS(parse("y1", {1, 1}), ParseError);
  CHECK_THROWS_AS(parse("foo(x1)", {1, 1}), ParseError);
  CHECK_THROWS_AS(parse("", {1, 1}), ParseError);
  try {
    parse("x1 + * 2", {1, 1});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
  CHECK_NOTHROW(parse("y1 * dist", {1, 1}, {.sample_variables = true}));
}

TEST_CASE("evaluate", "[expr]") {
  CHECK(evaluate(parse("x1_d1^2 + x1_d2^2", {2, 1}), point({2, 1}, {0}, {3, 4})) == 25.0);
  CHECK(evaluate(parse("x1*ln(x1)", {1, 1}), point({1, 1}, {1})) == 0.0);
  CHECK_THROWS_AS(evaluate(parse("ln(x1)", {1, 1}), point({1, 1}, {0})), DomainViolation);
  CHECK_THROWS_AS(evaluate(parse("1/x1", {1, 1}), point({1, 1}, {0})), DomainViolation);
  CHECK_THROWS_AS(evaluate(parse("sqrt(x1)", {1, 1}), point({1, 1}, {-1})), DomainViolation);
  CHECK_THROWS_WITH(evaluate(parse("ln(x1)", {1, 1}), point({1, 1}, {-2})), Catch::Matchers::ContainsSubstring("ln(x1)"));
  CHECK_THAT(evaluate(parse("sin(pi*x1)", {1, 1}), point({1, 1}, {0.5})), WithinAbs(1.0, 1e-15));
}

TEST_CASE("differentiate examples", "[expr]") {
  const Dims d{1, 1};
  const Expr bs = parse("x1*ln(x1)", d);
  const Expr dbs = differentiate(bs, Variable::state(0));
  for (double x : {0.3, 1.0, 2.5}) CHECK_THAT(evaluate(dbs, point(d, {x})), WithinRel(std::log(x) + 1.0, 1e-14));

  CHECK(to_string(differentiate(parse("x1_d1^2", d), Variable::jet(0, 0))) == "2*x1_d1");
  CHECK(differentiate(parse("x1_d1^2", d), Variable::state(0)).is_zero());
  CHECK(differentiate(parse("t1*exp(t1)", d), Variable::state(0)).is_zero());
}

TEST_CASE("printing is idempotent and round-trips", "[expr]") {
  const Dims d{2, 2};
  for (const char* text : {"x1_d1^2 + x1_d2^2", "-x1^2", "(-x1)^2", "2^3^2", "(2^3)^2", "x1 - (x2 - t1)",
                           "x1/(x2*t2)", "-(x1 + x2)", "x1 - -x2", "1e-300*x1", "0.1 + 0.2", "ln(-x1 + 3)"}) {
    const Expr e = parse(text, d);
    const std::string once = to_string(e);
    const Expr again = parse(once, d);
    CHECK(structurally_equal(e, again));
    CHECK(to_string(again) == once);
  }
  RandomExpr gen(7);
  for (int k = 0; k < 200; ++k) {
    const Expr e = gen.make(4);
    const std::string once = to_string(e);
    const Expr again = parse(once, d);
    INFO(once);
    CHECK(structurally_equal(e, again));
    CHECK(to_string(again) == once);
  }
}

TEST_CASE("symbolic derivatives match central differences", "[expr][property]") {
  RandomExpr gen(2024);
  int checked = 0;
  for (int k = 0; k < 200; ++k) {
    const Expr e = gen.make(4);
    const JetPoint p = gen.point();
    const Variable v = gen.variable();
    const Expr de = differentiate(e, v);
    const double h = 1e-5;
    const double fd = (shifted(e, p, v, h) - shifted(e, p, v, -h)) / (2 * h);
    const double exact = evaluate(de, p);
    INFO(to_string(e) << "  d/d " << (v.kind == Op::state ? "x" : "xd") << v.index << "," << v.axis);
    // Relative 1e-6 with an absolute floor for derivatives that vanish.
    CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
    ++checked;
  }
  CHECK(checked == 200);
}

TEST_CASE("differentiate is linear", "[expr][property]") {
  RandomExpr gen(99);
  for (int k = 0; k < 100; ++k) {
    const Expr a = gen.make(3);
    const Expr b = gen.make(3);
    const Variable v = gen.variable();
    const Expr lhs = differentiate(a + b, v);
    const Expr rhs = differentiate(a, v) + differentiate(b, v);
    for (int s = 0; s < 3; ++s) {
      const JetPoint p = gen.point();
      const double x = evaluate(lhs, p);
      const double y = evaluate(rhs, p);
      CHECK(std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)));
    }
  }
}

TEST_CASE("check_dims and dependence", "[expr]") {
  const Expr e = Expr::state(2);
  CHECK_THROWS_AS(check_dims(e, {1, 2}), InputError);
  CHECK_NOTHROW(check_dims(e, {1, 3}));
  CHECK(has_jet_dependence(parse("x1 + x1_d2", {2, 1})));
  CHECK_FALSE(has_jet_dependence(parse("x1 + t2", {2, 1})));
}
