#include <catch_amalgamated.hpp>

#include <random>

#include "mtvar/fractional.hpp"

using namespace mtvar;
using Catch::Matchers::WithinAbs;

namespace {

ProblemSpec ratio_problem() {
  ProblemSpec ps;
  ps.domain = Domain::cube(1, 0.0, 1.0, 41);
  ps.n = 1;
  ps.kind = ProblemKind::vfp;
  ps.f = {parse("x1_d1^2 + 1", ps.dims())};
  ps.k = {parse("x1_d1 + 2", ps.dims())};
  ps.g = {parse("x1 - 2", ps.dims())};
  ps.u = {parse("t1", ps.dims())};
  return ps;
}

ProblemSpec two_ratios() {
  ProblemSpec ps;
  ps.domain = Domain::cube(1, 0.0, 1.0, 5);
  ps.n = 1;
  ps.kind = ProblemKind::vfp;
  ps.f = {parse("(x1 - 1)^2 + 1", ps.dims()), parse("x1^2 + 0.5", ps.dims())};
  ps.k = {parse("1 + 0.1*x1", ps.dims()), parse("2 - 0.1*x1", ps.dims())};
  return ps;
}

GridField constant(const Domain& d, double c) {
  return GridField::scalar(d, [c](auto) { return c; });
}

}  // namespace

TEST_CASE("parametric instances", "[fractional]") {
  const ProblemSpec ps = two_ratios();
  const GridField x0 = constant(ps.domain, 0.5);
  const auto R = compute_R0(ps, x0);
  CHECK_THAT(R[0], WithinAbs(1.25 / 1.05, 1e-14));
  CHECK_THAT(R[1], WithinAbs(0.75 / 1.95, 1e-14));

  const ProblemSpec spr = build_parametric(ps, x0, 0, ParametricForm::spr);
  CHECK(spr.kind == ProblemKind::svp);
  REQUIRE(spr.f.size() == 1);
  REQUIRE(spr.integral.size() == 1);
  const ProblemSpec fpr = build_parametric(ps, x0, 0, ParametricForm::fpr);
  CHECK(fpr.kind == ProblemKind::vfp);
  CHECK(fpr.k.size() == 1);

  // SPR objective vanishes at x0, the added constraint is active there.
  CHECK_THAT(eval_objectives(spr, x0).F[0], WithinAbs(0.0, 1e-14));
  CHECK_THAT(feasibility_check(spr, x0).integral_value[0], WithinAbs(0.0, 1e-14));
  CHECK_THAT(eval_objectives(fpr, x0).J[0], WithinAbs(R[0], 1e-14));

  CHECK_THROWS_AS(build_parametric(ps, x0, 2, ParametricForm::spr), InputError);
  CHECK_THROWS_AS(parse_form("dinkelbach"), InputError);
}

TEST_CASE("argmin sets coincide at a Pareto-efficient reference", "[fractional]") {
  const ProblemSpec ps = two_ratios();
  std::vector<GridField> family;
  for (int j = 0; j <= 10; ++j) family.push_back(constant(ps.domain, 0.1 * j));
  // J1 decreases and J2 increases on [0, 1], so every member is efficient.
  for (std::size_t x0 : {std::size_t{0}, std::size_t{4}, std::size_t{10}}) {
    for (int r = 0; r < 2; ++r) {
      const auto rep = equivalence_check(ps, family[x0], r, family);
      CHECK(rep.premise_holds);
      CHECK(rep.coincide);
      CHECK(rep.fpr_argmin == std::vector<std::size_t>{x0});
      CHECK_THAT(rep.spr_min, WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("equivalence needs x0 in the family", "[fractional]") {
  const ProblemSpec ps = two_ratios();
  const std::vector<GridField> family{constant(ps.domain, 0.0), constant(ps.domain, 1.0)};
  CHECK_THROWS_AS(equivalence_check(ps, constant(ps.domain, 0.5), 0, family), PreconditionError);
}

TEST_CASE("rescaled MFJ0 multipliers reproduce the MFJ residual", "[fractional][property]") {
  const ProblemSpec ps = ratio_problem();
  const GridField x0 = boundary_field(ps);
  const WeightingScheme mfj = make_scheme(SystemVariant::mfj, ps, x0);
  const WeightingScheme mfj0 = make_scheme(SystemVariant::mfj0, ps, x0);
  const double K = eval_objectives(ps, x0).K[0];
  CHECK_THAT(K, WithinAbs(3.0, 1e-13));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    Multipliers m = Multipliers::zero(ps);
    m.tau = {1.0};
    for (auto& v : m.lambda.values()) v = u(rng);
    const GridField a = StationaritySystem(ps, x0, mfj).residual(m);
    const GridField b = StationaritySystem(ps, x0, mfj0).residual(rescale_multipliers(m, ps, x0, 0));
    for (std::size_t node = 0; node < ps.domain.node_count(); ++node)
      CHECK_THAT(b(node, 0), WithinAbs(K * a(node, 0), 1e-10));
  }
}

TEST_CASE("fractional operations need a fractional problem", "[fractional]") {
  ProblemSpec ps = ratio_problem();
  ps.kind = ProblemKind::svp;
  ps.k.clear();
  CHECK_THROWS_AS(compute_R0(ps, boundary_field(ps)), InputError);
}
