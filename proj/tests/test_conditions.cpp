#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "mtvar/conditions.hpp"

using namespace mtvar;
using Catch::Matchers::WithinAbs;

namespace {

ProblemSpec make(int m, int N, std::vector<std::string> f, std::vector<std::string> g = {},
                 std::vector<std::string> h = {}, std::vector<std::string> c = {}, std::vector<std::string> u = {}) {
  ProblemSpec ps;
  ps.domain = Domain::cube(m, 0.0, 1.0, N);
  ps.n = 1;
  ps.kind = f.size() > 1 ? ProblemKind::vvp : ProblemKind::svp;
  auto fill = [&](std::vector<Expr>& out, const std::vector<std::string>& in) {
    for (const auto& s : in) out.push_back(parse(s, ps.dims()));
  };
  fill(ps.f, f);
  fill(ps.g, g);
  fill(ps.h, h);
  fill(ps.integral, c);
  fill(ps.u, u);
  return ps;
}

double interior_max(const GridField& r) {
  double m = 0.0;
  for (std::size_t node = 0; node < r.node_count(); ++node)
    if (!r.domain().is_boundary(node))
      for (int i = 0; i < r.n(); ++i) m = std::max(m, std::abs(r(node, i)));
  return m;
}

}  // namespace

TEST_CASE("entropy residual at the constant state", "[conditions]") {
  const Domain d = Domain::cube(2, 0.0, 1.0, 9);
  const auto one = GridField::scalar(d, [](auto) { return 1.0; });
  const GridField r = eo_residual(parse("x1*ln(x1)", {2, 1}), one);
  for (std::size_t node = 0; node < d.node_count(); ++node)
    CHECK_THAT(r(node, 0), WithinAbs(d.is_boundary(node) ? 0.0 : 1.0, 1e-14));
}

TEST_CASE("SFJ residual is tau times the E-O residual", "[conditions][property]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  auto ps = make(2, 7, {"x1_d1^2*x1 + x1_d2^2 + exp(x1)"});
  GridField x(ps.domain, 1);
  for (auto& v : x.values()) v = u(rng);
  const GridField eo = eo_residual(ps.f[0], x);
  for (double tau : {0.3, 1.0, 2.5}) {
    Multipliers m = Multipliers::zero(ps);
    m.tau = {tau};
    const GridField r = StationaritySystem(ps, x, WeightingScheme::sfj()).residual(m);
    for (std::size_t node = 0; node < ps.domain.node_count(); ++node)
      CHECK_THAT(r(node, 0), WithinAbs(tau * eo(node, 0), 1e-11));
  }
}

TEST_CASE("stationarity residual is linear in the multipliers", "[conditions][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto ps = make(1, 11, {"x1_d1^2", "x1^2"}, {"x1 - 2"}, {"x1_d1 - x1"}, {"x1^2 - 4"});
  const auto x = GridField::scalar(ps.domain, [](auto t) { return t[0]; });
  const StationaritySystem sys(ps, x, WeightingScheme::vfj());
  auto random_mult = [&] {
    Multipliers m = Multipliers::zero(ps);
    for (auto& v : m.tau) v = u(rng);
    for (auto& v : m.lambda.values()) v = u(rng);
    for (auto& v : m.mu.values()) v = u(rng);
    for (auto& v : m.nu) v = u(rng);
    return m;
  };
  const Multipliers a = random_mult(), b = random_mult();
  Multipliers sum = a;
  for (std::size_t r = 0; r < sum.tau.size(); ++r) sum.tau[r] += 2.0 * b.tau[r];
  for (std::size_t j = 0; j < sum.lambda.values().size(); ++j) sum.lambda.values()[j] += 2.0 * b.lambda.values()[j];
  for (std::size_t j = 0; j < sum.mu.values().size(); ++j) sum.mu.values()[j] += 2.0 * b.mu.values()[j];
  sum.nu[0] += 2.0 * b.nu[0];
  const GridField ra = sys.residual(a), rb = sys.residual(b), rs = sys.residual(sum);
  for (std::size_t node = 0; node < ps.domain.node_count(); ++node)
    CHECK_THAT(rs(node, 0), WithinAbs(ra(node, 0) + 2.0 * rb(node, 0), 1e-10));
}

TEST_CASE("recovery at the Dirichlet extremal is normal", "[conditions]") {
  auto ps = make(2, 11, {"x1_d1^2 + x1_d2^2"}, {}, {}, {}, {"t1 + 2*t2"});
  const GridField x0 = boundary_field(ps);
  const RecoveryResult rec = recover_multipliers(ps, x0, WeightingScheme::sfj());
  CHECK(rec.satisfied);
  CHECK(rec.residual_norm < 1e-8);
  CHECK_THAT(rec.multipliers.tau[0], WithinAbs(1.0, 1e-12));
  CHECK(normality_check(rec.multipliers, WeightingScheme::sfj()).normal);
}

TEST_CASE("recovery away from an extremal leaves a residual", "[conditions]") {
  auto ps = make(2, 11, {"x1_d1^2 + x1_d2^2"}, {}, {}, {}, {"t1^2"});
  const GridField x0 = boundary_field(ps);  // t1^2 is not harmonic
  const RecoveryResult rec = recover_multipliers(ps, x0, WeightingScheme::sfj());
  CHECK_FALSE(rec.satisfied);
  CHECK(rec.residual_norm >= 0.1);
}

TEST_CASE("active pointwise constraint shares the weight", "[conditions]") {
  // X = x, g = -x at x0 = 0: tau - lambda = 0 with tau + int lambda = 1.
  auto ps = make(1, 11, {"x1"}, {"-x1"}, {}, {}, {"0"});
  const auto x0 = GridField::scalar(ps.domain, [](auto) { return 0.0; });
  const RecoveryResult rec = recover_multipliers(ps, x0, WeightingScheme::sfj());
  CHECK(rec.satisfied);
  CHECK_THAT(rec.multipliers.tau[0], WithinAbs(0.5, 1e-10));
  for (std::size_t node = 0; node < ps.domain.node_count(); ++node)
    CHECK_THAT(rec.multipliers.lambda(node, 0), WithinAbs(0.5, 1e-10));
  const auto rep = stationarity_residual(ps, x0, rec.multipliers, WeightingScheme::sfj());
  CHECK(rep.satisfied());
}

TEST_CASE("active integral constraint shares the weight", "[conditions]") {
  // X = x, int(0.5 - x) <= 0 at x0 = 0.5: tau - nu = 0 with tau + nu = 1.
  auto ps = make(1, 11, {"x1"}, {}, {}, {"0.5 - x1"}, {"0.5"});
  const auto x0 = GridField::scalar(ps.domain, [](auto) { return 0.5; });
  const RecoveryResult rec = recover_multipliers(ps, x0, WeightingScheme::sfj());
  CHECK(rec.satisfied);
  CHECK_THAT(rec.multipliers.tau[0], WithinAbs(0.5, 1e-10));
  CHECK_THAT(rec.multipliers.nu[0], WithinAbs(0.5, 1e-10));
}

TEST_CASE("inactive constraints get zero multipliers", "[conditions]") {
  auto ps = make(1, 11, {"x1_d1^2"}, {"x1 - 5"}, {}, {"x1 - 5"}, {"t1"});
  const GridField x0 = boundary_field(ps);
  const RecoveryResult rec = recover_multipliers(ps, x0, WeightingScheme::sfj());
  CHECK(rec.satisfied);
  CHECK(rec.active_lambda == 0);
  CHECK(max_abs(rec.multipliers.lambda.values()) == 0.0);
  CHECK(rec.multipliers.nu[0] == 0.0);
}

TEST_CASE("slackness and sign violations are reported", "[conditions]") {
  auto ps = make(1, 11, {"x1_d1^2"}, {"x1 - 5"}, {}, {}, {"t1"});
  const GridField x0 = boundary_field(ps);
  Multipliers m = Multipliers::zero(ps);
  m.tau = {1.0};
  CHECK(stationarity_residual(ps, x0, m, WeightingScheme::sfj()).satisfied());
  m.lambda(5, 0) = 1e-3;
  auto rep = stationarity_residual(ps, x0, m, WeightingScheme::sfj());
  CHECK(rep.slackness_violations == 1);
  CHECK_FALSE(rep.satisfied());
  m.lambda(5, 0) = 0.0;
  m.tau = {-1.0};
  rep = stationarity_residual(ps, x0, m, WeightingScheme::sfj());
  CHECK(rep.tau_sign_violations == 1);
  CHECK_FALSE(normality_check(m, WeightingScheme::sfj()).normal);
  m.tau = {0.0};
  CHECK(stationarity_residual(ps, x0, m, WeightingScheme::sfj()).degenerate);
}

TEST_CASE("vector systems normalize tau", "[conditions]") {
  auto ps = make(1, 11, {"x1_d1^2", "2*x1_d1^2"}, {}, {}, {}, {"t1"});
  const GridField x0 = boundary_field(ps);
  const RecoveryResult rec = recover_multipliers(ps, x0, WeightingScheme::vfj());
  CHECK(rec.satisfied);
  const NormalityResult n = normality_check(rec.multipliers, WeightingScheme::vfj());
  CHECK(n.normal);
  CHECK_THAT(n.tau[0] + n.tau[1], WithinAbs(1.0, 1e-12));
  const Multipliers w = normalize_for_scheme(rec.multipliers, WeightingScheme::vfj());
  CHECK_THAT(w.tau[0] + w.tau[1], WithinAbs(1.0, 1e-12));
  CHECK(stationarity_residual(ps, x0, w, WeightingScheme::vfj()).satisfied());

  Multipliers zero = Multipliers::zero(ps);
  CHECK_FALSE(normality_check(zero, WeightingScheme::vfj()).normal);
}

TEST_CASE("infeasible candidates are refused", "[conditions]") {
  auto ps = make(1, 11, {"x1_d1^2"}, {"x1 - 0.5"}, {}, {}, {"t1"});
  CHECK_THROWS_AS(recover_multipliers(ps, boundary_field(ps), WeightingScheme::sfj()), PreconditionError);
}

TEST_CASE("fractional schemes weight numerator and denominator", "[conditions]") {
  ProblemSpec ps = make(1, 21, {"x1_d1^2 + 1"}, {}, {}, {}, {"t1"});
  ps.kind = ProblemKind::vfp;
  ps.k = {parse("x1_d1 + 2", ps.dims())};
  const GridField x0 = boundary_field(ps);
  const WeightingScheme mfj = make_scheme(SystemVariant::mfj, ps, x0);
  REQUIRE(mfj.ratios.size() == 1);
  CHECK_THAT(mfj.ratios[0], WithinAbs(2.0 / 3.0, 1e-13));
  const WeightingScheme mfj0 = make_scheme(SystemVariant::mfj0, ps, x0);
  CHECK_THAT(mfj0.k_at_x0[0], WithinAbs(3.0, 1e-13));
  CHECK_THAT(mfj0.f_at_x0[0], WithinAbs(2.0, 1e-13));
  CHECK_THROWS_AS(make_scheme(SystemVariant::mfj, make(1, 5, {"x1"}), GridField(Domain::cube(1, 0, 1, 5), 1)),
                  InputError);
}

TEST_CASE("multiplier files round-trip", "[conditions]") {
  auto ps = make(2, 5, {"x1_d1^2", "x1^2"}, {"x1 - 1", "-x1"}, {"x1_d2"}, {"x1"});
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Multipliers m = Multipliers::zero(ps);
  m.tau = {0.25, 0.75};
  m.nu = {1.0 / 3.0};
  for (auto& v : m.lambda.values()) v = g(rng);
  for (auto& v : m.mu.values()) v = g(rng);
  std::stringstream csv, tau;
  write_multipliers_csv(csv, m);
  write_tau_line(tau, m);
  CHECK(tau.str() == "tau=0.25,0.75 nu=0.33333333333333331\n");
  const Multipliers back = read_multipliers(csv, tau, ps);
  CHECK(back.tau == m.tau);
  CHECK(back.nu == m.nu);
  CHECK(back.lambda == m.lambda);
  CHECK(back.mu == m.mu);

  std::stringstream bad_csv("t1,t2,mu1\n"), bad_tau("tau=1,2\n");
  CHECK_THROWS_AS(read_multipliers(bad_csv, bad_tau, ps), InputError);
}

TEST_CASE("system names parse", "[conditions]") {
  CHECK(parse_system("sfj") == SystemVariant::sfj);
  CHECK(parse_system("mfj0") == SystemVariant::mfj0);
  CHECK_THROWS_AS(parse_system("kkt"), InputError);
}
