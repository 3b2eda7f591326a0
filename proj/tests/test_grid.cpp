#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "mtvar/grid.hpp"

using namespace mtvar;
using Catch::Matchers::WithinAbs;

namespace {

GridField random_field(const Domain& d, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(d.node_count() * n);
  for (auto& z : v) z = g(rng);
  return GridField(d, n, std::move(v));
}

}  // namespace

TEST_CASE("domain validation", "[grid]") {
  CHECK_THROWS_AS(Domain({{0, 1}}, {2}), InputError);
  CHECK_THROWS_AS(Domain({{1, 1}}, {5}), InputError);
  CHECK_THROWS_AS(Domain({{0, 1}, {0, 1}}, {5}), InputError);
  const Domain d({{0, 1}, {0, 2}}, {3, 5});
  CHECK(d.node_count() == 15);
  CHECK(d.spacing(1) == 0.5);
  CHECK(d.volume() == 2.0);
  // t1 slowest
  CHECK(d.coordinate_index(5, 0) == 1);
  CHECK(d.coordinate_index(5, 1) == 0);
  CHECK(d.is_boundary(0));
  CHECK_FALSE(d.is_boundary(6));
  CHECK(d.coordinate(1, 4) == 2.0);
}

TEST_CASE("jet prolongation", "[grid]") {
  const Domain d = Domain::cube(1, 0.0, 1.0, 11);
  const auto sq = GridField::scalar(d, [](auto t) { return t[0] * t[0]; });
  const JetPoint mid = jet_prolongation(sq, 5);
  CHECK(mid.t[0] == 0.5);
  CHECK_THAT(mid.deriv(0, 0), WithinAbs(1.0, 1e-14));

  const auto c = GridField::scalar(d, [](auto) { return 3.0; });
  for (std::size_t node = 0; node < d.node_count(); ++node) CHECK(jet_prolongation(c, node).deriv(0, 0) == 0.0);

  const auto lin = GridField::scalar(d, [](auto t) { return t[0]; });
  CHECK_THAT(jet_prolongation(lin, 0).deriv(0, 0), WithinAbs(1.0, 1e-13));
}

TEST_CASE("affine fields have exact gradients everywhere", "[grid][property]") {
  const Domain d({{-1, 2}, {0, 0.5}}, {7, 4});
  const auto f = GridField::sample(d, 2, [](auto t, auto out) {
    out[0] = 2.0 * t[0] - 3.0 * t[1] + 1.0;
    out[1] = -0.5 * t[0] + 7.0 * t[1];
  });
  for (std::size_t node = 0; node < d.node_count(); ++node) {
    const JetPoint p = jet_prolongation(f, node);
    CHECK_THAT(p.deriv(0, 0), WithinAbs(2.0, 1e-12));
    CHECK_THAT(p.deriv(0, 1), WithinAbs(-3.0, 1e-12));
    CHECK_THAT(p.deriv(1, 0), WithinAbs(-0.5, 1e-12));
    CHECK_THAT(p.deriv(1, 1), WithinAbs(7.0, 1e-12));
  }
}

TEST_CASE("integrate", "[grid]") {
  const Domain sq = Domain::cube(2, 0.0, 1.0, 9);
  CHECK_THAT(integrate(GridField::scalar(sq, [](auto) { return 1.0; })), WithinAbs(1.0, 1e-15));
  const Domain line = Domain::cube(1, 0.0, 1.0, 11);
  CHECK_THAT(integrate(GridField::scalar(line, [](auto t) { return t[0]; })), WithinAbs(0.5, 1e-15));
  // antiderivative t^3/3; trapezoid error is h^2/6 = 1.67e-5
  const Domain fine = Domain::cube(1, 0.0, 1.0, 101);
  CHECK_THAT(integrate(GridField::scalar(fine, [](auto t) { return t[0] * t[0]; })), WithinAbs(1.0 / 3.0, 1e-4));
  CHECK_THROWS_AS(integrate(GridField(line, 2)), InputError);
}

TEST_CASE("integrate is linear and monotone", "[grid][property]") {
  std::mt19937_64 rng(5);
  const Domain d({{0, 1}, {-1, 1}}, {6, 9});
  for (int trial = 0; trial < 50; ++trial) {
    const GridField a = random_field(d, 1, rng);
    const GridField b = random_field(d, 1, rng);
    std::vector<double> combo(d.node_count()), upper(d.node_count());
    for (std::size_t j = 0; j < combo.size(); ++j) {
      combo[j] = 2.5 * a.values()[j] - b.values()[j];
      upper[j] = a.values()[j] + std::abs(b.values()[j]);
    }
    CHECK_THAT(integrate(d, combo), WithinAbs(2.5 * integrate(a) - integrate(b), 1e-12));
    CHECK(integrate(a) <= integrate(d, upper));
  }
}

TEST_CASE("field distance", "[grid]") {
  const Domain d = Domain::cube(1, 0.0, 1.0, 11);
  const auto x = GridField::scalar(d, [](auto t) { return t[0]; });
  const auto zero = GridField::scalar(d, [](auto) { return 0.0; });
  CHECK(field_distance(x, x) == 0.0);
  CHECK_THAT(field_distance(x, zero), WithinAbs(2.0, 1e-13));
  const auto five = GridField::scalar(d, [](auto) { return 5.0; });
  const auto three = GridField::scalar(d, [](auto) { return 3.0; });
  CHECK(field_distance(five, three) == 2.0);
  CHECK_THROWS_AS(field_distance(x, GridField(Domain::cube(1, 0.0, 1.0, 12), 1)), InputError);
}

TEST_CASE("field distance is a metric on samples", "[grid][property]") {
  std::mt19937_64 rng(11);
  const Domain d({{0, 1}, {0, 1}}, {5, 7});
  for (int trial = 0; trial < 100; ++trial) {
    const GridField x = random_field(d, 2, rng);
    const GridField y = random_field(d, 2, rng);
    const GridField z = random_field(d, 2, rng);
    CHECK(field_distance(x, y) == field_distance(y, x));
    CHECK(field_distance(x, z) <= field_distance(x, y) + field_distance(y, z) + 1e-12);
    CHECK(field_distance(x, y) > 0.0);
  }
}

TEST_CASE("CSV round-trip is bit exact", "[grid]") {
  std::mt19937_64 rng(3);
  const Domain d({{0, 1}, {0, 3}}, {4, 6});
  const GridField f = random_field(d, 2, rng);
  std::stringstream ss;
  write_field_csv(ss, f);
  const GridField g = read_field_csv(ss, d);
  CHECK(g == f);

  std::stringstream header;
  header << "t1,t2,x1\n";
  CHECK_THROWS_AS(read_field_csv(header, d), InputError);
  std::stringstream wrong;
  write_field_csv(wrong, f);
  CHECK_THROWS_AS(read_field_csv(wrong, Domain({{0, 1}, {0, 2}}, {4, 6})), InputError);
}

TEST_CASE("non-finite values are rejected", "[grid]") {
  const Domain d = Domain::cube(1, 0.0, 1.0, 3);
  CHECK_THROWS_AS(GridField(d, 1, {0.0, NAN, 1.0}), InputError);
  std::stringstream ss("t1,x1\n0,1\n0.5,nan\n1,2\n");
  CHECK_THROWS_AS(read_field_csv(ss, d), InputError);
}
