#include "dwave/lattice.hpp"
#include "dwave/scalar.hpp"

#include <doctest.h>

#include <cstdlib>
#include <functional>
#include <map>
#include <random>

using namespace dwave;

namespace {

// Brute-force count of integer points with ||n||_1 <= R.
std::uint64_t enumerate_ball(int d, Coord R) {
  std::uint64_t count = 0;
  std::vector<Coord> n(static_cast<std::size_t>(d), -R);
  std::function<void(std::size_t, Coord)> rec = [&](std::size_t k, Coord used) {
    if (k == n.size()) {
      ++count;
      return;
    }
    for (Coord c = -(R - used); c <= R - used; ++c) rec(k + 1, used + std::abs(c));
  };
  rec(0, 0);
  return count;
}

Field<double> random_sparse(int d, Coord R, int count, std::mt19937_64& rng) {
  std::uniform_int_distribution<Coord> coord(-R, R);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::map<LatticePoint, double> entries;
  while (static_cast<int>(entries.size()) < count) {
    LatticePoint n;
    for (int k = 0; k < d; ++k) n.coords.push_back(coord(rng));
    if (n.l1_norm() <= R) entries[n] = value(rng);
  }
  std::vector<FieldEntry<double>> list;
  for (auto& [n, v] : entries) list.push_back({n, v});
  return make_field(d, list);
}

// Reference neighbor average by direct lookup.
double reference_average(const Field<double>& f, const LatticePoint& n) {
  double s = 0.0;
  for (int k = 0; k < f.dim(); ++k)
    for (Coord step : {Coord{-1}, Coord{1}}) {
      LatticePoint m = n;
      m.coords[static_cast<std::size_t>(k)] += step;
      s += f.at(m);
    }
  return s / (2.0 * f.dim());
}

}  // namespace

TEST_CASE("make_field") {
  auto zero = make_field<double>(1, {});
  CHECK(zero.declared_radius() == 0);
  CHECK(field_sum(zero) == 0.0);

  auto one = make_field<double>(2, {{{0, 0}, 1.0}});
  CHECK(one.declared_radius() == 0);
  CHECK(one.at({0, 0}) == 1.0);

  auto two = make_field<double>(1, {{{2}, 0.5}, {{-1}, 1.0}});
  CHECK(two.declared_radius() == 2);
  CHECK(two.at({-1}) == 1.0);
  CHECK(two.at({5}) == 0.0);

  CHECK_THROWS_AS(make_field<double>(2, {{{1}, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_field<double>(1, {{{1}, 1.0}, {{1}, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_field<double>(0, {}), std::invalid_argument);
}

TEST_CASE("layout index round trip and lexicographic order") {
  for (int d = 1; d <= 4; ++d)
    for (Coord R = 0; R <= 4; ++R) {
      BallLayout L(d, R);
      REQUIRE(L.size() == l1_ball_count(d, R));
      for (std::size_t i = 0; i < L.size(); ++i) {
        const auto n = L.point_at(i);
        CHECK(n.l1_norm() <= R);
        CHECK(L.index_of(n) == i);
        if (i > 0) CHECK(L.point_at(i - 1) < n);
      }
    }
}

TEST_CASE("l1_ball_count") {
  CHECK(l1_ball_count(1, 2) == 5);
  CHECK(l1_ball_count(2, 1) == 5);
  CHECK(l1_ball_count(3, 2) == 25);
  CHECK(l1_ball_count(3, 0) == 1);
  for (int d = 1; d <= 4; ++d)
    for (Coord R = 0; R <= 12; ++R) CHECK(l1_ball_count(d, R) == enumerate_ball(d, R));
  CHECK_THROWS_AS(l1_ball_count(40, 1000000), std::overflow_error);
}

TEST_CASE("neighbor_average stencil") {
  auto d1 = neighbor_average(make_field<double>(1, {{{0}, 1.0}}));
  CHECK(d1.at({-1}) == 0.5);
  CHECK(d1.at({1}) == 0.5);
  CHECK(d1.at({0}) == 0.0);

  auto d2 = neighbor_average(make_field<double>(2, {{{0, 0}, 1.0}}));
  for (LatticePoint n : {LatticePoint{1, 0}, LatticePoint{-1, 0}, LatticePoint{0, 1}, LatticePoint{0, -1}})
    CHECK(d2.at(n) == 0.25);
  CHECK(d2.at({0, 0}) == 0.0);
  CHECK(d2.at({1, 1}) == 0.0);

  // Constant on a ball: interior points keep the constant.
  BallLayout ball(3, 4);
  std::vector<FieldEntry<double>> entries;
  for (std::size_t i = 0; i < ball.size(); ++i) entries.push_back({ball.point_at(i), 0.75});
  auto c = neighbor_average(make_field(3, entries));
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto n = ball.point_at(i);
    if (n.l1_norm() <= 3) CHECK(c.at(n) == doctest::Approx(0.75).epsilon(1e-15));
  }
}

TEST_CASE("neighbor_average matches direct lookup and preserves the sum") {
  std::mt19937_64 rng(7);
  for (int d = 1; d <= 4; ++d)
    for (int trial = 0; trial < 5; ++trial) {
      const Coord R = 1 + trial;
      auto f = random_sparse(d, R, 3 + 2 * trial, rng);
      auto v = neighbor_average(f);
      CHECK(v.declared_radius() == f.declared_radius() + 1);
      CHECK(support_radius(v) <= support_radius(f) + 1);
      for (std::size_t i = 0; i < v.layout().size(); ++i) {
        const auto n = v.layout().point_at(i);
        CHECK(v.at(n) == doctest::Approx(reference_average(f, n)).epsilon(1e-14));
      }
      CHECK(field_sum(v) == doctest::Approx(field_sum(f)).epsilon(1e-13));
    }
}

TEST_CASE("neighbor_average is exact and linear in rational arithmetic") {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 3; ++d) {
    auto a = field_cast<Rational>(random_sparse(d, 3, 6, rng));
    auto b = field_cast<Rational>(random_sparse(d, 3, 6, rng));
    const Rational x(3, 7), y(-2, 5);
    const auto lhs = neighbor_average(linear_combination(x, a, y, b));
    const auto rhs = linear_combination(x, neighbor_average(a), y, neighbor_average(b));
    CHECK((lhs.values() == rhs.values()).all());
    CHECK(field_sum(neighbor_average(a)) == field_sum(a));
  }
}

TEST_CASE("support grows by at most one per application") {
  auto f = make_field<double>(3, {{{0, 0, 0}, 1.0}});
  for (Coord k = 1; k <= 6; ++k) {
    f = neighbor_average(f);
    CHECK(support_radius(f) == k);
  }
}

TEST_CASE("field_sum, field_max, field_min, support_radius") {
  CHECK(field_sum(make_field<double>(1, {{{0}, 1.0}, {{1}, 2.0}})) == 3.0);

  auto zmax = field_max(Field<double>(2));
  CHECK(zmax.value == 0.0);
  CHECK(zmax.point == origin(2));

  auto neg = field_max(make_field<double>(1, {{{0}, -1.0}}));
  CHECK(neg.value == -1.0);
  CHECK(neg.point == LatticePoint{0});

  auto tie = field_max(make_field<double>(1, {{{-1}, 2.0}, {{1}, 2.0}}));
  CHECK(tie.value == 2.0);
  CHECK(tie.point == LatticePoint{-1});

  CHECK(field_min(make_field<double>(1, {{{-1}, 2.0}, {{1}, 2.0}})).value == 0.0);

  CHECK(support_radius(Field<double>(2)) == 0);
  CHECK(support_radius(make_field<double>(2, {{{1, 1}, 3.0}})) == 2);
}

TEST_CASE("resized keeps values and refuses to drop them") {
  auto f = make_field<double>(2, {{{1, -1}, 2.0}, {{0, 0}, 1.0}});
  auto g = resized(f, 5);
  CHECK(g.declared_radius() == 5);
  CHECK(g.at({1, -1}) == 2.0);
  CHECK(field_sum(g) == 3.0);
  auto h = resized(g, 2);
  CHECK((h.values() == f.values()).all());
  CHECK_THROWS_AS(resized(f, 1), std::invalid_argument);
}

TEST_CASE("exact rational conversion") {
  CHECK(from_double<Rational>(0.1) != Rational(1, 10));
  CHECK(from_double<Rational>(0.5) == Rational(1, 2));
  CHECK(signed_pow(Rational(-1, 2), 2.0) == Rational(-1, 4));
  CHECK(signed_pow(0.0, 0.5) == 0.0);
  CHECK_THROWS_AS(abs_pow(Rational(1, 2), 1.5), std::domain_error);
}
