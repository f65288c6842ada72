#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "helpers.hpp"
#include "lipext/metric.hpp"

using namespace testing_helpers;
using lipext::Errc;
using lipext::Error;
using lipext::lipschitz_constant;
using lipext::metric_repair;
using lipext::validate_metric;

namespace {

const std::vector<std::string> kFiveLabels = {"x1", "x2", "x3", "x4", "x5"};

std::vector<std::vector<Rational>> five_point_matrix() {
  return matrix_of({{"0", "2", "3", "5", "6"},
                    {"2", "0", "1", "3", "4"},
                    {"3", "1", "0", "2", "3"},
                    {"5", "3", "2", "0", "1"},
                    {"6", "4", "3", "1", "0"}});
}

}  // namespace

TEST_CASE("five-point table validates") {
  MetricSpace space = validate_metric(kFiveLabels, five_point_matrix());
  CHECK(space.size() == 5);
  CHECK(space.dist(1, 3) == Rational(3));
  CHECK(space.dist(0, 4) == Rational(6));
  CHECK(space.label(2) == "x3");
}

TEST_CASE("single point space is valid") {
  MetricSpace space = validate_metric({"x1"}, matrix_of({{"0"}}));
  CHECK(space.size() == 1);
}

TEST_CASE("triangle violation reports the violating triple") {
  auto m = five_point_matrix();
  m[0][2] = Rational(10);  // 10 > 2 + 1 through x2
  m[2][0] = Rational(10);
  // Oracle first: the exhaustive triple loop flags (x1, x2, x3).
  auto witness = triangle_violation_oracle(m);
  REQUIRE(witness);
  CHECK(*witness == std::vector<int>{0, 1, 2});
  try {
    validate_metric(kFiveLabels, m);
    FAIL("expected TriangleViolation");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TriangleViolation);
    CHECK(e.where() == *witness);
  }
}

TEST_CASE("axiom violations are reported with the offending indices") {
  auto m = five_point_matrix();
  m[1][1] = Rational(1);
  CHECK_THROWS_AS(validate_metric(kFiveLabels, m), Error);
  m = five_point_matrix();
  m[0][3] = Rational(4);
  try {
    validate_metric(kFiveLabels, m);
    FAIL("expected NonSymmetric");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonSymmetric);
    CHECK(e.where() == std::vector<int>{0, 3});
  }
  m = five_point_matrix();
  m[2][4] = Rational(0);
  m[4][2] = Rational(0);
  try {
    validate_metric(kFiveLabels, m);
    FAIL("expected NonpositiveOffDiagonal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonpositiveOffDiagonal);
  }
}

TEST_CASE("validator agrees with the brute-force oracle on random grids") {
  lipext::SplitMix64 rng(42);
  std::vector<std::string> labels = {"a", "b", "c", "d", "e", "f"};
  int violating = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<Rational>> m(6, std::vector<Rational>(6, Rational(0)));
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        long q = 1 + static_cast<long>(rng.below(4));
        long p = q + static_cast<long>(rng.below(2 * q + 1));  // in [1, 3]
        m[i][j] = Rational(p, q);
        m[j][i] = m[i][j];
      }
    auto witness = triangle_violation_oracle(m);
    if (witness) {
      ++violating;
      try {
        validate_metric(labels, m);
        FAIL("oracle found a violation the validator missed");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::TriangleViolation);
        CHECK(e.where() == *witness);
      }
    } else {
      CHECK_NOTHROW(validate_metric(labels, m));
    }
  }
  // the sample must exercise both sides
  CHECK(violating > 10);
  CHECK(violating < 190);
}

TEST_CASE("repair leaves valid metrics unchanged") {
  MetricSpace repaired = metric_repair(kFiveLabels, five_point_matrix());
  auto m = five_point_matrix();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(repaired.dist(i, j) == m[i][j]);

  std::vector<std::vector<Rational>> uniform(4, std::vector<Rational>(4, Rational(1)));
  for (int i = 0; i < 4; ++i) uniform[i][i] = Rational(0);
  MetricSpace u = metric_repair({"a", "b", "c", "d"}, uniform);
  CHECK(u.dist(0, 3) == Rational(1));
}

TEST_CASE("repair closes the inflated entry through the short path") {
  auto m = five_point_matrix();
  m[0][2] = Rational(10);
  m[2][0] = Rational(10);
  auto oracle = shortest_path_oracle(m);
  CHECK(oracle[0][2] == Rational(3));  // x1 - x2 - x3
  MetricSpace repaired = metric_repair(kFiveLabels, m);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(repaired.dist(i, j) == oracle[i][j]);
}

TEST_CASE("repair is idempotent, dominated by the input, and metric") {
  lipext::SplitMix64 rng(7);
  std::vector<std::string> labels = {"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<Rational>> m(6, std::vector<Rational>(6, Rational(0)));
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        long q = 1 + static_cast<long>(rng.below(6));
        long p = q + static_cast<long>(rng.below(3 * q));
        m[i][j] = Rational(p, q);
        m[j][i] = m[i][j];
      }
    MetricSpace first = metric_repair(labels, m);
    std::vector<std::vector<Rational>> closed(6, std::vector<Rational>(6, Rational(0)));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        closed[i][j] = first.dist(i, j);
        CHECK(first.dist(i, j) <= m[i][j]);
      }
    CHECK_NOTHROW(validate_metric(labels, closed));
    MetricSpace second = metric_repair(labels, closed);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) CHECK(second.dist(i, j) == first.dist(i, j));
  }
}

TEST_CASE("Lipschitz constants over subsets") {
  MetricSpace space = validate_metric(kFiveLabels, five_point_matrix());
  std::map<int, Rational> f = {{1, Rational(0)}, {3, Rational(1)}};
  CHECK(lipschitz_constant(space, f, Subset({1, 3})) == Rational(1, 3));
  CHECK(lipschitz_constant(space, f, Subset({1})) == Rational(0));

  std::map<int, Rational> g = {{0, rat("1/2")}, {2, rat("1/3")}};
  CHECK(lipschitz_constant(space, g, Subset({0, 2})) == rat("1/18"));

  CHECK_THROWS_AS(lipschitz_constant(space, f, Subset({0, 1})), Error);
  try {
    lipschitz_constant(space, f, Subset({0, 1}));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingValue);
    CHECK(e.where() == std::vector<int>{0});
  }
}

TEST_CASE("Lipschitz constant: shift invariance, scaling, monotonicity") {
  for (long seed : {1L, 2L, 3L, 4L, 5L}) {
    auto [space, bd] = random_instance(seed, 5, 2);
    lipext::SplitMix64 rng(static_cast<std::uint64_t>(seed) * 977);
    std::vector<Rational> v;
    for (int i = 0; i < 5; ++i)
      v.push_back(Rational(static_cast<long>(rng.below(41)) - 20, 4));
    Subset all = space.all_points();
    Subset sub({0, 2, 3});
    Rational base = lipschitz_constant(space, v, all);

    std::vector<Rational> shifted = v;
    for (auto& x : shifted) x += rat("7/3");
    CHECK(lipschitz_constant(space, shifted, all) == base);

    std::vector<Rational> scaled = v;
    for (auto& x : scaled) x *= rat("5/2");
    CHECK(lipschitz_constant(space, scaled, all) == base * rat("5/2"));

    CHECK(lipschitz_constant(space, v, sub) <= base);
  }
}

TEST_CASE("boundary data recomputes its budget and rejects bad domains") {
  MetricSpace space = validate_metric(kFiveLabels, five_point_matrix());
  auto bd = lipext::make_boundary_data(space, Subset({1, 3}),
                                       {Rational(0), Rational(1)});
  CHECK(bd.budget == Rational(1, 3));
  CHECK(bd.value_at(3) == Rational(1));
  CHECK(bd.on_domain(1));
  CHECK_FALSE(bd.on_domain(0));

  auto singleton = lipext::make_boundary_data(space, Subset({2}), {Rational(9)});
  CHECK(singleton.budget == Rational(0));

  CHECK_THROWS_AS(lipext::make_boundary_data(space, Subset({1, 9}),
                                             {Rational(0), Rational(1)}),
                  Error);
  CHECK_THROWS_AS(lipext::make_boundary_data(space, Subset({1, 3}), {Rational(0)}),
                  Error);
  CHECK_THROWS_AS(lipext::make_boundary_data(space, Subset(std::vector<int>{}),
                                             std::vector<Rational>{}),
                  Error);
}
