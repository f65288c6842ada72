#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "lipext/laplace.hpp"
#include "lipext/scenarios.hpp"

using namespace testing_helpers;
using lipext::complete_graph_solution;
using lipext::Error;
using lipext::GraphInstance;
using lipext::laplace_vs_minimal_report;
using lipext::LaplaceSolution;
using lipext::load_scenario;
using lipext::make_graph_instance;
using lipext::solve_infinity_laplace;

namespace {

GraphInstance complete_graph(int n, Subset boundary, std::vector<Rational> data) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return make_graph_instance(n, std::move(edges), std::move(boundary),
                             std::move(data));
}

}  // namespace

TEST_CASE("complete graph on four vertices settles in one sweep") {
  GraphInstance g =
      complete_graph(4, Subset({0, 2}), {Rational(0), Rational(1)});
  LaplaceSolution sol = solve_infinity_laplace(g, rat("1/1000000"), 100);
  CHECK(sol.converged);
  CHECK(sol.iterations == 1);
  CHECK(sol.residual == Rational(0));
  CHECK(sol.values == values_of({"0", "1/2", "1", "1/2"}));
  CHECK(complete_graph_solution(4, Subset({0, 2}), {Rational(0), Rational(1)}) ==
        sol.values);
}

TEST_CASE("all-boundary instances return the data untouched") {
  GraphInstance g = complete_graph(3, Subset({0, 1, 2}),
                                   {rat("1/2"), rat("2/3"), rat("5")});
  LaplaceSolution sol = solve_infinity_laplace(g, rat("1/1000"), 100);
  CHECK(sol.converged);
  CHECK(sol.iterations == 0);
  CHECK(sol.residual == Rational(0));
  CHECK(sol.values == values_of({"1/2", "2/3", "5"}));
}

TEST_CASE("path graph midpoint") {
  GraphInstance g = make_graph_instance(3, {{0, 1}, {1, 2}}, Subset({0, 2}),
                                        {Rational(0), Rational(1)});
  LaplaceSolution sol = solve_infinity_laplace(g, rat("1/1000000"), 100);
  CHECK(sol.converged);
  CHECK(sol.values[1] == rat("1/2"));
  CHECK(sol.residual == Rational(0));
}

TEST_CASE("longer path converges within tolerance and bounds") {
  // 0 - 1 - 2 - 3 - 4 with data 0 and 1 at the ends.
  GraphInstance g =
      make_graph_instance(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, Subset({0, 4}),
                          {Rational(0), Rational(1)});
  LaplaceSolution sol = solve_infinity_laplace(g, rat("1/100000"), 10000);
  CHECK(sol.converged);
  CHECK(sol.residual <= rat("1/100000"));
  for (const Rational& v : sol.values) {
    CHECK(Rational(0) <= v);
    CHECK(v <= Rational(1));
  }
  // the exact solution is linear interpolation; the iterate is close
  CHECK(lipext::abs(sol.values[2] - rat("1/2")) <= rat("1/1000"));
}

TEST_CASE("comparison principle holds on every solver output") {
  for (long seed = 0; seed < 20; ++seed) {
    lipext::SplitMix64 rng(static_cast<std::uint64_t>(seed) + 99);
    const int n = 5 + static_cast<int>(rng.below(3));
    std::vector<std::pair<int, int>> edges;
    // random connected graph: a spanning path plus extras
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    for (int extra = 0; extra < n; ++extra) {
      int a = static_cast<int>(rng.below(n));
      int b = static_cast<int>(rng.below(n));
      if (a != b) edges.emplace_back(a, b);
    }
    std::vector<int> bidx = {0, n - 1};
    std::vector<Rational> data = {Rational(static_cast<long>(rng.below(7)), 3),
                                  Rational(static_cast<long>(rng.below(7)), 3)};
    GraphInstance g = make_graph_instance(n, edges, Subset(bidx), data);
    LaplaceSolution sol = solve_infinity_laplace(g, rat("1/10000"), 2000);
    Rational lo = lipext::min(data[0], data[1]);
    Rational hi = lipext::max(data[0], data[1]);
    for (const Rational& v : sol.values) {
      CHECK(lo <= v);
      CHECK(v <= hi);
    }
  }
}

TEST_CASE("solver output is stable under vertex relabeling") {
  GraphInstance g = make_graph_instance(
      4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, Subset({0, 2}),
      {Rational(0), Rational(1)});
  LaplaceSolution sol = solve_infinity_laplace(g, rat("1/100000"), 1000);
  // Relabel via the permutation (0 1 2 3) -> (3 2 1 0).
  GraphInstance gp = make_graph_instance(
      4, {{3, 2}, {2, 1}, {1, 0}, {3, 0}}, Subset({1, 3}),
      {Rational(1), Rational(0)});
  LaplaceSolution solp = solve_infinity_laplace(gp, rat("1/100000"), 1000);
  for (int v = 0; v < 4; ++v) CHECK(sol.values[v] == solp.values[3 - v]);
}

TEST_CASE("complete-graph closed form") {
  CHECK(complete_graph_solution(5, Subset({0, 1}), {Rational(0), Rational(2)}) ==
        values_of({"0", "2", "1", "1", "1"}));
  std::vector<Rational> constant =
      complete_graph_solution(3, Subset({1}), {rat("5/7")});
  CHECK(constant == values_of({"5/7", "5/7", "5/7"}));
}

TEST_CASE("graph validation rejects malformed instances") {
  CHECK_THROWS_AS(make_graph_instance(3, {{0, 0}}, Subset({0}), {Rational(1)}),
                  Error);
  CHECK_THROWS_AS(make_graph_instance(3, {{0, 5}}, Subset({0}), {Rational(1)}),
                  Error);
  CHECK_THROWS_AS(
      make_graph_instance(3, {{0, 1}}, Subset(std::vector<int>{}), {}), Error);
  // vertex 2 is interior but isolated
  CHECK_THROWS_AS(make_graph_instance(3, {{0, 1}}, Subset({0}), {Rational(1)}),
                  Error);
  // non-positive tolerance
  GraphInstance g = complete_graph(3, Subset({0}), {Rational(0)});
  CHECK_THROWS_AS(solve_infinity_laplace(g, Rational(0), 10), Error);
}

TEST_CASE("tug-of-war value fails minimality on the four-point graph") {
  auto s = load_scenario("fourpoint_graph");
  auto bd = lipext::make_boundary_data(s.space, Subset({0, 2}),
                                       {Rational(0), Rational(1)});
  auto report = laplace_vs_minimal_report(s.space, bd);
  CHECK(report.lip_f == rat("1/3"));
  CHECK(report.lip_u == rat("1/2"));
  CHECK(report.u_values == values_of({"0", "1/2", "1", "1/2"}));
  CHECK_FALSE(report.is_minimal);

  // Constant data: trivially minimal.
  auto bdc = lipext::make_boundary_data(s.space, Subset({0, 2}),
                                        {rat("2/9"), rat("2/9")});
  auto reportc = laplace_vs_minimal_report(s.space, bdc);
  CHECK(reportc.lip_u == Rational(0));
  CHECK(reportc.lip_f == Rational(0));
  CHECK(reportc.is_minimal);

  // Two-point space equal to its boundary: u = f.
  MetricSpace two = lipext::validate_metric({"a", "b"}, matrix_of({{"0", "2"},
                                                                   {"2", "0"}}));
  auto bd2 = lipext::make_boundary_data(two, Subset({0, 1}),
                                        {Rational(0), Rational(1)});
  auto report2 = laplace_vs_minimal_report(two, bd2);
  CHECK(report2.u_values == values_of({"0", "1"}));
  CHECK(report2.is_minimal);
}
