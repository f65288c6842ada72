#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "lipext/family.hpp"
#include "lipext/scenarios.hpp"

using namespace testing_helpers;
using lipext::enumerate_family;
using lipext::Errc;
using lipext::Error;
using lipext::load_scenario;
using lipext::SubsetFamily;

TEST_CASE("complement family of the five-point instance") {
  auto s = load_scenario("theorem_5pt");
  auto sets = enumerate_family(s.space, s.bd, SubsetFamily::complement_subsets());
  // 2^3 subsets of {x1,x3,x5}, minus the empty set and three singletons.
  REQUIRE(sets.size() == 4);
  CHECK(sets[0].members == std::vector<int>{0, 2});
  CHECK(sets[1].members == std::vector<int>{0, 4});
  CHECK(sets[2].members == std::vector<int>{2, 4});
  CHECK(sets[3].members == std::vector<int>{0, 2, 4});
}

TEST_CASE("four-point complement family has a single member") {
  auto s = load_scenario("fourpoint_graph");
  auto sets = enumerate_family(s.space, s.bd, SubsetFamily::complement_subsets());
  REQUIRE(sets.size() == 1);
  CHECK(sets[0].members == std::vector<int>{2, 3});
}

TEST_CASE("full family on five points has 26 members in canonical order") {
  auto s = load_scenario("theorem_5pt");
  auto sets = enumerate_family(s.space, s.bd, SubsetFamily::all_subsets());
  REQUIRE(sets.size() == 26);  // 2^5 - 1 - 5
  for (std::size_t i = 1; i < sets.size(); ++i)
    CHECK(lipext::canonical_less(sets[i - 1], sets[i]));
  CHECK(sets.front().members == std::vector<int>{0, 1});
  CHECK(sets.back().members == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("explicit families are validated, filtered and canonicalized") {
  auto s = load_scenario("theorem_5pt");
  auto family = SubsetFamily::explicit_family(
      {Subset({2, 0}), Subset({4}), Subset({0, 2}), Subset({0, 2, 4})});
  auto sets = enumerate_family(s.space, s.bd, family);
  REQUIRE(sets.size() == 2);  // singleton dropped, duplicate merged
  CHECK(sets[0].members == std::vector<int>{0, 2});
  CHECK(sets[1].members == std::vector<int>{0, 2, 4});

  auto bad = SubsetFamily::explicit_family({Subset({0, 7})});
  try {
    enumerate_family(s.space, s.bd, bad);
    FAIL("expected ExplicitMemberOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ExplicitMemberOutOfRange);
  }
}

TEST_CASE("empty complement family when the domain covers the space") {
  auto s = load_scenario("fourpoint_graph");
  auto bd = lipext::make_boundary_data(
      s.space, Subset({0, 1, 2, 3}),
      {Rational(0), Rational(1), Rational(2), Rational(2)});
  auto sets = enumerate_family(s.space, bd, SubsetFamily::complement_subsets());
  CHECK(sets.empty());
}
