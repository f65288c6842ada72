#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "helpers.hpp"
#include "lipext/extension.hpp"
#include "lipext/interior.hpp"
#include "lipext/scenarios.hpp"

using namespace testing_helpers;
using lipext::Errc;
using lipext::Error;
using lipext::ExtensionValues;
using lipext::InteriorLipResult;
using lipext::is_minimal_extension;
using lipext::lambda_extension;
using lipext::lipschitz_constant;
using lipext::load_scenario;
using lipext::min_interior_lip;

TEST_CASE("pair {x1,x5}: the interior constant drops to zero") {
  auto s = load_scenario("theorem_5pt");
  std::map<int, Rational> off = {{1, Rational(0)}, {2, rat("1/3")}, {3, Rational(1)}};
  InteriorLipResult res = min_interior_lip(s.space, s.bd, Subset({0, 4}), off);
  CHECK(res.optimum == Rational(0));
  CHECK(res.witness[0] == rat("2/3"));
  CHECK(res.witness[4] == rat("2/3"));
  CHECK(is_minimal_extension(s.space, s.bd, res.witness).ok());
}

TEST_CASE("pair {x1,x3}: the true optimum is zero, not just 1/18") {
  auto s = load_scenario("theorem_5pt");
  std::map<int, Rational> off = {{1, Rational(0)}, {3, Rational(1)}, {4, rat("2/3")}};
  InteriorLipResult res = min_interior_lip(s.space, s.bd, Subset({0, 2}), off);
  CHECK(res.optimum == Rational(0));
  CHECK(res.witness[0] == rat("1/3"));
  CHECK(res.witness[2] == rat("1/3"));

  // Independent brute-force grid at resolution 1/90 agrees.
  ExtensionValues offFull = {Rational(0), Rational(0), Rational(0),
                             Rational(1), rat("2/3")};
  Rational gridMin = grid_min_interior_oracle(s.space, s.bd, Subset({0, 2}),
                                              offFull, rat("1/90"));
  CHECK(gridMin == Rational(0));

  // The improvement exhibited by hand (x1 -> 1/2) is feasible but not optimal.
  ExtensionValues byHand = {rat("1/2"), Rational(0), rat("1/3"), Rational(1),
                            rat("2/3")};
  CHECK(is_minimal_extension(s.space, s.bd, byHand).ok());
  CHECK(lipschitz_constant(s.space, byHand, Subset({0, 2})) == rat("1/18"));
}

TEST_CASE("singleton test set pins the free point inside its bounds") {
  auto s = load_scenario("theorem_5pt");
  std::map<int, Rational> off = {{1, Rational(0)},
                                 {2, rat("1/3")},
                                 {3, Rational(1)},
                                 {4, rat("2/3")}};
  InteriorLipResult res = min_interior_lip(s.space, s.bd, Subset({0}), off);
  CHECK(res.optimum == Rational(0));
  CHECK(rat("-2/3") <= res.witness[0]);
  CHECK(res.witness[0] <= rat("2/3"));
  CHECK(is_minimal_extension(s.space, s.bd, res.witness).ok());
}

TEST_CASE("anchored test set with a pinned free point") {
  // U = {x3, x4} where x4 is boundary: every completion keeps x3 at 1/3,
  // so the interior constant equals the budget 1/3.
  auto s = load_scenario("theorem_5pt");
  std::map<int, Rational> off = {{0, rat("2/3")}, {1, Rational(0)}, {4, rat("2/3")}};
  InteriorLipResult res = min_interior_lip(s.space, s.bd, Subset({2, 3}), off);
  CHECK(res.optimum == rat("1/3"));
  CHECK(res.witness[2] == rat("1/3"));
  CHECK(is_minimal_extension(s.space, s.bd, res.witness).ok());
}

TEST_CASE("anchored test set with a strictly interior optimum") {
  // remark_5pt, U = {x2, x5}: the anchor at 2 and the bound h(x5) <= 1.7
  // force (2 - 1.7) / d(x2, x5) = 3/5.
  auto s = load_scenario("remark_5pt");
  std::map<int, Rational> off = {{0, Rational(0)}, {2, rat("3/5")}, {3, rat("11/10")}};
  InteriorLipResult res = min_interior_lip(s.space, s.bd, Subset({1, 4}), off);
  CHECK(res.optimum == rat("3/5"));
  CHECK(res.witness[4] == rat("17/10"));
  CHECK(lipschitz_constant(s.space, res.witness, Subset({1, 4})) == rat("3/5"));
  CHECK(is_minimal_extension(s.space, s.bd, res.witness).ok());
}

TEST_CASE("test set fully inside the domain floors at its fixed pairs") {
  auto s = load_scenario("theorem_5pt");
  ExtensionValues h = lambda_extension(s.space, s.bd, rat("1/2"));
  InteriorLipResult res = min_interior_lip(s.space, s.bd, Subset({1, 3}), h);
  CHECK(res.optimum == rat("1/3"));  // Lip(f, A) itself
  CHECK(res.witness == h);
}

TEST_CASE("infeasible off-values are rejected") {
  auto s = load_scenario("theorem_5pt");
  // Disagrees with the boundary data at x2.
  std::map<int, Rational> bad1 = {{1, Rational(5)}, {2, rat("1/3")}, {3, Rational(1)}};
  CHECK_THROWS_AS(min_interior_lip(s.space, s.bd, Subset({0, 4}), bad1), Error);
  // Violates the budget between fixed points x3 and x4.
  std::map<int, Rational> bad2 = {{1, Rational(0)}, {2, Rational(0)}, {3, Rational(1)}};
  try {
    min_interior_lip(s.space, s.bd, Subset({0, 4}), bad2);
    FAIL("expected InfeasibleOffValues");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InfeasibleOffValues);
  }
  // Missing a fixed point entirely.
  std::map<int, Rational> bad3 = {{1, Rational(0)}, {3, Rational(1)}};
  CHECK_THROWS_AS(min_interior_lip(s.space, s.bd, Subset({0, 4}), bad3), Error);
}

TEST_CASE("witness contract holds on random instances and test sets") {
  int checked = 0;
  for (long seed = 0; seed < 40; ++seed) {
    auto [space, bd] = random_instance(seed, 5, 2);
    Subset complement = space.complement(bd.domain);
    for (int k = 0; k <= 4; ++k) {
      ExtensionValues h = lambda_extension(space, bd, Rational(k, 4));
      // Walk a few subsets of the complement (pairs and the full triple).
      std::vector<Subset> sets;
      for (std::size_t a = 0; a < complement.members.size(); ++a)
        for (std::size_t b = a + 1; b < complement.members.size(); ++b)
          sets.push_back(Subset({complement.members[a], complement.members[b]}));
      sets.push_back(complement);
      for (const Subset& u : sets) {
        Rational lipOnU = lipschitz_constant(space, h, u);
        InteriorLipResult res = min_interior_lip(space, bd, u, h);
        ++checked;
        // h competes in its own minimization
        CHECK(res.optimum <= lipOnU);
        // witness achieves exactly the optimum and agrees off U
        CHECK(lipschitz_constant(space, res.witness, u) == res.optimum);
        for (int z = 0; z < space.size(); ++z)
          if (!u.contains(z)) CHECK(res.witness[z] == h[z]);
        CHECK(is_minimal_extension(space, bd, res.witness).ok());
      }
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("anchored witness contract on full-family subsets") {
  for (long seed = 0; seed < 12; ++seed) {
    auto [space, bd] = random_instance(seed, 4, 2);
    ExtensionValues h = lambda_extension(space, bd, rat("1/3"));
    // All subsets of size >= 2, anchored or not.
    auto sets = lipext::enumerate_family(space, bd,
                                         lipext::SubsetFamily::all_subsets());
    for (const Subset& u : sets) {
      Rational lipOnU = lipschitz_constant(space, h, u);
      InteriorLipResult res = min_interior_lip(space, bd, u, h);
      CHECK(res.optimum <= lipOnU);
      CHECK(lipschitz_constant(space, res.witness, u) == res.optimum);
      CHECK(is_minimal_extension(space, bd, res.witness).ok());
      for (int z = 0; z < space.size(); ++z)
        if (!u.contains(z)) CHECK(res.witness[z] == h[z]);
    }
  }
}

TEST_CASE("closed form matches the brute-force grid on seeded instances") {
  // Smaller sibling of the acceptance criterion: 25 instances, step 1/200.
  const Rational step(1, 200);
  for (long seed = 100; seed < 125; ++seed) {
    auto [space, bd] = random_instance(seed, 5, 3);
    Subset u = space.complement(bd.domain);
    REQUIRE(u.size() == 2);
    ExtensionValues h = lambda_extension(space, bd, rat("1/2"));
    InteriorLipResult res = min_interior_lip(space, bd, u, h);
    Rational gridMin = grid_min_interior_oracle(space, bd, u, h, step);
    CHECK(res.optimum <= gridMin);
    CHECK(gridMin <= res.optimum + step);
  }
}
