#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <string>
#include <vector>

#include "lipext/extension.hpp"
#include "lipext/hunt.hpp"
#include "lipext/metric.hpp"

namespace testing_helpers {

using lipext::BoundaryData;
using lipext::MetricSpace;
using lipext::Rational;
using lipext::Subset;

inline std::vector<std::vector<Rational>> matrix_of(
    const std::vector<std::vector<const char*>>& rows) {
  std::vector<std::vector<Rational>> out;
  for (const auto& row : rows) {
    std::vector<Rational> r;
    for (const char* cell : row) r.push_back(Rational::parse(cell));
    out.push_back(std::move(r));
  }
  return out;
}

inline Rational rat(const char* s) { return Rational::parse(s); }

inline std::vector<Rational> values_of(const std::vector<const char*>& cells) {
  std::vector<Rational> out;
  for (const char* c : cells) out.push_back(Rational::parse(c));
  return out;
}

// --------------------------------------------------------------------------
// Independent oracles (never reuse the library's algorithm under test)
// --------------------------------------------------------------------------

/// Exhaustive triple loop: first (i, j, k) with d(i,k) > d(i,j) + d(j,k),
/// scanning i < k in row order, j inner.
inline std::optional<std::vector<int>> triangle_violation_oracle(
    const std::vector<std::vector<Rational>>& m) {
  const int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        if (m[i][k] > m[i][j] + m[j][k]) return std::vector<int>{i, j, k};
      }
  return std::nullopt;
}

/// Textbook Floyd–Warshall closure (independent of metric_repair).
inline std::vector<std::vector<Rational>> shortest_path_oracle(
    std::vector<std::vector<Rational>> m) {
  const int n = static_cast<int>(m.size());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (m[i][k] + m[k][j] < m[i][j]) m[i][j] = m[i][k] + m[k][j];
  return m;
}

/// Brute-force grid minimization of Lip(g, U) over completions that stay
/// within the fixed-set bounds [lo, hi] and the pairwise budget, for
/// |U| = 2. The grid covers [lo, hi] at the given step, with both
/// endpoints included. Returns the smallest objective over feasible grid
/// points (the problem is always feasible when the off-values come from a
/// minimal extension).
inline Rational grid_min_interior_oracle(const MetricSpace& space,
                                         const BoundaryData& bd,
                                         const Subset& U,
                                         const std::vector<Rational>& offFull,
                                         const Rational& step) {
  REQUIRE(U.size() == 2);
  const int x = U.members[0];
  const int y = U.members[1];
  auto bounds = [&](int p) {
    std::optional<Rational> lo, hi;
    for (int z = 0; z < space.size(); ++z) {
      if (U.contains(z)) continue;
      Rational v = bd.on_domain(z) ? bd.value_at(z) : offFull[z];
      Rational down = v - bd.budget * space.dist(p, z);
      Rational up = v + bd.budget * space.dist(p, z);
      if (!lo || down > *lo) lo = down;
      if (!hi || up < *hi) hi = up;
    }
    REQUIRE(lo);
    REQUIRE(hi);
    return std::pair<Rational, Rational>(*lo, *hi);
  };
  auto [lox, hix] = bounds(x);
  auto [loy, hiy] = bounds(y);
  REQUIRE(lox <= hix);
  REQUIRE(loy <= hiy);

  auto grid = [&](const Rational& lo, const Rational& hi) {
    std::vector<Rational> pts;
    Rational v = lo;
    while (v < hi) {
      pts.push_back(v);
      v += step;
    }
    pts.push_back(hi);
    return pts;
  };
  const std::vector<Rational> gx = grid(lox, hix);
  const std::vector<Rational> gy = grid(loy, hiy);
  const Rational slack = bd.budget * space.dist(x, y);
  const Rational d = space.dist(x, y);

  std::optional<Rational> best;
  for (const Rational& vx : gx)
    for (const Rational& vy : gy) {
      Rational diff = lipext::abs(vx - vy);
      if (diff > slack) continue;  // not a minimal extension
      Rational objective = diff / d;
      if (!best || objective < *best) best = objective;
    }
  REQUIRE(best);
  return *best;
}

/// Deterministic random instances for property tests, reusing the hunt
/// generator with a fixed config.
inline std::pair<MetricSpace, BoundaryData> random_instance(
    long seed, int points, int domainSize,
    lipext::HuntConfig::Mode mode = lipext::HuntConfig::Mode::Repair) {
  lipext::HuntConfig config;
  config.point_count = points;
  config.domain_size = domainSize;
  config.mode = mode;
  return lipext::gen_instance(config, seed);
}

}  // namespace testing_helpers
