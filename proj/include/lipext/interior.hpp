#pragma once

#include <cassert>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lipext/extension.hpp"
#include "lipext/metric.hpp"

namespace lipext {

/// Result of the inner minimization: the smallest Lipschitz constant on U
/// achievable by a minimal extension that agrees with the supplied values
/// off U, together with one extension achieving it.
struct InteriorLipResult {
  Rational optimum;         // t*
  ExtensionValues witness;  // agrees with the off-values off U, Lip(., U) = t*
};

namespace detail {

/// The inner minimization in linearized form. Free points are U \ A;
/// anchors are U inters A (their values are pinned to f but their pairs
/// still count toward Lip(., U)). `lo`/`hi` are the constant bounds each
/// free point inherits from the fixed set X \ U at budget L; they are
/// empty optionals when X \ U is empty.
struct InteriorProblem {
  std::vector<int> frees;    // U \ A, ascending
  std::vector<int> anchors;  // U inters A, ascending
  std::vector<std::optional<Rational>> lo, hi;  // aligned with frees
  Rational c0;               // Lip(f, U inters A): fixed-pair floor
  Rational budget;           // L
};

/// Assemble the problem from per-point value intervals for the fixed set.
/// For the exact solve both ends coincide; for box bounds, `upperEnd`
/// feeds the lo terms and `lowerEnd` the hi terms, which by per-term
/// monotonicity makes the resulting optimum an upper bound over the box.
inline InteriorProblem build_interior_problem(
    const MetricSpace& space, const BoundaryData& bd, const Subset& U,
    const std::vector<Rational>& lowerEnd,
    const std::vector<Rational>& upperEnd) {
  InteriorProblem p;
  p.budget = bd.budget;
  for (int i : U.members)
    (bd.on_domain(i) ? p.anchors : p.frees).push_back(i);

  p.c0 = Rational(0);
  for (std::size_t a = 0; a < p.anchors.size(); ++a)
    for (std::size_t b = a + 1; b < p.anchors.size(); ++b) {
      Rational r = abs(bd.value_at(p.anchors[a]) - bd.value_at(p.anchors[b])) /
                   space.dist(p.anchors[a], p.anchors[b]);
      if (r > p.c0) p.c0 = std::move(r);
    }

  p.lo.resize(p.frees.size());
  p.hi.resize(p.frees.size());
  for (std::size_t k = 0; k < p.frees.size(); ++k) {
    const int x = p.frees[k];
    for (int z = 0; z < space.size(); ++z) {
      if (U.contains(z)) continue;
      Rational down = upperEnd[z] - p.budget * space.dist(x, z);
      Rational up = lowerEnd[z] + p.budget * space.dist(x, z);
      if (!p.lo[k] || down > *p.lo[k]) p.lo[k] = std::move(down);
      if (!p.hi[k] || up < *p.hi[k]) p.hi[k] = std::move(up);
    }
  }
  return p;
}

/// Least t at which the level-t system is feasible:
///   v(x) in [lo_t(x), hi_t(x)],  |v(x) - v(y)| <= t d(x,y) on free pairs,
/// where lo_t(x) = max(lo(x), f(a) - t d(x,a) over anchors a) and hi_t
/// dually. Every conjunct "lower term <= upper term + t d(x,y)" is linear
/// and nonincreasing in t, so the least feasible t is the largest
/// crossing point, floored by 0 and the fixed-pair constant c0.
/// Returns nullopt when a t-independent conjunct fails (lo(x) > hi(y)
/// with lo(x) - hi(y) > t d unreachable), i.e. the system is infeasible
/// at every level. The caller checks the result against the budget.
inline std::optional<Rational> interior_least_feasible(
    const MetricSpace& space, const BoundaryData& bd,
    const InteriorProblem& p) {
  Rational t = max(Rational(0), p.c0);
  const std::size_t nf = p.frees.size();
  for (std::size_t xi = 0; xi < nf; ++xi)
    for (std::size_t yi = 0; yi < nf; ++yi) {
      const int x = p.frees[xi];
      const int y = p.frees[yi];
      const Rational dxy = (xi == yi) ? Rational(0) : space.dist(x, y);
      // lower terms of x: constant lo(x), then f(a) - t d(x,a)
      // upper terms of y: constant hi(y), then f(b) + t d(y,b)
      auto consider = [&](const Rational& alpha, const Rational& beta) -> bool {
        // conjunct alpha - beta * t <= 0
        if (beta.sign() == 0) return alpha.sign() <= 0;
        Rational crossing = alpha / beta;
        if (crossing > t) t = std::move(crossing);
        return true;
      };
      if (p.lo[xi] && p.hi[yi]) {
        if (!consider(*p.lo[xi] - *p.hi[yi], dxy)) return std::nullopt;
      }
      for (int b : p.anchors) {
        if (p.lo[xi])
          if (!consider(*p.lo[xi] - bd.value_at(b), space.dist(y, b) + dxy))
            return std::nullopt;
        if (p.hi[yi])
          if (!consider(bd.value_at(b) - *p.hi[yi], space.dist(x, b) + dxy))
            return std::nullopt;
      }
      for (int a : p.anchors)
        for (int b : p.anchors) {
          if (!consider(bd.value_at(a) - bd.value_at(b),
                        space.dist(x, a) + space.dist(y, b) + dxy))
            return std::nullopt;
        }
    }
  return t;
}

/// Level-t interval of one free point: constant bounds joined with the
/// anchor cones.
inline std::pair<Rational, Rational> level_interval(
    const MetricSpace& space, const BoundaryData& bd,
    const InteriorProblem& p, std::size_t k, const Rational& t) {
  std::optional<Rational> lo = p.lo[k];
  std::optional<Rational> hi = p.hi[k];
  for (int a : p.anchors) {
    Rational down = bd.value_at(a) - t * space.dist(p.frees[k], a);
    Rational up = bd.value_at(a) + t * space.dist(p.frees[k], a);
    if (!lo || down > *lo) lo = std::move(down);
    if (!hi || up < *hi) hi = std::move(up);
  }
  assert(lo && hi);  // A is nonempty, so a bounding term always exists
  return {*lo, *hi};
}

/// Sequential midpoint assignment at level t. Processes free points in
/// ascending order; each gets the midpoint of its interval after a
/// single propagation pass (single-hop suffices: the triangle inequality
/// makes multi-hop bounds weaker). Assigned values stay jointly feasible
/// because the propagated interval is the exact projection of the
/// remaining solution polytope.
inline void assign_midpoints(const MetricSpace& space, const BoundaryData& bd,
                             const InteriorProblem& p, const Rational& t,
                             ExtensionValues& values) {
  const std::size_t nf = p.frees.size();
  std::vector<Rational> lo(nf), hi(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    auto iv = level_interval(space, bd, p, k, t);
    lo[k] = std::move(iv.first);
    hi[k] = std::move(iv.second);
  }
  std::vector<bool> done(nf, false);
  for (std::size_t step = 0; step < nf; ++step) {
    const std::size_t k = step;  // frees are ascending; canonical order
    Rational lbar = lo[k];
    Rational ubar = hi[k];
    for (std::size_t j = 0; j < nf; ++j) {
      if (done[j] || j == k) continue;
      const Rational d = t * space.dist(p.frees[k], p.frees[j]);
      Rational down = lo[j] - d;
      Rational up = hi[j] + d;
      if (down > lbar) lbar = std::move(down);
      if (up < ubar) ubar = std::move(up);
    }
    assert(lbar <= ubar);
    Rational v = (lbar + ubar) / Rational(2);
    values[p.frees[k]] = v;
    done[k] = true;
    for (std::size_t j = 0; j < nf; ++j) {
      if (done[j]) continue;
      const Rational d = t * space.dist(p.frees[k], p.frees[j]);
      Rational down = v - d;
      Rational up = v + d;
      if (down > lo[j]) lo[j] = std::move(down);
      if (up < hi[j]) hi[j] = std::move(up);
    }
  }
}

}  // namespace detail

/// Minimum interior Lipschitz constant: over all minimal extensions g of
/// f that agree with `offFull` outside U, the least possible Lip(g, U),
/// plus a witness attaining it. `offFull` must be a restriction of some
/// minimal extension (entries on U are ignored); anything else raises
/// InfeasibleOffValues.
inline InteriorLipResult min_interior_lip(const MetricSpace& space,
                                          const BoundaryData& bd,
                                          const Subset& U,
                                          const ExtensionValues& offFull) {
  if (static_cast<int>(offFull.size()) != space.size())
    throw Error(Errc::InvalidArgument, "off-values not total on the space");
  for (int i : U.members)
    if (i < 0 || i >= space.size())
      throw Error(Errc::InvalidArgument, "subset index out of range", {i});

  // The fixed assignment: off-values outside U, boundary data on U ∩ A.
  ExtensionValues fixedValues = offFull;
  std::vector<int> fixedPts;
  for (int z = 0; z < space.size(); ++z) {
    if (bd.on_domain(z)) {
      if (!U.contains(z) && offFull[z] != bd.value_at(z))
        throw Error(Errc::InfeasibleOffValues,
                    "off-values disagree with boundary data at " +
                        space.label(z),
                    {z});
      fixedValues[z] = bd.value_at(z);
      fixedPts.push_back(z);
    } else if (!U.contains(z)) {
      fixedPts.push_back(z);
    }
  }
  if (lipschitz_constant(space, fixedValues, Subset(fixedPts)) > bd.budget)
    throw Error(Errc::InfeasibleOffValues,
                "off-values exceed the Lipschitz budget on the fixed set");

  auto p = detail::build_interior_problem(space, bd, U, fixedValues, fixedValues);
  auto tstar = detail::interior_least_feasible(space, bd, p);
  if (!tstar || *tstar > bd.budget)
    throw Error(Errc::InfeasibleOffValues,
                "no completion within the Lipschitz budget exists");

  ExtensionValues witness = fixedValues;
  detail::assign_midpoints(space, bd, p, *tstar, witness);
  assert(lipschitz_constant(space, witness, U) == *tstar);
  return InteriorLipResult{std::move(*tstar), std::move(witness)};
}

/// Map-based entry point: values must be given on exactly X \ U.
inline InteriorLipResult min_interior_lip(const MetricSpace& space,
                                          const BoundaryData& bd,
                                          const Subset& U,
                                          const std::map<int, Rational>& off) {
  ExtensionValues full(space.size(), Rational(0));
  for (int z = 0; z < space.size(); ++z) {
    if (U.contains(z)) continue;
    auto it = off.find(z);
    if (it == off.end())
      throw Error(Errc::MissingValue, "missing off-value at " + space.label(z),
                  {z});
    full[z] = it->second;
  }
  return min_interior_lip(space, bd, U, full);
}

}  // namespace lipext
