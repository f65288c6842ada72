#pragma once

#include <cassert>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipext/extension.hpp"
#include "lipext/family.hpp"
#include "lipext/interior.hpp"
#include "lipext/metric.hpp"

namespace lipext {

struct AmleRecord {
  Subset test_set;
  Rational lip_on_u;  // Lip(witness, U)
  Rational t_star;    // optimum of the inner minimization; equal when ok
};

/// Machine-checkable evidence that a given extension is an AMLE: one
/// record per family member with Lip(h, U) = t*(U).
struct AmleCertificate {
  ExtensionValues witness;
  std::vector<AmleRecord> records;
};

struct AmleVerdict {
  enum class Status { Ok, NotMinimal, Violation };
  Status status = Status::Ok;
  std::optional<AmleCertificate> certificate;  // Ok
  MinimalityVerdict minimality;                // NotMinimal
  Subset violating;                            // Violation: first U in canonical order
  Rational lip_on_u;
  Rational t_star;

  bool ok() const { return status == Status::Ok; }
};

/// Definition check: h must be a minimal extension, and on every family
/// member U its Lipschitz constant must equal the inner minimum. h always
/// competes in its own minimization, so t* <= Lip(h, U); equality is
/// tested exactly.
inline AmleVerdict is_amle(const MetricSpace& space, const BoundaryData& bd,
                           const ExtensionValues& h,
                           const SubsetFamily& family) {
  AmleVerdict verdict;
  verdict.minimality = is_minimal_extension(space, bd, h);
  if (!verdict.minimality.ok()) {
    verdict.status = AmleVerdict::Status::NotMinimal;
    return verdict;
  }
  AmleCertificate cert;
  cert.witness = h;
  for (const Subset& u : enumerate_family(space, bd, family)) {
    Rational lipOnU = lipschitz_constant(space, h, u);
    InteriorLipResult inner = min_interior_lip(space, bd, u, h);
    assert(inner.optimum <= lipOnU);
    if (lipOnU != inner.optimum) {
      verdict.status = AmleVerdict::Status::Violation;
      verdict.violating = u;
      verdict.lip_on_u = std::move(lipOnU);
      verdict.t_star = std::move(inner.optimum);
      return verdict;
    }
    cert.records.push_back(AmleRecord{u, std::move(lipOnU), std::move(inner.optimum)});
  }
  verdict.certificate = std::move(cert);
  return verdict;
}

struct SearchOutcome {
  bool found = false;
  std::optional<AmleCertificate> certificate;  // found
  ExtensionValues last_iterate;                // always set
  Rational best_gap;                           // notFound: max Lip(h,U) - t*
  int sweeps_used = 0;
};

/// Gauss–Seidel relaxation over the family: start from (m + M) / 2 and
/// replace h on U by the inner-minimization witness whenever that
/// strictly lowers Lip(h, U). A sweep with no change is a fixed point,
/// at which the definition check must pass.
inline SearchOutcome amle_search(const MetricSpace& space,
                                 const BoundaryData& bd,
                                 const SubsetFamily& family, int maxSweeps) {
  const std::vector<Subset> sets = enumerate_family(space, bd, family);
  EnvelopePair env = envelopes(space, bd);
  ExtensionValues h(space.size(), Rational(0));
  for (int x = 0; x < space.size(); ++x)
    h[x] = (env.lower[x] + env.upper[x]) / Rational(2);

  SearchOutcome out;
  for (int sweep = 0; sweep < maxSweeps; ++sweep) {
    bool changed = false;
    for (const Subset& u : sets) {
      Rational lipOnU = lipschitz_constant(space, h, u);
      InteriorLipResult inner = min_interior_lip(space, bd, u, h);
      if (inner.optimum < lipOnU) {
        h = std::move(inner.witness);
        changed = true;
      }
    }
    out.sweeps_used = sweep + 1;
    if (!changed) {
      AmleVerdict verdict = is_amle(space, bd, h, family);
      assert(verdict.ok());
      out.found = verdict.ok();
      out.certificate = std::move(verdict.certificate);
      out.last_iterate = std::move(h);
      return out;
    }
  }
  // Sweep budget exhausted: report the worst residual gap over the family.
  out.best_gap = Rational(0);
  for (const Subset& u : sets) {
    Rational gap = lipschitz_constant(space, h, u) -
                   min_interior_lip(space, bd, u, h).optimum;
    if (gap > out.best_gap) out.best_gap = std::move(gap);
  }
  out.last_iterate = std::move(h);
  return out;
}

// ---------------------------------------------------------------------------
// Branch-and-prune non-existence certification
// ---------------------------------------------------------------------------

struct Interval {
  Rational lo, hi;

  Rational width() const { return hi - lo; }
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

/// Axis-aligned box over the free points X \ A (one interval per free
/// point, in ascending point order).
struct Box {
  std::vector<Interval> coords;
};

struct PrunedBox {
  enum class Reason { EmptyPolytope, Violation };
  Box box;
  Reason reason = Reason::EmptyPolytope;
  Subset violated;        // Violation only
  Rational lip_lower;     // lower bound for Lip(h, U) over the box
  Rational tstar_upper;   // upper bound for t*(U) over the box; lip_lower > tstar_upper
};

/// A pruned cover of the envelope box. Every minimal extension lives in
/// the envelope box, and each cover element excludes AMLEs either because
/// it contains no minimal extension at all or because one family member
/// is violated across it; a complete cover therefore certifies that no
/// AMLE exists.
struct NonexistenceCertificate {
  std::vector<int> free_points;  // X \ A, ascending
  std::vector<PrunedBox> cover;
};

struct CertifyOutcome {
  std::optional<NonexistenceCertificate> certificate;
  std::vector<Box> survivors;     // nonempty iff inconclusive
  bool budget_exhausted = false;  // maxBoxes hit
  long boxes_processed = 0;
};

namespace detail {

/// Interval propagation across all points at budget L. A points carry
/// degenerate intervals. One pass from the original bounds reaches the
/// fixpoint (multi-hop updates are dominated via the triangle
/// inequality); the result is the exact projection of the set of minimal
/// extensions inside the box, so emptiness here is both sound and
/// complete.
inline bool box_contains_no_minimal_extension(const MetricSpace& space,
                                              const BoundaryData& bd,
                                              const std::vector<int>& freePts,
                                              const Box& box) {
  const int n = space.size();
  std::vector<Rational> lb(n), ub(n);
  for (int z = 0; z < n; ++z) {
    if (bd.on_domain(z)) {
      lb[z] = bd.value_at(z);
      ub[z] = lb[z];
    }
  }
  for (std::size_t k = 0; k < freePts.size(); ++k) {
    lb[freePts[k]] = box.coords[k].lo;
    ub[freePts[k]] = box.coords[k].hi;
  }
  std::vector<Rational> lb2 = lb, ub2 = ub;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      Rational slack = bd.budget * space.dist(x, y);
      Rational down = lb[y] - slack;
      Rational up = ub[y] + slack;
      if (down > lb2[x]) lb2[x] = std::move(down);
      if (up < ub2[x]) ub2[x] = std::move(up);
    }
  for (int x = 0; x < n; ++x)
    if (lb2[x] > ub2[x]) return true;
  return false;
}

/// max over pairs x != y in U of intervalGap(box(x), box(y)) / d(x, y):
/// a valid lower bound for Lip(h, U) over every h in the box.
inline Rational lip_lower_bound(const MetricSpace& space,
                                const BoundaryData& bd,
                                const std::vector<int>& freePts,
                                const Box& box, const Subset& u) {
  auto intervalOf = [&](int p) -> Interval {
    if (bd.on_domain(p)) {
      Rational v = bd.value_at(p);
      return Interval{v, v};
    }
    auto it = std::lower_bound(freePts.begin(), freePts.end(), p);
    return box.coords[static_cast<std::size_t>(it - freePts.begin())];
  };
  Rational best(0);
  for (std::size_t a = 0; a < u.members.size(); ++a)
    for (std::size_t b = a + 1; b < u.members.size(); ++b) {
      Interval I = intervalOf(u.members[a]);
      Interval J = intervalOf(u.members[b]);
      Rational gap = max(Rational(0), max(I.lo - J.hi, J.lo - I.hi));
      if (gap.sign() > 0) {
        Rational r = gap / space.dist(u.members[a], u.members[b]);
        if (r > best) best = std::move(r);
      }
    }
  return best;
}

/// Upper bound for t*(U, v) valid for every minimal extension v in the
/// box: lo terms are evaluated at coordinate upper endpoints and hi terms
/// at lower endpoints (each term is monotone in the off-value), and the
/// result is capped by the budget, which bounds t* for any genuine
/// competitor.
inline Rational tstar_upper_bound(const MetricSpace& space,
                                  const BoundaryData& bd,
                                  const std::vector<int>& freePts,
                                  const Box& box, const Subset& u) {
  const int n = space.size();
  std::vector<Rational> lowerEnd(n), upperEnd(n);
  for (int z = 0; z < n; ++z)
    if (bd.on_domain(z)) {
      lowerEnd[z] = bd.value_at(z);
      upperEnd[z] = lowerEnd[z];
    }
  for (std::size_t k = 0; k < freePts.size(); ++k) {
    lowerEnd[freePts[k]] = box.coords[k].lo;
    upperEnd[freePts[k]] = box.coords[k].hi;
  }
  auto p = build_interior_problem(space, bd, u, lowerEnd, upperEnd);
  auto t = interior_least_feasible(space, bd, p);
  if (!t || *t > bd.budget) return bd.budget;
  return std::move(*t);
}

}  // namespace detail

/// Exhaustive bisection of the envelope box with exact pruning. Returns a
/// certificate when the pruned boxes cover the whole box, otherwise the
/// surviving boxes (width below minWidth, or box budget exhausted).
/// Processing is FIFO and bisection picks the widest coordinate (lowest
/// index on ties), so the emitted cover is deterministic.
inline CertifyOutcome certify_nonexistence(const MetricSpace& space,
                                           const BoundaryData& bd,
                                           const SubsetFamily& family,
                                           const Rational& minWidth,
                                           long maxBoxes) {
  const std::vector<Subset> sets = enumerate_family(space, bd, family);
  const std::vector<int> freePts = space.complement(bd.domain).members;
  EnvelopePair env = envelopes(space, bd);

  Box initial;
  for (int p : freePts)
    initial.coords.push_back(Interval{env.lower[p], env.upper[p]});

  CertifyOutcome out;
  NonexistenceCertificate cert;
  cert.free_points = freePts;

  std::deque<Box> queue;
  queue.push_back(std::move(initial));
  while (!queue.empty()) {
    if (out.boxes_processed >= maxBoxes) {
      out.budget_exhausted = true;
      break;
    }
    Box box = std::move(queue.front());
    queue.pop_front();
    ++out.boxes_processed;

    if (detail::box_contains_no_minimal_extension(space, bd, freePts, box)) {
      cert.cover.push_back(
          PrunedBox{std::move(box), PrunedBox::Reason::EmptyPolytope, {}, {}, {}});
      continue;
    }

    bool pruned = false;
    for (const Subset& u : sets) {
      Rational lipLB = detail::lip_lower_bound(space, bd, freePts, box, u);
      if (lipLB.sign() == 0) continue;
      Rational tUB = detail::tstar_upper_bound(space, bd, freePts, box, u);
      if (lipLB > tUB) {
        cert.cover.push_back(PrunedBox{std::move(box),
                                       PrunedBox::Reason::Violation, u,
                                       std::move(lipLB), std::move(tUB)});
        pruned = true;
        break;
      }
    }
    if (pruned) continue;

    // Bisect the widest coordinate; degenerate coordinates stay frozen.
    std::size_t widest = 0;
    Rational width(0);
    for (std::size_t k = 0; k < box.coords.size(); ++k) {
      Rational w = box.coords[k].width();
      if (w > width) {
        width = std::move(w);
        widest = k;
      }
    }
    if (width.sign() == 0 || width < minWidth) {
      out.survivors.push_back(std::move(box));
      continue;
    }
    Rational mid = (box.coords[widest].lo + box.coords[widest].hi) / Rational(2);
    Box left = box;
    left.coords[widest].hi = mid;
    Box right = std::move(box);
    right.coords[widest].lo = std::move(mid);
    queue.push_back(std::move(left));
    queue.push_back(std::move(right));
  }

  for (auto& b : queue) out.survivors.push_back(std::move(b));
  if (out.survivors.empty() && !out.budget_exhausted)
    out.certificate = std::move(cert);
  return out;
}

/// Default certification budgets from the spec of the decision procedure.
struct DecideBudgets {
  int max_sweeps = 1000;
  long max_boxes = 100000;
  std::optional<Rational> min_width;  // default: widest envelope width / 1024

  Rational effective_min_width(const MetricSpace& space,
                               const BoundaryData& bd) const {
    if (min_width) return *min_width;
    EnvelopePair env = envelopes(space, bd);
    Rational widest(0);
    for (int x = 0; x < space.size(); ++x) {
      Rational w = env.upper[x] - env.lower[x];
      if (w > widest) widest = std::move(w);
    }
    return widest / Rational(1024);
  }
};

struct DecisionOutcome {
  enum class Kind { Exists, NotExists, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<AmleCertificate> amle;                  // Exists
  std::optional<NonexistenceCertificate> nonexistence;  // NotExists
  // Unknown diagnostics
  long surviving_boxes = 0;
  bool box_budget_exhausted = false;
  int sweeps_used = 0;
  Rational search_gap;
};

/// Two semi-decisions under budgets: search for an AMLE; failing that,
/// try to certify that none exists; otherwise Unknown.
inline DecisionOutcome decide(const MetricSpace& space, const BoundaryData& bd,
                              const SubsetFamily& family,
                              const DecideBudgets& budgets = {}) {
  DecisionOutcome out;
  SearchOutcome search = amle_search(space, bd, family, budgets.max_sweeps);
  out.sweeps_used = search.sweeps_used;
  if (search.found) {
    out.kind = DecisionOutcome::Kind::Exists;
    out.amle = std::move(search.certificate);
    return out;
  }
  out.search_gap = std::move(search.best_gap);
  CertifyOutcome cert = certify_nonexistence(
      space, bd, family, budgets.effective_min_width(space, bd),
      budgets.max_boxes);
  if (cert.certificate) {
    out.kind = DecisionOutcome::Kind::NotExists;
    out.nonexistence = std::move(cert.certificate);
    return out;
  }
  out.kind = DecisionOutcome::Kind::Unknown;
  out.surviving_boxes = static_cast<long>(cert.survivors.size());
  out.box_budget_exhausted = cert.budget_exhausted;
  return out;
}

// ---------------------------------------------------------------------------
// Certificate re-checking (no search involved)
// ---------------------------------------------------------------------------

struct RecheckReport {
  bool valid = false;
  std::string reason;  // empty when valid
};

/// Re-validates a non-existence certificate against the instance: the
/// cover must exactly partition the envelope box over X \ A, and every
/// box's pruning reason must re-verify with exact arithmetic.
inline RecheckReport recheck_nonexistence(const MetricSpace& space,
                                          const BoundaryData& bd,
                                          const SubsetFamily& family,
                                          const NonexistenceCertificate& cert) {
  auto fail = [](std::string why) { return RecheckReport{false, std::move(why)}; };

  const std::vector<int> freePts = space.complement(bd.domain).members;
  if (cert.free_points != freePts)
    return fail("free point list does not match X \\ A");
  const std::size_t dims = freePts.size();
  if (cert.cover.empty()) return fail("empty cover");

  EnvelopePair env = envelopes(space, bd);
  std::vector<Interval> initial;
  for (int p : freePts) initial.push_back(Interval{env.lower[p], env.upper[p]});

  // Family membership of recorded violation sets.
  const std::vector<Subset> sets = enumerate_family(space, bd, family);

  Rational coveredVolume(0);
  Rational totalVolume(1);
  for (std::size_t k = 0; k < dims; ++k) {
    Rational w = initial[k].width();
    if (w.sign() > 0) totalVolume *= w;
  }

  for (const PrunedBox& pb : cert.cover) {
    if (pb.box.coords.size() != dims) return fail("box dimension mismatch");
    Rational volume(1);
    for (std::size_t k = 0; k < dims; ++k) {
      const Interval& iv = pb.box.coords[k];
      if (iv.lo > iv.hi) return fail("inverted interval in cover");
      if (iv.lo < initial[k].lo || iv.hi > initial[k].hi)
        return fail("cover box escapes the envelope box");
      if (initial[k].width().sign() == 0) {
        if (!(iv == initial[k])) return fail("frozen coordinate mismatch");
      } else {
        if (iv.width().sign() == 0) return fail("degenerate interval on a free coordinate");
        volume *= iv.width();
      }
    }
    coveredVolume += volume;

    switch (pb.reason) {
      case PrunedBox::Reason::EmptyPolytope:
        if (!detail::box_contains_no_minimal_extension(space, bd, freePts, pb.box))
          return fail("EmptyPolytope reason does not re-verify");
        break;
      case PrunedBox::Reason::Violation: {
        bool inFamily = false;
        for (const Subset& u : sets)
          if (u == pb.violated) {
            inFamily = true;
            break;
          }
        if (!inFamily) return fail("violation set is not a family member");
        Rational lipLB =
            detail::lip_lower_bound(space, bd, freePts, pb.box, pb.violated);
        Rational tUB =
            detail::tstar_upper_bound(space, bd, freePts, pb.box, pb.violated);
        if (lipLB != pb.lip_lower || tUB != pb.tstar_upper)
          return fail("recorded violation bounds do not re-compute");
        if (!(lipLB > tUB)) return fail("violation bound is not strict");
        break;
      }
    }
  }

  if (coveredVolume != totalVolume)
    return fail("cover volume does not match the envelope box");
  // Pairwise interior-disjointness: with matching total volume this
  // forces an exact partition.
  for (std::size_t i = 0; i < cert.cover.size(); ++i)
    for (std::size_t j = i + 1; j < cert.cover.size(); ++j) {
      bool overlaps = true;
      for (std::size_t k = 0; k < dims && overlaps; ++k) {
        if (initial[k].width().sign() == 0) continue;
        const Interval& a = cert.cover[i].box.coords[k];
        const Interval& b = cert.cover[j].box.coords[k];
        if (a.hi <= b.lo || b.hi <= a.lo) overlaps = false;
      }
      if (overlaps && totalVolume.sign() > 0)
        return fail("cover boxes overlap");
    }
  return RecheckReport{true, ""};
}

}  // namespace lipext
