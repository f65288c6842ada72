#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "lipext/metric.hpp"

namespace lipext {

/// The family of test sets U for the absolute-minimality condition.
/// AllSubsets enumerates every subset of X; ComplementSubsets every subset
/// of X \ A; Explicit uses the listed members. Sets with fewer than two
/// points are dropped everywhere: the Lipschitz constant over them is 0,
/// so the condition is vacuous.
struct SubsetFamily {
  enum class Kind { AllSubsets, ComplementSubsets, Explicit };

  Kind kind = Kind::ComplementSubsets;
  std::vector<Subset> members;  // Explicit only

  static SubsetFamily all_subsets() { return SubsetFamily{Kind::AllSubsets, {}}; }
  static SubsetFamily complement_subsets() {
    return SubsetFamily{Kind::ComplementSubsets, {}};
  }
  static SubsetFamily explicit_family(std::vector<Subset> members) {
    return SubsetFamily{Kind::Explicit, std::move(members)};
  }
};

namespace detail {

inline void enumerate_size_k(const std::vector<int>& ground, int k,
                             std::vector<Subset>& out) {
  const int g = static_cast<int>(ground.size());
  if (k > g) return;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    std::vector<int> members(k);
    for (int i = 0; i < k; ++i) members[i] = ground[pick[i]];
    out.push_back(Subset(std::move(members)));
    int i = k - 1;
    while (i >= 0 && pick[i] == g - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace detail

/// All family members with |U| >= 2, in canonical order (size, then
/// lexicographic). Since `ground` is ascending, per-size lexicographic
/// combination order is canonical directly.
inline std::vector<Subset> enumerate_family(const MetricSpace& space,
                                            const BoundaryData& bd,
                                            const SubsetFamily& family) {
  std::vector<Subset> out;
  switch (family.kind) {
    case SubsetFamily::Kind::AllSubsets:
    case SubsetFamily::Kind::ComplementSubsets: {
      std::vector<int> ground;
      if (family.kind == SubsetFamily::Kind::AllSubsets) {
        ground = space.all_points().members;
        if (space.size() > 24)
          throw Error(Errc::InvalidArgument,
                      "refusing to enumerate 2^n subsets for n > 24");
      } else {
        ground = space.complement(bd.domain).members;
      }
      for (int k = 2; k <= static_cast<int>(ground.size()); ++k)
        detail::enumerate_size_k(ground, k, out);
      break;
    }
    case SubsetFamily::Kind::Explicit: {
      for (const Subset& u : family.members) {
        for (int i : u.members)
          if (i < 0 || i >= space.size())
            throw Error(Errc::ExplicitMemberOutOfRange,
                        "explicit family member index out of range", {i});
        if (u.size() >= 2) out.push_back(u);
      }
      std::sort(out.begin(), out.end(), canonical_less);
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
    }
  }
  return out;
}

}  // namespace lipext
