#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipext/errors.hpp"
#include "lipext/rational.hpp"

namespace lipext {

/// Sorted, duplicate-free set of point indices into a MetricSpace.
struct Subset {
  std::vector<int> members;

  Subset() = default;
  explicit Subset(std::vector<int> idx) : members(std::move(idx)) {
    std::sort(members.begin(), members.end());
    for (std::size_t i = 1; i < members.size(); ++i)
      if (members[i] == members[i - 1])
        throw Error(Errc::InvalidArgument, "duplicate index in subset",
                    {members[i]});
  }

  int size() const { return static_cast<int>(members.size()); }
  bool empty() const { return members.empty(); }
  bool contains(int i) const {
    return std::binary_search(members.begin(), members.end(), i);
  }

  friend bool operator==(const Subset& a, const Subset& b) {
    return a.members == b.members;
  }
};

/// Canonical subset order: by size, then lexicographic on sorted members.
inline bool canonical_less(const Subset& a, const Subset& b) {
  if (a.members.size() != b.members.size())
    return a.members.size() < b.members.size();
  return a.members < b.members;
}

/// Finite metric space: point labels plus an exact n x n distance matrix.
/// Instances are only created through validate_metric / metric_repair, so
/// the metric axioms hold by construction.
class MetricSpace {
public:
  int size() const { return n_; }
  const std::string& label(int i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Rational& dist(int i, int j) const { return dist_[i * n_ + j]; }

  std::optional<int> label_index(std::string_view name) const {
    for (int i = 0; i < n_; ++i)
      if (labels_[i] == name) return i;
    return std::nullopt;
  }

  Subset all_points() const {
    std::vector<int> idx(n_);
    for (int i = 0; i < n_; ++i) idx[i] = i;
    return Subset(idx);
  }

  Subset complement(const Subset& s) const {
    std::vector<int> idx;
    for (int i = 0; i < n_; ++i)
      if (!s.contains(i)) idx.push_back(i);
    return Subset(idx);
  }

private:
  MetricSpace(std::vector<std::string> labels, std::vector<Rational> dist)
      : labels_(std::move(labels)),
        n_(static_cast<int>(labels_.size())),
        dist_(std::move(dist)) {}

  friend MetricSpace validate_metric(const std::vector<std::string>&,
                                     const std::vector<std::vector<Rational>>&);
  friend MetricSpace metric_repair(const std::vector<std::string>&,
                                   const std::vector<std::vector<Rational>>&);

  std::vector<std::string> labels_;
  int n_;
  std::vector<Rational> dist_;
};

namespace detail {

inline std::vector<Rational> flatten_checked(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<Rational>>& matrix) {
  const int n = static_cast<int>(labels.size());
  if (n == 0) throw Error(Errc::InvalidArgument, "empty metric space");
  if (static_cast<int>(matrix.size()) != n)
    throw Error(Errc::InvalidArgument, "matrix row count does not match labels");
  for (const auto& row : matrix)
    if (static_cast<int>(row.size()) != n)
      throw Error(Errc::InvalidArgument, "matrix is not square");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (labels[i] == labels[j])
        throw Error(Errc::DomainError, "duplicate label '" + labels[i] + "'",
                    {i, j});

  for (int i = 0; i < n; ++i)
    if (matrix[i][i] != Rational(0))
      throw Error(Errc::NonzeroDiagonal,
                  "nonzero diagonal at " + labels[i], {i});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (matrix[i][j] != matrix[j][i])
        throw Error(Errc::NonSymmetric,
                    "asymmetric entry (" + labels[i] + "," + labels[j] + ")",
                    {i, j});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (matrix[i][j].sign() <= 0)
        throw Error(Errc::NonpositiveOffDiagonal,
                    "nonpositive distance (" + labels[i] + "," + labels[j] + ")",
                    {i, j});

  std::vector<Rational> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : matrix)
    for (const auto& v : row) flat.push_back(v);
  return flat;
}

}  // namespace detail

/// Checks all metric axioms and returns the space. The triangle check
/// reports the first violating triple (i, j, k) with
/// d(i,k) > d(i,j) + d(j,k), scanning i < k in row order.
inline MetricSpace validate_metric(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<Rational>>& matrix) {
  auto flat = detail::flatten_checked(labels, matrix);
  const int n = static_cast<int>(labels.size());
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        if (matrix[i][k] > matrix[i][j] + matrix[j][k])
          throw Error(Errc::TriangleViolation,
                      "triangle violation: d(" + labels[i] + "," + labels[k] +
                          ") > d(" + labels[i] + "," + labels[j] + ") + d(" +
                          labels[j] + "," + labels[k] + ")",
                      {i, j, k});
      }
  return MetricSpace(labels, std::move(flat));
}

/// Shortest-path closure: the entrywise-largest metric below the input.
/// Input must be symmetric with zero diagonal and positive off-diagonal
/// entries. Idempotent.
inline MetricSpace metric_repair(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<Rational>>& matrix) {
  auto flat = detail::flatten_checked(labels, matrix);
  const int n = static_cast<int>(labels.size());
  auto at = [&](int i, int j) -> Rational& { return flat[i * n + j]; };
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational via = at(i, k) + at(k, j);
        if (via < at(i, j)) at(i, j) = via;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && at(i, j).sign() <= 0)
        throw Error(Errc::DegenerateDistance,
                    "closure drove d(" + labels[i] + "," + labels[j] +
                        ") to zero",
                    {i, j});
  return MetricSpace(labels, std::move(flat));
}

/// Lip(values, subset) = max over pairs {x,y} in subset of
/// |values(x) - values(y)| / d(x,y); 0 when the subset has fewer than
/// two points. `values` must be total on the space.
inline Rational lipschitz_constant(const MetricSpace& space,
                                   const std::vector<Rational>& values,
                                   const Subset& subset) {
  if (static_cast<int>(values.size()) != space.size())
    throw Error(Errc::InvalidArgument, "values not total on the space");
  Rational best(0);
  const auto& m = subset.members;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      Rational ratio =
          abs(values[m[a]] - values[m[b]]) / space.dist(m[a], m[b]);
      if (ratio > best) best = ratio;
    }
  return best;
}

/// Partial-values overload; throws MissingValue for subset points without
/// a value.
inline Rational lipschitz_constant(const MetricSpace& space,
                                   const std::map<int, Rational>& values,
                                   const Subset& subset) {
  std::vector<Rational> full(space.size(), Rational(0));
  for (int i : subset.members) {
    auto it = values.find(i);
    if (it == values.end())
      throw Error(Errc::MissingValue, "missing value at " + space.label(i),
                  {i});
    full[i] = it->second;
  }
  return lipschitz_constant(space, full, subset);
}

/// Prescribed set A, the data f on it, and the recomputed Lipschitz
/// budget L = Lip(f, A). The budget is never taken from input.
struct BoundaryData {
  Subset domain;                 // A, nonempty
  std::vector<Rational> values;  // aligned with domain.members
  Rational budget;               // Lip(values, domain); 0 when |A| < 2

  bool on_domain(int i) const { return domain.contains(i); }

  const Rational& value_at(int i) const {
    auto it = std::lower_bound(domain.members.begin(), domain.members.end(), i);
    if (it == domain.members.end() || *it != i)
      throw Error(Errc::MissingValue, "point not in domain", {i});
    return values[static_cast<std::size_t>(it - domain.members.begin())];
  }
};

inline BoundaryData make_boundary_data(const MetricSpace& space,
                                       Subset domain,
                                       std::vector<Rational> values) {
  if (domain.empty())
    throw Error(Errc::InvalidArgument, "domain must be nonempty");
  if (domain.members.back() >= space.size() || domain.members.front() < 0)
    throw Error(Errc::DomainError, "domain index out of range");
  if (values.size() != domain.members.size())
    throw Error(Errc::MissingValue, "one value required per domain point");
  std::map<int, Rational> byPoint;
  for (std::size_t i = 0; i < values.size(); ++i)
    byPoint.emplace(domain.members[i], values[i]);
  Rational budget = lipschitz_constant(space, byPoint, domain);
  return BoundaryData{std::move(domain), std::move(values), std::move(budget)};
}

}  // namespace lipext
