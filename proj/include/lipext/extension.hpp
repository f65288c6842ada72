#pragma once

#include <utility>
#include <vector>

#include "lipext/metric.hpp"

namespace lipext {

/// A total assignment of exact values on X. Agreement with boundary data
/// is checked by the operations that need it, never assumed.
using ExtensionValues = std::vector<Rational>;

/// Pointwise smallest minimal extension:
/// m(x) = max over a in A of f(a) - L * d(a, x). Equals f on A.
inline ExtensionValues mcshane_lower(const MetricSpace& space,
                                     const BoundaryData& bd) {
  ExtensionValues out(space.size(), Rational(0));
  for (int x = 0; x < space.size(); ++x) {
    bool first = true;
    for (std::size_t k = 0; k < bd.domain.members.size(); ++k) {
      const int a = bd.domain.members[k];
      Rational cand = bd.values[k] - bd.budget * space.dist(a, x);
      if (first || cand > out[x]) out[x] = std::move(cand);
      first = false;
    }
  }
  return out;
}

/// Pointwise largest minimal extension:
/// M(x) = min over a in A of f(a) + L * d(a, x). Equals f on A.
inline ExtensionValues whitney_upper(const MetricSpace& space,
                                     const BoundaryData& bd) {
  ExtensionValues out(space.size(), Rational(0));
  for (int x = 0; x < space.size(); ++x) {
    bool first = true;
    for (std::size_t k = 0; k < bd.domain.members.size(); ++k) {
      const int a = bd.domain.members[k];
      Rational cand = bd.values[k] + bd.budget * space.dist(a, x);
      if (first || cand < out[x]) out[x] = std::move(cand);
      first = false;
    }
  }
  return out;
}

struct EnvelopePair {
  ExtensionValues lower;  // m
  ExtensionValues upper;  // M
};

inline EnvelopePair envelopes(const MetricSpace& space, const BoundaryData& bd) {
  return EnvelopePair{mcshane_lower(space, bd), whitney_upper(space, bd)};
}

/// f_lambda = lambda * m + (1 - lambda) * M, lambda in [0, 1].
inline ExtensionValues lambda_extension(const MetricSpace& space,
                                        const BoundaryData& bd,
                                        const Rational& lambda) {
  if (lambda < Rational(0) || lambda > Rational(1))
    throw Error(Errc::LambdaOutOfRange, "lambda " + lambda.str() + " not in [0,1]");
  EnvelopePair env = envelopes(space, bd);
  ExtensionValues out(space.size(), Rational(0));
  const Rational complement = Rational(1) - lambda;
  for (int x = 0; x < space.size(); ++x)
    out[x] = lambda * env.lower[x] + complement * env.upper[x];
  return out;
}

/// Verdict of the minimal-extension check. On failure the witness is
/// either the first domain point where h disagrees with f, or the
/// lexicographically smallest pair maximizing the Lipschitz ratio.
struct MinimalityVerdict {
  enum class Status { Ok, DisagreesOnDomain, LipschitzExceeded };
  Status status = Status::Ok;
  int point = -1;     // set for DisagreesOnDomain
  int pair_a = -1;    // set for LipschitzExceeded
  int pair_b = -1;
  Rational ratio;     // offending ratio (LipschitzExceeded)

  bool ok() const { return status == Status::Ok; }
};

/// h is a minimal Lipschitz extension iff h = f on A and
/// Lip(h, X) = Lip(f, A) exactly.
inline MinimalityVerdict is_minimal_extension(const MetricSpace& space,
                                              const BoundaryData& bd,
                                              const ExtensionValues& h) {
  if (static_cast<int>(h.size()) != space.size())
    throw Error(Errc::InvalidArgument, "extension not total on the space");
  MinimalityVerdict verdict;
  for (std::size_t k = 0; k < bd.domain.members.size(); ++k) {
    const int a = bd.domain.members[k];
    if (h[a] != bd.values[k]) {
      verdict.status = MinimalityVerdict::Status::DisagreesOnDomain;
      verdict.point = a;
      return verdict;
    }
  }
  Rational worst(0);
  int wa = -1, wb = -1;
  for (int i = 0; i < space.size(); ++i)
    for (int j = i + 1; j < space.size(); ++j) {
      Rational ratio = abs(h[i] - h[j]) / space.dist(i, j);
      if (wa < 0 || ratio > worst) {
        worst = std::move(ratio);
        wa = i;
        wb = j;
      }
    }
  if (worst > bd.budget) {
    verdict.status = MinimalityVerdict::Status::LipschitzExceeded;
    verdict.pair_a = wa;
    verdict.pair_b = wb;
    verdict.ratio = std::move(worst);
  }
  return verdict;
}

}  // namespace lipext
