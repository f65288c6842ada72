#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "lipext/extension.hpp"
#include "lipext/metric.hpp"

namespace lipext {

/// Unweighted graph with prescribed values on a nonempty boundary set.
/// Every interior vertex must have at least one neighbor.
struct GraphInstance {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;  // normalized i < j, sorted, unique
  Subset boundary;
  std::vector<Rational> data;  // aligned with boundary.members
};

inline GraphInstance make_graph_instance(int vertexCount,
                                         std::vector<std::pair<int, int>> edges,
                                         Subset boundary,
                                         std::vector<Rational> data) {
  if (vertexCount <= 0)
    throw Error(Errc::InvalidArgument, "graph needs at least one vertex");
  if (boundary.empty())
    throw Error(Errc::DomainError, "boundary must be nonempty");
  if (boundary.members.front() < 0 || boundary.members.back() >= vertexCount)
    throw Error(Errc::DomainError, "boundary index out of range");
  if (data.size() != boundary.members.size())
    throw Error(Errc::MissingValue, "one value required per boundary vertex");
  for (auto& e : edges) {
    if (e.first == e.second)
      throw Error(Errc::DomainError, "self-loop edge", {e.first});
    if (e.first < 0 || e.second < 0 || e.first >= vertexCount ||
        e.second >= vertexCount)
      throw Error(Errc::DomainError, "edge endpoint out of range",
                  {e.first, e.second});
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<int> degree(vertexCount, 0);
  for (const auto& e : edges) {
    ++degree[e.first];
    ++degree[e.second];
  }
  for (int v = 0; v < vertexCount; ++v)
    if (!boundary.contains(v) && degree[v] == 0)
      throw Error(Errc::DomainError,
                  "interior vertex without neighbors", {v});
  return GraphInstance{vertexCount, std::move(edges), std::move(boundary),
                       std::move(data)};
}

struct LaplaceSolution {
  std::vector<Rational> values;
  Rational residual;  // exact sup-norm residual of the final iterate
  bool converged = false;
  int iterations = 0;
};

/// Sweep iteration for u(x) = (max_{y~x} u(y) + min_{y~x} u(y)) / 2 at
/// interior vertices, with in-place updates in ascending vertex order.
/// Interior starts at the midpoint of the boundary data. Stops when the
/// exact residual drops to tol, or reports non-convergence with the last
/// iterate after maxIter sweeps.
inline LaplaceSolution solve_infinity_laplace(const GraphInstance& g,
                                              const Rational& tol,
                                              int maxIter) {
  if (tol.sign() <= 0)
    throw Error(Errc::InvalidArgument, "tolerance must be positive");
  std::vector<std::vector<int>> adj(g.vertex_count);
  for (const auto& e : g.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }

  LaplaceSolution out;
  out.values.assign(g.vertex_count, Rational(0));
  Rational dataMin = g.data.front();
  Rational dataMax = g.data.front();
  for (const Rational& v : g.data) {
    if (v < dataMin) dataMin = v;
    if (v > dataMax) dataMax = v;
  }
  const Rational start = (dataMin + dataMax) / Rational(2);
  std::vector<int> interior;
  for (int v = 0; v < g.vertex_count; ++v) {
    if (g.boundary.contains(v))
      out.values[v] = g.data[std::lower_bound(g.boundary.members.begin(),
                                              g.boundary.members.end(), v) -
                             g.boundary.members.begin()];
    else {
      out.values[v] = start;
      interior.push_back(v);
    }
  }
  out.residual = Rational(0);
  if (interior.empty()) {
    out.converged = true;
    return out;
  }

  auto local_update = [&](int v) {
    Rational lo = out.values[adj[v].front()];
    Rational hi = lo;
    for (int y : adj[v]) {
      if (out.values[y] < lo) lo = out.values[y];
      if (out.values[y] > hi) hi = out.values[y];
    }
    return (lo + hi) / Rational(2);
  };

  for (int iter = 1; iter <= maxIter; ++iter) {
    for (int v : interior) out.values[v] = local_update(v);
    Rational residual(0);
    for (int v : interior) {
      Rational r = abs(out.values[v] - local_update(v));
      if (r > residual) residual = std::move(r);
    }
    out.residual = std::move(residual);
    out.iterations = iter;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
  }
  return out;  // NotConverged: last iterate and exact residual reported
}

/// Closed form on the complete graph: boundary vertices keep their data,
/// every interior vertex gets (max data + min data) / 2.
inline std::vector<Rational> complete_graph_solution(
    int vertexCount, const Subset& boundary, const std::vector<Rational>& data) {
  if (boundary.empty())
    throw Error(Errc::DomainError, "boundary must be nonempty");
  if (data.size() != boundary.members.size())
    throw Error(Errc::MissingValue, "one value required per boundary vertex");
  Rational lo = data.front();
  Rational hi = lo;
  for (const Rational& v : data) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const Rational mid = (lo + hi) / Rational(2);
  std::vector<Rational> out(vertexCount, mid);
  for (std::size_t k = 0; k < data.size(); ++k)
    out[boundary.members[k]] = data[k];
  return out;
}

struct LaplaceComparison {
  std::vector<Rational> u_values;  // complete-graph solution on the space
  Rational lip_u;                  // Lip(u, X) under the metric
  Rational lip_f;                  // Lip(f, A) = budget
  bool is_minimal = false;
  MinimalityVerdict verdict;
};

/// Solves the equation on the complete graph induced by the metric space
/// and compares the solution's Lipschitz constant with the budget.
inline LaplaceComparison laplace_vs_minimal_report(const MetricSpace& space,
                                                   const BoundaryData& bd) {
  LaplaceComparison out;
  out.u_values = complete_graph_solution(space.size(), bd.domain, bd.values);
  out.lip_u = lipschitz_constant(space, out.u_values, space.all_points());
  out.lip_f = bd.budget;
  out.verdict = is_minimal_extension(space, bd, out.u_values);
  out.is_minimal = out.verdict.ok();
  return out;
}

}  // namespace lipext
