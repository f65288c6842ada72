#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lipext/amle.hpp"
#include "lipext/extension.hpp"
#include "lipext/laplace.hpp"
#include "lipext/metric.hpp"

namespace lipext {

/// One expected quantity of a built-in instance, with a stable anchor id
/// so report output doubles as a traceability matrix.
struct ExpectedValue {
  std::string quantity;
  std::string value;
  std::string anchor;
};

struct Scenario {
  std::string name;
  MetricSpace space;
  BoundaryData bd;
  std::vector<ExpectedValue> expected;
};

namespace detail {

inline std::vector<std::vector<Rational>> parse_matrix(
    const std::vector<std::vector<const char*>>& rows) {
  std::vector<std::vector<Rational>> out;
  for (const auto& row : rows) {
    std::vector<Rational> r;
    for (const char* cell : row) r.push_back(Rational::parse(cell));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

/// Built-in instance catalog:
///   theorem_5pt     five-point space on which no AMLE relative to the
///                   complement family exists
///   remark_5pt      five-point decimal-metric space with the same failure
///   fourpoint_graph four-point graph metric with a continuum of AMLEs
///   line_4pt        the points {0, 1, 3, 4} on the real line
inline Scenario load_scenario(const std::string& name) {
  if (name == "theorem_5pt") {
    auto space = validate_metric(
        {"x1", "x2", "x3", "x4", "x5"},
        detail::parse_matrix({{"0", "2", "3", "5", "6"},
                              {"2", "0", "1", "3", "4"},
                              {"3", "1", "0", "2", "3"},
                              {"5", "3", "2", "0", "1"},
                              {"6", "4", "3", "1", "0"}}));
    auto bd = make_boundary_data(space, Subset({1, 3}),
                                 {Rational(0), Rational(1)});
    return Scenario{
        name, std::move(space), std::move(bd),
        {{"budget", "1/3", "theorem_5pt/lipschitz-budget"},
         {"m", "(-2/3, 0, 1/3, 1, 2/3)", "theorem_5pt/lower-envelope"},
         {"M", "(2/3, 0, 1/3, 1, 4/3)", "theorem_5pt/upper-envelope"},
         {"decide.complement", "not_exists", "theorem_5pt/no-amle-complement"},
         {"decide.all", "not_exists", "theorem_5pt/no-amle-all"}}};
  }
  if (name == "remark_5pt") {
    auto space = validate_metric(
        {"x1", "x2", "x3", "x4", "x5"},
        detail::parse_matrix({{"0", "2.0", "0.6", "1.1", "1.7"},
                              {"2.0", "0", "1.6", "1.1", "0.5"},
                              {"0.6", "1.6", "0", "1.6", "2.0"},
                              {"1.1", "1.1", "1.6", "0", "1.6"},
                              {"1.7", "0.5", "2.0", "1.6", "0"}}));
    auto bd = make_boundary_data(space, Subset({0, 1}),
                                 {Rational(0), Rational(2)});
    return Scenario{
        name, std::move(space), std::move(bd),
        {{"budget", "1", "remark_5pt/lipschitz-budget"},
         {"interval.x3", "[2/5, 3/5]", "remark_5pt/envelope-interval-x3"},
         {"interval.x4", "[9/10, 11/10]", "remark_5pt/envelope-interval-x4"},
         {"interval.x5", "[3/2, 17/10]", "remark_5pt/envelope-interval-x5"},
         {"decide.complement", "not_exists", "remark_5pt/no-amle-complement"}}};
  }
  if (name == "fourpoint_graph") {
    auto space = validate_metric(
        {"x1", "x2", "x3", "x4"},
        detail::parse_matrix({{"0", "1", "3", "4"},
                              {"1", "0", "2", "3"},
                              {"3", "2", "0", "1"},
                              {"4", "3", "1", "0"}}));
    auto bd = make_boundary_data(space, Subset({0, 1}),
                                 {Rational(0), Rational(1)});
    return Scenario{
        name, std::move(space), std::move(bd),
        {{"budget", "1", "fourpoint_graph/lipschitz-budget"},
         {"decide.complement", "exists", "fourpoint_graph/amle-exists"},
         {"amle.h_t", "ok for t in {-1, 0, 3/2, 3}",
          "fourpoint_graph/nonuniqueness-family"},
         {"laplace.lip_f", "1/3", "fourpoint_graph/laplace-boundary-lipschitz"},
         {"laplace.lip_u", "1/2", "fourpoint_graph/laplace-solution-lipschitz"},
         {"laplace.minimal", "false", "fourpoint_graph/laplace-not-minimal"}}};
  }
  if (name == "line_4pt") {
    auto space = validate_metric(
        {"0", "1", "3", "4"},
        detail::parse_matrix({{"0", "1", "3", "4"},
                              {"1", "0", "2", "3"},
                              {"3", "2", "0", "1"},
                              {"4", "3", "1", "0"}}));
    auto bd = make_boundary_data(space, Subset({0, 1}),
                                 {Rational(0), Rational(1)});
    return Scenario{
        name, std::move(space), std::move(bd),
        {{"budget", "1", "line_4pt/lipschitz-budget"},
         {"m", "(0, 1, -1, -2)", "line_4pt/lower-envelope"},
         {"M", "(0, 1, 3, 4)", "line_4pt/upper-envelope"},
         {"minimality.g", "fails at (3,4) with ratio 5",
          "line_4pt/between-envelopes-not-minimal"}}};
  }
  throw Error(Errc::UnknownScenario, "unknown scenario '" + name + "'");
}

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "theorem_5pt", "remark_5pt", "fourpoint_graph", "line_4pt"};
  return names;
}

struct ReportLine {
  std::string name;
  std::string anchor;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct PaperReport {
  std::vector<ReportLine> lines;
  bool all_pass = true;
};

namespace detail {

inline std::string values_tuple(const ExtensionValues& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? ", " : "") << v[i].str();
  os << ")";
  return os.str();
}

inline std::string decision_name(DecisionOutcome::Kind k) {
  switch (k) {
    case DecisionOutcome::Kind::Exists: return "exists";
    case DecisionOutcome::Kind::NotExists: return "not_exists";
    case DecisionOutcome::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace detail

/// Runs the full battery over the built-in instances and reports every
/// checked quantity as an expected/actual pair. Deterministic: two runs
/// produce identical lines.
inline PaperReport paper_report() {
  PaperReport report;
  auto add = [&](std::string name, std::string anchor, std::string expected,
                 std::string actual) {
    bool pass = expected == actual;
    report.all_pass = report.all_pass && pass;
    report.lines.push_back(ReportLine{std::move(name), std::move(anchor),
                                      std::move(expected), std::move(actual),
                                      pass});
  };

  {
    Scenario s = load_scenario("theorem_5pt");
    add("theorem_5pt budget", "theorem_5pt/lipschitz-budget", "1/3",
        s.bd.budget.str());
    EnvelopePair env = envelopes(s.space, s.bd);
    add("theorem_5pt envelope m", "theorem_5pt/lower-envelope",
        "(-2/3, 0, 1/3, 1, 2/3)", detail::values_tuple(env.lower));
    add("theorem_5pt envelope M", "theorem_5pt/upper-envelope",
        "(2/3, 0, 1/3, 1, 4/3)", detail::values_tuple(env.upper));
    add("theorem_5pt decide complement", "theorem_5pt/no-amle-complement",
        "not_exists",
        detail::decision_name(
            decide(s.space, s.bd, SubsetFamily::complement_subsets()).kind));
    add("theorem_5pt decide all", "theorem_5pt/no-amle-all", "not_exists",
        detail::decision_name(
            decide(s.space, s.bd, SubsetFamily::all_subsets()).kind));
  }
  {
    Scenario s = load_scenario("line_4pt");
    add("line_4pt budget", "line_4pt/lipschitz-budget", "1", s.bd.budget.str());
    EnvelopePair env = envelopes(s.space, s.bd);
    add("line_4pt envelope m", "line_4pt/lower-envelope", "(0, 1, -1, -2)",
        detail::values_tuple(env.lower));
    add("line_4pt envelope M", "line_4pt/upper-envelope", "(0, 1, 3, 4)",
        detail::values_tuple(env.upper));
    ExtensionValues g = {Rational(0), Rational(1), Rational(-1), Rational(4)};
    MinimalityVerdict verdict = is_minimal_extension(s.space, s.bd, g);
    std::string actual = "ok";
    if (!verdict.ok()) {
      std::ostringstream os;
      os << "fails at (" << s.space.label(verdict.pair_a) << ","
         << s.space.label(verdict.pair_b) << ") with ratio "
         << verdict.ratio.str();
      actual = os.str();
    }
    add("line_4pt between-envelopes failure",
        "line_4pt/between-envelopes-not-minimal",
        "fails at (3,4) with ratio 5", actual);
  }
  {
    Scenario s = load_scenario("remark_5pt");
    add("remark_5pt budget", "remark_5pt/lipschitz-budget", "1",
        s.bd.budget.str());
    EnvelopePair env = envelopes(s.space, s.bd);
    for (int x : {2, 3, 4}) {
      std::string label = s.space.label(x);
      std::string actual =
          "[" + env.lower[x].str() + ", " + env.upper[x].str() + "]";
      std::string expected = x == 2   ? "[2/5, 3/5]"
                             : x == 3 ? "[9/10, 11/10]"
                                      : "[3/2, 17/10]";
      add("remark_5pt envelope interval " + label,
          "remark_5pt/envelope-interval-" + label, expected, actual);
    }
    add("remark_5pt decide complement", "remark_5pt/no-amle-complement",
        "not_exists",
        detail::decision_name(
            decide(s.space, s.bd, SubsetFamily::complement_subsets()).kind));
  }
  {
    Scenario s = load_scenario("fourpoint_graph");
    add("fourpoint_graph budget", "fourpoint_graph/lipschitz-budget", "1",
        s.bd.budget.str());
    add("fourpoint_graph decide complement", "fourpoint_graph/amle-exists",
        "exists",
        detail::decision_name(
            decide(s.space, s.bd, SubsetFamily::complement_subsets()).kind));
    for (const char* t : {"-1", "0", "3/2", "3"}) {
      Rational tv = Rational::parse(t);
      ExtensionValues ht = {Rational(0), Rational(1), tv, tv};
      AmleVerdict verdict =
          is_amle(s.space, s.bd, ht, SubsetFamily::complement_subsets());
      add(std::string("fourpoint_graph amle h_t t=") + t,
          "fourpoint_graph/nonuniqueness-family", "ok",
          verdict.ok() ? "ok" : "violated");
    }
    // Same space, boundary {x1, x3} with values 0, 1.
    auto bd13 =
        make_boundary_data(s.space, Subset({0, 2}), {Rational(0), Rational(1)});
    LaplaceComparison cmp = laplace_vs_minimal_report(s.space, bd13);
    add("fourpoint_graph laplace u", "fourpoint_graph/laplace-solution",
        "(0, 1/2, 1, 1/2)", detail::values_tuple(cmp.u_values));
    add("fourpoint_graph laplace lip_f",
        "fourpoint_graph/laplace-boundary-lipschitz", "1/3", cmp.lip_f.str());
    add("fourpoint_graph laplace lip_u",
        "fourpoint_graph/laplace-solution-lipschitz", "1/2", cmp.lip_u.str());
    add("fourpoint_graph laplace minimal",
        "fourpoint_graph/laplace-not-minimal", "false",
        cmp.is_minimal ? "true" : "false");
  }
  return report;
}

}  // namespace lipext
