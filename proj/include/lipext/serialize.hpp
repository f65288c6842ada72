#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lipext/amle.hpp"
#include "lipext/laplace.hpp"
#include "lipext/metric.hpp"
#include "lipext/scenarios.hpp"

namespace lipext {

// Ordered JSON keeps key insertion order, which together with the "p/q"
// rendering makes every emitted document canonical and diff-stable.
using json = nlohmann::ordered_json;

/// Parsed instance envelope. Metric instances carry space + boundary
/// data; graph instances (an "edges" field instead of "distances") carry
/// the graph. `h` and `subset` are optional payloads for the checking
/// commands.
struct ParsedInstance {
  std::optional<MetricSpace> space;
  std::optional<BoundaryData> bd;
  std::optional<GraphInstance> graph;
  std::optional<ExtensionValues> h;
  std::optional<Subset> subset;
  std::vector<std::string> labels;
};

namespace detail {

inline Rational rational_from_json(const json& v, const std::string& where) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer())
    return Rational(static_cast<long>(v.get<std::int64_t>()));
  throw Error(Errc::ParseError,
              where + ": rationals must be strings like \"p/q\" or \"1.7\" "
                      "(non-integer JSON numbers are not exact)");
}

inline const json& require_field(const json& doc, const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw Error(Errc::ParseError, "missing field '" + key + "'");
  return *it;
}

inline int label_to_index(const MetricSpace& space, const std::string& name,
                          const std::string& where) {
  auto idx = space.label_index(name);
  if (!idx)
    throw Error(Errc::DomainError, where + ": unknown label '" + name + "'");
  return *idx;
}

}  // namespace detail

inline ParsedInstance parse_instance_document(const json& doc) {
  if (!doc.is_object())
    throw Error(Errc::ParseError, "instance document must be a JSON object");
  ParsedInstance out;

  const json& labelsJson = detail::require_field(doc, "labels");
  if (!labelsJson.is_array() || labelsJson.empty())
    throw Error(Errc::ParseError, "labels: expected a nonempty array");
  for (const json& l : labelsJson) {
    if (!l.is_string())
      throw Error(Errc::ParseError, "labels: entries must be strings");
    out.labels.push_back(l.get<std::string>());
  }
  const int n = static_cast<int>(out.labels.size());

  const bool hasDistances = doc.contains("distances");
  const bool hasEdges = doc.contains("edges");
  if (hasDistances == hasEdges)
    throw Error(Errc::ParseError,
                "exactly one of 'distances' or 'edges' is required");

  // Domain and values (optional for validate-only documents).
  std::optional<std::vector<std::string>> domainLabels;
  if (doc.contains("domain")) {
    const json& dom = doc["domain"];
    if (!dom.is_array())
      throw Error(Errc::ParseError, "domain: expected an array of labels");
    domainLabels.emplace();
    for (const json& l : dom) {
      if (!l.is_string())
        throw Error(Errc::ParseError, "domain: entries must be strings");
      domainLabels->push_back(l.get<std::string>());
    }
  }

  if (hasDistances) {
    const json& dist = doc["distances"];
    if (!dist.is_array() || static_cast<int>(dist.size()) != n)
      throw Error(Errc::ParseError, "distances: expected an n x n matrix");
    std::vector<std::vector<Rational>> matrix;
    for (int i = 0; i < n; ++i) {
      const json& row = dist[i];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw Error(Errc::ParseError, "distances: expected an n x n matrix");
      std::vector<Rational> r;
      for (int j = 0; j < n; ++j)
        r.push_back(detail::rational_from_json(row[j], "distances"));
      matrix.push_back(std::move(r));
    }
    out.space = validate_metric(out.labels, matrix);
  }

  auto indexOf = [&](const std::string& name,
                     const std::string& where) -> int {
    for (int i = 0; i < n; ++i)
      if (out.labels[i] == name) return i;
    throw Error(Errc::DomainError, where + ": unknown label '" + name + "'");
  };

  if (domainLabels) {
    const json& valuesJson = detail::require_field(doc, "values");
    if (!valuesJson.is_object())
      throw Error(Errc::ParseError, "values: expected an object label -> rational");
    std::vector<int> domainIdx;
    for (const std::string& l : *domainLabels)
      domainIdx.push_back(indexOf(l, "domain"));
    Subset domain(domainIdx);
    std::vector<Rational> values;
    for (int i : domain.members) {
      auto it = valuesJson.find(out.labels[i]);
      if (it == valuesJson.end())
        throw Error(Errc::DomainError,
                    "values: missing value for '" + out.labels[i] + "'");
      values.push_back(detail::rational_from_json(*it, "values"));
    }
    if (hasDistances) {
      out.bd = make_boundary_data(*out.space, domain, values);
    } else {
      const json& edgesJson = doc["edges"];
      if (!edgesJson.is_array())
        throw Error(Errc::ParseError, "edges: expected an array of label pairs");
      std::vector<std::pair<int, int>> edges;
      for (const json& e : edgesJson) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
            !e[1].is_string())
          throw Error(Errc::ParseError, "edges: entries must be [label, label]");
        edges.emplace_back(indexOf(e[0].get<std::string>(), "edges"),
                           indexOf(e[1].get<std::string>(), "edges"));
      }
      out.graph = make_graph_instance(n, std::move(edges), domain, values);
    }
  } else if (hasEdges) {
    throw Error(Errc::ParseError, "graph documents require 'domain' and 'values'");
  }

  if (doc.contains("h")) {
    const json& hJson = doc["h"];
    if (!hJson.is_object())
      throw Error(Errc::ParseError, "h: expected an object label -> rational");
    ExtensionValues h(n, Rational(0));
    for (int i = 0; i < n; ++i) {
      auto it = hJson.find(out.labels[i]);
      if (it == hJson.end())
        throw Error(Errc::DomainError,
                    "h: missing value for '" + out.labels[i] + "'");
      h[i] = detail::rational_from_json(*it, "h");
    }
    out.h = std::move(h);
  }
  if (doc.contains("subset")) {
    const json& subJson = doc["subset"];
    if (!subJson.is_array())
      throw Error(Errc::ParseError, "subset: expected an array of labels");
    std::vector<int> idx;
    for (const json& l : subJson) {
      if (!l.is_string())
        throw Error(Errc::ParseError, "subset: entries must be strings");
      idx.push_back(indexOf(l.get<std::string>(), "subset"));
    }
    out.subset = Subset(std::move(idx));
  }
  return out;
}

inline ParsedInstance parse_instance_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError,
                "JSON parse error at byte " + std::to_string(e.byte) + ": " +
                    e.what());
  }
  return parse_instance_document(doc);
}

/// Metric instance parse with required boundary data.
inline std::pair<MetricSpace, BoundaryData> parse_instance(
    const std::string& text) {
  ParsedInstance p = parse_instance_text(text);
  if (!p.space)
    throw Error(Errc::ParseError, "expected a metric instance with 'distances'");
  if (!p.bd)
    throw Error(Errc::ParseError, "expected 'domain' and 'values'");
  return {std::move(*p.space), std::move(*p.bd)};
}

inline json serialize_instance(const MetricSpace& space,
                               const BoundaryData& bd) {
  json doc;
  doc["labels"] = json::array();
  for (int i = 0; i < space.size(); ++i) doc["labels"].push_back(space.label(i));
  doc["distances"] = json::array();
  for (int i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < space.size(); ++j) row.push_back(space.dist(i, j).str());
    doc["distances"].push_back(std::move(row));
  }
  doc["domain"] = json::array();
  for (int i : bd.domain.members) doc["domain"].push_back(space.label(i));
  doc["values"] = json::object();
  for (std::size_t k = 0; k < bd.domain.members.size(); ++k)
    doc["values"][space.label(bd.domain.members[k])] = bd.values[k].str();
  return doc;
}

inline std::string family_name(const SubsetFamily& family) {
  switch (family.kind) {
    case SubsetFamily::Kind::AllSubsets: return "all";
    case SubsetFamily::Kind::ComplementSubsets: return "complement";
    case SubsetFamily::Kind::Explicit: return "explicit";
  }
  return "complement";
}

inline SubsetFamily family_from_name(const std::string& name) {
  if (name == "all") return SubsetFamily::all_subsets();
  if (name == "complement") return SubsetFamily::complement_subsets();
  throw Error(Errc::ParseError, "unknown family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

inline json subset_to_json(const MetricSpace& space, const Subset& u) {
  json arr = json::array();
  for (int i : u.members) arr.push_back(space.label(i));
  return arr;
}

inline Subset subset_from_json(const MetricSpace& space, const json& arr,
                               const std::string& where) {
  if (!arr.is_array())
    throw Error(Errc::ParseError, where + ": expected an array of labels");
  std::vector<int> idx;
  for (const json& l : arr) {
    if (!l.is_string())
      throw Error(Errc::ParseError, where + ": entries must be strings");
    idx.push_back(detail::label_to_index(space, l.get<std::string>(), where));
  }
  return Subset(std::move(idx));
}

inline json nonexistence_to_json(const MetricSpace& space,
                                 const NonexistenceCertificate& cert) {
  json doc;
  doc["free_points"] = json::array();
  for (int p : cert.free_points) doc["free_points"].push_back(space.label(p));
  doc["cover"] = json::array();
  for (const PrunedBox& pb : cert.cover) {
    json entry;
    json box = json::array();
    for (const Interval& iv : pb.box.coords)
      box.push_back(json::array({iv.lo.str(), iv.hi.str()}));
    entry["box"] = std::move(box);
    if (pb.reason == PrunedBox::Reason::EmptyPolytope) {
      entry["reason"] = "empty_polytope";
    } else {
      entry["reason"] = "violation";
      entry["set"] = subset_to_json(space, pb.violated);
      entry["lip_lower"] = pb.lip_lower.str();
      entry["tstar_upper"] = pb.tstar_upper.str();
    }
    doc["cover"].push_back(std::move(entry));
  }
  return doc;
}

inline NonexistenceCertificate nonexistence_from_json(const MetricSpace& space,
                                                      const json& doc) {
  NonexistenceCertificate cert;
  const json& fp = detail::require_field(doc, "free_points");
  if (!fp.is_array())
    throw Error(Errc::ParseError, "free_points: expected an array");
  for (const json& l : fp) {
    if (!l.is_string())
      throw Error(Errc::ParseError, "free_points: entries must be strings");
    cert.free_points.push_back(
        detail::label_to_index(space, l.get<std::string>(), "free_points"));
  }
  const json& cover = detail::require_field(doc, "cover");
  if (!cover.is_array())
    throw Error(Errc::ParseError, "cover: expected an array");
  for (const json& entry : cover) {
    PrunedBox pb;
    const json& box = detail::require_field(entry, "box");
    if (!box.is_array() || box.size() != cert.free_points.size())
      throw Error(Errc::ParseError, "cover box dimension mismatch");
    for (const json& iv : box) {
      if (!iv.is_array() || iv.size() != 2)
        throw Error(Errc::ParseError, "box intervals must be [lo, hi]");
      pb.box.coords.push_back(
          Interval{detail::rational_from_json(iv[0], "box"),
                   detail::rational_from_json(iv[1], "box")});
    }
    const std::string reason =
        detail::require_field(entry, "reason").get<std::string>();
    if (reason == "empty_polytope") {
      pb.reason = PrunedBox::Reason::EmptyPolytope;
    } else if (reason == "violation") {
      pb.reason = PrunedBox::Reason::Violation;
      pb.violated =
          subset_from_json(space, detail::require_field(entry, "set"), "set");
      pb.lip_lower = detail::rational_from_json(
          detail::require_field(entry, "lip_lower"), "lip_lower");
      pb.tstar_upper = detail::rational_from_json(
          detail::require_field(entry, "tstar_upper"), "tstar_upper");
    } else {
      throw Error(Errc::ParseError, "unknown cover reason '" + reason + "'");
    }
    cert.cover.push_back(std::move(pb));
  }
  return cert;
}

/// Self-contained certificate file: instance, family and cover together,
/// so re-checking never re-runs the search.
inline json certificate_file_json(const MetricSpace& space,
                                  const BoundaryData& bd,
                                  const SubsetFamily& family,
                                  const NonexistenceCertificate& cert) {
  json doc;
  doc["format"] = "lipext-nonexistence-certificate";
  doc["version"] = 1;
  doc["family"] = family_name(family);
  doc["instance"] = serialize_instance(space, bd);
  doc["certificate"] = nonexistence_to_json(space, cert);
  return doc;
}

struct LoadedCertificate {
  MetricSpace space;
  BoundaryData bd;
  SubsetFamily family;
  NonexistenceCertificate certificate;
};

inline LoadedCertificate load_certificate_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError,
                "JSON parse error at byte " + std::to_string(e.byte) + ": " +
                    e.what());
  }
  if (detail::require_field(doc, "format").get<std::string>() !=
      "lipext-nonexistence-certificate")
    throw Error(Errc::ParseError, "not a certificate file");
  ParsedInstance inst =
      parse_instance_document(detail::require_field(doc, "instance"));
  if (!inst.space || !inst.bd)
    throw Error(Errc::ParseError, "certificate instance must be metric");
  SubsetFamily family =
      family_from_name(detail::require_field(doc, "family").get<std::string>());
  NonexistenceCertificate cert = nonexistence_from_json(
      *inst.space, detail::require_field(doc, "certificate"));
  return LoadedCertificate{std::move(*inst.space), std::move(*inst.bd),
                           std::move(family), std::move(cert)};
}

// ---------------------------------------------------------------------------
// Reports and decisions
// ---------------------------------------------------------------------------

inline json amle_certificate_to_json(const MetricSpace& space,
                                     const AmleCertificate& cert) {
  json doc;
  doc["witness"] = json::object();
  for (int i = 0; i < space.size(); ++i)
    doc["witness"][space.label(i)] = cert.witness[i].str();
  doc["records"] = json::array();
  for (const AmleRecord& r : cert.records) {
    json rec;
    rec["set"] = subset_to_json(space, r.test_set);
    rec["lip_on_set"] = r.lip_on_u.str();
    rec["interior_minimum"] = r.t_star.str();
    doc["records"].push_back(std::move(rec));
  }
  return doc;
}

inline json decision_to_json(const MetricSpace& space,
                             const DecisionOutcome& outcome) {
  json doc;
  switch (outcome.kind) {
    case DecisionOutcome::Kind::Exists:
      doc["outcome"] = "exists";
      doc["amle"] = amle_certificate_to_json(space, *outcome.amle);
      break;
    case DecisionOutcome::Kind::NotExists:
      doc["outcome"] = "not_exists";
      doc["certificate"] = nonexistence_to_json(space, *outcome.nonexistence);
      break;
    case DecisionOutcome::Kind::Unknown:
      doc["outcome"] = "unknown";
      doc["surviving_boxes"] = outcome.surviving_boxes;
      doc["box_budget_exhausted"] = outcome.box_budget_exhausted;
      doc["search_gap"] = outcome.search_gap.str();
      break;
  }
  doc["sweeps_used"] = outcome.sweeps_used;
  return doc;
}

inline json report_to_json(const PaperReport& report) {
  json doc;
  doc["all_pass"] = report.all_pass;
  doc["lines"] = json::array();
  for (const ReportLine& line : report.lines) {
    json l;
    l["name"] = line.name;
    l["anchor"] = line.anchor;
    l["expected"] = line.expected;
    l["actual"] = line.actual;
    l["pass"] = line.pass;
    doc["lines"].push_back(std::move(l));
  }
  return doc;
}

inline std::string report_to_text(const PaperReport& report) {
  std::string out;
  for (const ReportLine& line : report.lines) {
    out += line.pass ? "[pass] " : "[FAIL] ";
    out += line.name + ": expected " + line.expected;
    if (!line.pass) out += ", got " + line.actual;
    out += "  (" + line.anchor + ")\n";
  }
  out += report.all_pass ? "all checks passed\n" : "SOME CHECKS FAILED\n";
  return out;
}

// ---------------------------------------------------------------------------
// Digests
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Stable instance digest: FNV-1a over the canonical envelope rendering.
inline std::string instance_digest(const MetricSpace& space,
                                   const BoundaryData& bd) {
  std::uint64_t h = fnv1a64(serialize_instance(space, bd).dump());
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace lipext
