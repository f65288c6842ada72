#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "lipext/hunt.hpp"
#include "lipext/scenarios.hpp"
#include "lipext/serialize.hpp"

namespace lipext {

// Exit status encoding, shared by all subcommands so the binary is
// scriptable in hunt pipelines:
//   0 success / Exists / pass, 2 NotExists (or: checked object fails the
//   property), 3 Unknown / inconclusive / not converged, 1 error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotExists = 2;
inline constexpr int kExitUnknown = 3;

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(Errc::InvalidArgument, "cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// "x1=0,x2=1/3" -> label/value pairs.
inline std::vector<std::pair<std::string, Rational>> parse_assignments(
    const std::string& text) {
  std::vector<std::pair<std::string, Rational>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(Errc::ParseError,
                  "expected label=value assignments, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), Rational::parse(item.substr(eq + 1)));
  }
  return out;
}

inline std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline json values_json(const MetricSpace& space,
                        const std::vector<Rational>& values) {
  json obj = json::object();
  for (int i = 0; i < space.size(); ++i) obj[space.label(i)] = values[i].str();
  return obj;
}

inline std::string values_text(const MetricSpace& space,
                               const std::vector<Rational>& values) {
  std::string out;
  for (int i = 0; i < space.size(); ++i) {
    if (i) out += " ";
    out += space.label(i) + "=" + values[i].str();
  }
  return out;
}

inline ExtensionValues assignment_values(const MetricSpace& space,
                                         const ParsedInstance& inst,
                                         const std::string& inlineValues,
                                         const char* what) {
  if (!inlineValues.empty()) {
    ExtensionValues h(space.size(), Rational(0));
    std::vector<bool> seen(space.size(), false);
    for (auto& [label, value] : parse_assignments(inlineValues)) {
      auto idx = space.label_index(label);
      if (!idx)
        throw Error(Errc::DomainError, "unknown label '" + label + "'");
      h[*idx] = value;
      seen[*idx] = true;
    }
    for (int i = 0; i < space.size(); ++i)
      if (!seen[i])
        throw Error(Errc::MissingValue,
                    std::string(what) + ": missing value for '" +
                        space.label(i) + "'");
    return h;
  }
  if (inst.h) return *inst.h;
  throw Error(Errc::MissingValue,
              std::string(what) +
                  ": supply values via the envelope's \"h\" field or --values");
}

}  // namespace cli_detail

/// Full dispatcher; writes results to `out`, errors to `err`, returns the
/// process exit status.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Exact Lipschitz-extension toolkit for finite metric spaces"};
  app.name("lipext");
  app.require_subcommand(0, 1);

  std::string outputMode = "text";
  app.add_option("--output", outputMode, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // --- validate ------------------------------------------------------------
  auto* cmdValidate = app.add_subcommand(
      "validate", "Check the metric axioms of an instance file");
  std::string validateFile;
  cmdValidate->add_option("file", validateFile, "Instance JSON")->required();

  // --- extend ---------------------------------------------------------------
  auto* cmdExtend = app.add_subcommand(
      "extend", "Lower/upper envelopes and convex combinations");
  std::string extendFile, extendLambda;
  cmdExtend->add_option("file", extendFile, "Instance JSON")->required();
  cmdExtend->add_option("--lambda", extendLambda,
                        "Also output the lambda-combination (rational in [0,1])");

  // --- lip -------------------------------------------------------------------
  auto* cmdLip = app.add_subcommand(
      "lip", "Lipschitz constant of supplied values on a subset");
  std::string lipFile, lipValues, lipSubset;
  cmdLip->add_option("file", lipFile, "Instance JSON")->required();
  cmdLip->add_option("--values", lipValues, "Inline values x1=0,x2=1/3,...");
  cmdLip->add_option("--subset", lipSubset,
                     "Comma-separated labels (default: all points)");

  // --- amle-check -------------------------------------------------------------
  auto* cmdCheck = app.add_subcommand(
      "amle-check", "Check a supplied extension against the AMLE definition");
  std::string checkFile, checkValues, checkFamily = "complement";
  cmdCheck->add_option("file", checkFile, "Instance JSON")->required();
  cmdCheck->add_option("--values", checkValues, "Inline values x1=0,...");
  cmdCheck->add_option("--family", checkFamily, "Test-set family")
      ->check(CLI::IsMember({"complement", "all"}));

  // --- amle-decide --------------------------------------------------------------
  auto* cmdDecide = app.add_subcommand(
      "amle-decide", "Search for an AMLE or certify that none exists");
  std::string decideFile, decideFamily = "complement", decideEpsilon;
  std::string decideCertOut, decideRecheck;
  long decideMaxBoxes = 100000;
  int decideMaxSweeps = 1000;
  cmdDecide->add_option("file", decideFile, "Instance JSON");
  cmdDecide->add_option("--family", decideFamily, "Test-set family")
      ->check(CLI::IsMember({"complement", "all"}));
  cmdDecide->add_option("--epsilon", decideEpsilon,
                        "Minimum box width (rational; default: widest "
                        "envelope width / 1024)");
  cmdDecide->add_option("--max-boxes", decideMaxBoxes, "Box budget");
  cmdDecide->add_option("--max-sweeps", decideMaxSweeps, "Sweep budget");
  cmdDecide->add_option("--cert-out", decideCertOut,
                        "Write a self-contained certificate file on NotExists");
  cmdDecide->add_option("--recheck", decideRecheck,
                        "Re-validate a certificate file (no search)");

  // --- laplace ---------------------------------------------------------------
  auto* cmdLaplace = app.add_subcommand(
      "laplace", "Solve the discrete infinity-Laplace equation on a graph");
  std::string laplaceFile, laplaceTol = "1/1000000000";
  int laplaceMaxIter = 1000;
  cmdLaplace->add_option("file", laplaceFile, "Graph instance JSON")->required();
  cmdLaplace->add_option("--tol", laplaceTol, "Residual tolerance (rational)");
  cmdLaplace->add_option("--max-iter", laplaceMaxIter, "Sweep budget");

  // --- paper-report ------------------------------------------------------------
  auto* cmdReport = app.add_subcommand(
      "paper-report", "Run the built-in reproduction battery");

  // --- hunt -------------------------------------------------------------------
  auto* cmdHunt = app.add_subcommand(
      "hunt", "Batch-decide seeded random instances, logging to JSONL");
  HuntConfig huntConfig;
  std::string huntMode = "repair", huntSeeds = "0..0";
  std::string huntEpsilon;
  cmdHunt->add_option("--n", huntConfig.point_count, "Points per instance")
      ->required();
  cmdHunt->add_option("--a", huntConfig.domain_size, "Domain size")->required();
  cmdHunt->add_option("--mode", huntMode, "Generator: line, l1points, repair")
      ->check(CLI::IsMember({"line", "l1points", "repair"}));
  cmdHunt->add_option("--dim", huntConfig.dim, "Dimension for l1points");
  cmdHunt->add_option("--seeds", huntSeeds, "Inclusive seed range a..b")
      ->required();
  cmdHunt->add_option("--log", huntConfig.log_path, "JSONL log path")
      ->required();
  cmdHunt->add_option("--max-boxes", huntConfig.budgets.max_boxes, "Box budget");
  cmdHunt->add_option("--max-sweeps", huntConfig.budgets.max_sweeps,
                      "Sweep budget");
  cmdHunt->add_option("--epsilon", huntEpsilon, "Minimum box width (rational)");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }
  const bool jsonOut = outputMode == "json";

  try {
    if (app.got_subcommand(cmdValidate)) {
      ParsedInstance inst =
          parse_instance_text(cli_detail::read_file(validateFile));
      if (!inst.space)
        throw Error(Errc::ParseError, "validate expects a metric instance");
      if (jsonOut) {
        json doc;
        doc["valid"] = true;
        doc["points"] = inst.space->size();
        if (inst.bd) doc["budget"] = inst.bd->budget.str();
        out << doc.dump(2) << "\n";
      } else {
        out << "valid metric on " << inst.space->size() << " points";
        if (inst.bd) out << ", budget " << inst.bd->budget.str();
        out << "\n";
      }
      return kExitOk;
    }

    if (app.got_subcommand(cmdExtend)) {
      auto [space, bd] = parse_instance(cli_detail::read_file(extendFile));
      EnvelopePair env = envelopes(space, bd);
      std::optional<Rational> lambda;
      std::optional<ExtensionValues> flambda;
      if (!extendLambda.empty()) {
        lambda = Rational::parse(extendLambda);
        flambda = lambda_extension(space, bd, *lambda);
      }
      if (jsonOut) {
        json doc;
        doc["budget"] = bd.budget.str();
        doc["m"] = cli_detail::values_json(space, env.lower);
        doc["M"] = cli_detail::values_json(space, env.upper);
        if (flambda) {
          doc["lambda"] = lambda->str();
          doc["f_lambda"] = cli_detail::values_json(space, *flambda);
        }
        out << doc.dump(2) << "\n";
      } else {
        out << "budget: " << bd.budget.str() << "\n";
        out << "m: " << cli_detail::values_text(space, env.lower) << "\n";
        out << "M: " << cli_detail::values_text(space, env.upper) << "\n";
        if (flambda)
          out << "f_lambda(" << lambda->str()
              << "): " << cli_detail::values_text(space, *flambda) << "\n";
      }
      return kExitOk;
    }

    if (app.got_subcommand(cmdLip)) {
      ParsedInstance inst = parse_instance_text(cli_detail::read_file(lipFile));
      if (!inst.space)
        throw Error(Errc::ParseError, "lip expects a metric instance");
      const MetricSpace& space = *inst.space;
      Subset subset = space.all_points();
      if (!lipSubset.empty()) {
        std::vector<int> idx;
        for (const std::string& l : cli_detail::split_labels(lipSubset)) {
          auto i = space.label_index(l);
          if (!i) throw Error(Errc::DomainError, "unknown label '" + l + "'");
          idx.push_back(*i);
        }
        subset = Subset(std::move(idx));
      } else if (inst.subset) {
        subset = *inst.subset;
      }
      // Values may be partial as long as they cover the subset.
      std::map<int, Rational> values;
      if (!lipValues.empty()) {
        for (auto& [label, value] : cli_detail::parse_assignments(lipValues)) {
          auto idx = space.label_index(label);
          if (!idx)
            throw Error(Errc::DomainError, "unknown label '" + label + "'");
          values[*idx] = value;
        }
      } else if (inst.h) {
        for (int i = 0; i < space.size(); ++i) values[i] = (*inst.h)[i];
      } else {
        throw Error(Errc::MissingValue,
                    "lip: supply values via the envelope's \"h\" field or --values");
      }
      Rational lip = lipschitz_constant(space, values, subset);
      if (jsonOut) {
        json doc;
        doc["subset"] = subset_to_json(space, subset);
        doc["lipschitz_constant"] = lip.str();
        out << doc.dump(2) << "\n";
      } else {
        out << lip.str() << "\n";
      }
      return kExitOk;
    }

    if (app.got_subcommand(cmdCheck)) {
      ParsedInstance inst = parse_instance_text(cli_detail::read_file(checkFile));
      if (!inst.space || !inst.bd)
        throw Error(Errc::ParseError,
                    "amle-check expects a metric instance with boundary data");
      const MetricSpace& space = *inst.space;
      const BoundaryData& bd = *inst.bd;
      ExtensionValues h =
          cli_detail::assignment_values(space, inst, checkValues, "amle-check");
      AmleVerdict verdict =
          is_amle(space, bd, h, family_from_name(checkFamily));
      if (jsonOut) {
        json doc;
        switch (verdict.status) {
          case AmleVerdict::Status::Ok:
            doc["verdict"] = "ok";
            doc["certificate"] =
                amle_certificate_to_json(space, *verdict.certificate);
            break;
          case AmleVerdict::Status::NotMinimal:
            doc["verdict"] = "not_minimal";
            if (verdict.minimality.status ==
                MinimalityVerdict::Status::DisagreesOnDomain)
              doc["disagrees_at"] = space.label(verdict.minimality.point);
            else {
              doc["worst_pair"] = json::array(
                  {space.label(verdict.minimality.pair_a),
                   space.label(verdict.minimality.pair_b)});
              doc["ratio"] = verdict.minimality.ratio.str();
            }
            break;
          case AmleVerdict::Status::Violation:
            doc["verdict"] = "violation";
            doc["set"] = subset_to_json(space, verdict.violating);
            doc["lip_on_set"] = verdict.lip_on_u.str();
            doc["interior_minimum"] = verdict.t_star.str();
            break;
        }
        out << doc.dump(2) << "\n";
      } else {
        switch (verdict.status) {
          case AmleVerdict::Status::Ok:
            out << "ok: extension is an AMLE relative to the " << checkFamily
                << " family\n";
            break;
          case AmleVerdict::Status::NotMinimal:
            out << "not a minimal extension";
            if (verdict.minimality.status ==
                MinimalityVerdict::Status::DisagreesOnDomain)
              out << " (disagrees with the data at "
                  << space.label(verdict.minimality.point) << ")";
            else
              out << " (pair " << space.label(verdict.minimality.pair_a) << ","
                  << space.label(verdict.minimality.pair_b) << " has ratio "
                  << verdict.minimality.ratio.str() << ")";
            out << "\n";
            break;
          case AmleVerdict::Status::Violation: {
            out << "violation at {";
            for (std::size_t i = 0; i < verdict.violating.members.size(); ++i)
              out << (i ? "," : "")
                  << space.label(verdict.violating.members[i]);
            out << "}: Lip = " << verdict.lip_on_u.str()
                << " > attainable " << verdict.t_star.str() << "\n";
            break;
          }
        }
      }
      return verdict.ok() ? kExitOk : kExitNotExists;
    }

    if (app.got_subcommand(cmdDecide)) {
      if (!decideRecheck.empty()) {
        LoadedCertificate loaded =
            load_certificate_file(cli_detail::read_file(decideRecheck));
        RecheckReport report = recheck_nonexistence(
            loaded.space, loaded.bd, loaded.family, loaded.certificate);
        if (jsonOut) {
          json doc;
          doc["certificate_valid"] = report.valid;
          if (!report.valid) doc["reason"] = report.reason;
          out << doc.dump(2) << "\n";
        } else {
          out << (report.valid ? "certificate valid"
                               : "certificate INVALID: " + report.reason)
              << "\n";
        }
        return report.valid ? kExitOk : kExitError;
      }
      if (decideFile.empty())
        throw Error(Errc::InvalidArgument,
                    "amle-decide needs an instance file (or --recheck)");
      auto [space, bd] = parse_instance(cli_detail::read_file(decideFile));
      SubsetFamily family = family_from_name(decideFamily);
      DecideBudgets budgets;
      budgets.max_boxes = decideMaxBoxes;
      budgets.max_sweeps = decideMaxSweeps;
      if (!decideEpsilon.empty())
        budgets.min_width = Rational::parse(decideEpsilon);
      DecisionOutcome outcome = decide(space, bd, family, budgets);
      if (outcome.kind == DecisionOutcome::Kind::NotExists &&
          !decideCertOut.empty()) {
        std::ofstream certOut(decideCertOut);
        if (!certOut)
          throw Error(Errc::InvalidArgument,
                      "cannot write '" + decideCertOut + "'");
        certOut << certificate_file_json(space, bd, family,
                                         *outcome.nonexistence)
                       .dump(2)
                << "\n";
      }
      if (jsonOut) {
        out << decision_to_json(space, outcome).dump(2) << "\n";
      } else {
        switch (outcome.kind) {
          case DecisionOutcome::Kind::Exists:
            out << "exists: AMLE found\n"
                << "witness: "
                << cli_detail::values_text(space, outcome.amle->witness)
                << "\n";
            break;
          case DecisionOutcome::Kind::NotExists:
            out << "not_exists: certified with "
                << outcome.nonexistence->cover.size() << " pruned boxes\n";
            break;
          case DecisionOutcome::Kind::Unknown:
            out << "unknown: " << outcome.surviving_boxes
                << " surviving boxes"
                << (outcome.box_budget_exhausted ? " (box budget exhausted)"
                                                 : "")
                << ", search gap " << outcome.search_gap.str() << "\n";
            break;
        }
      }
      switch (outcome.kind) {
        case DecisionOutcome::Kind::Exists: return kExitOk;
        case DecisionOutcome::Kind::NotExists: return kExitNotExists;
        case DecisionOutcome::Kind::Unknown: return kExitUnknown;
      }
    }

    if (app.got_subcommand(cmdLaplace)) {
      ParsedInstance inst =
          parse_instance_text(cli_detail::read_file(laplaceFile));
      if (!inst.graph)
        throw Error(Errc::ParseError,
                    "laplace expects a graph instance (an 'edges' field)");
      LaplaceSolution sol = solve_infinity_laplace(
          *inst.graph, Rational::parse(laplaceTol), laplaceMaxIter);
      if (jsonOut) {
        json doc;
        json values = json::object();
        for (int v = 0; v < inst.graph->vertex_count; ++v)
          values[inst.labels[v]] = sol.values[v].str();
        doc["values"] = std::move(values);
        doc["residual"] = sol.residual.str();
        doc["converged"] = sol.converged;
        doc["iterations"] = sol.iterations;
        out << doc.dump(2) << "\n";
      } else {
        for (int v = 0; v < inst.graph->vertex_count; ++v)
          out << inst.labels[v] << "=" << sol.values[v].str() << " ";
        out << "\nresidual: " << sol.residual.str()
            << (sol.converged ? "" : " (NOT converged)") << "\n";
      }
      return sol.converged ? kExitOk : kExitUnknown;
    }

    if (app.got_subcommand(cmdReport)) {
      PaperReport report = paper_report();
      if (jsonOut)
        out << report_to_json(report).dump(2) << "\n";
      else
        out << report_to_text(report);
      return report.all_pass ? kExitOk : kExitError;
    }

    if (app.got_subcommand(cmdHunt)) {
      if (huntMode == "line")
        huntConfig.mode = HuntConfig::Mode::Line;
      else if (huntMode == "l1points")
        huntConfig.mode = HuntConfig::Mode::L1Points;
      else
        huntConfig.mode = HuntConfig::Mode::Repair;
      auto sep = huntSeeds.find("..");
      if (sep == std::string::npos)
        throw Error(Errc::InvalidArgument, "--seeds expects a range a..b");
      huntConfig.seed_begin = std::stol(huntSeeds.substr(0, sep));
      huntConfig.seed_end = std::stol(huntSeeds.substr(sep + 2));
      if (!huntEpsilon.empty())
        huntConfig.budgets.min_width = Rational::parse(huntEpsilon);
      std::vector<SearchReport> reports = hunt(huntConfig);
      if (jsonOut) {
        json doc;
        doc["reports"] = json::array();
        for (const SearchReport& r : reports) {
          json rec;
          rec["seed"] = r.seed;
          rec["digest"] = r.digest;
          rec["outcome"] = r.outcome == DecisionOutcome::Kind::Exists
                               ? "exists"
                               : r.outcome == DecisionOutcome::Kind::NotExists
                                     ? "not_exists"
                                     : "unknown";
          if (!r.certificate_path.empty())
            rec["certificatePath"] = r.certificate_path;
          doc["reports"].push_back(std::move(rec));
        }
        out << doc.dump(2) << "\n";
      } else {
        for (const SearchReport& r : reports)
          out << "seed " << r.seed << ": "
              << (r.outcome == DecisionOutcome::Kind::Exists
                      ? "exists"
                      : r.outcome == DecisionOutcome::Kind::NotExists
                            ? "not_exists"
                            : "unknown")
              << " (digest " << r.digest << ", " << r.elapsed_ms << " ms)"
              << (r.certificate_path.empty()
                      ? ""
                      : ", certificate " + r.certificate_path)
              << "\n";
        out << reports.size() << " new records appended\n";
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  err << "error: no subcommand given (try --help)\n";
  return kExitError;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace lipext
