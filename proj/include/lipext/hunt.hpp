#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lipext/amle.hpp"
#include "lipext/serialize.hpp"

namespace lipext {

/// Explicit, platform-independent pseudorandom stream (splitmix64).
/// Digests and resume semantics depend on this exact sequence, so no
/// platform-default engine or distribution is used anywhere.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, n) by rejection; exact on every platform.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw Error(Errc::InvalidArgument, "below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

private:
  std::uint64_t state_;
};

struct HuntConfig {
  enum class Mode { Line, L1Points, Repair };

  int point_count = 5;
  int domain_size = 2;
  Mode mode = Mode::Repair;
  int dim = 1;  // L1Points only
  long seed_begin = 0;
  long seed_end = 0;  // inclusive
  DecideBudgets budgets;
  std::string log_path;
  int max_denominator = 32;

  // Test hook: replaces the generator while keeping the hunt loop, log
  // and certificate plumbing identical.
  std::function<std::pair<MetricSpace, BoundaryData>(long)> generator_override;
};

struct SearchReport {
  long seed = 0;
  std::string digest;
  DecisionOutcome::Kind outcome = DecisionOutcome::Kind::Unknown;
  long elapsed_ms = 0;
  std::string certificate_path;  // set for NotExists only
};

namespace detail {

inline const char* mode_name(HuntConfig::Mode m) {
  switch (m) {
    case HuntConfig::Mode::Line: return "line";
    case HuntConfig::Mode::L1Points: return "l1points";
    case HuntConfig::Mode::Repair: return "repair";
  }
  return "?";
}

/// value = p / q with q <= maxDen, uniform over the lattice points of
/// [lo, hi] with denominator q.
inline Rational random_rational(SplitMix64& rng, int maxDen, long lo, long hi) {
  const std::uint64_t q = 1 + rng.below(static_cast<std::uint64_t>(maxDen));
  const std::uint64_t count = static_cast<std::uint64_t>(hi - lo) * q + 1;
  const std::uint64_t p = rng.below(count);
  return Rational(lo) + Rational(static_cast<long>(p), static_cast<long>(q));
}

/// entry in [1/2, 3]: numerator drawn from [ceil(q/2), 3q].
inline Rational random_distance(SplitMix64& rng, int maxDen) {
  const long q = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(maxDen)));
  const long pmin = (q + 1) / 2;
  const long pmax = 3 * q;
  const long p = pmin + static_cast<long>(rng.below(
                     static_cast<std::uint64_t>(pmax - pmin + 1)));
  return Rational(p, q);
}

}  // namespace detail

/// Deterministic instance generation: the stream is keyed on the mode,
/// the size parameters, the seed and the retry attempt, so a coincident
/// draw moves to a fresh substream instead of silently re-rolling.
inline std::pair<MetricSpace, BoundaryData> gen_instance(
    const HuntConfig& config, long seed) {
  if (config.domain_size < 1 || config.domain_size >= config.point_count)
    throw Error(Errc::InvalidArgument, "need 1 <= domainSize < pointCount");
  if (config.dim < 1) throw Error(Errc::InvalidArgument, "need dim >= 1");
  const int n = config.point_count;

  for (int attempt = 0; attempt < 64; ++attempt) {
    std::string key = std::string(detail::mode_name(config.mode)) + ":" +
                      std::to_string(n) + ":" +
                      std::to_string(config.domain_size) + ":" +
                      std::to_string(config.dim) + ":" + std::to_string(seed) +
                      ":" + std::to_string(attempt);
    SplitMix64 rng(fnv1a64(key));

    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));

    std::vector<std::vector<Rational>> matrix(
        n, std::vector<Rational>(n, Rational(0)));
    bool degenerate = false;

    switch (config.mode) {
      case HuntConfig::Mode::Line: {
        std::vector<Rational> coords;
        for (int i = 0; i < n; ++i)
          coords.push_back(
              detail::random_rational(rng, config.max_denominator, 0, 4));
        std::sort(coords.begin(), coords.end());
        for (int i = 0; i + 1 < n && !degenerate; ++i)
          if (coords[i] == coords[i + 1]) degenerate = true;
        if (degenerate) break;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            matrix[i][j] = abs(coords[i] - coords[j]);
        break;
      }
      case HuntConfig::Mode::L1Points: {
        std::vector<std::vector<Rational>> pts(n);
        for (int i = 0; i < n; ++i)
          for (int d = 0; d < config.dim; ++d)
            pts[i].push_back(
                detail::random_rational(rng, config.max_denominator, 0, 4));
        for (int i = 0; i < n && !degenerate; ++i)
          for (int j = i + 1; j < n && !degenerate; ++j) {
            Rational sum(0);
            for (int d = 0; d < config.dim; ++d)
              sum += abs(pts[i][d] - pts[j][d]);
            if (sum.sign() == 0) degenerate = true;
            matrix[i][j] = sum;
            matrix[j][i] = std::move(sum);
          }
        break;
      }
      case HuntConfig::Mode::Repair: {
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            matrix[i][j] = detail::random_distance(rng, config.max_denominator);
            matrix[j][i] = matrix[i][j];
          }
        break;
      }
    }
    if (degenerate) continue;  // DegenerateInstance: take the next substream

    MetricSpace space = config.mode == HuntConfig::Mode::Repair
                            ? metric_repair(labels, matrix)
                            : validate_metric(labels, matrix);

    // Domain: partial Fisher–Yates over the indices.
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = 0; i < config.domain_size; ++i) {
      int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(perm[i], perm[j]);
    }
    Subset domain(std::vector<int>(perm.begin(), perm.begin() + config.domain_size));
    std::vector<Rational> values;
    for (int i : domain.members) {
      (void)i;
      values.push_back(
          detail::random_rational(rng, config.max_denominator, 0, 2));
    }
    BoundaryData bd = make_boundary_data(space, domain, values);
    return {std::move(space), std::move(bd)};
  }
  throw Error(Errc::DegenerateInstance,
              "could not draw distinct points after 64 substreams");
}

/// Hunt loop: one decide() per seed, one JSONL record per line, full
/// certificates persisted beside the log keyed by instance digest. Seeds
/// already present in the log are skipped, so interrupted runs resume
/// without duplicates.
inline std::vector<SearchReport> hunt(const HuntConfig& config) {
  namespace fs = std::filesystem;
  if (config.log_path.empty())
    throw Error(Errc::InvalidArgument, "hunt requires a log path");
  fs::path logPath(config.log_path);
  if (logPath.has_parent_path()) fs::create_directories(logPath.parent_path());

  std::vector<long> doneSeeds;
  if (fs::exists(logPath)) {
    std::ifstream in(logPath);
    std::string line;
    long lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      if (line.empty()) continue;
      json rec;
      try {
        rec = json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        throw Error(Errc::LogCorrupt,
                    "unparseable hunt log line " + std::to_string(lineNo));
      }
      if (!rec.is_object() || !rec.contains("seed") ||
          !rec["seed"].is_number_integer())
        throw Error(Errc::LogCorrupt,
                    "hunt log line " + std::to_string(lineNo) +
                        " has no integer seed");
      doneSeeds.push_back(rec["seed"].get<long>());
    }
  }
  auto alreadyDone = [&](long seed) {
    for (long s : doneSeeds)
      if (s == seed) return true;
    return false;
  };

  std::ofstream log(logPath, std::ios::app);
  if (!log)
    throw Error(Errc::InvalidArgument,
                "cannot open hunt log '" + config.log_path + "'");

  std::vector<SearchReport> reports;
  for (long seed = config.seed_begin; seed <= config.seed_end; ++seed) {
    if (alreadyDone(seed)) continue;
    auto t0 = std::chrono::steady_clock::now();
    auto [space, bd] = config.generator_override
                           ? config.generator_override(seed)
                           : gen_instance(config, seed);
    const SubsetFamily family = SubsetFamily::complement_subsets();
    DecisionOutcome outcome = decide(space, bd, family, config.budgets);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();

    SearchReport report;
    report.seed = seed;
    report.digest = instance_digest(space, bd);
    report.outcome = outcome.kind;
    report.elapsed_ms = static_cast<long>(elapsed);

    json rec;
    rec["seed"] = seed;
    rec["digest"] = report.digest;
    switch (outcome.kind) {
      case DecisionOutcome::Kind::Exists: rec["outcome"] = "exists"; break;
      case DecisionOutcome::Kind::NotExists: rec["outcome"] = "not_exists"; break;
      case DecisionOutcome::Kind::Unknown: rec["outcome"] = "unknown"; break;
    }
    rec["elapsedMillis"] = report.elapsed_ms;
    if (outcome.kind == DecisionOutcome::Kind::NotExists) {
      fs::path certPath =
          (logPath.has_parent_path() ? logPath.parent_path() : fs::path(".")) /
          ("cert-" + report.digest + ".json");
      std::ofstream certOut(certPath);
      certOut << certificate_file_json(space, bd, family, *outcome.nonexistence)
                     .dump(2)
              << "\n";
      report.certificate_path = certPath.string();
      rec["certificatePath"] = report.certificate_path;
    }
    log << rec.dump() << "\n";
    log.flush();
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace lipext
