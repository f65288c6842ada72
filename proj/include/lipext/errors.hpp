#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lipext {

enum class Errc {
  NonSymmetric,
  NonzeroDiagonal,
  NonpositiveOffDiagonal,
  TriangleViolation,
  DegenerateDistance,
  MissingValue,
  LambdaOutOfRange,
  ExplicitMemberOutOfRange,
  InfeasibleOffValues,
  UnknownScenario,
  ParseError,
  DomainError,
  LogCorrupt,
  DegenerateInstance,
  InvalidArgument,
};

/// Library-wide exception. `where()` carries the point indices involved
/// (e.g. the violating triple for Errc::TriangleViolation).
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg, std::vector<int> where = {})
      : std::runtime_error(msg), code_(code), where_(std::move(where)) {}

  Errc code() const { return code_; }
  const std::vector<int>& where() const { return where_; }

private:
  Errc code_;
  std::vector<int> where_;
};

}  // namespace lipext
