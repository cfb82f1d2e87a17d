#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lanetopo {

using CurveId = std::int32_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument to a library call (out-of-range parameter, dimension
/// mismatch, unknown id).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or JSON payload.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A derived structure violated its own invariants; indicates a tolerance
/// failure upstream rather than bad user input.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

// The input-contract assumptions a lane graph must satisfy:
//   1. any two curves intersect at most once
//   2. no curve intersects itself
//   3. no curve is floating (every lane endpoint connects or lies on the
//      field-of-view border)
//   4. a curve bounds any single enclosed region at most once
enum class AssumptionKind {
  MultipleIntersections,
  SelfIntersection,
  FloatingCurve,
  CurveRepeatsInCycle,
};

int assumption_id(AssumptionKind kind);
std::string to_string(AssumptionKind kind);

/// A requested deformation produced a graph that breaks the contract.
class DeformationRejected : public Error {
 public:
  using Error::Error;
};

/// Input violates one of the numbered graph assumptions.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(AssumptionKind kind, std::vector<CurveId> curves,
                      const std::string& detail);

  AssumptionKind kind() const { return kind_; }
  const std::vector<CurveId>& curves() const { return curves_; }

 private:
  AssumptionKind kind_;
  std::vector<CurveId> curves_;
};

}  // namespace lanetopo
