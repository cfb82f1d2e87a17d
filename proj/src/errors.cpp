#include "lanetopo/errors.hpp"

#include <sstream>

namespace lanetopo {

int assumption_id(AssumptionKind kind) {
  switch (kind) {
    case AssumptionKind::MultipleIntersections: return 1;
    case AssumptionKind::SelfIntersection: return 2;
    case AssumptionKind::FloatingCurve: return 3;
    case AssumptionKind::CurveRepeatsInCycle: return 4;
  }
  return 0;
}

std::string to_string(AssumptionKind kind) {
  switch (kind) {
    case AssumptionKind::MultipleIntersections: return "multiple_intersections";
    case AssumptionKind::SelfIntersection: return "self_intersection";
    case AssumptionKind::FloatingCurve: return "floating_curve";
    case AssumptionKind::CurveRepeatsInCycle: return "curve_repeats_in_cycle";
  }
  return "unknown";
}

namespace {
std::string format_message(AssumptionKind kind, const std::vector<CurveId>& curves,
                           const std::string& detail) {
  std::ostringstream os;
  os << "assumption " << assumption_id(kind) << " (" << to_string(kind) << ") violated";
  if (!curves.empty()) {
    os << " by curve(s)";
    for (CurveId c : curves) os << ' ' << c;
  }
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}
}  // namespace

AssumptionViolation::AssumptionViolation(AssumptionKind kind, std::vector<CurveId> curves,
                                         const std::string& detail)
    : Error(format_message(kind, curves, detail)), kind_(kind), curves_(std::move(curves)) {}

}  // namespace lanetopo
