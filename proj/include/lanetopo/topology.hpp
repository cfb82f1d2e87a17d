#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lanetopo/arrangement.hpp"

namespace lanetopo {

/// Intersection structure of a graph: which curves exist and, per curve, the
/// ordered token sequence of crossings along it.
struct Topology {
  std::vector<CurveId> curves;  // sorted
  std::map<CurveId, std::vector<Token>> orders;
};

Topology topology_of(const Arrangement& arr);

/// Bijection between the curve ids of two graphs. Lookups of unmapped ids
/// throw ParameterError.
class CurveCorrespondence {
 public:
  CurveCorrespondence() = default;
  explicit CurveCorrespondence(std::map<CurveId, CurveId> forward);  // must be injective

  static CurveCorrespondence identity(const std::vector<CurveId>& ids);

  CurveId map(CurveId from) const;
  bool maps(CurveId from) const;
  const std::map<CurveId, CurveId>& forward() const { return fwd_; }

 private:
  std::map<CurveId, CurveId> fwd_;
};

/// True when both graphs have the same curves under corr and each curve's
/// token sequence matches (tokens of `a` mapped through corr).
bool orders_equal(const Topology& a, const Topology& b, const CurveCorrespondence& corr);

/// True when the two families of cover sets are equal as sets of sets
/// (covers of `a` mapped through corr).
bool cover_sets_equal(const std::vector<std::vector<CurveId>>& a,
                      const std::vector<std::vector<CurveId>>& b,
                      const CurveCorrespondence& corr);

std::vector<std::vector<CurveId>> covers_of(const Arrangement& arr);

class CoverNotFoundError : public Error {
 public:
  using Error::Error;
};

/// Two distinct cycles share one cover set. On a validated graph this is a
/// counterexample to cover-identifiability and worth reporting loudly.
class AmbiguousCoverError : public Error {
 public:
  using Error::Error;
};

/// The unique cycle whose cover equals `cover` (order-insensitive).
const MinimalCycle& cycle_from_cover(const Arrangement& arr, const std::vector<CurveId>& cover);

/// Deformation request for consistency checks: explicit replacement curves
/// and/or a random control-point perturbation of the given magnitude.
struct DeformSpec {
  double magnitude = 0.0;
  std::map<CurveId, QuadBezier> replace;
};

struct ConsistencyReport {
  bool orders_same = false;
  bool covers_same = false;
  bool consistent() const { return orders_same == covers_same; }
};

/// Deforms g per spec/seed, revalidates (DeformationRejected when the result
/// breaks the contract), and reports whether intersection orders and cover
/// sets agree between original and deformed graph under the identity
/// correspondence. The two answers matching is the property the cycle
/// formulation rests on.
ConsistencyReport check_order_cover_consistency(const LaneGraph& g, const DeformSpec& spec,
                                                std::uint64_t seed, const Config& cfg = {});

}  // namespace lanetopo
