#include "lanetopo/topology.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lanetopo/synth.hpp"

namespace lanetopo {

Topology topology_of(const Arrangement& arr) {
  Topology t;
  for (const auto& c : arr.curves) t.curves.push_back(c.id);
  std::sort(t.curves.begin(), t.curves.end());
  for (CurveId id : t.curves) t.orders[id] = intersection_order_tokens(arr, id);
  return t;
}

CurveCorrespondence::CurveCorrespondence(std::map<CurveId, CurveId> forward)
    : fwd_(std::move(forward)) {
  std::set<CurveId> seen;
  for (const auto& [from, to] : fwd_) {
    if (!seen.insert(to).second) {
      std::ostringstream os;
      os << "correspondence maps two curves onto " << to;
      throw ParameterError(os.str());
    }
  }
}

CurveCorrespondence CurveCorrespondence::identity(const std::vector<CurveId>& ids) {
  std::map<CurveId, CurveId> fwd;
  for (CurveId id : ids) fwd[id] = id;
  return CurveCorrespondence(std::move(fwd));
}

CurveId CurveCorrespondence::map(CurveId from) const {
  auto it = fwd_.find(from);
  if (it == fwd_.end()) {
    std::ostringstream os;
    os << "curve " << from << " has no correspondence";
    throw ParameterError(os.str());
  }
  return it->second;
}

bool CurveCorrespondence::maps(CurveId from) const { return fwd_.count(from) > 0; }

namespace {

Token map_token(const Token& tok, const CurveCorrespondence& corr) {
  Token out;
  out.reserve(tok.size());
  for (CurveId id : tok) out.push_back(corr.map(id));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool orders_equal(const Topology& a, const Topology& b, const CurveCorrespondence& corr) {
  if (a.curves.size() != b.curves.size()) return false;
  std::vector<CurveId> mapped;
  mapped.reserve(a.curves.size());
  for (CurveId id : a.curves) mapped.push_back(corr.map(id));
  std::sort(mapped.begin(), mapped.end());
  if (mapped != b.curves) return false;
  for (CurveId id : a.curves) {
    const auto& seq_a = a.orders.at(id);
    const auto& seq_b = b.orders.at(corr.map(id));
    if (seq_a.size() != seq_b.size()) return false;
    for (std::size_t i = 0; i < seq_a.size(); ++i)
      if (map_token(seq_a[i], corr) != seq_b[i]) return false;
  }
  return true;
}

bool cover_sets_equal(const std::vector<std::vector<CurveId>>& a,
                      const std::vector<std::vector<CurveId>>& b,
                      const CurveCorrespondence& corr) {
  if (a.size() != b.size()) return false;
  std::vector<std::vector<CurveId>> ma, mb;
  ma.reserve(a.size());
  mb.reserve(b.size());
  for (const auto& cover : a) ma.push_back(map_token(cover, corr));
  for (const auto& cover : b) {
    auto s = cover;
    std::sort(s.begin(), s.end());
    mb.push_back(std::move(s));
  }
  std::sort(ma.begin(), ma.end());
  std::sort(mb.begin(), mb.end());
  return ma == mb;
}

std::vector<std::vector<CurveId>> covers_of(const Arrangement& arr) {
  if (arr.cycles.empty()) throw ParameterError("arrangement has no extracted cycles");
  std::vector<std::vector<CurveId>> out;
  out.reserve(arr.cycles.size());
  for (const auto& mc : arr.cycles) out.push_back(mc.cover);
  return out;
}

const MinimalCycle& cycle_from_cover(const Arrangement& arr,
                                     const std::vector<CurveId>& cover) {
  if (arr.cycles.empty()) throw ParameterError("arrangement has no extracted cycles");
  std::vector<CurveId> q = cover;
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  const MinimalCycle* found = nullptr;
  for (const auto& mc : arr.cycles) {
    if (mc.cover != q) continue;
    if (found) {
      std::ostringstream os;
      os << "cycles " << found->id << " and " << mc.id
         << " share one cover set; covers do not identify cycles on this graph";
      throw AmbiguousCoverError(os.str());
    }
    found = &mc;
  }
  if (!found) throw CoverNotFoundError("no cycle has the requested cover");
  return *found;
}

ConsistencyReport check_order_cover_consistency(const LaneGraph& g, const DeformSpec& spec,
                                                std::uint64_t seed, const Config& cfg) {
  LaneGraph deformed = [&]() {
    if (spec.replace.empty()) return deform(g, spec.magnitude, seed, cfg);
    std::vector<LaneCurve> curves;
    curves.reserve(g.curves().size());
    for (const auto& c : g.curves()) {
      auto it = spec.replace.find(c.id);
      curves.push_back({c.id, c.role, it != spec.replace.end() ? it->second : c.bezier});
    }
    LaneGraph replaced(g.fov(), std::move(curves), g.incidence());
    if (spec.magnitude > 0.0) return deform(replaced, spec.magnitude, seed, cfg);
    auto report = validate_graph(replaced, cfg);
    if (!report.ok()) {
      std::ostringstream os;
      os << "replacement graph breaks the contract: " << to_string(report.violations[0].kind);
      throw DeformationRejected(os.str());
    }
    return replaced;
  }();

  Arrangement base = arrange_with_cycles(g, cfg);
  Arrangement moved = arrange_with_cycles(deformed, cfg);

  std::vector<CurveId> ids;
  for (const auto& c : g.curves()) ids.push_back(c.id);
  CurveCorrespondence corr = CurveCorrespondence::identity(ids);

  ConsistencyReport report;
  report.orders_same = orders_equal(topology_of(base), topology_of(moved), corr);
  report.covers_same = cover_sets_equal(covers_of(base), covers_of(moved), corr);
  return report;
}

}  // namespace lanetopo
