#pragma once

#include <cstdint>
#include <vector>

#include "fpp/field.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// Minimal passage times from one source to every site of the box, indexed by
// site index.  All entries are exact dyadic sums of the field's weights, so
// equality tests against them are meaningful.
struct DistanceField {
  std::vector<double> dist;

  double at(int64_t site_idx) const {
    return dist[static_cast<size_t>(site_idx)];
  }
};

// The canonical geodesic between two sites.
struct GeodesicResult {
  double time = 0.0;
  LatticePath path;
  int64_t edge_count = 0;
  int64_t tie_events = 0;     // tie-break steps that saw > 1 candidate edge
  int32_t max_abs_coord = 0;  // max |coordinate| over the path's sites
  int32_t solver_radius = 0;  // L of the box the solve ran in

  bool contained_in(int32_t radius) const { return max_abs_coord <= radius; }
  // Path touches the boundary shell of the solver box, i.e. the box may have
  // constrained it.
  bool touches_boundary() const { return max_abs_coord >= solver_radius; }
};

DistanceField shortest_time_field(const BoxGeometry& geom,
                                  const WeightField& w, const Site& src);
DistanceField shortest_time_field(const WeightField& w, const Site& src);

// Candidate-edge iteration order inside the solver.  The canonical result
// must not depend on it; tests run both and assert equality.
enum class NeighborOrder { kForward, kReversed };

// The unique geodesic selected by iterative tie-breaking: among all
// minimal-time paths extending the current prefix, take the next edge whose
// centre is lexicographically minimal in coordinate order
// (coord_d, ..., coord_2, coord_1) — at d = 2 this is min y, then min x.
// Implemented with forward+backward distance fields; all time comparisons
// are exact (see kWeightGrid).
GeodesicResult canonical_geodesic(const BoxGeometry& geom, const WeightField& w,
                                  const Site& src, const Site& dst,
                                  NeighborOrder order = NeighborOrder::kForward);
GeodesicResult canonical_geodesic(const WeightField& w, const Site& src,
                                  const Site& dst);

// True iff e lies on at least one minimal-time src->dst path:
// min(dF(u)+w(e)+dB(v), dF(v)+w(e)+dB(u)) == T, where the fields and the
// total time T come from the same solve.
bool on_some_geodesic(const BoxGeometry& geom, const WeightField& w,
                      const DistanceField& forward, const DistanceField& backward,
                      double total, const EdgeId& e);
bool on_some_geodesic(const WeightField& w, const Site& src, const Site& dst,
                      const EdgeId& e);

// canonical_geodesic on truncate_field(w, n, alpha).
GeodesicResult solve_truncated(const BoxGeometry& geom, const WeightField& w,
                               int64_t n, double alpha, const Site& src,
                               const Site& dst);

}  // namespace fpp
