#pragma once

#include <vector>

#include "fpp/field.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// Brute-force reference implementations over exhaustive simple-path
// enumeration.  Deliberately independent of the Dijkstra solver: these share
// no search code with it and are only usable on small boxes.  The test suite
// and the `verify` subcommand check the solver against them.

struct ReferenceSolution {
  double min_time = 0.0;
  std::vector<LatticePath> geodesics;  // every simple path attaining min_time
};

// All minimal-time simple paths src->dst inside the field's box.
ReferenceSolution reference_geodesics(const WeightField& w, const Site& src,
                                      const Site& dst);

// Minimal time from src to every site (same indexing as BoxGeometry).
std::vector<double> reference_shortest_field(const WeightField& w,
                                             const Site& src);

// The literal iterative tie-breaking procedure applied to the enumerated
// geodesic set: repeatedly keep the paths whose next edge centre is
// lexicographically minimal in coordinate order (coord_d, ..., coord_1).
LatticePath reference_canonical_path(const ReferenceSolution& sol);

bool reference_on_some_geodesic(const ReferenceSolution& sol, const EdgeId& e);

}  // namespace fpp
