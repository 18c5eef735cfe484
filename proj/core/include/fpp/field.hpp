#pragma once

#include <cstdint>
#include <vector>

#include "fpp/lattice.hpp"
#include "fpp/schedule.hpp"

namespace fpp {

struct SeedInfo {
  uint64_t master_seed = 0;
  uint32_t replication = 0;

  bool operator==(const SeedInfo&) const = default;
};

// One sampled realization of passage times on all edges of a box, indexed by
// edge index.  Fully determined by (schedule, box, master_seed, replication).
struct WeightField {
  Box box;
  std::vector<double> weights;
  SeedInfo seed_info;

  double weight(int64_t edge_index) const {
    return weights[static_cast<size_t>(edge_index)];
  }

  // FNV-1a over the IEEE-754 bit patterns in edge-index order.
  uint64_t hash() const;

  // Throws std::domain_error if any weight is negative or the length does
  // not match the box edge count.  Solver entry points call this.
  void check_valid() const;
};

// Draws each edge's weight independently from its spec via a counter-based
// stream keyed on (master_seed, replication, edge_index): the result does not
// depend on iteration order or thread count.  Draw tag 0 is the base field.
WeightField sample_field(const DistributionSchedule& schedule,
                         const BoxGeometry& geom, uint64_t master_seed,
                         uint32_t replication);
WeightField sample_field(const DistributionSchedule& schedule, Box box,
                         uint64_t master_seed, uint32_t replication);

// The weight edge `edge_index` would get if resampled with a later draw tag
// (draw >= 1); used by the single-edge influence probes.
double resample_edge_weight(const DistributionSchedule& schedule,
                            const BoxGeometry& geom, int64_t edge_index,
                            uint64_t master_seed, uint32_t replication,
                            uint32_t draw);

// t_n(e) = min(t(e), n^alpha) on every edge, with the cap rounded down to the
// weight grid.  Idempotent, pointwise dominated by the input.
// Throws std::domain_error unless n >= 1 and 0 < alpha < 1/6.
WeightField truncate_field(const WeightField& w, int64_t n, double alpha);

}  // namespace fpp
