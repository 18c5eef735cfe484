#include "fpp/field.hpp"

#include <cstring>
#include <stdexcept>

#include "fpp/rng.hpp"

namespace fpp {

uint64_t WeightField::hash() const {
  uint64_t h = fnv1a64(nullptr, 0);
  for (double w : weights) {
    uint64_t bits;
    std::memcpy(&bits, &w, sizeof bits);
    h = fnv1a64_append(h, &bits, sizeof bits);
  }
  return h;
}

void WeightField::check_valid() const {
  if (static_cast<int64_t>(weights.size()) != box_edge_count(box))
    throw std::domain_error("weight field length does not match box");
  for (double w : weights)
    if (!(w >= 0.0))
      throw std::domain_error("weight field contains a negative weight");
}

WeightField sample_field(const DistributionSchedule& schedule,
                         const BoxGeometry& geom, uint64_t master_seed,
                         uint32_t replication) {
  WeightField f;
  f.box = geom.box();
  f.seed_info = {master_seed, replication};
  const int64_t m = geom.edge_count();
  f.weights.resize(static_cast<size_t>(m));
  const bool geometric = schedule.rule() == ScheduleRule::kCoordinate;
  for (int64_t i = 0; i < m; ++i) {
    const DistributionSpec& spec =
        geometric ? schedule.spec_for_edge(geom.edge_from_index(i), i)
                  : schedule.spec_for_edge_index(i);
    double u = philox_u01(master_seed, static_cast<uint64_t>(i), replication, 0);
    f.weights[static_cast<size_t>(i)] = spec.sample(u);
  }
  return f;
}

WeightField sample_field(const DistributionSchedule& schedule, Box box,
                         uint64_t master_seed, uint32_t replication) {
  return sample_field(schedule, BoxGeometry(box), master_seed, replication);
}

double resample_edge_weight(const DistributionSchedule& schedule,
                            const BoxGeometry& geom, int64_t edge_index,
                            uint64_t master_seed, uint32_t replication,
                            uint32_t draw) {
  const DistributionSpec& spec =
      schedule.rule() == ScheduleRule::kCoordinate
          ? schedule.spec_for_edge(geom.edge_from_index(edge_index), edge_index)
          : schedule.spec_for_edge_index(edge_index);
  double u = philox_u01(master_seed, static_cast<uint64_t>(edge_index),
                        replication, draw);
  return spec.sample(u);
}

WeightField truncate_field(const WeightField& w, int64_t n, double alpha) {
  const double cap = quantized_cap(n, alpha);
  WeightField out = w;
  for (double& v : out.weights)
    if (v > cap) v = cap;
  return out;
}

}  // namespace fpp
