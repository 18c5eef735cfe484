#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpp/distributions.hpp"
#include "fpp/lattice.hpp"

namespace fpp {

// How a schedule maps edges to specs.
enum class ScheduleRule : uint8_t {
  kConstant,    // every edge uses specs[0] (the iid case)
  kPeriodic,    // edge with index i uses specs[i mod m]
  kCoordinate,  // spec chosen from the edge's geometry:
                //   specs[(sum of base coords + axis) mod m]
};

// Assignment of a passage-time law to every edge.  The set of distinct specs
// is finite by construction, so every supremum over edges in the paper's
// conditions is a maximum over this set and can be evaluated exactly.
class DistributionSchedule {
 public:
  DistributionSchedule(ScheduleRule rule, std::vector<DistributionSpec> specs);

  static DistributionSchedule constant(DistributionSpec spec);

  ScheduleRule rule() const { return rule_; }
  const std::vector<DistributionSpec>& specs() const { return specs_; }
  size_t period() const { return specs_.size(); }

  const DistributionSpec& spec_for_edge_index(int64_t edge_index) const;
  const DistributionSpec& spec_for_edge(const EdgeId& e,
                                        int64_t edge_index) const;

  // Spec of the i-th axis edge f_i (between (i-1,0,..) and (i,0,..)), i >= 1.
  // Index-based rules use the axis position i-1; the coordinate rule uses
  // f_i's geometry.
  const DistributionSpec& spec_for_axis_edge(int32_t d, int64_t i) const;

  // sup_i P(t(e_i) < eps), exact over the distinct specs.
  double small_time_mass(double eps) const;

  // sup_i E t(e_i)^q; +infinity when any family's ceiling is at or below q.
  double moment_sup(double q) const;

  // sup_i / inf_i of E t(e_i).  The paper's mu is mean_sup().
  double mean_sup() const;
  double mean_inf() const;

  // max_i E e^{-s t(e_i)}.
  double laplace_sup(double s) const;

  // Checks the paper's standing hypotheses for this schedule:
  //   (i)  sup_i P(t < eps) -> 0 as eps -> 0   (no spec has mass at 0)
  //   (ii) sup_i E t^{6(1+d)+eta} < infinity
  // plus the derived requirements 0 < inf_i E t and sup_i E t < infinity.
  // Throws std::invalid_argument describing the first violated condition.
  void validate(int32_t d, double eta) const;

  std::string to_string() const;
  uint64_t digest() const;

  bool operator==(const DistributionSchedule&) const = default;

 private:
  ScheduleRule rule_;
  std::vector<DistributionSpec> specs_;
};

}  // namespace fpp
