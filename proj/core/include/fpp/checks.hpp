#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpp/experiment.hpp"

namespace fpp {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Solver vs exhaustive-enumeration reference on B_2 in d=2, src = origin,
// dst = (2, 0): full distance field, minimal time, canonical path against the
// literal tie-breaking procedure, and edge membership for every box edge.
// When min_tie_fraction > 0, additionally requires that at least that
// fraction of the instances saw a real tie.
CheckResult check_oracle_equivalence(const DistributionSchedule& schedule,
                                     int64_t n_fields, uint64_t seed,
                                     double min_tie_fraction = 0.0);

// Same comparison across the full diagonal of B_2 (corner to corner), where
// the 70 minimal-length staircases make multi-geodesic instances common;
// this is the tie-fidelity stress test.
CheckResult check_tie_break_oracle(const DistributionSchedule& schedule,
                                   int64_t n_fields, uint64_t seed,
                                   double min_tie_fraction);

// Draws `trials` staircase paths of each length in `ks` with independent
// weights from the schedule and checks the certified Chernoff bound
// P(T(pi) <= beta1 k) <= e^{-dk} within 3 Monte Carlo standard errors.
CheckResult check_chernoff_empirical(const DistributionSchedule& schedule,
                                     int32_t d, const ChernoffCertificate& cert,
                                     const std::vector<int64_t>& ks,
                                     int64_t trials, uint64_t seed);

// Coupling identity over a finished run: wherever G_n holds, the truncated
// and untruncated solves must agree exactly (time and path).
CheckResult check_coupling(const ExperimentData& data);

// Lipschitz influence: |delta T-hat| <= n^alpha on every probe, and nonzero
// deltas only on edges lying on a before/after geodesic.
CheckResult check_lipschitz(const ResolvedExperiment& resolved, int64_t n,
                            int64_t probes);

// Martingale lemma bound at every grid point:
// var(T-hat) <= 4 n^{2 alpha} mean_edges + 3 * SE(var).
CheckResult check_lemma_bound(const ExperimentSummary& summary);

// Per-realization triangle inequality T(0,2n) <= T(0,n) + T(n,2n) on shared
// fields, plus mean-level subadditivity across grid pairs within 3 SE.
CheckResult check_subadditivity(const ResolvedExperiment& resolved,
                                const ExperimentSummary& summary, int64_t n,
                                int64_t reps);

// Exact reproducibility: identical record bytes for identical configs, and
// identical summaries across thread counts.
CheckResult check_determinism(const ExperimentConfig& cfg);

// mean_T(n)/n nonincreasing within 3 SE, mu_hat at the grid minimum and
// above beta1.
CheckResult check_time_constant(const ResolvedExperiment& resolved,
                                const ExperimentSummary& summary);

// Empirical A_n^c / G_n^c frequencies against the closed-form bounds.
CheckResult check_event_bounds(const ExperimentSummary& summary);

// log-log variance slope below 1.5 at the top of its 95% interval.
CheckResult check_variance_ceiling(const ExperimentSummary& summary);

// Error-path fixture: a field with a negative weight must be rejected with a
// domain error, not crash or solve.
CheckResult check_negative_weight_rejected();

// The small default suite behind `fpp verify` (no config required).
std::vector<CheckResult> run_default_verification(int32_t threads);

}  // namespace fpp
