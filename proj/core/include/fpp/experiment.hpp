#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fpp/bounds.hpp"
#include "fpp/field.hpp"
#include "fpp/solver.hpp"
#include "fpp/stats.hpp"

namespace fpp {

// Raised when the requested boxes do not fit the memory budget; the CLI maps
// it to exit code 3.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int32_t d = 2;
  std::vector<int64_t> n_grid = {8, 16, 32, 64};
  int64_t replications = 200;
  DistributionSchedule schedule =
      DistributionSchedule::constant(DistributionSpec::shifted_uniform(0.5, 1.5));
  double eta = 0.5;
  std::optional<double> alpha;       // empty = auto via choose_alpha_k
  std::optional<double> box_factor;  // empty = auto via 8 mu_sup / beta1
  uint64_t master_seed = 20240801;
  std::string outputs = "out";
  int32_t threads = 0;  // 0 = hardware concurrency
  int64_t mem_limit_mb = 4096;
  double subseq_epsilon = 0.05;

  // Throws std::invalid_argument on malformed grids/counts and validates the
  // schedule against conditions (i)-(ii).
  void validate() const;
};

// Config with every "auto" value pinned; recorded in all output headers.
struct ResolvedExperiment {
  ExperimentConfig cfg;
  double alpha = 0.0;
  double box_factor = 0.0;
  BoundReport bounds;

  int32_t box_radius(int64_t n) const;
  // Philox stream id for (grid position, replication).
  uint32_t stream_id(size_t n_idx, int64_t rep) const;
  std::string header_text() const;  // resolved key=value header block
  uint64_t config_digest() const;
};

ResolvedExperiment resolve_experiment(const ExperimentConfig& cfg);

// One (n, replication) outcome.  `edges` counts the truncated canonical
// geodesic; an_holds is the truncated axis event A-hat_n(n); gn_holds is the
// all-weights-below-cap event on the solver box; coupled means the
// truncated and untruncated solves agree exactly (time and path).
struct ReplicationRecord {
  int64_t n = 0;
  int64_t rep = 0;
  double t = 0.0;
  double t_hat = 0.0;
  int64_t edges = 0;
  bool escaped = false;
  bool an_holds = false;
  bool gn_holds = false;
  bool coupled = false;
};

struct ExperimentData {
  ResolvedExperiment resolved;
  std::vector<ReplicationRecord> records;  // sorted by (n, rep)
};

struct PerNSummary {
  int64_t n = 0;
  int64_t reps = 0;
  MomentSummary t;
  MomentSummary t_hat;
  double mean_edges = 0.0;
  Frequency an_c;          // A-hat_n(n) fails
  Frequency gn_c;          // G_n fails
  Frequency escape;        // geodesic touched the solver-box boundary
  Frequency noncoupled;    // T != T-hat (or paths differ)
  int64_t gn_and_noncoupled = 0;  // must be 0: coupling is implied by G_n
  double an_bound_value = 0.0;
  double gn_bound_value = 0.0;
  double lemma_bound_value = 0.0;  // 4 n^{2 alpha} mean_edges
};

struct SubseqRow {
  int64_t m = 0;       // grid point, a perfect square
  int64_t sqrt_m = 0;
  double epsilon = 0.0;
  Frequency exceed;    // fraction of reps with |T_hat - mean| / m > epsilon
  double bound_shape = 0.0;  // sqrt_m^{-(2 - 6 alpha)}, up to a constant
};

struct ExperimentSummary {
  std::vector<PerNSummary> per_n;
  double mu_hat_fekete = 0.0;  // min over grid of mean_T(n)/n
  LineFit variance_fit;        // log var_T against log n
  std::vector<SubseqRow> subsequence;
};

using ProgressFn = std::function<void(int64_t done, int64_t total)>;

// Samples, solves and records every (n, replication) pair over a worker
// pool.  Fully reproducible from (cfg, master_seed): records never depend on
// thread count or scheduling.  Throws resource_error when the largest box
// exceeds the memory budget.
ExperimentData run_experiment(const ExperimentConfig& cfg,
                              const ProgressFn& progress = nullptr);

ExperimentSummary summarize(const ExperimentData& data);

// log-log OLS of var_T(n) against n over grid points with positive variance;
// invalid (not applicable) when fewer than 3 such points exist.
LineFit fit_variance_exponent(const ExperimentSummary& summary);

std::vector<SubseqRow> subsequence_diagnostic(const ExperimentData& data,
                                              double epsilon);

struct InfluenceReport {
  int64_t n = 0;
  int64_t probes = 0;
  double cap = 0.0;            // quantized n^alpha
  double max_abs_delta = 0.0;
  int64_t cap_violations = 0;      // |delta| > cap (must stay 0)
  int64_t support_violations = 0;  // delta != 0 off both geodesics (must stay 0)
  int64_t nonzero = 0;
  double mean_sq_delta = 0.0;
  double sum_over_edges_estimate = 0.0;  // #edges * mean_sq_delta
  double efron_stein_bound = 0.0;        // half the estimate
  double lemma_bound = 0.0;  // 4 n^{2 alpha} * edge count of the base geodesic
};

// Resamples one uniformly chosen edge per probe (fresh draw stream),
// re-solves the truncated problem and checks the paper's influence bounds.
InfluenceReport edge_influence_probe(const ResolvedExperiment& resolved,
                                     int64_t n, int64_t probes);

}  // namespace fpp
