#include "fpp/checks.hpp"

#include <cmath>
#include <cstdio>

#include "fpp/records.hpp"
#include "fpp/reference.hpp"
#include "fpp/rng.hpp"

namespace fpp {

namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

}  // namespace

namespace {

CheckResult oracle_comparison(const DistributionSchedule& schedule,
                              int64_t n_fields, uint64_t seed,
                              double min_tie_fraction, const Site& src,
                              const Site& dst, const char* name) {
  CheckResult res;
  res.name = name;

  const Box box{2, 2};
  const BoxGeometry geom(box);

  int64_t field_mismatch = 0, time_mismatch = 0, path_mismatch = 0,
          member_mismatch = 0, tie_instances = 0;
  for (int64_t f = 0; f < n_fields; ++f) {
    WeightField w =
        sample_field(schedule, geom, seed, static_cast<uint32_t>(f));

    const std::vector<double> ref_field = reference_shortest_field(w, src);
    const DistanceField fast = shortest_time_field(geom, w, src);
    for (int64_t i = 0; i < geom.site_count(); ++i)
      if (ref_field[static_cast<size_t>(i)] != fast.at(i)) ++field_mismatch;

    const ReferenceSolution sol = reference_geodesics(w, src, dst);
    const GeodesicResult got = canonical_geodesic(geom, w, src, dst);
    if (got.time != sol.min_time) ++time_mismatch;
    const LatticePath want = reference_canonical_path(sol);
    if (!(got.path == want)) ++path_mismatch;
    if (got.tie_events > 0) ++tie_instances;

    const DistanceField bwd = shortest_time_field(geom, w, dst);
    const double total = fast.at(geom.site_index(dst));
    for (int64_t e = 0; e < geom.edge_count(); ++e) {
      const EdgeId edge = geom.edge_from_index(e);
      const bool fast_member = on_some_geodesic(geom, w, fast, bwd, total, edge);
      if (fast_member != reference_on_some_geodesic(sol, edge))
        ++member_mismatch;
    }
  }

  const double tie_frac =
      static_cast<double>(tie_instances) / static_cast<double>(n_fields);
  res.pass = field_mismatch == 0 && time_mismatch == 0 && path_mismatch == 0 &&
             member_mismatch == 0 && tie_frac >= min_tie_fraction;
  res.detail =
      fmt("%lld fields: field/time/path/member mismatches %lld/%lld/%lld/%lld, "
          "tie fraction %.2f (need >= %.2f)",
          static_cast<long long>(n_fields), static_cast<long long>(field_mismatch),
          static_cast<long long>(time_mismatch), static_cast<long long>(path_mismatch),
          static_cast<long long>(member_mismatch), tie_frac, min_tie_fraction);
  return res;
}

}  // namespace

CheckResult check_oracle_equivalence(const DistributionSchedule& schedule,
                                     int64_t n_fields, uint64_t seed,
                                     double min_tie_fraction) {
  return oracle_comparison(schedule, n_fields, seed, min_tie_fraction,
                           axis_site(2, 0), axis_site(2, 2),
                           "oracle_equivalence");
}

CheckResult check_tie_break_oracle(const DistributionSchedule& schedule,
                                   int64_t n_fields, uint64_t seed,
                                   double min_tie_fraction) {
  Site corner_lo;
  corner_lo.coords = {-2, -2};
  Site corner_hi;
  corner_hi.coords = {2, 2};
  return oracle_comparison(schedule, n_fields, seed, min_tie_fraction,
                           corner_lo, corner_hi, "tie_break_oracle");
}

CheckResult check_chernoff_empirical(const DistributionSchedule& schedule,
                                     int32_t d, const ChernoffCertificate& cert,
                                     const std::vector<int64_t>& ks,
                                     int64_t trials, uint64_t seed) {
  CheckResult res;
  res.name = "chernoff_certificate";
  res.pass = true;
  std::string detail;
  for (int64_t k : ks) {
    int64_t hits = 0;
    for (int64_t trial = 0; trial < trials; ++trial) {
      // a staircase path: step axes drawn at random, edges never repeat,
      // weights drawn independently per (trial, step)
      double total = 0.0;
      for (int64_t step = 0; step < k; ++step) {
        const DistributionSpec& spec =
            schedule.spec_for_edge_index(step);
        const double u =
            philox_u01(seed, static_cast<uint64_t>(trial),
                       static_cast<uint32_t>(k), static_cast<uint32_t>(step));
        total += spec.sample(u);
      }
      if (total <= cert.beta1 * static_cast<double>(k)) ++hits;
    }
    const double bound = std::exp(-static_cast<double>(d * k));
    const double freq = static_cast<double>(hits) / static_cast<double>(trials);
    // standard error under the certified bound itself: a single hit against
    // a sub-1e-8 bound is already a violation
    const double se = std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
    const bool ok = freq <= bound + 3.0 * se;
    if (!ok) res.pass = false;
    detail += fmt("k=%lld hits=%lld bound=%.3g; ", static_cast<long long>(k),
                  static_cast<long long>(hits), bound);
  }
  res.detail = detail;
  return res;
}

CheckResult check_coupling(const ExperimentData& data) {
  CheckResult res;
  res.name = "coupling_identity";
  int64_t violations = 0, gn_count = 0;
  for (const auto& r : data.records) {
    if (r.gn_holds) {
      ++gn_count;
      if (!r.coupled) ++violations;
    }
    if (r.t_hat > r.t) ++violations;  // domination must hold everywhere
  }
  res.pass = violations == 0;
  res.detail = fmt("%lld records, %lld with G_n, %lld violations",
                   static_cast<long long>(data.records.size()),
                   static_cast<long long>(gn_count),
                   static_cast<long long>(violations));
  return res;
}

CheckResult check_lipschitz(const ResolvedExperiment& resolved, int64_t n,
                            int64_t probes) {
  CheckResult res;
  res.name = "lipschitz_influence";
  InfluenceReport rep = edge_influence_probe(resolved, n, probes);
  res.pass = rep.cap_violations == 0 && rep.support_violations == 0;
  res.detail = fmt(
      "%lld probes at n=%lld: max|dT|=%.6g cap=%.6g, cap/support violations "
      "%lld/%lld, nonzero %lld, ES estimate %.6g vs lemma bound %.6g",
      static_cast<long long>(rep.probes), static_cast<long long>(n),
      rep.max_abs_delta, rep.cap, static_cast<long long>(rep.cap_violations),
      static_cast<long long>(rep.support_violations),
      static_cast<long long>(rep.nonzero), rep.efron_stein_bound,
      rep.lemma_bound);
  return res;
}

CheckResult check_lemma_bound(const ExperimentSummary& summary) {
  CheckResult res;
  res.name = "lemma_variance_bound";
  res.pass = true;
  std::string detail;
  for (const auto& row : summary.per_n) {
    const double slack = row.lemma_bound_value + 3.0 * row.t_hat.se_variance;
    const bool ok = row.t_hat.variance <= slack;
    if (!ok) res.pass = false;
    detail += fmt("n=%lld var=%.4g bound=%.4g; ", static_cast<long long>(row.n),
                  row.t_hat.variance, row.lemma_bound_value);
  }
  res.detail = detail;
  return res;
}

CheckResult check_subadditivity(const ResolvedExperiment& resolved,
                                const ExperimentSummary& summary, int64_t n,
                                int64_t reps) {
  CheckResult res;
  res.name = "subadditivity";
  const auto& cfg = resolved.cfg;
  const BoxGeometry geom(
      Box{cfg.d, resolved.box_radius(2 * n)});
  int64_t triangle_violations = 0;
  for (int64_t rep = 0; rep < reps; ++rep) {
    WeightField w = sample_field(cfg.schedule, geom, cfg.master_seed ^ 0x5u,
                                 static_cast<uint32_t>(rep));
    const Site a = axis_site(cfg.d, 0);
    const Site b = axis_site(cfg.d, static_cast<int32_t>(n));
    const Site c = axis_site(cfg.d, static_cast<int32_t>(2 * n));
    const double t_ab = canonical_geodesic(geom, w, a, b).time;
    const double t_bc = canonical_geodesic(geom, w, b, c).time;
    const double t_ac = canonical_geodesic(geom, w, a, c).time;
    if (t_ac > t_ab + t_bc) ++triangle_violations;
  }

  // mean-level subadditivity on grid pairs (n, n) -> 2n within 3 SE
  int64_t mean_violations = 0;
  for (const auto& row : summary.per_n) {
    for (const auto& row2 : summary.per_n) {
      if (row2.n != 2 * row.n) continue;
      const double lhs = row2.t.mean;
      const double rhs = 2.0 * row.t.mean;
      const double se = std::sqrt(row2.t.se_mean * row2.t.se_mean +
                                  2.0 * row.t.se_mean * row.t.se_mean);
      if (lhs > rhs + 3.0 * se) ++mean_violations;
    }
  }
  res.pass = triangle_violations == 0 && mean_violations == 0;
  res.detail = fmt("%lld shared-field triples, %lld triangle violations, "
                   "%lld mean-level violations",
                   static_cast<long long>(reps),
                   static_cast<long long>(triangle_violations),
                   static_cast<long long>(mean_violations));
  return res;
}

CheckResult check_determinism(const ExperimentConfig& cfg) {
  CheckResult res;
  res.name = "determinism";
  ExperimentData run1 = run_experiment(cfg);
  ExperimentData run2 = run_experiment(cfg);
  const std::string bytes1 = render_records(run1);
  const std::string bytes2 = render_records(run2);

  ExperimentConfig alt = cfg;
  alt.threads = cfg.threads == 1 ? 2 : 1;
  ExperimentData run3 = run_experiment(alt);
  const std::string sum1 = render_summary_text(run1, summarize(run1));
  const std::string sum3 = render_summary_text(run3, summarize(run3));

  res.pass = bytes1 == bytes2 && sum1 == sum3;
  res.detail = fmt("record bytes identical: %s; summary thread-invariant: %s",
                   bytes1 == bytes2 ? "yes" : "NO", sum1 == sum3 ? "yes" : "NO");
  return res;
}

CheckResult check_time_constant(const ResolvedExperiment& resolved,
                                const ExperimentSummary& summary) {
  CheckResult res;
  res.name = "time_constant";
  int64_t monotone_violations = 0;
  for (size_t i = 1; i < summary.per_n.size(); ++i) {
    const auto& prev = summary.per_n[i - 1];
    const auto& cur = summary.per_n[i];
    const double a = prev.t.mean / static_cast<double>(prev.n);
    const double b = cur.t.mean / static_cast<double>(cur.n);
    const double se =
        std::sqrt(std::pow(prev.t.se_mean / prev.n, 2.0) +
                  std::pow(cur.t.se_mean / cur.n, 2.0));
    if (b > a + 3.0 * se) ++monotone_violations;
  }
  const auto& first = summary.per_n.front();
  const double first_ratio = first.t.mean / static_cast<double>(first.n);
  const double beta1 = resolved.bounds.chernoff.beta1;
  const bool ends_ok =
      summary.mu_hat_fekete <= first_ratio && summary.mu_hat_fekete >= beta1;
  res.pass = monotone_violations == 0 && ends_ok;
  res.detail = fmt("mu_hat=%.6g in [beta1=%.6g, mean_T(%lld)/%lld=%.6g], "
                   "monotone violations %lld",
                   summary.mu_hat_fekete, beta1,
                   static_cast<long long>(first.n),
                   static_cast<long long>(first.n), first_ratio,
                   static_cast<long long>(monotone_violations));
  return res;
}

CheckResult check_event_bounds(const ExperimentSummary& summary) {
  CheckResult res;
  res.name = "event_frequency_bounds";
  res.pass = true;
  std::string detail;
  for (const auto& row : summary.per_n) {
    const bool an_ok =
        row.an_c.p_hat <= row.an_bound_value + 3.0 * row.an_c.se;
    const bool gn_ok =
        row.gn_c.p_hat <= row.gn_bound_value + 3.0 * row.gn_c.se;
    if (!an_ok || !gn_ok) res.pass = false;
    detail += fmt("n=%lld an %.3g<=%.3g gn %.3g<=%.3g; ",
                  static_cast<long long>(row.n), row.an_c.p_hat,
                  row.an_bound_value, row.gn_c.p_hat, row.gn_bound_value);
  }
  res.detail = detail;
  return res;
}

CheckResult check_variance_ceiling(const ExperimentSummary& summary) {
  CheckResult res;
  res.name = "variance_scaling_ceiling";
  const LineFit& fit = summary.variance_fit;
  if (!fit.valid) {
    res.pass = false;
    res.detail = "variance fit not applicable (degenerate grid)";
    return res;
  }
  const double upper = fit.slope + fit.ci95_halfwidth;
  res.pass = upper < 1.5;
  res.detail = fmt("slope=%.4f, 95%% upper end %.4f (ceiling 1.5), R2=%.4f",
                   fit.slope, upper, fit.r2);
  return res;
}

CheckResult check_negative_weight_rejected() {
  CheckResult res;
  res.name = "negative_weight_rejected";
  const BoxGeometry geom(Box{2, 1});
  WeightField bad;
  bad.box = geom.box();
  bad.weights.assign(static_cast<size_t>(geom.edge_count()), 1.0);
  bad.weights[3] = -1.0;
  try {
    shortest_time_field(geom, bad, axis_site(2, 0));
    res.pass = false;
    res.detail = "negative weight was accepted";
  } catch (const std::domain_error& e) {
    res.pass = true;
    res.detail = std::string("rejected as expected: ") + e.what();
  }
  return res;
}

std::vector<CheckResult> run_default_verification(int32_t threads) {
  std::vector<CheckResult> out;

  const auto uniform =
      DistributionSchedule::constant(DistributionSpec::shifted_uniform(0.5, 1.5));
  const auto bernoulli = DistributionSchedule::constant(
      DistributionSpec::bernoulli_mix(0.5, 1.0, 0.5));

  out.push_back(check_oracle_equivalence(uniform, 40, 0xfeedu));
  out.push_back(check_tie_break_oracle(bernoulli, 40, 0xbeefu, 0.3));

  ExperimentConfig cfg;
  cfg.n_grid = {4, 8, 16};
  cfg.replications = 40;
  cfg.box_factor = 2.0;
  cfg.threads = threads;
  cfg.master_seed = 0x5eedu;
  ResolvedExperiment resolved = resolve_experiment(cfg);

  out.push_back(check_chernoff_empirical(cfg.schedule, cfg.d,
                                         resolved.bounds.chernoff, {10, 20},
                                         2000, 0xc0ffeeu));

  ExperimentData data = run_experiment(cfg);
  ExperimentSummary summary = summarize(data);
  out.push_back(check_coupling(data));
  out.push_back(check_lemma_bound(summary));
  out.push_back(check_lipschitz(resolved, 16, 100));
  out.push_back(check_subadditivity(resolved, summary, 8, 10));
  out.push_back(check_time_constant(resolved, summary));
  out.push_back(check_event_bounds(summary));

  ExperimentConfig det = cfg;
  det.n_grid = {4, 8};
  det.replications = 10;
  out.push_back(check_determinism(det));

  out.push_back(check_negative_weight_rejected());
  return out;
}

}  // namespace fpp
