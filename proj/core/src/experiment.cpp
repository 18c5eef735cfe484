#include "fpp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "fpp/rng.hpp"

namespace fpp {

namespace {

constexpr uint32_t kStreamStride = 1u << 20;  // reps per grid slot

int32_t hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int32_t>(n);
}

double sum_axis_edges(const BoxGeometry& geom, const std::vector<double>& w,
                      int32_t d, int64_t count) {
  double s = 0.0;
  for (int64_t i = 1; i <= count; ++i)
    s += w[static_cast<size_t>(geom.edge_index(axis_edge(d, static_cast<int32_t>(i))))];
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  if (n_grid.empty()) throw std::invalid_argument("n_grid must be non-empty");
  for (size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw std::invalid_argument("n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("n_grid must be strictly increasing");
  }
  if (n_grid.size() >= 4096)
    throw std::invalid_argument("n_grid too long (stream id space)");
  if (replications < 2)
    throw std::invalid_argument(
        "replications must be >= 2 (variance needs at least two)");
  if (replications >= kStreamStride)
    throw std::invalid_argument("replications must be below 2^20");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0 / 6.0))
    throw std::invalid_argument("alpha must lie in (0, 1/6)");
  if (box_factor && !(*box_factor >= 2.0))
    throw std::invalid_argument(
        "box_factor must be >= 2 (the axis event A_n needs the edges f_1..f_2n)");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (mem_limit_mb < 1) throw std::invalid_argument("mem_limit_mb must be >= 1");
  if (!(subseq_epsilon > 0.0))
    throw std::invalid_argument("subseq_epsilon must be > 0");
  schedule.validate(d, eta);
}

int32_t ResolvedExperiment::box_radius(int64_t n) const {
  double L = std::ceil(box_factor * static_cast<double>(n));
  if (L > 1e9) throw resource_error("box radius overflows practical limits");
  return static_cast<int32_t>(L);
}

uint32_t ResolvedExperiment::stream_id(size_t n_idx, int64_t rep) const {
  return static_cast<uint32_t>(n_idx) * kStreamStride + static_cast<uint32_t>(rep);
}

std::string ResolvedExperiment::header_text() const {
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "d=%d", cfg.d);
  out += buf;
  out += " n_grid=";
  for (size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (i) out += "|";
    out += std::to_string(cfg.n_grid[i]);
  }
  std::snprintf(buf, sizeof buf,
                " replications=%lld seed=%llu eta=%.17g alpha=%.17g "
                "box_factor=%.17g beta1=%.17g s=%.17g eps=%.17g K=%.17g "
                "subseq_epsilon=%.17g schedule=%s",
                static_cast<long long>(cfg.replications),
                static_cast<unsigned long long>(cfg.master_seed), cfg.eta,
                alpha, box_factor, bounds.chernoff.beta1, bounds.chernoff.s,
                bounds.chernoff.eps, bounds.cap_k, cfg.subseq_epsilon,
                cfg.schedule.to_string().c_str());
  out += buf;
  return out;
}

uint64_t ResolvedExperiment::config_digest() const {
  std::string h = header_text();
  return fnv1a64(h.data(), h.size());
}

ResolvedExperiment resolve_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ResolvedExperiment r;
  r.cfg = cfg;
  r.bounds = derive_bound_report(cfg.schedule, cfg.d, cfg.eta);
  r.alpha = cfg.alpha ? *cfg.alpha : r.bounds.alpha;
  r.box_factor = cfg.box_factor ? *cfg.box_factor : r.bounds.box_factor;
  if (r.box_factor < 2.0)
    throw std::invalid_argument("resolved box_factor below 2");
  return r;
}

namespace {

// Estimated peak bytes per worker solving boxes of radius L.
int64_t bytes_per_worker(int32_t d, int32_t radius) {
  Box box{d, radius};
  const int64_t sites = box_site_count(box);
  const int64_t edges = box_edge_count(box);
  // two weight fields + two distance fields + settled flags + heap slack
  return edges * 16 + sites * 56;
}

struct UnitOutcome {
  ReplicationRecord record;
  std::string error;  // non-empty on failure
};

}  // namespace

ExperimentData run_experiment(const ExperimentConfig& cfg,
                              const ProgressFn& progress) {
  ExperimentData data;
  data.resolved = resolve_experiment(cfg);
  const ResolvedExperiment& res = data.resolved;

  const int32_t workers =
      std::min<int32_t>(cfg.threads == 0 ? hardware_threads() : cfg.threads,
                        static_cast<int32_t>(cfg.n_grid.size() * cfg.replications));

  // Upfront feasibility: refuse rather than bias results by shrinking boxes.
  const int32_t max_radius = res.box_radius(cfg.n_grid.back());
  const int64_t need =
      static_cast<int64_t>(workers) * bytes_per_worker(cfg.d, max_radius);
  if (need > cfg.mem_limit_mb * (1ll << 20)) {
    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "refusing: box B_%d in d=%d needs ~%lld MiB across %d workers "
                  "(limit %lld MiB); raise mem_limit_mb or shrink the grid",
                  max_radius, cfg.d, static_cast<long long>(need >> 20), workers,
                  static_cast<long long>(cfg.mem_limit_mb));
    throw resource_error(msg);
  }

  // Geometry per grid point, shared read-only across workers.
  std::vector<std::unique_ptr<BoxGeometry>> geoms;
  geoms.reserve(cfg.n_grid.size());
  for (int64_t n : cfg.n_grid)
    geoms.push_back(std::make_unique<BoxGeometry>(Box{cfg.d, res.box_radius(n)}));

  const int64_t total_units =
      static_cast<int64_t>(cfg.n_grid.size()) * cfg.replications;
  std::vector<UnitOutcome> outcomes(static_cast<size_t>(total_units));
  std::atomic<int64_t> next_unit{0};
  std::atomic<int64_t> done_units{0};

  auto run_unit = [&](int64_t unit) {
    const size_t n_idx = static_cast<size_t>(unit / cfg.replications);
    const int64_t rep = unit % cfg.replications;
    const int64_t n = cfg.n_grid[n_idx];
    const BoxGeometry& geom = *geoms[n_idx];
    UnitOutcome& out = outcomes[static_cast<size_t>(unit)];
    try {
      WeightField w = sample_field(cfg.schedule, geom, cfg.master_seed,
                                   res.stream_id(n_idx, rep));
      const Site src = axis_site(cfg.d, 0);
      const Site dst = axis_site(cfg.d, static_cast<int32_t>(n));

      GeodesicResult plain = canonical_geodesic(geom, w, src, dst);
      GeodesicResult truncated =
          solve_truncated(geom, w, n, res.alpha, src, dst);

      if (truncated.time > plain.time)
        throw std::logic_error("truncated time exceeds untruncated time");
      if (truncated.edge_count < n || plain.edge_count < n)
        throw std::logic_error("geodesic shorter than the l1 distance");

      const double cap = quantized_cap(n, res.alpha);
      bool gn = true;
      for (double v : w.weights) {
        if (!(v < cap)) {
          gn = false;
          break;
        }
      }
      // A-hat_n(n): truncated weights along the first 2n axis edges.
      WeightField wt = truncate_field(w, n, res.alpha);
      const double axis_sum = sum_axis_edges(geom, wt.weights, cfg.d, 2 * n);
      const bool an = axis_sum <= 6.0 * res.bounds.mu_sup * static_cast<double>(n);

      ReplicationRecord rec;
      rec.n = n;
      rec.rep = rep;
      rec.t = plain.time;
      rec.t_hat = truncated.time;
      rec.edges = truncated.edge_count;
      rec.escaped = plain.touches_boundary() || truncated.touches_boundary();
      rec.an_holds = an;
      rec.gn_holds = gn;
      rec.coupled =
          plain.time == truncated.time && plain.path == truncated.path;
      out.record = rec;
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    const int64_t d = done_units.fetch_add(1) + 1;
    if (progress) progress(d, total_units);
  };

  if (workers <= 1) {
    for (int64_t u = 0; u < total_units; ++u) run_unit(u);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int32_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const int64_t u = next_unit.fetch_add(1);
          if (u >= total_units) return;
          run_unit(u);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  data.records.reserve(static_cast<size_t>(total_units));
  for (const auto& out : outcomes) {
    if (!out.error.empty())
      throw std::runtime_error("replication failed: " + out.error);
    data.records.push_back(out.record);
  }
  // units were generated in (n, rep) order; keep the contract explicit
  std::sort(data.records.begin(), data.records.end(),
            [](const ReplicationRecord& a, const ReplicationRecord& b) {
              return a.n != b.n ? a.n < b.n : a.rep < b.rep;
            });
  return data;
}

ExperimentSummary summarize(const ExperimentData& data) {
  const ResolvedExperiment& res = data.resolved;
  ExperimentSummary s;
  s.per_n.reserve(res.cfg.n_grid.size());

  // reduction order is part of the contract: sort on (n, rep) so shuffled
  // inputs cannot change any compensated sum
  ExperimentData sorted_view;
  sorted_view.resolved = data.resolved;
  sorted_view.records = data.records;
  std::sort(sorted_view.records.begin(), sorted_view.records.end(),
            [](const ReplicationRecord& a, const ReplicationRecord& b) {
              return a.n != b.n ? a.n < b.n : a.rep < b.rep;
            });
  const ExperimentData& view = sorted_view;

  for (int64_t n : res.cfg.n_grid) {
    PerNSummary row;
    row.n = n;
    std::vector<double> ts, t_hats, edges;
    int64_t an_c = 0, gn_c = 0, escape = 0, noncoupled = 0, gn_noncoup = 0;
    for (const auto& r : view.records) {
      if (r.n != n) continue;
      ++row.reps;
      ts.push_back(r.t);
      t_hats.push_back(r.t_hat);
      edges.push_back(static_cast<double>(r.edges));
      if (!r.an_holds) ++an_c;
      if (!r.gn_holds) ++gn_c;
      if (r.escaped) ++escape;
      if (!r.coupled) ++noncoupled;
      if (r.gn_holds && !r.coupled) ++gn_noncoup;
    }
    if (row.reps == 0) continue;
    row.t = summarize_moments(ts);
    row.t_hat = summarize_moments(t_hats);
    row.mean_edges = compensated_sum(edges) / static_cast<double>(row.reps);
    row.an_c = make_frequency(an_c, row.reps);
    row.gn_c = make_frequency(gn_c, row.reps);
    row.escape = make_frequency(escape, row.reps);
    row.noncoupled = make_frequency(noncoupled, row.reps);
    row.gn_and_noncoupled = gn_noncoup;
    row.an_bound_value = an_bound(res.cfg.schedule, res.cfg.d, n);
    row.gn_bound_value = gn_bound(res.cfg.schedule, res.cfg.d, res.alpha,
                                  res.bounds.cap_k, n, res.box_factor);
    row.lemma_bound_value = lemma_variance_bound(n, res.alpha, row.mean_edges);
    s.per_n.push_back(row);
  }

  s.mu_hat_fekete = std::numeric_limits<double>::infinity();
  for (const auto& row : s.per_n)
    s.mu_hat_fekete =
        std::min(s.mu_hat_fekete, row.t.mean / static_cast<double>(row.n));

  s.variance_fit = fit_variance_exponent(s);
  s.subsequence = subsequence_diagnostic(data, res.cfg.subseq_epsilon);
  return s;
}

LineFit fit_variance_exponent(const ExperimentSummary& summary) {
  std::vector<double> lx, ly;
  for (const auto& row : summary.per_n) {
    if (row.t.variance > 0.0) {
      lx.push_back(std::log(static_cast<double>(row.n)));
      ly.push_back(std::log(row.t.variance));
    }
  }
  if (lx.size() < 3) return LineFit{};  // not applicable (degenerate grid)
  return fit_line(lx, ly);
}

std::vector<SubseqRow> subsequence_diagnostic(const ExperimentData& data,
                                              double epsilon) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be > 0");
  std::vector<SubseqRow> rows;
  const double alpha = data.resolved.alpha;
  for (int64_t m : data.resolved.cfg.n_grid) {
    const auto root = static_cast<int64_t>(std::llround(std::sqrt(static_cast<double>(m))));
    if (root * root != m) continue;
    std::vector<std::pair<int64_t, double>> keyed;
    for (const auto& r : data.records)
      if (r.n == m) keyed.emplace_back(r.rep, r.t_hat);
    if (keyed.size() < 2) continue;
    std::sort(keyed.begin(), keyed.end());
    std::vector<double> t_hats;
    t_hats.reserve(keyed.size());
    for (const auto& [rep, v] : keyed) t_hats.push_back(v);
    const double mean = compensated_sum(t_hats) / static_cast<double>(t_hats.size());
    int64_t exceed = 0;
    for (double v : t_hats)
      if (std::abs(v - mean) / static_cast<double>(m) > epsilon) ++exceed;
    SubseqRow row;
    row.m = m;
    row.sqrt_m = root;
    row.epsilon = epsilon;
    row.exceed = make_frequency(exceed, static_cast<int64_t>(t_hats.size()));
    row.bound_shape =
        std::pow(static_cast<double>(root), -(2.0 - 6.0 * alpha));
    rows.push_back(row);
  }
  return rows;
}

InfluenceReport edge_influence_probe(const ResolvedExperiment& resolved,
                                     int64_t n, int64_t probes) {
  if (probes < 1) throw std::domain_error("probes must be >= 1");
  const auto& cfg = resolved.cfg;
  size_t n_idx = 0;
  bool found = false;
  for (size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] == n) {
      n_idx = i;
      found = true;
      break;
    }
  }
  if (!found) throw std::domain_error("probe n must be a grid point");

  const BoxGeometry geom(Box{cfg.d, resolved.box_radius(n)});
  const uint32_t stream = resolved.stream_id(n_idx, 0);
  const WeightField base =
      sample_field(cfg.schedule, geom, cfg.master_seed, stream);
  const WeightField before = truncate_field(base, n, resolved.alpha);
  const Site src = axis_site(cfg.d, 0);
  const Site dst = axis_site(cfg.d, static_cast<int32_t>(n));
  const int64_t src_idx = geom.site_index(src);
  const int64_t dst_idx = geom.site_index(dst);

  const DistanceField fwd0 = shortest_time_field(geom, before, src);
  const DistanceField bwd0 = shortest_time_field(geom, before, dst);
  const double t0 = fwd0.at(dst_idx);

  InfluenceReport rep;
  rep.n = n;
  rep.probes = probes;
  rep.cap = quantized_cap(n, resolved.alpha);
  GeodesicResult base_geo = canonical_geodesic(geom, before, src, dst);
  rep.lemma_bound = lemma_variance_bound(
      n, resolved.alpha, static_cast<double>(base_geo.edge_count));

  const int64_t n_edges = geom.edge_count();
  double sq_sum = 0.0;
  WeightField after = before;
  for (int64_t p = 0; p < probes; ++p) {
    // probe edge choice and the fresh weight use disjoint draw streams
    const uint64_t pick = philox_u64(cfg.master_seed,
                                     0xFFFFFFFF00000000ull + static_cast<uint64_t>(p),
                                     stream, 1);
    const int64_t edge = static_cast<int64_t>(pick % static_cast<uint64_t>(n_edges));
    const double fresh = resample_edge_weight(cfg.schedule, geom, edge,
                                              cfg.master_seed, stream,
                                              static_cast<uint32_t>(p) + 2);
    const double old_w = before.weights[static_cast<size_t>(edge)];
    after.weights[static_cast<size_t>(edge)] = std::min(fresh, rep.cap);

    const DistanceField fwd1 = shortest_time_field(geom, after, src);
    const DistanceField bwd1 = shortest_time_field(geom, after, dst);
    const double t1 = fwd1.at(dst_idx);
    const double delta = t1 - t0;

    rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(delta));
    if (std::abs(delta) > rep.cap) ++rep.cap_violations;
    if (delta != 0.0) {
      ++rep.nonzero;
      const EdgeId e = geom.edge_from_index(edge);
      const bool on_before = on_some_geodesic(geom, before, fwd0, bwd0, t0, e);
      const bool on_after = on_some_geodesic(geom, after, fwd1, bwd1, t1, e);
      if (!on_before && !on_after) ++rep.support_violations;
    }
    sq_sum += delta * delta;

    after.weights[static_cast<size_t>(edge)] = old_w;  // restore
  }
  rep.mean_sq_delta = sq_sum / static_cast<double>(probes);
  rep.sum_over_edges_estimate = static_cast<double>(n_edges) * rep.mean_sq_delta;
  rep.efron_stein_bound = rep.sum_over_edges_estimate / 2.0;
  (void)src_idx;
  return rep;
}

}  // namespace fpp
