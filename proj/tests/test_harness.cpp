#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "fpp/checks.hpp"
#include "fpp/records.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n_grid = {4, 8, 16};
  cfg.replications = 30;
  cfg.box_factor = 2.0;
  cfg.master_seed = 0xabcdef;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("config validation catches the documented misuses") {
  ExperimentConfig cfg = small_config();
  CHECK_NOTHROW(cfg.validate());

  ExperimentConfig bad = cfg;
  bad.replications = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.n_grid = {8, 8};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.n_grid = {16, 8};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.alpha = 0.2;  // above 1/6
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.box_factor = 1.5;  // cannot host the 2n axis edges
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("deterministic(1) run: degenerate statistics, exact mu_hat") {
  ExperimentConfig cfg = small_config();
  cfg.n_grid = {4, 8};
  cfg.replications = 5;
  cfg.schedule = DistributionSchedule::constant(DistributionSpec::deterministic(1));
  ExperimentData data = run_experiment(cfg);
  ExperimentSummary summary = summarize(data);

  for (const auto& row : summary.per_n) {
    CHECK(row.t.mean == static_cast<double>(row.n));
    CHECK(row.t.variance == 0.0);
    CHECK(row.mean_edges == static_cast<double>(row.n));
    CHECK(row.an_c.p_hat == 0.0);
    CHECK(row.gn_c.p_hat == 0.0);
    CHECK(row.noncoupled.p_hat == 0.0);
    CHECK(row.escape.p_hat == 0.0);
  }
  CHECK(summary.mu_hat_fekete == 1.0);
  CHECK_FALSE(summary.variance_fit.valid);  // zero variance everywhere

  // subsequence proxies are exactly zero at the square grid point 4
  REQUIRE(summary.subsequence.size() == 1);
  CHECK(summary.subsequence[0].m == 4);
  CHECK(summary.subsequence[0].exceed.p_hat == 0.0);
}

TEST_CASE("records round-trip and integrity checking") {
  ExperimentConfig cfg = small_config();
  cfg.n_grid = {4, 8};
  cfg.replications = 4;
  ExperimentData data = run_experiment(cfg);

  const std::string path = std::filesystem::temp_directory_path() /
                           "fpp_test_records.txt";
  write_records(path, data);
  RecordFile rf = read_records(path);
  REQUIRE(rf.records.size() == data.records.size());
  for (size_t i = 0; i < rf.records.size(); ++i) {
    CHECK(rf.records[i].n == data.records[i].n);
    CHECK(rf.records[i].rep == data.records[i].rep);
    CHECK(rf.records[i].t == data.records[i].t);          // exact round trip
    CHECK(rf.records[i].t_hat == data.records[i].t_hat);
    CHECK(rf.records[i].coupled == data.records[i].coupled);
  }
  CHECK(rf.header_kv.at("seed") == "11259375");  // 0xabcdef

  // corrupt one byte of the body: integrity must fail
  std::string content = read_text_file(path);
  content[content.size() / 2] = content[content.size() / 2] == '1' ? '2' : '1';
  write_text_file(path, content);
  CHECK_THROWS_WITH_AS(RecordFile ignored = read_records(path),
                       doctest::Contains("integrity"), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("byte-identical reruns and thread-count independence") {
  ExperimentConfig cfg = small_config();
  cfg.n_grid = {4, 8};
  cfg.replications = 8;
  CheckResult res = check_determinism(cfg);
  CHECK_MESSAGE(res.pass, res.detail);
}

TEST_CASE("summaries are invariant under record shuffling") {
  ExperimentConfig cfg = small_config();
  cfg.n_grid = {4, 8};
  cfg.replications = 16;
  ExperimentData data = run_experiment(cfg);
  const std::string before = render_summary_text(data, summarize(data));

  std::mt19937 rng(7);
  std::shuffle(data.records.begin(), data.records.end(), rng);
  const std::string after = render_summary_text(data, summarize(data));
  CHECK(before == after);
}

TEST_CASE("fit_variance_exponent recovers synthetic slopes exactly") {
  auto synthetic = [](double slope) {
    ExperimentSummary s;
    for (int64_t n : {8, 16, 32, 64}) {
      PerNSummary row;
      row.n = n;
      row.t.variance = 0.37 * std::pow(static_cast<double>(n), slope);
      s.per_n.push_back(row);
    }
    return fit_variance_exponent(s);
  };
  LineFit one = synthetic(1.0);
  REQUIRE(one.valid);
  CHECK(one.slope == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(one.r2 == doctest::Approx(1.0).epsilon(1e-12));
  LineFit threehalves = synthetic(1.5);
  CHECK(threehalves.slope == doctest::Approx(1.5).epsilon(1e-9));

  // two positive points are not enough
  ExperimentSummary degenerate;
  for (int64_t n : {8, 16}) {
    PerNSummary row;
    row.n = n;
    row.t.variance = static_cast<double>(n);
    degenerate.per_n.push_back(row);
  }
  CHECK_FALSE(fit_variance_exponent(degenerate).valid);
}

TEST_CASE("subsequence exceedance is monotone in epsilon") {
  ExperimentConfig cfg = small_config();
  cfg.n_grid = {4, 16};
  cfg.replications = 60;
  ExperimentData data = run_experiment(cfg);
  double prev_frac_4 = 1.0, prev_frac_16 = 1.0;
  for (double eps : {0.01, 0.02, 0.04, 0.08}) {
    auto rows = subsequence_diagnostic(data, eps);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].exceed.p_hat <= prev_frac_4);
    CHECK(rows[1].exceed.p_hat <= prev_frac_16);
    prev_frac_4 = rows[0].exceed.p_hat;
    prev_frac_16 = rows[1].exceed.p_hat;
  }
  // empty diagnostic when the grid has no squares
  ExperimentConfig nosq = small_config();
  nosq.n_grid = {6, 8};
  nosq.replications = 4;
  ExperimentData d2 = run_experiment(nosq);
  CHECK(subsequence_diagnostic(d2, 0.05).empty());
}

TEST_CASE("coupling, lemma bound and event bounds on a uniform run") {
  ExperimentConfig cfg = small_config();
  ExperimentData data = run_experiment(cfg);
  ExperimentSummary summary = summarize(data);
  ResolvedExperiment resolved = resolve_experiment(cfg);

  CheckResult coupling = check_coupling(data);
  CHECK_MESSAGE(coupling.pass, coupling.detail);
  CheckResult lemma = check_lemma_bound(summary);
  CHECK_MESSAGE(lemma.pass, lemma.detail);
  CheckResult events = check_event_bounds(summary);
  CHECK_MESSAGE(events.pass, events.detail);
  CheckResult tc = check_time_constant(resolved, summary);
  CHECK_MESSAGE(tc.pass, tc.detail);

  // G_16 always holds for uniform(0.5,1.5): cap 16^alpha ~ 1.58 > 1.5
  for (const auto& row : summary.per_n)
    if (row.n == 16) CHECK(row.gn_c.p_hat == 0.0);
}

TEST_CASE("A-hat nesting: the n-cap event implies every k-cap event, k <= n") {
  ExperimentConfig cfg = small_config();
  ResolvedExperiment res = resolve_experiment(cfg);
  const int64_t n = 8;
  const BoxGeometry geom(Box{2, res.box_radius(n)});
  int64_t checked = 0;
  for (uint32_t rep = 0; rep < 20; ++rep) {
    WeightField w = sample_field(cfg.schedule, geom, cfg.master_seed, rep);
    auto axis_sum = [&](const WeightField& f) {
      double s = 0.0;
      for (int64_t i = 1; i <= 2 * n; ++i)
        s += f.weights[static_cast<size_t>(
            geom.edge_index(axis_edge(2, static_cast<int32_t>(i))))];
      return s;
    };
    const double threshold = 6.0 * res.bounds.mu_sup * static_cast<double>(n);
    const bool hat_n = axis_sum(truncate_field(w, n, res.alpha)) <= threshold;
    for (int64_t k = 1; k <= n; ++k) {
      const bool hat_k = axis_sum(truncate_field(w, k, res.alpha)) <= threshold;
      if (hat_n) CHECK(hat_k);  // A-hat_n(n) is the smallest event of the family
      ++checked;
    }
  }
  CHECK(checked == 20 * n);
}

TEST_CASE("edge influence probes respect the cap and the support condition") {
  ExperimentConfig cfg = small_config();
  ResolvedExperiment resolved = resolve_experiment(cfg);
  InfluenceReport rep = edge_influence_probe(resolved, 16, 120);
  CHECK(rep.cap_violations == 0);
  CHECK(rep.support_violations == 0);
  CHECK(rep.max_abs_delta <= rep.cap);
  CHECK(rep.cap == doctest::Approx(std::pow(16.0, resolved.alpha)).epsilon(1e-4));
  CHECK(rep.probes == 120);
  // probing must leave some trace on a 33x33 box in 120 draws
  CHECK(rep.nonzero >= 0);
}

TEST_CASE("mean edge count grows like n^{1+alpha} with a stable constant") {
  ExperimentConfig cfg = small_config();
  ExperimentData data = run_experiment(cfg);
  ExperimentSummary summary = summarize(data);
  ResolvedExperiment resolved = resolve_experiment(cfg);
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  for (const auto& row : summary.per_n) {
    double c = row.mean_edges /
               std::pow(static_cast<double>(row.n), 1.0 + resolved.alpha);
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  CHECK(cmax / cmin < 2.0);
}

TEST_CASE("infeasible boxes are refused with a size report") {
  ExperimentConfig cfg = small_config();
  cfg.n_grid = {4096};
  cfg.mem_limit_mb = 64;
  CHECK_THROWS_AS(run_experiment(cfg), resource_error);
  try {
    run_experiment(cfg);
  } catch (const resource_error& e) {
    CHECK(std::string(e.what()).find("MiB") != std::string::npos);
  }
}

TEST_CASE("subadditivity holds per realization and in the mean") {
  ExperimentConfig cfg = small_config();
  ExperimentData data = run_experiment(cfg);
  ExperimentSummary summary = summarize(data);
  ResolvedExperiment resolved = resolve_experiment(cfg);
  CheckResult res = check_subadditivity(resolved, summary, 4, 8);
  CHECK_MESSAGE(res.pass, res.detail);
}

TEST_CASE("compensated sum and moment helpers") {
  std::vector<double> xs = {1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(xs) == 2.0);

  std::vector<double> ys = {1.0, 2.0, 3.0, 4.0};
  MomentSummary m = summarize_moments(ys);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.se_mean == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));

  Frequency f = make_frequency(3, 12);
  CHECK(f.p_hat == doctest::Approx(0.25));
  CHECK(f.se == doctest::Approx(std::sqrt(0.25 * 0.75 / 12.0)));
}
