#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>

#include "fpp/checks.hpp"
#include "fpp/records.hpp"
#include "fpp/rng.hpp"
#include "svg_plot.hpp"

namespace fs = std::filesystem;

namespace fpp::cli {

namespace {

std::string g6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void say(int verbosity, int level, const std::string& line) {
  if (verbosity >= level) std::printf("%s\n", line.c_str());
}

std::string resolve_out_dir(const Options& opts, const ExperimentConfig* cfg) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (cfg && !cfg->outputs.empty() && cfg->outputs != "out") return cfg->outputs;
  if (const char* env = std::getenv("FPP_OUT_DIR"); env && *env) return env;
  return cfg ? cfg->outputs : "out";
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const {
    for (size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == name) {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
      }
    }
    throw std::runtime_error("csv column missing: " + name);
  }
};

CsvTable read_csv(const std::string& path) {
  CsvTable t;
  std::istringstream ss(read_text_file(path));
  std::string line;
  do {
    if (!std::getline(ss, line)) throw std::runtime_error("empty csv: " + path);
  } while (!line.empty() && line.front() == '#');
  std::stringstream hs(line);
  std::string tok;
  while (std::getline(hs, tok, ',')) t.columns.push_back(tok);
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream rs(line);
    while (std::getline(rs, tok, ',')) row.push_back(std::stod(tok));
    if (row.size() != t.columns.size())
      throw std::runtime_error("ragged csv row in " + path);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

ExperimentConfig assemble_config(const Options& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = load_config(opts.config_path, opts.overrides);
  } else if (!opts.overrides.empty()) {
    std::map<std::string, std::string> kv;
    apply_overrides(kv, opts.overrides);
    cfg = config_from_map(kv);
  }
  if (opts.seed) cfg.master_seed = *opts.seed;
  if (opts.threads) cfg.threads = *opts.threads;
  return cfg;
}

int run_bounds(const ExperimentConfig& cfg, const std::string& out_dir,
               int verbosity) {
  ResolvedExperiment res = resolve_experiment(cfg);
  const BoundReport& b = res.bounds;
  const ChernoffCertificate& c = b.chernoff;

  std::string text;
  auto line = [&](const std::string& k, const std::string& v) {
    text += k + " = " + v + "\n";
  };
  line("d", std::to_string(b.d));
  line("eta", g6(b.eta));
  line("delta", g6(b.delta));
  line("beta2", g6(b.beta2));
  line("K", g6(b.cap_k));
  line("alpha", g6(res.alpha));
  line("eps", g6(c.eps));
  line("s", g6(c.s));
  line("beta1", g6(c.beta1));
  line("mgf_sup", g6(c.mgf_sup));
  line("rate", g6(c.rate));
  line("mu_sup", g6(b.mu_sup));
  line("mu_inf", g6(b.mu_inf));
  line("box_factor", g6(b.box_factor));
  line("schedule", cfg.schedule.to_string());

  const double half = std::exp(-6.0 * b.d) / 2.0;
  auto check = [&](const std::string& what, double lhs, double rhs) {
    text += "check " + what + " : " + g6(lhs) + " <= " + g6(rhs) + " : " +
            (lhs <= rhs ? "ok" : "VIOLATED") + "\n";
  };
  check("small_time_mass(eps) <= e^-6d/2", cfg.schedule.small_time_mass(c.eps),
        half);
  check("exp(-s*eps) <= e^-6d/2", std::exp(-c.s * c.eps), half);
  check("exp(s*beta1)*mgf_sup <= e^-d", std::exp(c.s * c.beta1) * c.mgf_sup,
        std::exp(-static_cast<double>(b.d)));
  check("beta1 < inf E t", c.beta1, cfg.schedule.mean_inf());

  text += "bound curves:\n";
  for (int64_t n : cfg.n_grid) {
    text += "n=" + std::to_string(n) +
            " an_bound=" + g6(an_bound(cfg.schedule, cfg.d, n)) +
            " gn_bound=" +
            g6(gn_bound(cfg.schedule, cfg.d, res.alpha, b.cap_k, n,
                        res.box_factor)) +
            " ek_tail(k=n)=" + g6(ek_tail(c.beta1, b.mu_sup, cfg.d, n)) + "\n";
  }

  std::printf("%s", text.c_str());

  fs::create_directories(out_dir);
  write_text_file(out_dir + "/bounds.txt", text);

  nlohmann::json j;
  j["d"] = b.d;
  j["eta"] = b.eta;
  j["delta"] = b.delta;
  j["beta2"] = b.beta2;
  j["K"] = b.cap_k;
  j["alpha"] = res.alpha;
  j["eps"] = c.eps;
  j["s"] = c.s;
  j["beta1"] = c.beta1;
  j["mgf_sup"] = c.mgf_sup;
  j["rate"] = c.rate;
  j["mu_sup"] = b.mu_sup;
  j["mu_inf"] = b.mu_inf;
  j["box_factor"] = b.box_factor;
  j["schedule"] = cfg.schedule.to_string();
  j["schedule_digest"] = b.schedule_digest;
  std::printf("%s\n", j.dump().c_str());
  write_text_file(out_dir + "/bounds.json", j.dump(2) + "\n");
  say(verbosity, 2, "wrote " + out_dir + "/bounds.{txt,json}");
  return 0;
}

int run_run(const ExperimentConfig& cfg, const std::string& out_dir,
            int verbosity) {
  ProgressFn progress = nullptr;
  if (verbosity >= 2) {
    progress = [](int64_t done, int64_t total) {
      if (done == total || done % 50 == 0)
        std::fprintf(stderr, "\r%lld/%lld replications",
                     static_cast<long long>(done), static_cast<long long>(total));
      if (done == total) std::fprintf(stderr, "\n");
    };
  }

  ExperimentData data = run_experiment(cfg, progress);
  ExperimentSummary summary = summarize(data);

  fs::create_directories(out_dir);
  std::vector<std::string> written;
  try {
    const std::string records = render_records(data);
    write_text_file(out_dir + "/records.txt", records);
    written.push_back(out_dir + "/records.txt");
    write_text_file(out_dir + "/summary.txt",
                    render_summary_text(data, summary));
    written.push_back(out_dir + "/summary.txt");
    write_text_file(out_dir + "/summary_per_n.csv",
                    render_per_n_csv(data, summary));
    written.push_back(out_dir + "/summary_per_n.csv");
    write_text_file(out_dir + "/summary_events.csv",
                    render_events_csv(data, summary));
    written.push_back(out_dir + "/summary_events.csv");
    write_text_file(out_dir + "/summary_subsequence.csv",
                    render_subsequence_csv(data, summary));
    written.push_back(out_dir + "/summary_subsequence.csv");

    const uint64_t checksum = fnv1a64(records.data(), records.size());
    char digest[64];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(checksum));

    say(verbosity, 1, "records = " + out_dir + "/records.txt (fnv " + digest + ")");
    say(verbosity, 1, "mu_hat = " + g6(summary.mu_hat_fekete));
    if (summary.variance_fit.valid)
      say(verbosity, 1,
          "variance_slope = " + g6(summary.variance_fit.slope) + " (r2 " +
              g6(summary.variance_fit.r2) + ")");
    else
      say(verbosity, 1, "variance_slope = n/a (degenerate variance)");

    double worst_an = -std::numeric_limits<double>::infinity();
    double worst_gn = -std::numeric_limits<double>::infinity();
    for (const auto& row : summary.per_n) {
      worst_an = std::max(worst_an, row.an_c.p_hat - row.an_bound_value);
      worst_gn = std::max(worst_gn, row.gn_c.p_hat - row.gn_bound_value);
    }
    say(verbosity, 1, "worst_margin_an = " + g6(worst_an) +
                          " (freq minus bound, most adverse n)");
    say(verbosity, 1, "worst_margin_gn = " + g6(worst_gn));
  } catch (...) {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw;
  }
  return 0;
}

int run_verify(const ExperimentConfig& cfg, const std::string& out_dir,
               int verbosity) {
  std::vector<CheckResult> results;

  const std::string records_path = out_dir + "/records.txt";
  if (fs::exists(records_path)) {
    CheckResult integrity;
    integrity.name = "record_file_integrity";
    try {
      RecordFile rf = read_records(records_path);
      integrity.pass = true;
      integrity.detail = records_path + ": " +
                         std::to_string(rf.records.size()) + " records, digest ok";
    } catch (const std::exception& e) {
      integrity.pass = false;
      integrity.detail = e.what();
    }
    results.push_back(integrity);
  } else {
    say(verbosity, 2, "no record file at " + records_path + "; running defaults");
  }

  auto defaults = run_default_verification(cfg.threads);
  results.insert(results.end(), defaults.begin(), defaults.end());

  int failures = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failures;
    std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
  }
  std::printf("%d/%zu checks passed\n",
              static_cast<int>(results.size()) - failures, results.size());
  return failures == 0 ? 0 : 1;
}

int run_plot(const std::string& out_dir, int verbosity) {
  const std::string per_n_path = out_dir + "/summary_per_n.csv";
  if (!fs::exists(per_n_path))
    throw config_error("no summary at " + per_n_path + "; run `fpp run` first");

  CsvTable per_n = read_csv(per_n_path);
  CsvTable events = read_csv(out_dir + "/summary_events.csv");

  // artifact header propagated from the summary tables
  std::string header;
  {
    const std::string raw = read_text_file(per_n_path);
    const auto nl = raw.find('\n');
    if (nl != std::string::npos && raw.front() == '#') {
      header = raw.substr(0, nl);
      const auto keep = header.find("tool=");
      header = "# fpp-plot v1 " + (keep == std::string::npos ? "" : header.substr(keep));
    }
  }
  auto with_header = [&](const std::string& body) {
    return header.empty() ? body : header + "\n" + body;
  };
  auto svg_with_header = [&](const std::string& svg) {
    return header.empty() ? svg : "<!-- " + header.substr(2) + " -->\n" + svg;
  };

  const auto ns = per_n.column("n");
  const auto vars = per_n.column("var_T");
  const auto means = per_n.column("mean_T");

  // variance log-log plot with the fitted slope and the n^{3/2} ceiling line
  bool degenerate = true;
  for (double v : vars)
    if (v > 0.0) degenerate = false;

  plot::PlotSpec vp;
  vp.title = "Variance of T against n (log-log)";
  vp.x_label = "n";
  vp.y_label = "var T(0,n)";
  vp.log_x = true;
  vp.log_y = true;

  std::vector<double> fitted(ns.size(), 0.0), reference(ns.size(), 0.0);
  if (!degenerate) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < ns.size(); ++i) {
      if (vars[i] > 0.0) {
        lx.push_back(std::log(ns[i]));
        ly.push_back(std::log(vars[i]));
      }
    }
    LineFit fit = fit_line(lx, ly);

    plot::Series data;
    data.label = "var T (measured)";
    for (size_t i = 0; i < ns.size(); ++i) data.points.emplace_back(ns[i], vars[i]);
    vp.series.push_back(data);

    if (fit.valid) {
      plot::Series f;
      f.label = "fit: slope " + g6(fit.slope);
      f.color = "#c04020";
      f.draw_markers = false;
      for (size_t i = 0; i < ns.size(); ++i) {
        fitted[i] = std::exp(fit.intercept + fit.slope * std::log(ns[i]));
        f.points.emplace_back(ns[i], fitted[i]);
      }
      vp.series.push_back(f);
    }
    // reference line with slope exactly 3/2 anchored at the first point
    plot::Series ref;
    ref.label = "reference slope 1.5";
    ref.color = "#508050";
    ref.draw_markers = false;
    const double v0 = vars.front() > 0.0 ? vars.front() : 1.0;
    for (size_t i = 0; i < ns.size(); ++i) {
      reference[i] = v0 * std::pow(ns[i] / ns.front(), 1.5);
      ref.points.emplace_back(ns[i], reference[i]);
    }
    vp.series.push_back(ref);
  } else {
    vp.note = "degenerate: zero variance";
  }
  fs::create_directories(out_dir);
  write_text_file(out_dir + "/plot_variance.svg", svg_with_header(plot::render_svg(vp)));

  std::string vcsv = "n,var_T,fit,reference_slope_1p5\n";
  for (size_t i = 0; i < ns.size(); ++i)
    vcsv += format_double(ns[i]) + "," + format_double(vars[i]) + "," +
            format_double(fitted[i]) + "," + format_double(reference[i]) + "\n";
  write_text_file(out_dir + "/plot_variance.csv", with_header(vcsv));

  // mean_T / n with the Fekete estimate
  double mu_hat = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ns.size(); ++i)
    mu_hat = std::min(mu_hat, means[i] / ns[i]);
  plot::PlotSpec mp;
  mp.title = "mean T(0,n)/n and the Fekete estimate";
  mp.x_label = "n";
  mp.y_label = "mean T / n";
  plot::Series ratio;
  ratio.label = "mean T(0,n)/n";
  for (size_t i = 0; i < ns.size(); ++i)
    ratio.points.emplace_back(ns[i], means[i] / ns[i]);
  plot::Series muline;
  muline.label = "mu_hat = " + g6(mu_hat);
  muline.color = "#c04020";
  muline.draw_markers = false;
  muline.points.emplace_back(ns.front(), mu_hat);
  muline.points.emplace_back(ns.back(), mu_hat);
  mp.series = {ratio, muline};
  write_text_file(out_dir + "/plot_time_constant.svg", svg_with_header(plot::render_svg(mp)));

  std::string mcsv = "n,mean_T_over_n,mu_hat\n";
  for (size_t i = 0; i < ns.size(); ++i)
    mcsv += format_double(ns[i]) + "," + format_double(means[i] / ns[i]) + "," +
            format_double(mu_hat) + "\n";
  write_text_file(out_dir + "/plot_time_constant.csv", with_header(mcsv));

  // event frequencies against closed-form bounds (bounds clipped at 1)
  const auto ev_n = events.column("n");
  const auto an_f = events.column("freq_an_c");
  const auto an_b = events.column("an_bound");
  const auto gn_f = events.column("freq_gn_c");
  const auto gn_b = events.column("gn_bound");
  plot::PlotSpec ep;
  ep.title = "Event frequencies against closed-form bounds";
  ep.x_label = "n";
  ep.y_label = "probability";
  auto mk = [&](const std::string& label, const std::vector<double>& ys,
                const std::string& color, bool clip) {
    plot::Series s;
    s.label = label;
    s.color = color;
    for (size_t i = 0; i < ev_n.size(); ++i)
      s.points.emplace_back(ev_n[i], clip ? std::min(ys[i], 1.0) : ys[i]);
    return s;
  };
  ep.series = {mk("freq A_n^c", an_f, "#1f6fb2", false),
               mk("an_bound (clip 1)", an_b, "#7fb2d2", true),
               mk("freq G_n^c", gn_f, "#c04020", false),
               mk("gn_bound (clip 1)", gn_b, "#d2907f", true)};
  write_text_file(out_dir + "/plot_events.svg", svg_with_header(plot::render_svg(ep)));

  std::string ecsv = "n,freq_an_c,an_bound,freq_gn_c,gn_bound\n";
  for (size_t i = 0; i < ev_n.size(); ++i)
    ecsv += format_double(ev_n[i]) + "," + format_double(an_f[i]) + "," +
            format_double(an_b[i]) + "," + format_double(gn_f[i]) + "," +
            format_double(gn_b[i]) + "\n";
  write_text_file(out_dir + "/plot_events.csv", with_header(ecsv));

  say(verbosity, 1, "wrote plot_{variance,time_constant,events}.{svg,csv} in " + out_dir);
  return 0;
}

int dispatch(const Options& opts) {
  try {
    if (opts.subcommand == "plot") {
      Options tmp = opts;
      ExperimentConfig cfg;
      bool have_cfg = false;
      if (!opts.config_path.empty()) {
        cfg = assemble_config(opts);
        have_cfg = true;
      }
      return run_plot(resolve_out_dir(tmp, have_cfg ? &cfg : nullptr),
                      opts.verbosity);
    }
    ExperimentConfig cfg = assemble_config(opts);
    const std::string out_dir = resolve_out_dir(opts, &cfg);
    if (opts.subcommand == "bounds") return run_bounds(cfg, out_dir, opts.verbosity);
    if (opts.subcommand == "run") return run_run(cfg, out_dir, opts.verbosity);
    if (opts.subcommand == "verify") return run_verify(cfg, out_dir, opts.verbosity);
    std::fprintf(stderr, "unknown subcommand: %s\n", opts.subcommand.c_str());
    return 2;
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const resource_error& e) {
    std::fprintf(stderr, "resource refusal: %s\n", e.what());
    return 3;
  } catch (const derivation_error& e) {
    std::fprintf(stderr, "derivation failure: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace fpp::cli
