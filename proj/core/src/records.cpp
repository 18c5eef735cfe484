#include "fpp/records.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fpp/rng.hpp"

namespace fpp {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

namespace {

std::string render_body(const ExperimentData& data) {
  std::string out = "n,rep,T,T_hat,edges,escaped,an_holds,gn_holds,coupled\n";
  for (const auto& r : data.records) {
    out += std::to_string(r.n);
    out += ',';
    out += std::to_string(r.rep);
    out += ',';
    out += format_double(r.t);
    out += ',';
    out += format_double(r.t_hat);
    out += ',';
    out += std::to_string(r.edges);
    out += ',';
    out += r.escaped ? '1' : '0';
    out += ',';
    out += r.an_holds ? '1' : '0';
    out += ',';
    out += r.gn_holds ? '1' : '0';
    out += ',';
    out += r.coupled ? '1' : '0';
    out += '\n';
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("bad numeric field in record file: " + s);
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string artifact_header(const ResolvedExperiment& resolved,
                            const std::string& kind) {
  char head[96];
  std::snprintf(head, sizeof head, "# fpp-%s v1 tool=%s config_fnv=%016llx ",
                kind.c_str(), kToolVersion,
                static_cast<unsigned long long>(resolved.config_digest()));
  return std::string(head) + resolved.header_text() + "\n";
}

std::string render_records(const ExperimentData& data) {
  const std::string body = render_body(data);
  const uint64_t digest = fnv1a64(body.data(), body.size());
  char head[192];
  std::snprintf(head, sizeof head,
                "# fpp-records v1 tool=%s body_fnv=%016llx config_fnv=%016llx ",
                kToolVersion, static_cast<unsigned long long>(digest),
                static_cast<unsigned long long>(data.resolved.config_digest()));
  return std::string(head) + data.resolved.header_text() + "\n" + body;
}

void write_records(const std::string& path, const ExperimentData& data) {
  write_text_file(path, render_records(data));
}

RecordFile read_records(const std::string& path) {
  const std::string content = read_text_file(path);
  const auto nl = content.find('\n');
  if (nl == std::string::npos || content.rfind("# fpp-records v1 ", 0) != 0)
    throw std::runtime_error("not a record file: " + path);

  RecordFile rf;
  rf.header_line = content.substr(0, nl);
  const std::string body = content.substr(nl + 1);

  // header key=value pairs (values may not contain spaces except the final
  // schedule entry, which is last and may contain anything)
  std::istringstream hs(rf.header_line.substr(17));
  std::string tok;
  while (hs >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    std::string key = tok.substr(0, eq);
    std::string value = tok.substr(eq + 1);
    if (key == "schedule") {
      std::string rest;
      std::getline(hs, rest);
      value += rest;
    }
    rf.header_kv[key] = value;
  }

  auto it = rf.header_kv.find("body_fnv");
  if (it == rf.header_kv.end())
    throw std::runtime_error("record header missing body_fnv: " + path);
  const uint64_t expect = std::stoull(it->second, nullptr, 16);
  const uint64_t actual = fnv1a64(body.data(), body.size());
  if (expect != actual)
    throw std::runtime_error(
        "record file integrity failure (body digest mismatch): " + path);

  std::istringstream bs(body);
  std::string line;
  if (!std::getline(bs, line) ||
      line != "n,rep,T,T_hat,edges,escaped,an_holds,gn_holds,coupled")
    throw std::runtime_error("record file has an unexpected column header");
  while (std::getline(bs, line)) {
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 9)
      throw std::runtime_error("record row has wrong field count: " + line);
    ReplicationRecord r;
    r.n = std::stoll(f[0]);
    r.rep = std::stoll(f[1]);
    r.t = parse_double(f[2]);
    r.t_hat = parse_double(f[3]);
    r.edges = std::stoll(f[4]);
    r.escaped = f[5] == "1";
    r.an_holds = f[6] == "1";
    r.gn_holds = f[7] == "1";
    r.coupled = f[8] == "1";
    rf.records.push_back(r);
  }
  return rf;
}

std::string render_summary_text(const ExperimentData& data,
                                const ExperimentSummary& summary) {
  std::ostringstream os;
  os << "# fpp-summary v1 tool=" << kToolVersion << " config_fnv=";
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(data.resolved.config_digest()));
  os << hex << " " << data.resolved.header_text() << "\n";
  os << "mu_hat_fekete = " << format_double(summary.mu_hat_fekete) << "\n";
  if (summary.variance_fit.valid) {
    os << "variance_fit_slope = " << format_double(summary.variance_fit.slope)
       << "\n";
    os << "variance_fit_intercept = "
       << format_double(summary.variance_fit.intercept) << "\n";
    os << "variance_fit_r2 = " << format_double(summary.variance_fit.r2) << "\n";
    os << "variance_fit_ci95_halfwidth = "
       << format_double(summary.variance_fit.ci95_halfwidth) << "\n";
  } else {
    os << "variance_fit = n/a (fewer than 3 grid points with positive variance)\n";
  }
  os << "\nper_n:\n";
  os << "n reps mean_T se_mean_T var_T se_var_T mean_T_hat var_T_hat "
        "mean_edges freq_an_c freq_gn_c freq_escape freq_noncoupled "
        "gn_and_noncoupled an_bound gn_bound lemma_bound\n";
  for (const auto& r : summary.per_n) {
    os << r.n << " " << r.reps << " " << format_double(r.t.mean) << " "
       << format_double(r.t.se_mean) << " " << format_double(r.t.variance)
       << " " << format_double(r.t.se_variance) << " "
       << format_double(r.t_hat.mean) << " " << format_double(r.t_hat.variance)
       << " " << format_double(r.mean_edges) << " "
       << format_double(r.an_c.p_hat) << " " << format_double(r.gn_c.p_hat)
       << " " << format_double(r.escape.p_hat) << " "
       << format_double(r.noncoupled.p_hat) << " " << r.gn_and_noncoupled
       << " " << format_double(r.an_bound_value) << " "
       << format_double(r.gn_bound_value) << " "
       << format_double(r.lemma_bound_value) << "\n";
  }
  os << "\nsubsequence (epsilon = "
     << format_double(data.resolved.cfg.subseq_epsilon) << "):\n";
  if (summary.subsequence.empty()) {
    os << "no perfect squares in the grid\n";
  } else {
    os << "m sqrt_m exceed_frac exceed_se bound_shape\n";
    for (const auto& row : summary.subsequence) {
      os << row.m << " " << row.sqrt_m << " "
         << format_double(row.exceed.p_hat) << " "
         << format_double(row.exceed.se) << " "
         << format_double(row.bound_shape) << "\n";
    }
  }
  return os.str();
}

std::string render_per_n_csv(const ExperimentData& data,
                             const ExperimentSummary& summary) {
  std::string out = artifact_header(data.resolved, "csv-per-n") +
      "n,reps,mean_T,se_mean_T,var_T,se_var_T,mean_T_hat,var_T_hat,"
      "se_var_T_hat,mean_edges,lemma_bound\n";
  for (const auto& r : summary.per_n) {
    out += std::to_string(r.n) + "," + std::to_string(r.reps) + "," +
           format_double(r.t.mean) + "," + format_double(r.t.se_mean) + "," +
           format_double(r.t.variance) + "," + format_double(r.t.se_variance) +
           "," + format_double(r.t_hat.mean) + "," +
           format_double(r.t_hat.variance) + "," +
           format_double(r.t_hat.se_variance) + "," +
           format_double(r.mean_edges) + "," +
           format_double(r.lemma_bound_value) + "\n";
  }
  return out;
}

std::string render_events_csv(const ExperimentData& data,
                              const ExperimentSummary& summary) {
  std::string out = artifact_header(data.resolved, "csv-events") +
      "n,freq_an_c,se_an_c,an_bound,freq_gn_c,se_gn_c,gn_bound,freq_escape,"
      "se_escape,freq_noncoupled,se_noncoupled,gn_and_noncoupled\n";
  for (const auto& r : summary.per_n) {
    out += std::to_string(r.n) + "," + format_double(r.an_c.p_hat) + "," +
           format_double(r.an_c.se) + "," + format_double(r.an_bound_value) +
           "," + format_double(r.gn_c.p_hat) + "," + format_double(r.gn_c.se) +
           "," + format_double(r.gn_bound_value) + "," +
           format_double(r.escape.p_hat) + "," + format_double(r.escape.se) +
           "," + format_double(r.noncoupled.p_hat) + "," +
           format_double(r.noncoupled.se) + "," +
           std::to_string(r.gn_and_noncoupled) + "\n";
  }
  return out;
}

std::string render_subsequence_csv(const ExperimentData& data,
                                   const ExperimentSummary& summary) {
  std::string out = artifact_header(data.resolved, "csv-subsequence") +
      "m,sqrt_m,epsilon,exceed_frac,exceed_se,bound_shape\n";
  for (const auto& row : summary.subsequence) {
    out += std::to_string(row.m) + "," + std::to_string(row.sqrt_m) + "," +
           format_double(row.epsilon) + "," + format_double(row.exceed.p_hat) +
           "," + format_double(row.exceed.se) + "," +
           format_double(row.bound_shape) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace fpp
