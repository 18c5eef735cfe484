#pragma once

#include <map>
#include <string>
#include <vector>

#include "fpp/experiment.hpp"

namespace fpp {

inline constexpr const char* kToolVersion = "fpp-0.1.0";

// Shortest round-trip decimal form of a double (locale independent).
std::string format_double(double v);

// Record files are line-delimited: one header line carrying the resolved
// config and an FNV digest of the body, one CSV header, one row per
// replication with fields exactly
//   n,rep,T,T_hat,edges,escaped,an_holds,gn_holds,coupled
std::string render_records(const ExperimentData& data);
void write_records(const std::string& path, const ExperimentData& data);

struct RecordFile {
  std::string header_line;
  std::map<std::string, std::string> header_kv;
  std::vector<ReplicationRecord> records;
};

// Parses and integrity-checks a record file; throws std::runtime_error when
// the body does not match the digest in the header.
RecordFile read_records(const std::string& path);

std::string render_summary_text(const ExperimentData& data,
                                const ExperimentSummary& summary);

// Comment header placed at the top of every artifact file: tool version and
// the full resolved config.
std::string artifact_header(const ResolvedExperiment& resolved,
                            const std::string& kind);

// CSV tables used by `plot` (and any external tool); the first line is an
// artifact header comment, the second the column header.
std::string render_per_n_csv(const ExperimentData& data,
                             const ExperimentSummary& summary);
std::string render_events_csv(const ExperimentData& data,
                              const ExperimentSummary& summary);
std::string render_subsequence_csv(const ExperimentData& data,
                                   const ExperimentSummary& summary);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace fpp
