#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpp/config.hpp"

namespace fpp::cli {

struct Options {
  std::string subcommand;
  std::string config_path;
  std::vector<std::string> overrides;  // section.key=value
  std::string out_dir;                 // from --out
  std::optional<uint64_t> seed;
  std::optional<int32_t> threads;
  int verbosity = 1;  // 0 quiet, 1 normal, 2 verbose
};

// Exit codes: 0 success, 1 invariant failure, 2 config error, 3 resource
// refusal.
int dispatch(const Options& opts);

// Loads the config file (when given), applies --set overrides and the
// flag/env precedence for the output directory, seed and threads.
ExperimentConfig assemble_config(const Options& opts);

int run_bounds(const ExperimentConfig& cfg, const std::string& out_dir,
               int verbosity);
int run_run(const ExperimentConfig& cfg, const std::string& out_dir,
            int verbosity);
int run_verify(const ExperimentConfig& cfg, const std::string& out_dir,
               int verbosity);
int run_plot(const std::string& out_dir, int verbosity);

}  // namespace fpp::cli
