#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpp/experiment.hpp"

namespace fpp {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat structured text: `[section]` headers, `key = value` lines, `#`
// comments.  Returns "section.key" -> value; duplicate keys are an error.
std::map<std::string, std::string> parse_flat_config(const std::string& text);

// Applies `section.key=value` override strings on top of parsed values.
void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides);

// Builds an ExperimentConfig; any key outside the documented set is a hard
// error (no silent typos).
ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv);

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides);

}  // namespace fpp
