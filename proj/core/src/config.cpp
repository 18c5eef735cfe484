#include "fpp/config.hpp"

#include <algorithm>
#include <sstream>

#include "fpp/records.hpp"

namespace fpp {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int64_t r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw config_error("bad integer for " + key + ": '" + v + "'");
  }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    uint64_t r = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw config_error("bad unsigned integer for " + key + ": '" + v + "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw config_error("bad real for " + key + ": '" + v + "'");
  }
}

}  // namespace

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream ss(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("line " + std::to_string(lineno) +
                           ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw config_error("line " + std::to_string(lineno) + ": empty section");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) +
                         ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw config_error("line " + std::to_string(lineno) +
                         ": key outside any [section]");
    std::string full = section + "." + key;
    if (kv.count(full))
      throw config_error("duplicate key: " + full);
    kv[full] = value;
  }
  return kv;
}

void apply_overrides(std::map<std::string, std::string>& kv,
                     const std::vector<std::string>& overrides) {
  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw config_error("override must be section.key=value: " + ov);
    std::string key = trim(ov.substr(0, eq));
    std::string value = trim(ov.substr(eq + 1));
    if (key.find('.') == std::string::npos)
      throw config_error("override key must be section.key: " + ov);
    kv[key] = value;
  }
}

ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;

  // collect schedule specs first: schedule.spec.0, schedule.spec.1, ...
  std::vector<DistributionSpec> specs;
  for (size_t i = 0;; ++i) {
    auto it = kv.find("schedule.spec." + std::to_string(i));
    if (it == kv.end()) break;
    try {
      specs.push_back(DistributionSpec::parse(it->second));
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("schedule.spec.") + std::to_string(i) +
                         ": " + e.what());
    }
  }

  ScheduleRule rule = ScheduleRule::kConstant;
  std::vector<std::string> known = {
      "experiment.d",           "experiment.n_grid",
      "experiment.replications","experiment.eta",
      "experiment.alpha",       "experiment.box_factor",
      "experiment.master_seed", "experiment.outputs",
      "experiment.threads",     "experiment.mem_limit_mb",
      "experiment.subseq_epsilon", "schedule.rule"};

  for (const auto& [key, value] : kv) {
    if (key.rfind("schedule.spec.", 0) == 0) {
      size_t idx = 0;
      try {
        idx = std::stoul(key.substr(14));
      } catch (const std::exception&) {
        throw config_error("unknown key: " + key);
      }
      if (idx >= specs.size())
        throw config_error("schedule specs must be numbered contiguously "
                           "from spec.0; stray key: " + key);
      continue;
    }
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw config_error("unknown key: " + key);
  }

  for (const auto& [key, value] : kv) {
    if (key == "experiment.d") {
      cfg.d = static_cast<int32_t>(parse_int(key, value));
    } else if (key == "experiment.n_grid") {
      cfg.n_grid.clear();
      std::stringstream gs(value);
      std::string tok;
      while (std::getline(gs, tok, ','))
        cfg.n_grid.push_back(parse_int(key, trim(tok)));
    } else if (key == "experiment.replications") {
      cfg.replications = parse_int(key, value);
    } else if (key == "experiment.eta") {
      cfg.eta = parse_real(key, value);
    } else if (key == "experiment.alpha") {
      if (value == "auto")
        cfg.alpha.reset();
      else
        cfg.alpha = parse_real(key, value);
    } else if (key == "experiment.box_factor") {
      if (value == "auto")
        cfg.box_factor.reset();
      else
        cfg.box_factor = parse_real(key, value);
    } else if (key == "experiment.master_seed") {
      cfg.master_seed = parse_u64(key, value);
    } else if (key == "experiment.outputs") {
      cfg.outputs = value;
    } else if (key == "experiment.threads") {
      cfg.threads = static_cast<int32_t>(parse_int(key, value));
    } else if (key == "experiment.mem_limit_mb") {
      cfg.mem_limit_mb = parse_int(key, value);
    } else if (key == "experiment.subseq_epsilon") {
      cfg.subseq_epsilon = parse_real(key, value);
    } else if (key == "schedule.rule") {
      std::stringstream rs(value);
      std::string name;
      rs >> name;
      if (name == "constant")
        rule = ScheduleRule::kConstant;
      else if (name == "periodic")
        rule = ScheduleRule::kPeriodic;
      else if (name == "coordinate")
        rule = ScheduleRule::kCoordinate;
      else
        throw config_error("schedule.rule must be constant|periodic|coordinate");
      int64_t m = 0;
      if (rs >> m) {
        // optional explicit period; must match the spec count
        if (m <= 0) throw config_error("schedule rule period must be positive");
        if (!specs.empty() && static_cast<size_t>(m) != specs.size())
          throw config_error("schedule rule period does not match spec count");
      }
    }
  }

  if (!specs.empty()) {
    try {
      cfg.schedule = DistributionSchedule(rule, std::move(specs));
    } catch (const std::invalid_argument& e) {
      throw config_error(std::string("schedule: ") + e.what());
    }
  } else if (kv.count("schedule.rule")) {
    throw config_error("schedule.rule given but no schedule.spec.0");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw config_error(e.what());
  }
  auto kv = parse_flat_config(text);
  apply_overrides(kv, overrides);
  return config_from_map(kv);
}

}  // namespace fpp
