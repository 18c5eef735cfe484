#include "fpp/schedule.hpp"

#include <algorithm>
#include <stdexcept>

#include "fpp/rng.hpp"

namespace fpp {

DistributionSchedule::DistributionSchedule(ScheduleRule rule,
                                           std::vector<DistributionSpec> specs)
    : rule_(rule), specs_(std::move(specs)) {
  if (specs_.empty())
    throw std::invalid_argument("schedule needs at least one spec");
  if (rule_ == ScheduleRule::kConstant && specs_.size() != 1)
    throw std::invalid_argument("constant schedule takes exactly one spec");
}

DistributionSchedule DistributionSchedule::constant(DistributionSpec spec) {
  return DistributionSchedule(ScheduleRule::kConstant, {std::move(spec)});
}

const DistributionSpec& DistributionSchedule::spec_for_edge_index(
    int64_t edge_index) const {
  if (specs_.size() == 1) return specs_[0];
  int64_t m = static_cast<int64_t>(specs_.size());
  int64_t r = edge_index % m;
  if (r < 0) r += m;
  return specs_[static_cast<size_t>(r)];
}

const DistributionSpec& DistributionSchedule::spec_for_edge(
    const EdgeId& e, int64_t edge_index) const {
  if (rule_ != ScheduleRule::kCoordinate) return spec_for_edge_index(edge_index);
  int64_t s = e.axis;
  for (int32_t c : e.base.coords) s += c;
  int64_t m = static_cast<int64_t>(specs_.size());
  int64_t r = s % m;
  if (r < 0) r += m;
  return specs_[static_cast<size_t>(r)];
}

const DistributionSpec& DistributionSchedule::spec_for_axis_edge(
    int32_t d, int64_t i) const {
  if (i < 1) throw std::domain_error("axis edge index i must be >= 1");
  EdgeId e = axis_edge(d, static_cast<int32_t>(i));
  return spec_for_edge(e, i - 1);
}

double DistributionSchedule::small_time_mass(double eps) const {
  double m = 0.0;
  for (const auto& s : specs_) m = std::max(m, s.mass_below(eps));
  return m;
}

double DistributionSchedule::moment_sup(double q) const {
  double m = 0.0;
  for (const auto& s : specs_) {
    if (q >= s.moment_ceiling())
      return std::numeric_limits<double>::infinity();
    m = std::max(m, s.moment(q));
  }
  return m;
}

double DistributionSchedule::mean_sup() const {
  double m = 0.0;
  for (const auto& s : specs_) m = std::max(m, s.mean());
  return m;
}

double DistributionSchedule::mean_inf() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : specs_) m = std::min(m, s.mean());
  return m;
}

double DistributionSchedule::laplace_sup(double s) const {
  double m = 0.0;
  for (const auto& sp : specs_) m = std::max(m, sp.laplace(s));
  return m;
}

void DistributionSchedule::validate(int32_t d, double eta) const {
  if (d < 2) throw std::invalid_argument("dimension d must be >= 2");
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  for (const auto& s : specs_) {
    if (s.mass_at_zero() > 0.0)
      throw std::invalid_argument(
          "condition (i) fails: spec " + s.to_string() +
          " has positive mass at 0");
    double p = 6.0 * (1.0 + d) + eta;
    if (!(s.moment(p) < std::numeric_limits<double>::infinity()))
      throw std::invalid_argument(
          "condition (ii) fails: spec " + s.to_string() +
          " lacks a finite moment of order 6(1+d)+eta");
  }
  if (!(mean_inf() > 0.0))
    throw std::invalid_argument("inf_i E t(e_i) must be positive");
  if (!(mean_sup() < std::numeric_limits<double>::infinity()))
    throw std::invalid_argument("sup_i E t(e_i) must be finite");
}

std::string DistributionSchedule::to_string() const {
  std::string out;
  switch (rule_) {
    case ScheduleRule::kConstant: out = "constant"; break;
    case ScheduleRule::kPeriodic: out = "periodic " + std::to_string(specs_.size()); break;
    case ScheduleRule::kCoordinate: out = "coordinate " + std::to_string(specs_.size()); break;
  }
  for (const auto& s : specs_) out += "; " + s.to_string();
  return out;
}

uint64_t DistributionSchedule::digest() const {
  std::string t = to_string();
  return fnv1a64(t.data(), t.size());
}

}  // namespace fpp
