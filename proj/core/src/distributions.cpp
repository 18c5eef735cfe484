#include "fpp/distributions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
  return v;
}

}  // namespace

double quantize_weight(double w) {
  if (w <= 0.0) return 0.0;
  if (w >= kWeightCap) return kWeightCap;
  double q = std::round(w / kWeightGrid) * kWeightGrid;
  // a positive sample never lands on exactly zero: the solver's geodesic
  // reconstruction relies on strictly positive weights for continuous laws
  return q == 0.0 ? kWeightGrid : q;
}

double quantized_cap(int64_t n, double alpha) {
  if (n < 1) throw std::domain_error("truncation level n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0 / 6.0))
    throw std::domain_error("alpha must lie in (0, 1/6)");
  double cap = std::pow(static_cast<double>(n), alpha);
  double q = std::floor(cap / kWeightGrid) * kWeightGrid;
  return q < 0.0 ? 0.0 : q;
}

DistributionSpec DistributionSpec::shifted_uniform(double a, double b) {
  require_finite(a, "uniform a");
  require_finite(b, "uniform b");
  if (a < 0.0 || !(b > a) || b > kWeightCap)
    throw std::invalid_argument("shifted-uniform requires 0 <= a < b <= 2^20");
  return DistributionSpec(Family::kShiftedUniform, a, b, 0.0);
}

DistributionSpec DistributionSpec::shifted_exponential(double shift,
                                                       double rate) {
  require_finite(shift, "exponential shift");
  require_finite(rate, "exponential rate");
  if (shift < 0.0 || rate <= 0.0)
    throw std::invalid_argument(
        "shifted-exponential requires shift >= 0 and rate > 0");
  return DistributionSpec(Family::kShiftedExponential, shift, rate, 0.0);
}

DistributionSpec DistributionSpec::pareto(double x_m, double shape) {
  require_finite(x_m, "pareto x_m");
  require_finite(shape, "pareto shape");
  if (x_m <= 0.0 || shape <= 0.0)
    throw std::invalid_argument("pareto requires x_m > 0 and shape > 0");
  return DistributionSpec(Family::kPareto, x_m, shape, 0.0);
}

DistributionSpec DistributionSpec::deterministic(double c) {
  require_finite(c, "deterministic value");
  if (c < 0.0 || c > kWeightCap)
    throw std::invalid_argument("deterministic requires 0 <= c <= 2^20");
  return DistributionSpec(Family::kDeterministic, c, 0.0, 0.0);
}

DistributionSpec DistributionSpec::bernoulli_mix(double lo, double hi,
                                                 double p_lo) {
  require_finite(lo, "bernoulli lo");
  require_finite(hi, "bernoulli hi");
  require_finite(p_lo, "bernoulli p_lo");
  if (lo < 0.0 || hi < lo || hi > kWeightCap || p_lo < 0.0 || p_lo > 1.0)
    throw std::invalid_argument(
        "bernoulli-mix requires 0 <= lo <= hi <= 2^20 and p_lo in [0,1]");
  return DistributionSpec(Family::kBernoulliMix, lo, hi, p_lo);
}

double DistributionSpec::mass_below(double eps) const {
  if (!(eps > 0.0)) throw std::domain_error("eps must be > 0");
  switch (family_) {
    case Family::kShiftedUniform: {
      double a = p_[0], b = p_[1];
      if (eps <= a) return 0.0;
      if (eps >= b) return 1.0;
      return (eps - a) / (b - a);
    }
    case Family::kShiftedExponential: {
      double shift = p_[0], rate = p_[1];
      if (eps <= shift) return 0.0;
      return -std::expm1(-rate * (eps - shift));
    }
    case Family::kPareto: {
      double xm = p_[0], shape = p_[1];
      if (eps <= xm) return 0.0;
      return 1.0 - std::pow(xm / eps, shape);
    }
    case Family::kDeterministic:
      return p_[0] < eps ? 1.0 : 0.0;
    case Family::kBernoulliMix: {
      double lo = p_[0], hi = p_[1], p = p_[2];
      double m = 0.0;
      if (lo < eps) m += p;
      if (hi < eps) m += 1.0 - p;
      return m;
    }
  }
  return 0.0;
}

double DistributionSpec::mass_at_zero() const {
  switch (family_) {
    case Family::kShiftedUniform:
    case Family::kShiftedExponential:
    case Family::kPareto:
      return 0.0;  // continuous
    case Family::kDeterministic:
      return p_[0] == 0.0 ? 1.0 : 0.0;
    case Family::kBernoulliMix: {
      double m = 0.0;
      if (p_[0] == 0.0) m += p_[2];
      if (p_[1] == 0.0) m += 1.0 - p_[2];
      return m;
    }
  }
  return 0.0;
}

double DistributionSpec::moment_ceiling() const {
  return family_ == Family::kPareto ? p_[1] : kInf;
}

double DistributionSpec::moment(double q) const {
  if (!(q > 0.0)) throw std::domain_error("moment order q must be > 0");
  switch (family_) {
    case Family::kShiftedUniform: {
      double a = p_[0], b = p_[1];
      return (std::pow(b, q + 1.0) - std::pow(a, q + 1.0)) /
             ((q + 1.0) * (b - a));
    }
    case Family::kShiftedExponential: {
      // t = shift + Exp(rate):  E t^q = e^{rate*shift} rate^-q Gamma(q+1, rate*shift)
      double shift = p_[0], rate = p_[1];
      if (shift == 0.0) return std::tgamma(q + 1.0) / std::pow(rate, q);
      double z = rate * shift;
      return std::exp(z) * std::pow(rate, -q) * boost::math::tgamma(q + 1.0, z);
    }
    case Family::kPareto: {
      double xm = p_[0], shape = p_[1];
      if (q >= shape) return kInf;
      return shape * std::pow(xm, q) / (shape - q);
    }
    case Family::kDeterministic:
      return std::pow(p_[0], q);
    case Family::kBernoulliMix: {
      double lo = p_[0], hi = p_[1], p = p_[2];
      return p * std::pow(lo, q) + (1.0 - p) * std::pow(hi, q);
    }
  }
  return 0.0;
}

double DistributionSpec::central_m2() const {
  double m1 = moment(1.0);
  return moment(2.0) - m1 * m1;
}

double DistributionSpec::central_m4() const {
  double m1 = moment(1.0);
  double m2 = moment(2.0);
  double m3 = moment(3.0);
  double m4 = moment(4.0);
  return m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
}

double DistributionSpec::laplace(double s) const {
  if (s < 0.0) throw std::domain_error("laplace argument s must be >= 0");
  if (s == 0.0) return 1.0;
  switch (family_) {
    case Family::kShiftedUniform: {
      double a = p_[0], b = p_[1];
      return (std::exp(-s * a) - std::exp(-s * b)) / (s * (b - a));
    }
    case Family::kShiftedExponential: {
      double shift = p_[0], rate = p_[1];
      return std::exp(-s * shift) * rate / (rate + s);
    }
    case Family::kPareto: {
      // E e^{-s t} = int_0^1 exp(-s x_m u^{-1/shape}) du via the inverse CDF;
      // integrand is smooth and vanishes superpolynomially at u = 0.
      double xm = p_[0], shape = p_[1];
      auto f = [&](double u) {
        if (u <= 0.0) return 0.0;
        return std::exp(-s * xm * std::pow(u, -1.0 / shape));
      };
      return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          f, 0.0, 1.0, 12, 1e-12);
    }
    case Family::kDeterministic:
      return std::exp(-s * p_[0]);
    case Family::kBernoulliMix: {
      double lo = p_[0], hi = p_[1], p = p_[2];
      return p * std::exp(-s * lo) + (1.0 - p) * std::exp(-s * hi);
    }
  }
  return 0.0;
}

double DistributionSpec::sample(double u) const {
  double t = 0.0;
  switch (family_) {
    case Family::kShiftedUniform:
      t = p_[0] + (p_[1] - p_[0]) * u;
      break;
    case Family::kShiftedExponential:
      // u in [0,1) so log1p(-u) is finite
      t = p_[0] - std::log1p(-u) / p_[1];
      break;
    case Family::kPareto:
      t = p_[0] * std::pow(1.0 - u, -1.0 / p_[1]);
      break;
    case Family::kDeterministic:
      return quantize_weight(p_[0]);
    case Family::kBernoulliMix:
      t = u < p_[2] ? p_[0] : p_[1];
      break;
  }
  return quantize_weight(t);
}

std::string DistributionSpec::to_string() const {
  char buf[128];
  switch (family_) {
    case Family::kShiftedUniform:
      std::snprintf(buf, sizeof buf, "shifted-uniform(%.17g, %.17g)", p_[0], p_[1]);
      break;
    case Family::kShiftedExponential:
      std::snprintf(buf, sizeof buf, "shifted-exponential(%.17g, %.17g)", p_[0], p_[1]);
      break;
    case Family::kPareto:
      std::snprintf(buf, sizeof buf, "pareto(%.17g, %.17g)", p_[0], p_[1]);
      break;
    case Family::kDeterministic:
      std::snprintf(buf, sizeof buf, "deterministic(%.17g)", p_[0]);
      break;
    case Family::kBernoulliMix:
      std::snprintf(buf, sizeof buf, "bernoulli-mix(%.17g, %.17g, %.17g)", p_[0],
                    p_[1], p_[2]);
      break;
  }
  return buf;
}

DistributionSpec DistributionSpec::parse(const std::string& text) {
  auto open = text.find('(');
  auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("distribution spec must look like family(args): " + text);
  std::string name = text.substr(0, open);
  // trim
  while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
  size_t b = 0;
  while (b < name.size() && (name[b] == ' ' || name[b] == '\t')) ++b;
  name = name.substr(b);

  std::vector<double> args;
  std::string inner = text.substr(open + 1, close - open - 1);
  std::stringstream ss(inner);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      args.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad numeric argument in spec: " + text);
    }
  }

  auto need = [&](size_t k) {
    if (args.size() != k)
      throw std::invalid_argument("wrong argument count for " + name);
  };
  if (name == "shifted-uniform" || name == "uniform") {
    need(2);
    return shifted_uniform(args[0], args[1]);
  }
  if (name == "shifted-exponential") {
    need(2);
    return shifted_exponential(args[0], args[1]);
  }
  if (name == "pareto") {
    need(2);
    return pareto(args[0], args[1]);
  }
  if (name == "deterministic") {
    need(1);
    return deterministic(args[0]);
  }
  if (name == "bernoulli-mix") {
    need(3);
    return bernoulli_mix(args[0], args[1], args[2]);
  }
  throw std::invalid_argument("unknown distribution family: " + name);
}

}  // namespace fpp
