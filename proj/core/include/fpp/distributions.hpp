#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace fpp {

// All passage times live on a dyadic grid: sampled values are rounded to the
// nearest multiple of 2^-20 and capped at 2^20.  Path sums of grid values
// stay exactly representable in double far beyond any box this project can
// hold (sums below 2^32), so every time comparison in the solver and the
// tie-breaking procedure is exact, with no epsilon anywhere.
constexpr double kWeightGrid = 0x1.0p-20;
constexpr double kWeightCap = 0x1.0p20;

double quantize_weight(double w);

// Weight cap used for truncated passage times: n^alpha rounded DOWN to the
// grid, so a truncated weight never exceeds n^alpha itself.
double quantized_cap(int64_t n, double alpha);

enum class Family : uint8_t {
  kShiftedUniform,    // uniform on [a, b], 0 <= a < b
  kShiftedExponential,// shift + Exp(rate)
  kPareto,            // scale x_m, shape a
  kDeterministic,     // point mass at c
  kBernoulliMix,      // lo w.p. p_lo, else hi
};

// One parametric passage-time law.  Every family exposes analytic
// P(t < eps), E t^q for real q (with its moment ceiling), and the Laplace
// transform E e^{-s t} (closed form, or quadrature for Pareto).
class DistributionSpec {
 public:
  static DistributionSpec shifted_uniform(double a, double b);
  static DistributionSpec shifted_exponential(double shift, double rate);
  static DistributionSpec pareto(double x_m, double shape);
  static DistributionSpec deterministic(double c);
  static DistributionSpec bernoulli_mix(double lo, double hi, double p_lo);

  Family family() const { return family_; }
  double param(int i) const { return p_[i]; }

  // P(t < eps); eps must be > 0.
  double mass_below(double eps) const;
  // P(t == 0); condition (i) fails for a finite spec set iff this is > 0.
  double mass_at_zero() const;

  // E t^q for q > 0; +infinity at or above the family's moment ceiling.
  double moment(double q) const;
  // Smallest q with E t^q = infinity (Pareto: shape); +infinity otherwise.
  double moment_ceiling() const;

  double mean() const { return moment(1.0); }

  // Central moments E (t - Et)^2 and E (t - Et)^4.
  double central_m2() const;
  double central_m4() const;

  // E e^{-s t}, s >= 0.
  double laplace(double s) const;

  // Inverse-CDF sample from a uniform u in [0,1), quantized to the grid.
  double sample(double u) const;

  // "family(p1, p2, ...)" in the config grammar.
  std::string to_string() const;
  static DistributionSpec parse(const std::string& text);

  bool operator==(const DistributionSpec&) const = default;

 private:
  DistributionSpec(Family f, double p0, double p1, double p2)
      : family_(f), p_{p0, p1, p2} {}

  Family family_;
  double p_[3];
};

}  // namespace fpp
