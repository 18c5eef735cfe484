#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fpp {

// Neumaier-compensated sum in the given order.  Aggregation calls this on
// sorted record keys so results never depend on scheduling.
double compensated_sum(std::span<const double> xs);

struct MomentSummary {
  int64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;     // unbiased sample variance
  double se_mean = 0.0;
  double se_variance = 0.0;  // normal-approximation SE using empirical m4
  double m4 = 0.0;           // central fourth moment (biased, plug-in)
};

// Two-pass moments over xs in the given order; needs count >= 2 for the
// variance and its standard error.
MomentSummary summarize_moments(std::span<const double> xs);

// p_hat and its binomial standard error sqrt(p(1-p)/n).
struct Frequency {
  int64_t count = 0;
  int64_t total = 0;
  double p_hat = 0.0;
  double se = 0.0;
};
Frequency make_frequency(int64_t count, int64_t total);

struct LineFit {
  bool valid = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
  double ci95_halfwidth = 0.0;  // t-quantile * slope_se
  int64_t points = 0;
};

// Ordinary least squares of y against x (needs >= 3 points; with exactly 2
// residual dof vanish and the CI is reported as infinite).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Two-sided 97.5% Student-t quantile, df >= 1 (1.96 beyond the table).
double t_quantile_975(int64_t df);

}  // namespace fpp
