#include "fpp/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fpp {

double compensated_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

MomentSummary summarize_moments(std::span<const double> xs) {
  MomentSummary m;
  m.count = static_cast<int64_t>(xs.size());
  if (m.count == 0) return m;
  m.mean = compensated_sum(xs) / static_cast<double>(m.count);
  if (m.count < 2) return m;

  std::vector<double> d2(xs.size()), d4(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    double d = xs[i] - m.mean;
    d2[i] = d * d;
    d4[i] = d2[i] * d2[i];
  }
  const double n = static_cast<double>(m.count);
  const double s2_sum = compensated_sum(d2);
  m.variance = s2_sum / (n - 1.0);
  m.m4 = compensated_sum(d4) / n;
  m.se_mean = std::sqrt(m.variance / n);
  // SE of the unbiased sample variance under the normal approximation:
  // Var(s^2) ~ (m4 - (n-3)/(n-1) s^4) / n.
  double v = (m.m4 - (n - 3.0) / (n - 1.0) * m.variance * m.variance) / n;
  m.se_variance = v > 0.0 ? std::sqrt(v) : 0.0;
  return m;
}

Frequency make_frequency(int64_t count, int64_t total) {
  if (total <= 0) throw std::domain_error("frequency needs total > 0");
  Frequency f;
  f.count = count;
  f.total = total;
  f.p_hat = static_cast<double>(count) / static_cast<double>(total);
  f.se = std::sqrt(f.p_hat * (1.0 - f.p_hat) / static_cast<double>(total));
  return f;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit fit;
  if (x.size() != y.size() || x.size() < 2) return fit;
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.valid = true;
  fit.points = static_cast<int64_t>(x.size());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += r * r;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - rss / syy;
  if (x.size() > 2) {
    double sigma2 = rss / (n - 2.0);
    fit.slope_se = std::sqrt(sigma2 / sxx);
    fit.ci95_halfwidth = t_quantile_975(fit.points - 2) * fit.slope_se;
  } else {
    fit.slope_se = std::numeric_limits<double>::infinity();
    fit.ci95_halfwidth = std::numeric_limits<double>::infinity();
  }
  return fit;
}

double t_quantile_975(int64_t df) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw std::domain_error("t quantile needs df >= 1");
  if (df <= 30) return table[df - 1];
  return 1.96;
}

}  // namespace fpp
