#include "fpp/bounds.hpp"

#include <cmath>
#include <limits>

namespace fpp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double delta_constant(int32_t d) {
  if (d < 2) throw std::domain_error("delta requires d >= 2");
  return d - std::log(2.0 * d);
}

bool ChernoffCertificate::verify(const DistributionSchedule& schedule) const {
  const double half = std::exp(-6.0 * d) / 2.0;
  if (!(schedule.small_time_mass(eps) <= half)) return false;
  if (!(std::exp(-s * eps) <= half)) return false;
  const double mgf = schedule.laplace_sup(s);
  if (!(std::exp(s * beta1) * mgf <= std::exp(-static_cast<double>(d))))
    return false;
  if (!(beta1 > 0.0 && beta1 < schedule.mean_inf())) return false;
  return true;
}

ChernoffCertificate derive_chernoff(const DistributionSchedule& schedule,
                                    int32_t d) {
  if (d < 2) throw std::domain_error("derive_chernoff requires d >= 2");
  const double half = std::exp(-6.0 * d) / 2.0;

  double eps = 0.0;
  for (int p = 1; p <= 40; ++p) {
    double cand = std::ldexp(1.0, -p);
    if (schedule.small_time_mass(cand) <= half) {
      eps = cand;
      break;
    }
  }
  if (eps == 0.0)
    throw derivation_error(
        "no eps in {2^-1..2^-40} satisfies sup_i P(t < eps) <= e^{-6d}/2; "
        "schedule is too concentrated near zero (mass at 2^-40: " +
        std::to_string(schedule.small_time_mass(std::ldexp(1.0, -40))) + ")");

  // Start at the paper's s = 6d/eps and enlarge until both halves of the
  // two-piece MGF bound hold with room: mass + e^{-s eps} <= e^{-3d}.
  double s = 6.0 * d / eps;
  while (std::exp(-s * eps) > half ||
         schedule.small_time_mass(eps) + std::exp(-s * eps) >
             std::exp(-3.0 * d)) {
    s *= 2.0;
    if (!std::isfinite(s))
      throw derivation_error("Chernoff s diverged; schedule unusable");
  }

  ChernoffCertificate cert;
  cert.d = d;
  cert.eps = eps;
  cert.s = s;
  cert.beta1 = std::min(d / s, 0.99 * schedule.mean_inf());
  cert.mgf_sup = schedule.laplace_sup(s);
  cert.rate = -(s * cert.beta1 + std::log(cert.mgf_sup));

  if (!cert.verify(schedule))
    throw derivation_error(
        "certificate candidate failed re-verification (eps=" +
        std::to_string(eps) + ", s=" + std::to_string(s) + ")");
  return cert;
}

double ek_tail(double beta1, double mu_sup, int32_t d, int64_t k) {
  if (!(beta1 > 0.0)) throw std::domain_error("ek_tail requires beta1 > 0");
  if (!(mu_sup >= beta1)) throw std::domain_error("ek_tail requires mu_sup >= beta1");
  if (k < 1) throw std::domain_error("ek_tail requires k >= 1");
  const double delta = delta_constant(d);
  const double ratio = std::ceil(8.0 * mu_sup / beta1);
  return std::exp(-delta * ratio * static_cast<double>(k)) /
         (1.0 - std::exp(-delta));
}

double an_bound(const DistributionSchedule& schedule, int32_t d, int64_t n) {
  if (n < 1) throw std::domain_error("an_bound requires n >= 1");
  double sum_m2 = 0.0, sum_m2_sq = 0.0, sum_m4 = 0.0;
  for (int64_t i = 1; i <= 2 * n; ++i) {
    const DistributionSpec& spec = schedule.spec_for_axis_edge(d, i);
    if (4.0 >= spec.moment_ceiling())
      throw std::domain_error("an_bound requires finite fourth moments: " +
                              spec.to_string());
    double m2 = spec.central_m2();
    double m4 = spec.central_m4();
    sum_m2 += m2;
    sum_m2_sq += m2 * m2;
    sum_m4 += m4;
  }
  // E(sum X_i)^4 = sum E X_i^4 + 3 sum_{i != j} E X_i^2 E X_j^2 for
  // independent mean-zero X_i (multinomial coefficient 6 per unordered pair).
  const double fourth = sum_m4 + 3.0 * (sum_m2 * sum_m2 - sum_m2_sq);
  const double mu = schedule.mean_sup();
  const double denom = 4.0 * mu * static_cast<double>(n);
  if (denom == 0.0) return 0.0;  // all-zero schedule: A_n always holds
  return fourth / (denom * denom * denom * denom);
}

AlphaK choose_alpha_k(int32_t d, double eta) {
  if (d < 2) throw std::domain_error("choose_alpha_k requires d >= 2");
  if (!(eta > 0.0)) throw std::domain_error("choose_alpha_k requires eta > 0");
  AlphaK out;
  out.k = 6.0 * (1.0 + d) + eta / 2.0;
  const double lo = (1.0 + d) / out.k;
  const double hi = 1.0 / 6.0;
  out.alpha = 0.5 * (lo + hi);
  // the interval is nonempty whenever K > 6(1+d); assert the contract
  if (!(out.alpha < hi && out.alpha > 0.0 && out.k > 6.0 * (1.0 + d) &&
        out.k < 6.0 * (1.0 + d) + eta && out.k * out.alpha > 1.0 + d))
    throw std::logic_error("choose_alpha_k postcondition violated");
  return out;
}

double gn_bound(const DistributionSchedule& schedule, int32_t d, double alpha,
                double k, int64_t n, double box_factor) {
  if (n < 1) throw std::domain_error("gn_bound requires n >= 1");
  const double mk = schedule.moment_sup(k);
  if (!(mk < kInf))
    throw std::domain_error("gn_bound requires a finite K-th moment");
  const int32_t radius = static_cast<int32_t>(
      std::ceil(box_factor * static_cast<double>(n)));
  const double edges = static_cast<double>(
      box_edge_count(Box{d, std::max<int32_t>(radius, 1)}));
  return edges * std::pow(static_cast<double>(n), -k * alpha) * mk;
}

double lemma_variance_bound(int64_t n, double alpha, double mean_path_len) {
  if (!(mean_path_len >= static_cast<double>(n)))
    throw std::domain_error(
        "mean path length cannot be below n (paths to distance n have >= n edges)");
  return 4.0 * std::pow(static_cast<double>(n), 2.0 * alpha) * mean_path_len;
}

BoundReport derive_bound_report(const DistributionSchedule& schedule, int32_t d,
                                double eta) {
  schedule.validate(d, eta);
  BoundReport r;
  r.d = d;
  r.eta = eta;
  r.delta = delta_constant(d);
  r.geom_constant = 1.0 / (1.0 - std::exp(-r.delta));
  r.chernoff = derive_chernoff(schedule, d);
  r.mu_sup = schedule.mean_sup();
  r.mu_inf = schedule.mean_inf();
  r.beta2 = r.delta * std::ceil(8.0 * r.mu_sup / r.chernoff.beta1);
  AlphaK ak = choose_alpha_k(d, eta);
  r.alpha = ak.alpha;
  r.cap_k = ak.k;
  r.box_factor = 8.0 * r.mu_sup / r.chernoff.beta1;
  r.schedule_digest = schedule.digest();
  return r;
}

}  // namespace fpp
