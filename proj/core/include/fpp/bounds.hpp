#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "fpp/schedule.hpp"

namespace fpp {

// Raised when no certificate exists on the search grid (schedule too
// concentrated near zero).
class derivation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Certified per-edge Chernoff constants for P(T(pi) <= beta1 * k) <= e^{-dk}.
// Invariants (re-verified by direct evaluation before any certificate is
// returned):
//   small_time_mass(eps) <= e^{-6d}/2     and     e^{-s*eps} <= e^{-6d}/2
//   e^{s*beta1} * mgf_sup <= e^{-d}
//   beta1 < inf_i E t(e_i)
struct ChernoffCertificate {
  double s = 0.0;
  double eps = 0.0;
  double beta1 = 0.0;
  double mgf_sup = 0.0;  // max over specs of E e^{-s t}
  double rate = 0.0;     // certified exponent per edge: -(s*beta1 + log mgf_sup) >= d
  int32_t d = 0;

  bool verify(const DistributionSchedule& schedule) const;
};

// Derived constants for one (schedule, d, eta) context.
struct BoundReport {
  int32_t d = 0;
  double eta = 0.0;
  double delta = 0.0;        // d - log(2d), natural log
  double beta2 = 0.0;        // decay rate of the E_k tail in k
  double geom_constant = 0.0;// 1 / (1 - e^{-delta})
  double alpha = 0.0;
  double cap_k = 0.0;        // K with 6(1+d) < K < 6(1+d)+eta and K*alpha > 1+d
  double mu_sup = 0.0;
  double mu_inf = 0.0;
  double box_factor = 0.0;   // 8 * mu_sup / beta1
  ChernoffCertificate chernoff;
  uint64_t schedule_digest = 0;
};

// delta = d - log(2d); positive for every d >= 2.
double delta_constant(int32_t d);

// Finds (eps, s, beta1) satisfying the certificate invariants: eps is the
// largest value in {2^-1, ..., 2^-40} with small_time_mass(eps) <= e^{-6d}/2,
// s starts at 6d/eps and doubles until the two-piece MGF bound holds, and
// beta1 = min(d/s, 0.99 * inf E t).  Throws derivation_error when no grid
// eps satisfies the mass condition.
ChernoffCertificate derive_chernoff(const DistributionSchedule& schedule,
                                    int32_t d);

// Closed geometric-series form of the E_k tail:
//   e^{-delta * ceil(8 mu_sup / beta1) * k} / (1 - e^{-delta}).
double ek_tail(double beta1, double mu_sup, int32_t d, int64_t k);

// Fourth-moment Chebyshev bound on P(A_n^c), A_n = {sum_{i<=2n} t(f_i) <= 6 mu n}:
//   [ sum_i m4_i + 3 sum_{i != j} m2_i m2_j ] / (4 mu n)^4
// over the specs of the first 2n axis edges.  Throws std::domain_error when
// any spec lacks a fourth moment.
double an_bound(const DistributionSchedule& schedule, int32_t d, int64_t n);

struct AlphaK {
  double alpha = 0.0;
  double k = 0.0;
};

// K = 6(1+d) + eta/2 and alpha = midpoint of ((1+d)/K, 1/6); the returned
// pair always satisfies alpha < 1/6, 6(1+d) < K < 6(1+d)+eta, K*alpha > 1+d.
AlphaK choose_alpha_k(int32_t d, double eta);

// Markov bound on P(G_n^c), G_n = {every edge weight in B_{ceil(box_factor*n)}
// is below n^alpha}:  (#edges) * n^{-K alpha} * sup_i E t^K.
double gn_bound(const DistributionSchedule& schedule, int32_t d, double alpha,
                double k, int64_t n, double box_factor);

// The martingale lemma's variance bound: 4 n^{2 alpha} * E(#pi_n), with the
// mean geodesic edge count supplied by the harness.
double lemma_variance_bound(int64_t n, double alpha, double mean_path_len);

// Full report for the CLI `bounds` subcommand.
BoundReport derive_bound_report(const DistributionSchedule& schedule, int32_t d,
                                double eta);

}  // namespace fpp
