#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hurstci {

// Finite real filter a_0..a_ell with p vanishing moments:
// sum_q q^j a_q = 0 for j < p and sum_q q^p a_q != 0.
struct Filter {
  std::vector<double> coeffs;
  std::string name;
  int order = 0;  // p

  // nonzero when the filter is a dilation (i_base)^dilation of a binomial
  // increment filter; the closed-form l1 path is restricted to this family
  int increment_base = 0;
  int dilation = 1;

  int length_minus_one() const { return static_cast<int>(coeffs.size()) - 1; }
  bool dilated_increment() const { return increment_base > 0; }
};

// Largest p with vanishing moments up to p-1 (absolute tolerance per moment).
// Throws std::invalid_argument if every tested moment vanishes.
int detect_order(std::span<const double> coeffs, double tol = 1e-10);

// Trims leading zeros, requires >= 2 coefficients, detects the order.
Filter make_filter(std::vector<double> coeffs, std::string name = {});

// Signed binomial difference filter of order p (i1 = {-1,1}, i2 = {1,-2,1}, ...).
Filter make_increment_filter(int p);

// Named filters: i1..i4, d4, d6, d8, s8, c6, c12.
Filter builtin_filter(std::string_view name);
std::vector<std::string> builtin_filter_names();

// a^m: a_{i/m} when m | i, zero otherwise; same order, length m*ell + 1.
Filter dilate(const Filter& f, int m);

// alpha_j = sum_{q-r=j} a_q a_r for j = -ell..ell (stored 0..2*ell).
struct AlphaProfile {
  int ell = 0;
  std::vector<double> alpha;
  double at(int lag) const { return alpha[static_cast<size_t>(lag + ell)]; }
  double moment(int h) const;      // sum_j j^h alpha_j
  double abs_moment(int h) const;  // sum_j |j|^h |alpha_j|
};
AlphaProfile alpha_profile(const Filter& f);

// pi_H^a(j) = -1/2 sum_{q,r} a_q a_r |q-r+j|^{2H}; zero at H=1 for p >= 2.
double pi_cov(const Filter& f, double hurst, long lag);

// rho_H^a(j) = pi_H^a(j)/pi_H^a(0); H=1 evaluated as the log-weighted limit.
double rho(const Filter& f, double hurst, long lag);

// Correlation of the two dilations a^{m1}, a^{m2} at lag i (not symmetric in i).
double cross_rho(const Filter& base, int m1, int m2, double hurst, long lag);

// tau^a = sum_{q,r} a_q a_r (q-r)^2 log|q-r|, with 0 log 0 = 0.
double tau_a(const Filter& f);

struct CorrelationProfile {
  std::string filter_name;
  double hurst = 0.0;
  std::vector<double> values;  // rho at lags 0..truncation_lag (symmetric)
  double l1_norm = 0.0;
  double l2_norm_sq = 0.0;
  long truncation_lag = 0;
  double tail_bound = 0.0;  // analytic bound on the unresolved remainder
};

// sum_{j in Z} |rho_H^a(j)|. Head lags are summed explicitly up to a lag
// beyond which the sign of rho is provably constant; the remaining tail is
// the exact telescoped sum (S^H algebra). Requires p >= 2, or p = 1 with
// H <= 1/2 (throws std::domain_error otherwise).
CorrelationProfile rho_l1_norm(const Filter& f, double hurst, double rel_tol = 1e-10);

// Closed-form l1 norm for dilated increment filters (finite sums);
// exact limits at H = 1/2 and H = 1. Throws for other filters.
double rho_l1_exact(const Filter& f, double hurst);

// sum_j rho_H^a(j)^2; requires p >= 2 or H < 3/4.
double rho_l2_norm_sq(const Filter& f, double hurst, double rel_tol = 1e-10);

// sum_{i in Z} rho_H^{a^{m1},a^{m2}}(i)^2 (both tails).
double cross_rho_l2_norm_sq(const Filter& base, int m1, int m2, double hurst,
                            double rel_tol = 1e-10);

// Upper end of the H-domain used for kappa: 1/2 for p = 1, 1 for p >= 2.
double hurst_domain_max(const Filter& f);

// kappa^a = 2 sup_H ||rho_H^a||_l1 over [0, tau]; dense grid (step 1e-3)
// plus golden-section refinement; memoized. Uses the closed form for
// dilated increment filters. Requires tau^a != 0 when p >= 2.
double kappa(const Filter& f);

}  // namespace hurstci
