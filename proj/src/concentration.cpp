#include "hurstci/concentration.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hurstci {

namespace {

void check_bound(const ConcentrationBound& b) {
  if (!(b.kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (b.n_eff < 1) throw std::invalid_argument("effective sample size must be >= 1");
}

void check_params(const GeneralBoundParams& p) {
  if (p.a < 0.0 || !(p.b > 0.0)) throw std::invalid_argument("need a >= 0 and b > 0");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must be in (0,1)");
}

double log_phi_r_kappa(double t, double kappa, double n) {
  double rn = std::sqrt(n);
  return -t * rn / kappa + n / kappa * std::log1p(t / rn);
}

double log_phi_l_kappa(double t, double kappa, double n) {
  double rn = std::sqrt(n);
  if (t >= rn) return -std::numeric_limits<double>::infinity();
  return t * rn / kappa + n / kappa * std::log1p(-t / rn);
}

double log_phi_r_gen(double t, double a, double b) {
  if (a == 0.0) return -t * t / b;
  return -2.0 * t / a + 2.0 * b / (a * a) * std::log1p(a * t / b);
}

double log_phi_l_gen(double t, double a, double b) {
  if (a == 0.0) return -t * t / b;
  if (t >= b / a) return -std::numeric_limits<double>::infinity();
  return 2.0 * t / a + 2.0 * b / (a * a) * std::log1p(-a * t / b);
}

// bisection for a decreasing log-bound: find t with f(t) = log(alpha)
template <typename F>
double bisect_decreasing(F f, double lo, double hi, double target) {
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double phi_r(double t, const ConcentrationBound& b) {
  check_bound(b);
  if (!(t > 0.0)) throw std::domain_error("t must be positive");
  return std::exp(log_phi_r_kappa(t, b.kappa, double(b.n_eff)));
}

double phi_l(double t, const ConcentrationBound& b) {
  check_bound(b);
  if (t < 0.0) throw std::domain_error("t must be nonnegative");
  double lg = log_phi_l_kappa(t, b.kappa, double(b.n_eff));
  return std::isinf(lg) ? 0.0 : std::exp(lg);
}

double phi_r_general(double t, const GeneralBoundParams& p) {
  check_params(p);
  if (!(t > 0.0)) throw std::domain_error("t must be positive");
  return std::exp(log_phi_r_gen(t, p.a, p.b));
}

double phi_l_general(double t, const GeneralBoundParams& p) {
  check_params(p);
  if (t < 0.0) throw std::domain_error("t must be nonnegative");
  double lg = log_phi_l_gen(t, p.a, p.b);
  return std::isinf(lg) ? 0.0 : std::exp(lg);
}

double nv_phi_r(double t, const GeneralBoundParams& p) {
  check_params(p);
  if (!(t > 0.0)) throw std::domain_error("t must be positive");
  return std::exp(-t * t / (p.a * t + p.b));
}

double nv_phi_l(double t, const GeneralBoundParams& p) {
  check_params(p);
  if (t < 0.0) throw std::domain_error("t must be nonnegative");
  return std::exp(-t * t / p.b);
}

double q_asymptotic(double alpha, double kappa) {
  check_alpha(alpha);
  return std::sqrt(2.0 * kappa * std::log(1.0 / alpha));
}

double invert_phi_r_general(double alpha, const GeneralBoundParams& p) {
  check_alpha(alpha);
  check_params(p);
  const double target = std::log(alpha);
  double hi = std::sqrt(p.b * std::log(1.0 / alpha));  // asymptotic seed
  while (log_phi_r_gen(hi, p.a, p.b) > target) hi *= 2.0;
  return bisect_decreasing([&](double t) { return log_phi_r_gen(t, p.a, p.b); }, 0.0, hi,
                           target);
}

double invert_phi_l_general(double alpha, const GeneralBoundParams& p) {
  check_alpha(alpha);
  check_params(p);
  const double target = std::log(alpha);
  double hi = (p.a == 0.0) ? std::sqrt(p.b * std::log(1.0 / alpha)) * 2.0 : p.b / p.a;
  return bisect_decreasing([&](double t) { return log_phi_l_gen(t, p.a, p.b); }, 0.0, hi,
                           target);
}

double invert_phi_r(double alpha, const ConcentrationBound& b) {
  check_alpha(alpha);
  check_bound(b);
  const double target = std::log(alpha);
  const double n = double(b.n_eff);
  double hi = q_asymptotic(alpha, b.kappa);
  while (log_phi_r_kappa(hi, b.kappa, n) > target) hi *= 2.0;
  return bisect_decreasing([&](double t) { return log_phi_r_kappa(t, b.kappa, n); }, 0.0, hi,
                           target);
}

double invert_phi_l(double alpha, const ConcentrationBound& b) {
  check_alpha(alpha);
  check_bound(b);
  const double target = std::log(alpha);
  const double n = double(b.n_eff);
  return bisect_decreasing([&](double t) { return log_phi_l_kappa(t, b.kappa, n); }, 0.0,
                           std::sqrt(n), target);
}

double invert_nv_phi_r(double alpha, const GeneralBoundParams& p) {
  check_alpha(alpha);
  check_params(p);
  // t^2 = L (a t + b), L = log(1/alpha)
  const double L = std::log(1.0 / alpha);
  return 0.5 * (p.a * L + std::sqrt(p.a * p.a * L * L + 4.0 * p.b * L));
}

double invert_nv_phi_l(double alpha, const GeneralBoundParams& p) {
  check_alpha(alpha);
  check_params(p);
  return std::sqrt(p.b * std::log(1.0 / alpha));
}

}  // namespace hurstci
