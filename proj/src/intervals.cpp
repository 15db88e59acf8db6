#include "hurstci/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hurstci/concentration.hpp"
#include "hurstci/gaussian.hpp"
#include "hurstci/statistics.hpp"

namespace hurstci {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::CIKnown: return "ci-known";
    case Method::CIUnknown: return "ci-unknown";
    case Method::BNP: return "bnp";
    case Method::CLTKnown: return "clt-known";
    case Method::CLTUnknown: return "clt-unknown";
  }
  return "?";
}

Method method_from_name(std::string_view name) {
  if (name == "ci-known") return Method::CIKnown;
  if (name == "ci-unknown") return Method::CIUnknown;
  if (name == "bnp") return Method::BNP;
  if (name == "clt-known") return Method::CLTKnown;
  if (name == "clt-unknown") return Method::CLTUnknown;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

DilationDesign DilationDesign::standard(int M) {
  if (M < 2) throw std::invalid_argument("need M >= 2");
  DilationDesign design;
  design.M = M;
  design.d.resize(static_cast<size_t>(M));
  double mean = 0.0;
  for (int m = 1; m <= M; ++m) mean += std::log(double(m));
  mean /= M;
  for (int m = 1; m <= M; ++m) design.d[static_cast<size_t>(m - 1)] = std::log(double(m)) - mean;
  return design;
}

std::vector<double> DilationDesign::log_m() const {
  std::vector<double> lm(static_cast<size_t>(M));
  for (int m = 1; m <= M; ++m) lm[static_cast<size_t>(m - 1)] = std::log(double(m));
  return lm;
}

void DilationDesign::validate() const {
  if (M < 2 || d.size() != static_cast<size_t>(M))
    throw std::invalid_argument("design needs M >= 2 weights");
  double sum = 0.0, dlm = 0.0;
  for (int m = 1; m <= M; ++m) {
    double dm = d[static_cast<size_t>(m - 1)];
    if (dm == 0.0) throw std::invalid_argument("design weights must be nonzero");
    sum += dm;
    dlm += dm * std::log(double(m));
  }
  if (std::abs(sum) > 1e-9) throw std::invalid_argument("design weights must sum to zero");
  if (!(dlm > 0.0)) throw std::invalid_argument("d^T log(m) must be positive");
}

double gn(double x, const Filter& filter, long n) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("x must be in (0,1)");
  double pi0 = pi_cov(filter, x, 0);
  if (!(pi0 > 0.0)) throw std::domain_error("pi_x(0) must be positive");
  return 2.0 * x * std::log(double(n)) - std::log(pi0);
}

double gn_inverse(double y, const Filter& filter, long n) {
  double lo = 1e-13, hi = 1.0 - 1e-13;
  if (y <= gn(lo, filter, n)) return 0.0;
  if (y >= gn(hi, filter, n)) return 1.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (gn(mid, filter, n) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

long min_n_invertible(const Filter& filter) {
  if (tau_a(filter) < 0.0)
    throw std::invalid_argument("filter violates the invertibility condition (tau < 0)");
  AlphaProfile al = alpha_profile(filter);
  auto ratio = [&](double x) {
    double num = 0.0, den = 0.0;
    for (int j = 1; j <= al.ell; ++j) {
      double w = al.at(j) * std::pow(double(j), 2.0 * x);
      num += w * std::log(double(j));
      den += w;
    }
    return num / den;
  };
  double best = -1e300, bestx = 0.0;
  const int grid = 1000;
  for (int i = 0; i <= grid; ++i) {
    double x = 1e-9 + (1.0 - 2e-9) * i / grid;
    double v = ratio(x);
    if (v > best) { best = v; bestx = x; }
  }
  double a = std::max(1e-9, bestx - 1.0 / grid), b = std::min(1.0 - 1e-9, bestx + 1.0 / grid);
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = ratio(c), fd = ratio(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = ratio(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = ratio(d);
    }
  }
  best = std::max({best, fc, fd});
  long n_cond = static_cast<long>(std::ceil(std::exp(best) - 1e-12));
  return std::max<long>({n_cond, filter.length_minus_one() + 1, 1});
}

namespace {

struct Quantiles {
  double q_l, q_r, x_l, x_r;
};

Quantiles side_quantiles(double alpha_each_side, double kap, long n_eff) {
  ConcentrationBound bound{kap, n_eff};
  Quantiles q;
  q.q_l = invert_phi_l(alpha_each_side, bound);
  q.q_r = invert_phi_r(alpha_each_side, bound);
  double rn = std::sqrt(double(n_eff));
  q.x_l = 1.0 - q.q_l / rn;
  q.x_r = 1.0 + q.q_r / rn;
  return q;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must be in (0,1)");
}

}  // namespace

ConfidenceInterval ci_known_scale(const SamplePath& path, const Filter& filter, double alpha) {
  check_alpha(alpha);
  const long n = path.n();
  const int ell = filter.length_minus_one();
  ConfidenceInterval ci;
  ci.method = Method::CIKnown;
  ci.level = 1.0 - alpha;
  if (n < std::max<long>(ell + 1, min_n_invertible(filter))) {
    ci.feasible = false;
    return ci;
  }
  const double s = quadratic_variation(path, filter).s_n;
  const double kap = kappa(filter);
  Quantiles q = side_quantiles(alpha / 2.0, kap, n - ell);
  const double tau = hurst_domain_max(filter);
  ci.lower = std::max(0.0, gn_inverse(std::log(q.x_l) - std::log(s), filter, n));
  ci.upper = std::min(tau, gn_inverse(std::log(q.x_r) - std::log(s), filter, n));
  ci.feasible = true;
  ci.diagnostics.s_values = {s};
  ci.diagnostics.q_values = {q.q_l, q.q_r};
  ci.diagnostics.estimator = gn_inverse(-std::log(s), filter, n);
  return ci;
}

ConfidenceInterval ci_unknown_scale(const SamplePath& path, const Filter& filter,
                                    const DilationDesign& design, double alpha) {
  check_alpha(alpha);
  design.validate();
  const long n = path.n();
  const int ell = filter.length_minus_one();
  const int M = design.M;
  ConfidenceInterval ci;
  ci.method = Method::CIUnknown;
  ci.level = 1.0 - alpha;
  if (n < static_cast<long>(M) * ell + 1) {
    ci.feasible = false;
    return ci;
  }
  std::vector<double> lm = design.log_m();
  double dlm = 0.0;
  for (int m = 0; m < M; ++m) dlm += design.d[static_cast<size_t>(m)] * lm[static_cast<size_t>(m)];

  double num_inf = 0.0, num_sup = 0.0;
  for (int m = 1; m <= M; ++m) {
    Filter fm = dilate(filter, m);
    const double s = quadratic_variation(path, fm).s_n;
    const double kap = kappa(fm);
    const long n_eff = n - static_cast<long>(m) * ell;
    Quantiles q = side_quantiles(alpha / (2.0 * M), kap, n_eff);
    const double dm = design.d[static_cast<size_t>(m - 1)];
    const double lxl = std::log(q.x_l), lxr = std::log(q.x_r);
    const double ls = std::log(s);
    // I^-: inf uses x_l, sup uses x_r; I^+: the opposite
    if (dm < 0.0) {
      num_inf += dm * (ls - lxl);
      num_sup += dm * (ls - lxr);
    } else {
      num_inf += dm * (ls - lxr);
      num_sup += dm * (ls - lxl);
    }
    ci.diagnostics.s_values.push_back(s);
    ci.diagnostics.q_values.push_back(q.q_l);
    ci.diagnostics.q_values.push_back(q.q_r);
  }
  ci.lower = std::max(0.0, num_inf / (2.0 * dlm));
  ci.upper = std::min(1.0, num_sup / (2.0 * dlm));
  ci.feasible = true;
  ci.diagnostics.estimator = estimator_gen(path, filter, M);
  return ci;
}

ConfidenceInterval ci_bnp(const SamplePath& path, double alpha, double h_star) {
  check_alpha(alpha);
  if (!(h_star > 0.0 && h_star < 1.0)) throw std::domain_error("h_star must be in (0,1)");
  ConfidenceInterval ci;
  ci.method = Method::BNP;
  ci.level = 1.0 - alpha;
  const long n = path.n() - 2;  // observations at i/n for i = 0..n+1
  if (n < 2) {
    ci.feasible = false;
    return ci;
  }
  const double log2a = std::log(2.0 / alpha);
  const double b = 71.0 / std::sqrt(double(n)) * log2a;
  const double q = 0.5 * (b + std::sqrt(b * b + 852.0 * log2a));
  const double gap = (4.0 - std::pow(4.0, h_star)) * std::sqrt(double(n));
  if (!(q < gap)) {
    ci.feasible = false;
    ci.diagnostics.q_values = {q};
    return ci;
  }
  double acc = 0.0, comp = 0.0;
  for (long i = 1; i <= n; ++i) {
    double d2 = path.values[static_cast<size_t>(i + 1)] - 2.0 * path.values[static_cast<size_t>(i)] +
                path.values[static_cast<size_t>(i - 1)];
    double y = d2 * d2 - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  const double s_n = acc / double(n);
  const double logn2 = 2.0 * std::log(double(n));
  auto g = [&](double x) { return x - std::log(4.0 - std::pow(4.0, x)) / logn2; };
  auto g_inverse = [&](double y) {
    double lo = 1e-13, hi = 1.0 - 1e-13;
    if (y <= g(lo)) return 0.0;
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      if (g(mid) < y)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double base = 0.5 - std::log(s_n) / logn2;
  const double lo_rhs = base + std::log1p(-q / gap) / logn2;
  const double hi_rhs = base + std::log1p(q / gap) / logn2;
  ci.lower = std::max(0.0, g_inverse(lo_rhs));
  ci.upper = g_inverse(hi_rhs);
  ci.feasible = true;
  ci.diagnostics.s_values = {s_n};
  ci.diagnostics.q_values = {q};
  ci.diagnostics.estimator = g_inverse(base);
  return ci;
}

double estimator_std(const SamplePath& path, const Filter& filter) {
  const double s = quadratic_variation(path, filter).s_n;
  return gn_inverse(-std::log(s), filter, path.n());
}

double estimator_gen(const SamplePath& path, const Filter& filter, int M) {
  if (M < 2) throw std::invalid_argument("need M >= 2");
  DilationDesign a = DilationDesign::standard(M);
  double num = 0.0, norm2 = 0.0;
  for (int m = 1; m <= M; ++m) {
    double am = a.d[static_cast<size_t>(m - 1)];
    double s = quadratic_variation(path, dilate(filter, m)).s_n;
    num += am * std::log(s);
    norm2 += am * am;
  }
  return num / (2.0 * norm2);
}

double sigma_std_sq(const Filter& filter, double hurst) {
  return 0.5 * rho_l2_norm_sq(filter, hurst, 1e-9);
}

double sigma_gen_sq(const Filter& base, double hurst, int M) {
  DilationDesign a = DilationDesign::standard(M);
  double norm2 = 0.0;
  for (double v : a.d) norm2 += v * v;
  double quad = 0.0;
  for (int m1 = 1; m1 <= M; ++m1) {
    for (int m2 = 1; m2 <= M; ++m2) {
      double g = cross_rho_l2_norm_sq(base, m1, m2, hurst, 1e-7);
      quad += a.d[static_cast<size_t>(m1 - 1)] * a.d[static_cast<size_t>(m2 - 1)] * g;
    }
  }
  return quad / (2.0 * norm2 * norm2);
}

ConfidenceInterval ci_clt_known(const SamplePath& path, const Filter& filter, double alpha) {
  check_alpha(alpha);
  const long n = path.n();
  ConfidenceInterval ci;
  ci.method = Method::CLTKnown;
  ci.level = 1.0 - alpha;
  if (n < std::max<long>(filter.length_minus_one() + 1, min_n_invertible(filter))) {
    ci.feasible = false;
    return ci;
  }
  const double h = estimator_std(path, filter);
  const double sigma = std::sqrt(sigma_std_sq(filter, h));
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double half = z * sigma / (std::sqrt(double(n)) * std::log(double(n)));
  ci.lower = std::max(0.0, h - half);
  ci.upper = std::min(1.0, h + half);
  ci.feasible = true;
  ci.diagnostics.s_values = {quadratic_variation(path, filter).s_n};
  ci.diagnostics.q_values = {z};
  ci.diagnostics.estimator = h;
  return ci;
}

ConfidenceInterval ci_clt_unknown(const SamplePath& path, const Filter& filter, int M,
                                  double alpha) {
  check_alpha(alpha);
  const long n = path.n();
  const int ell = filter.length_minus_one();
  ConfidenceInterval ci;
  ci.method = Method::CLTUnknown;
  ci.level = 1.0 - alpha;
  if (n < static_cast<long>(M) * ell + 1) {
    ci.feasible = false;
    return ci;
  }
  const double h = estimator_gen(path, filter, M);
  const double h_eval = std::clamp(h, 1e-3, 1.0 - 1e-3);  // sigma needs H in (0,1)
  const double sigma = std::sqrt(sigma_gen_sq(filter, h_eval, M));
  const double z = normal_quantile(1.0 - alpha / 2.0);
  const double half = z * sigma / std::sqrt(double(n));
  ci.lower = std::max(0.0, h - half);
  ci.upper = std::min(1.0, h + half);
  ci.feasible = true;
  ci.diagnostics.q_values = {z};
  ci.diagnostics.estimator = h;
  return ci;
}

std::vector<LengthRatioPoint> length_ratio_profile(const Filter& filter, std::optional<int> M,
                                                   double alpha, std::span<const double> h_grid) {
  check_alpha(alpha);
  const double z = normal_quantile(1.0 - alpha / 2.0);
  std::vector<LengthRatioPoint> out;
  out.reserve(h_grid.size());
  if (!M.has_value()) {
    const double q = q_asymptotic(alpha / 2.0, kappa(filter));
    for (double h : h_grid) {
      double sigma = std::sqrt(sigma_std_sq(filter, h));
      out.push_back({h, q / (2.0 * z * sigma)});
    }
    return out;
  }
  const int m_count = *M;
  DilationDesign a = DilationDesign::standard(m_count);
  std::vector<double> lm = a.log_m();
  double dlm = 0.0, dq = 0.0;
  for (int m = 1; m <= m_count; ++m) {
    double dm = a.d[static_cast<size_t>(m - 1)];
    dlm += dm * lm[static_cast<size_t>(m - 1)];
    double qm = q_asymptotic(alpha / (2.0 * m_count), kappa(dilate(filter, m)));
    dq += dm * ((dm < 0.0) ? -qm : qm);
  }
  const double conc_len = dq / dlm;
  for (double h : h_grid) {
    double sigma = std::sqrt(sigma_gen_sq(filter, h, m_count));
    out.push_back({h, conc_len / (2.0 * z * sigma)});
  }
  return out;
}

}  // namespace hurstci
