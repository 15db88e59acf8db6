#include "hurstci/filter_bank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hurstci {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kH1Snap = 1e-6;      // H within this of 1 uses the limit branch
constexpr double kSupH1Snap = 1e-4;   // wider snap inside the sup search

double pow2h(double x, double two_h) {
  if (x == 0.0) return 0.0;  // 0^{2H} := 0, continuity from H > 0
  return std::pow(std::abs(x), two_h);
}

double x2logx(double x) {
  x = std::abs(x);
  return x == 0.0 ? 0.0 : x * x * std::log(x);
}

// binom(2H, h) via the recursion b_{h+1} = b_h (2H - h) / (h + 1)
double binom2h(double two_h, int h) {
  double b = 1.0;
  for (int i = 0; i < h; ++i) b *= (two_h - i) / (i + 1);
  return b;
}

// g(x) = sum_{h >= h0} binom(2H, h) x^h, |x| < 1. The filter moments kill
// the orders below h0, so summing from h0 evaluates sum_k alpha_k (1+x_k)^{2H}
// without the giant cancellation of the direct form.
double series_pow_tail(double two_h, int h0, double x) {
  double b = binom2h(two_h, h0);
  double xh = std::pow(x, h0);
  double acc = 0.0;
  for (int h = h0; h < h0 + 400; ++h) {
    double term = b * xh;
    acc += term;
    if (std::abs(term) <= 0.25 * kEps * std::abs(acc) && h > h0 + 2) break;
    b *= (two_h - h) / (h + 1);
    xh *= x;
  }
  return acc;
}

// c_h series of (1+x)^2 log(1+x): c_h = (-1)^{h-1} 2/(h(h-1)(h-2)) for h >= 3.
double series_philog_tail(int h0, double x) {
  double acc = 0.0;
  double xh = std::pow(x, h0);
  double sign = (h0 % 2 == 1) ? 1.0 : -1.0;
  for (int h = h0; h < h0 + 400; ++h) {
    double term = sign * 2.0 / (double(h) * (h - 1) * (h - 2)) * xh;
    acc += term;
    if (std::abs(term) <= 0.25 * kEps * std::abs(acc) && h > h0 + 2) break;
    sign = -sign;
    xh *= x;
  }
  return acc;
}

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

// sum_{j > J} j^{-s}, Euler-Maclaurin (three terms); s > 1, J >= 8
double zeta_tail(double s, double J) {
  return std::pow(J, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(J, -s) +
         s / 12.0 * std::pow(J, -s - 1.0);
}

}  // namespace

int detect_order(std::span<const double> coeffs, double tol) {
  if (coeffs.size() < 2) throw std::invalid_argument("filter needs at least 2 coefficients");
  const int ell = static_cast<int>(coeffs.size()) - 1;
  for (int j = 0; j <= ell; ++j) {
    double m = 0.0;
    for (int q = 0; q <= ell; ++q) {
      double w = (q == 0) ? (j == 0 ? 1.0 : 0.0) : std::pow(double(q), j);
      m += w * coeffs[static_cast<size_t>(q)];
    }
    if (std::abs(m) > tol) return j;
  }
  throw std::invalid_argument("degenerate filter: all tested moments vanish");
}

Filter make_filter(std::vector<double> coeffs, std::string name) {
  size_t lead = 0;
  while (lead + 2 <= coeffs.size() && coeffs[lead] == 0.0) ++lead;
  coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(lead));
  if (coeffs.size() < 2) throw std::invalid_argument("filter needs at least 2 coefficients");
  Filter f;
  f.order = detect_order(coeffs);
  f.coeffs = std::move(coeffs);
  f.name = std::move(name);
  if (f.order < 1) throw std::invalid_argument("filter must have order >= 1");
  return f;
}

Filter make_increment_filter(int p) {
  if (p < 1) throw std::invalid_argument("increment filter order must be >= 1");
  std::vector<double> c(static_cast<size_t>(p) + 1);
  // coefficients of (1-B)^p, global sign chosen so i1 = {-1,1}, i2 = {1,-2,1}
  double binom = 1.0;
  for (int q = 0; q <= p; ++q) {
    double v = ((q % 2 == 0) ? 1.0 : -1.0) * binom;
    c[static_cast<size_t>(q)] = (p % 2 == 1) ? -v : v;
    binom = binom * (p - q) / (q + 1);
  }
  Filter f = make_filter(std::move(c), "i" + std::to_string(p));
  f.increment_base = p;
  f.dilation = 1;
  return f;
}

namespace {

struct BuiltinDef {
  const char* name;
  std::vector<double> coeffs;
};

// d4 and c6 carry the reference coefficient values verbatim; the longer
// wavelet filters are standard orthonormal tables rescaled to sum(a^2) = 1/2,
// alternated, and least-norm corrected so the vanishing moments hold to
// machine precision (see data/filters.csv).
const std::vector<BuiltinDef>& builtin_defs() {
  static const std::vector<BuiltinDef> defs = {
      {"d4", {-0.09150635, -0.15849365, 0.59150635, -0.34150635}},
      {"c6",
       {-0.05142973, -0.23892973, 0.60285946, -0.27214054, -0.05142973, 0.01107027}},
      {"d6",
       {0.024908749868088931, 0.06041610415610451, -0.095467207784420305,
        -0.32518250026425549, 0.57055845791690918, -0.23523360389242681}},
      {"d8",
       {-0.0074934946651481768, -0.023251800535628201, 0.021808150237326265,
        0.13225358368434373, -0.019787513117887314, -0.44610006912312833,
        0.5054728575457188, -0.16290171402559678}},
      {"s8",
       {-0.053574450709194095, 0.020955482562782693, 0.35186953432803142,
        -0.56832912170402583, 0.21061726710192888, 0.070158812089390038,
        -0.0089123507209578345, -0.022785172947955238}},
      {"c12",
       {-0.00050950539909634315, 0.0012892033559697444, 0.0039678836129948278,
        -0.016744410162895938, -0.04202648046079549, 0.054085607091668986,
        0.29486719369438352, -0.57468239385437425, 0.27302104653325843,
        0.04763959030923836, -0.029320137980541672, -0.011587596739810163}},
  };
  return defs;
}

}  // namespace

Filter builtin_filter(std::string_view name) {
  if (name.size() >= 2 && name[0] == 'i') {
    int p = 0;
    for (size_t i = 1; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') { p = -1; break; }
      p = p * 10 + (name[i] - '0');
    }
    if (p >= 1 && p <= 32) return make_increment_filter(p);
  }
  for (const auto& def : builtin_defs()) {
    if (name == def.name) return make_filter(def.coeffs, std::string(name));
  }
  throw std::invalid_argument("unknown filter name: " + std::string(name));
}

std::vector<std::string> builtin_filter_names() {
  std::vector<std::string> out = {"i1", "i2", "i3", "i4"};
  for (const auto& def : builtin_defs()) out.emplace_back(def.name);
  return out;
}

Filter dilate(const Filter& f, int m) {
  if (m < 1) throw std::invalid_argument("dilation factor must be >= 1");
  if (m == 1) return f;
  const int ell = f.length_minus_one();
  std::vector<double> c(static_cast<size_t>(m) * ell + 1, 0.0);
  for (int i = 0; i <= ell; ++i) c[static_cast<size_t>(i) * m] = f.coeffs[static_cast<size_t>(i)];
  Filter out;
  out.coeffs = std::move(c);
  out.order = f.order;
  out.name = f.name.empty() ? "" : f.name + "^" + std::to_string(m);
  out.increment_base = f.increment_base;
  out.dilation = f.dilation * m;
  return out;
}

double AlphaProfile::moment(int h) const {
  double m = 0.0;
  for (int k = -ell; k <= ell; ++k) {
    double w = (k == 0) ? (h == 0 ? 1.0 : 0.0) : std::pow(double(k), h);
    m += w * at(k);
  }
  return m;
}

double AlphaProfile::abs_moment(int h) const {
  double m = 0.0;
  for (int k = -ell; k <= ell; ++k) {
    double w = (k == 0) ? (h == 0 ? 1.0 : 0.0) : std::pow(std::abs(double(k)), h);
    m += w * std::abs(at(k));
  }
  return m;
}

AlphaProfile alpha_profile(const Filter& f) {
  const int ell = f.length_minus_one();
  AlphaProfile a;
  a.ell = ell;
  a.alpha.assign(static_cast<size_t>(2 * ell + 1), 0.0);
  for (int q = 0; q <= ell; ++q)
    for (int r = 0; r <= ell; ++r)
      a.alpha[static_cast<size_t>(q - r + ell)] +=
          f.coeffs[static_cast<size_t>(q)] * f.coeffs[static_cast<size_t>(r)];
  return a;
}

namespace {

// Workhorse for pi/rho evaluation against a fixed alpha profile.
struct PiEval {
  const AlphaProfile& al;
  int p;
  double two_h;

  // stable for any lag: direct alpha sum close in, moment-dropped series far out
  double pi(long lag) const {
    long j = std::labs(lag);
    if (two_h == 2.0 && p >= 2) return 0.0;
    if (j <= 2L * al.ell || two_h <= 1.96) {
      KahanSum s;
      for (int k = -al.ell; k <= al.ell; ++k)
        s.add(al.at(k) * pow2h(double(j + k), two_h));
      return -0.5 * s.value();
    }
    KahanSum s;
    for (int k = -al.ell; k <= al.ell; ++k) {
      if (k == 0) continue;
      s.add(al.at(k) * series_pow_tail(two_h, 2 * p, double(k) / double(j)));
    }
    return -0.5 * std::pow(double(j), two_h) * s.value();
  }

  // numerator of the H=1 limit: sum_k alpha_k (k+j)^2 log|k+j| (divide by tau)
  double h1_num(long lag) const {
    long j = std::labs(lag);
    if (j <= 2L * al.ell) {
      KahanSum s;
      for (int k = -al.ell; k <= al.ell; ++k) s.add(al.at(k) * x2logx(double(j + k)));
      return s.value();
    }
    // log j part annihilated by the moments (p >= 2)
    KahanSum s;
    for (int k = -al.ell; k <= al.ell; ++k) {
      if (k == 0) continue;
      s.add(al.at(k) * series_philog_tail(2 * p, double(k) / double(j)));
    }
    return double(j) * double(j) * s.value();
  }
};

double tau_from_alpha(const AlphaProfile& al) {
  KahanSum s;
  for (int k = 1; k <= al.ell; ++k) s.add(2.0 * al.at(k) * x2logx(double(k)));
  return s.value();
}

// S^H_{J+k} - S^H_J as an explicit window sum (cancellation-free).
double s_window(long J, int k, double two_h) {
  double w = 0.0;
  if (k > 0)
    for (long i = J + 1; i <= J + k; ++i) w += pow2h(double(i), two_h);
  else
    for (long i = J + k + 1; i <= J; ++i) w -= pow2h(double(i), two_h);
  return w;
}

double t_window(long J, int k) {
  double w = 0.0;
  if (k > 0)
    for (long i = J + 1; i <= J + k; ++i) w += x2logx(double(i));
  else
    for (long i = J + k + 1; i <= J; ++i) w -= x2logx(double(i));
  return w;
}

struct TailPlan {
  long head_lag = 0;      // sum |rho| explicitly up to here
  bool telescoped = false;  // exact telescoped tail vs asymptotic tail
  double error_bound = 0.0;
};

// Remainder constant of the order-(2p+2) Taylor bound for (1+x)^{2H}.
double taylor_remainder_const(double two_h, int p, double sabs) {
  double k = 1.0;
  for (int i = 0; i < 2 * p + 2; ++i) k *= std::abs(two_h - i);
  k *= std::pow(2.0, 2 * p + 2 - two_h);
  double fact = 1.0;
  for (int i = 2; i <= 2 * p + 2; ++i) fact *= i;
  return k / fact * sabs;
}

}  // namespace

double pi_cov(const Filter& f, double hurst, long lag) {
  if (hurst < 0.0 || hurst > 1.0) throw std::domain_error("hurst must be in [0,1]");
  AlphaProfile al = alpha_profile(f);
  return PiEval{al, f.order, 2.0 * hurst}.pi(lag);
}

double tau_a(const Filter& f) { return tau_from_alpha(alpha_profile(f)); }

double rho(const Filter& f, double hurst, long lag) {
  if (hurst < 0.0 || hurst > 1.0) throw std::domain_error("hurst must be in [0,1]");
  AlphaProfile al = alpha_profile(f);
  if (hurst >= 1.0 - kH1Snap && f.order >= 2) {
    double tau = tau_from_alpha(al);
    if (tau == 0.0) throw std::domain_error("H=1 correlation limit undefined: tau = 0");
    if (lag == 0) return 1.0;
    return PiEval{al, f.order, 2.0}.h1_num(lag) / tau;
  }
  PiEval ev{al, f.order, 2.0 * hurst};
  double pi0 = ev.pi(0);
  if (!(pi0 > 0.0)) throw std::domain_error("pi_H(0) must be positive");
  if (lag == 0) return 1.0;
  return ev.pi(lag) / pi0;
}

double cross_rho(const Filter& base, int m1, int m2, double hurst, long lag) {
  if (m1 < 1 || m2 < 1) throw std::invalid_argument("dilation factors must be >= 1");
  if (hurst <= 0.0 || hurst >= 1.0) throw std::domain_error("hurst must be in (0,1)");
  const int ell = base.length_minus_one();
  const double two_h = 2.0 * hurst;
  KahanSum num;
  for (int q = 0; q <= ell; ++q)
    for (int r = 0; r <= ell; ++r)
      num.add(base.coeffs[static_cast<size_t>(q)] * base.coeffs[static_cast<size_t>(r)] *
              pow2h(double(m1) * q - double(m2) * r + double(lag), two_h));
  AlphaProfile al = alpha_profile(base);
  PiEval ev{al, base.order, two_h};
  double pi0 = ev.pi(0);
  // pi^{a^m}(0) = m^{2H} pi^a(0)
  double den = std::sqrt(pow2h(double(m1), two_h) * pi0 * pow2h(double(m2), two_h) * pi0);
  return -0.5 * num.value() / den;
}

namespace {

// Core l1 machinery shared by rho_l1_norm; H in the open generic regime.
CorrelationProfile l1_generic(const Filter& f, const AlphaProfile& al, double hurst,
                              double rel_tol) {
  const int p = f.order;
  const int ell = al.ell;
  const double two_h = 2.0 * hurst;
  PiEval ev{al, p, two_h};
  const double pi0 = ev.pi(0);
  const double m2p = al.moment(2 * p);
  const double sabs = al.abs_moment(2 * p + 2);
  const double sum_abs_alpha = al.abs_moment(0);
  const double lead = 0.5 * std::abs(binom2h(two_h, 2 * p) * m2p) / pi0;  // |rho| ~ lead j^{-s}
  const double kc = 0.5 * taylor_remainder_const(two_h, p, sabs) / pi0;
  const double s = 2.0 * p - two_h;

  long j_sign;
  if (f.dilated_increment()) {
    j_sign = ell;  // sign lemma for the dilated increment family
  } else if (lead > 0.0) {
    double r = std::sqrt(kc / lead);
    j_sign = (r > 1e9) ? (1L << 40) : std::max<long>(2L * ell + 2, long(std::ceil(r)) + 1);
  } else {
    j_sign = 1L << 40;
  }

  auto head_noise = [&](double J) {
    return kEps * sum_abs_alpha * std::pow(J, two_h + 1.0) / ((two_h + 1.0) * pi0);
  };

  const long j_tel = std::max<long>(f.dilated_increment() ? ell : 2L * ell + 2, j_sign);
  const double err_tel = (j_tel < (1L << 24)) ? head_noise(double(j_tel)) : 1e300;

  // asymptotic-tail candidate: grow J until the remainder bound stops dominating
  long j_em = std::max<long>(2L * ell + 2, 64);
  while (kc * zeta_tail(s + 2.0, double(j_em)) >
             std::max(rel_tol, 0.5 * head_noise(double(j_em))) &&
         j_em < (1L << 21))
    j_em *= 2;
  const double err_em = kc * zeta_tail(s + 2.0, double(j_em)) + head_noise(double(j_em));

  CorrelationProfile prof;
  prof.filter_name = f.name;
  prof.hurst = hurst;

  const bool use_tel = err_tel <= err_em;
  const long J = use_tel ? j_tel : j_em;
  KahanSum head;
  prof.values.reserve(static_cast<size_t>(std::min<long>(J, 4096)) + 1);
  prof.values.push_back(1.0);
  for (long j = 1; j <= J; ++j) {
    double r = ev.pi(j) / pi0;
    if (j < 4096) prof.values.push_back(r);
    head.add(std::abs(r));
  }
  double tail;
  if (use_tel) {
    KahanSum rem;  // sum_{j>J} pi(j) = 1/2 sum_k alpha_k (S_{J+k} - S_J)
    for (int k = -ell; k <= ell; ++k) {
      if (k == 0) continue;
      rem.add(al.at(k) * s_window(J, k, two_h));
    }
    tail = std::abs(0.5 * rem.value() / pi0);
    prof.tail_bound = err_tel;
  } else {
    tail = lead * zeta_tail(s, double(J));
    prof.tail_bound = err_em;
  }
  prof.truncation_lag = J;
  prof.l1_norm = 1.0 + 2.0 * (head.value() + tail);
  return prof;
}

CorrelationProfile l1_at_h1(const Filter& f, const AlphaProfile& al, double rel_tol) {
  const int p = f.order;
  const int ell = al.ell;
  const double tau = tau_from_alpha(al);
  if (tau == 0.0) throw std::domain_error("H=1 l1 norm undefined: tau = 0");
  PiEval ev{al, p, 2.0};
  const double m2p = al.moment(2 * p);
  const double sabs = al.abs_moment(2 * p + 2);
  const double sum_abs_alpha = al.abs_moment(0);
  const double lead =
      2.0 / (double(2 * p) * (2 * p - 1) * (2 * p - 2)) * std::abs(m2p) / std::abs(tau);
  double fact = 1.0;  // (2p+2)! / (2p-1)!  = (2p)(2p+1)(2p+2)
  fact = double(2 * p) * (2 * p + 1) * (2 * p + 2);
  const double kc = 2.0 * std::pow(2.0, 2 * p) / fact * sabs / std::abs(tau);
  const double s = 2.0 * p - 2.0;

  long j_sign;
  if (f.dilated_increment()) {
    j_sign = ell;
  } else {
    double r = std::sqrt(kc / lead);
    j_sign = (r > 1e9) ? (1L << 40) : std::max<long>(2L * ell + 2, long(std::ceil(r)) + 1);
  }
  auto head_noise = [&](double J) {
    // log1p-form noise ~ u * max|k| * sum|alpha| * J^2 / (2 tau)
    return kEps * ell * sum_abs_alpha * J * J / (2.0 * std::abs(tau));
  };
  const long j_tel = std::max<long>(f.dilated_increment() ? ell : 2L * ell + 2, j_sign);
  const double err_tel = (j_tel < (1L << 24)) ? head_noise(double(j_tel)) : 1e300;
  long j_em = std::max<long>(2L * ell + 2, 64);
  while (kc * zeta_tail(s + 2.0, double(j_em)) >
             std::max(rel_tol, 0.5 * head_noise(double(j_em))) &&
         j_em < (1L << 21))
    j_em *= 2;
  const double err_em = kc * zeta_tail(s + 2.0, double(j_em)) + head_noise(double(j_em));

  CorrelationProfile prof;
  prof.filter_name = f.name;
  prof.hurst = 1.0;
  const bool use_tel = err_tel <= err_em;
  const long J = use_tel ? j_tel : j_em;
  KahanSum head;
  prof.values.push_back(1.0);
  for (long j = 1; j <= J; ++j) {
    double r = ev.h1_num(j) / tau;
    if (j < 4096) prof.values.push_back(r);
    head.add(std::abs(r));
  }
  double tail;
  if (use_tel) {
    KahanSum rem;
    for (int k = -ell; k <= ell; ++k) {
      if (k == 0) continue;
      rem.add(al.at(k) * t_window(J, k));
    }
    tail = std::abs(rem.value() / tau);
    prof.tail_bound = err_tel;
  } else {
    tail = lead * zeta_tail(s, double(J));
    prof.tail_bound = err_em;
  }
  prof.truncation_lag = J;
  prof.l1_norm = 1.0 + 2.0 * (head.value() + tail);
  return prof;
}

}  // namespace

CorrelationProfile rho_l1_norm(const Filter& f, double hurst, double rel_tol) {
  if (hurst < 0.0 || hurst > 1.0) throw std::domain_error("hurst must be in [0,1]");
  const int p = f.order;
  if (p == 1 && hurst > 0.5)
    throw std::domain_error("correlation not absolutely summable: p = 1 and H > 1/2");
  AlphaProfile al = alpha_profile(f);
  const int ell = al.ell;

  CorrelationProfile prof;
  prof.filter_name = f.name;
  prof.hurst = hurst;
  if (hurst == 0.0 || hurst == 0.5) {
    // correlations vanish beyond ell (beyond ell-1 at H=1/2)
    PiEval ev{al, p, 2.0 * hurst};
    double pi0 = ev.pi(0);
    long last = (hurst == 0.5) ? ell - 1 : ell;
    KahanSum head;
    prof.values.push_back(1.0);
    for (long j = 1; j <= last; ++j) {
      double r = ev.pi(j) / pi0;
      prof.values.push_back(r);
      head.add(std::abs(r));
    }
    prof.truncation_lag = last;
    prof.tail_bound = 0.0;
    prof.l1_norm = 1.0 + 2.0 * head.value();
    return prof;
  }
  if (hurst >= 1.0 - kH1Snap && p >= 2) return l1_at_h1(f, al, rel_tol);
  return l1_generic(f, al, hurst, rel_tol);
}

namespace {

// epsilon = sign(2H-1) normally; the kappa search on [0,1/2] for p = 1
// uses the left-limit branch (epsilon = -1) to capture the sup.
double l1_exact_signed(const Filter& f, double hurst, int epsilon) {
  if (!f.dilated_increment())
    throw std::invalid_argument("closed-form l1 norm requires a dilated increment filter");
  AlphaProfile al = alpha_profile(f);
  const int ell = al.ell;
  const int p = f.order;
  const double two_h = 2.0 * hurst;
  const double sgn_p = (p % 2 == 0) ? -1.0 : 1.0;  // (-1)^{p+1}

  if (hurst >= 1.0 - kH1Snap && p >= 2) {
    const double tau = tau_from_alpha(al);
    double total = 1.0;
    for (int k = 1; k <= ell - 1; ++k) {
      KahanSum u;
      for (int j = -ell; j <= ell; ++j) u.add(al.at(j) * x2logx(double(j + k)));
      total += 2.0 * std::abs(u.value()) / tau;
    }
    KahanSum v;  // d/dH sum_k alpha_k S_{ell+k-1} at H=1, halved
    for (int k = -ell + 1; k <= ell; ++k) {
      double t = 0.0;
      for (int i = 1; i <= ell + k - 1; ++i) t += x2logx(double(i));
      v.add(al.at(k) * t);
    }
    total += -sgn_p * 2.0 * v.value() / tau;  // (-1)^p 2v/tau
    return total;
  }

  KahanSum den_s;  // -sum_{j=1..ell} alpha_j j^{2H} = pi_H(0)
  for (int j = 1; j <= ell; ++j) den_s.add(-al.at(j) * pow2h(double(j), two_h));
  const double den = den_s.value();
  double total = 1.0;
  for (int k = 1; k <= ell - 1; ++k) {
    KahanSum num;
    for (int j = -ell; j <= ell; ++j) num.add(al.at(j) * pow2h(double(j + k), two_h));
    total += std::abs(num.value()) / den;
  }
  KahanSum sterm;  // sum_k alpha_k S^H_{ell+k-1}
  for (int k = -ell + 1; k <= ell; ++k) {
    double t = 0.0;
    for (int i = 1; i <= ell + k - 1; ++i) t += pow2h(double(i), two_h);
    sterm.add(al.at(k) * t);
  }
  total += sgn_p * epsilon * sterm.value() / den;
  return total;
}

}  // namespace

double rho_l1_exact(const Filter& f, double hurst) {
  if (hurst < 0.0 || hurst > 1.0) throw std::domain_error("hurst must be in [0,1]");
  int eps = (hurst > 0.5) ? 1 : (hurst < 0.5 ? -1 : 0);
  return l1_exact_signed(f, hurst, eps);
}

double rho_l2_norm_sq(const Filter& f, double hurst, double rel_tol) {
  if (hurst < 0.0 || hurst > 1.0) throw std::domain_error("hurst must be in [0,1]");
  const int p = f.order;
  if (p == 1 && hurst >= 0.75)
    throw std::domain_error("correlation not square-summable: p = 1 and H >= 3/4");
  AlphaProfile al = alpha_profile(f);
  const int ell = al.ell;

  const bool at_one = (hurst >= 1.0 - kH1Snap && p >= 2);
  PiEval ev{al, p, at_one ? 2.0 : 2.0 * hurst};
  double denom, lead, kc, s;
  if (at_one) {
    const double tau = tau_from_alpha(al);
    if (tau == 0.0) throw std::domain_error("H=1 l2 norm undefined: tau = 0");
    denom = tau;
    lead = 2.0 / (double(2 * p) * (2 * p - 1) * (2 * p - 2)) * std::abs(al.moment(2 * p)) /
           std::abs(tau);
    double fact = double(2 * p) * (2 * p + 1) * (2 * p + 2);
    kc = 2.0 * std::pow(2.0, 2 * p) / fact * al.abs_moment(2 * p + 2) / std::abs(tau);
    s = 2.0 * p - 2.0;
  } else {
    denom = ev.pi(0);
    lead = 0.5 * std::abs(binom2h(2.0 * hurst, 2 * p) * al.moment(2 * p)) / denom;
    kc = 0.5 * taylor_remainder_const(2.0 * hurst, p, al.abs_moment(2 * p + 2)) / denom;
    s = 2.0 * p - 2.0 * hurst;
  }
  if (hurst == 0.0 || hurst == 0.5) {
    long last = (hurst == 0.5) ? ell - 1 : ell;
    KahanSum acc;
    acc.add(1.0);
    for (long j = 1; j <= last; ++j) {
      double r = ev.pi(j) / denom;
      acc.add(2.0 * r * r);
    }
    return acc.value();
  }
  long J = std::max<long>(2L * ell + 2, 64);
  auto tail_err = [&](double Jd) {
    // |rho^2 - lead^2 j^{-2s}| <= (2 lead kc + kc^2) j^{-2s-2}
    return (2.0 * lead * kc + kc * kc) * zeta_tail(2.0 * s + 2.0, Jd);
  };
  while (tail_err(double(J)) > rel_tol && J < (1L << 21)) J *= 2;
  KahanSum acc;
  acc.add(1.0);
  for (long j = 1; j <= J; ++j) {
    double r = (at_one ? ev.h1_num(j) : ev.pi(j)) / denom;
    acc.add(2.0 * r * r);
  }
  acc.add(2.0 * lead * lead * zeta_tail(2.0 * s, double(J)));
  return acc.value();
}

double cross_rho_l2_norm_sq(const Filter& base, int m1, int m2, double hurst, double rel_tol) {
  if (hurst <= 0.0 || hurst >= 1.0) throw std::domain_error("hurst must be in (0,1)");
  const int p = base.order;
  if (p == 1 && hurst >= 0.75)
    throw std::domain_error("correlation not square-summable: p = 1 and H >= 3/4");
  const int ell = base.length_minus_one();
  const double two_h = 2.0 * hurst;

  // beta_i = sum_{m1 q - m2 r = i} a_q a_r, support |i| <= L
  const int L = ell * std::max(m1, m2);
  std::vector<double> beta(static_cast<size_t>(m1 * ell + m2 * ell + 1), 0.0);
  const int off = m2 * ell;
  for (int q = 0; q <= ell; ++q)
    for (int r = 0; r <= ell; ++r)
      beta[static_cast<size_t>(m1 * q - m2 * r + off)] +=
          base.coeffs[static_cast<size_t>(q)] * base.coeffs[static_cast<size_t>(r)];
  const int lo = -off, hi = m1 * ell;

  AlphaProfile al = alpha_profile(base);
  const double pib = PiEval{al, p, two_h}.pi(0);
  const double den = std::sqrt(pow2h(double(m1), two_h) * pow2h(double(m2), two_h)) * pib;

  auto cval = [&](long i) {
    if (std::labs(i) <= 2L * L || two_h <= 1.96) {
      KahanSum s;
      for (int k = lo; k <= hi; ++k)
        s.add(beta[static_cast<size_t>(k + off)] * pow2h(double(i + k), two_h));
      return -0.5 * s.value() / den;
    }
    KahanSum s;
    for (int k = lo; k <= hi; ++k) {
      if (k == 0) continue;
      s.add(beta[static_cast<size_t>(k + off)] *
            series_pow_tail(two_h, 2 * p, double(k) / double(std::labs(i))));
    }
    return -0.5 * std::pow(double(std::labs(i)), two_h) * s.value() / den;
  };

  double m2p = 0.0, sabs = 0.0;
  for (int k = lo; k <= hi; ++k) {
    if (k == 0) continue;
    m2p += beta[static_cast<size_t>(k + off)] * std::pow(double(k), 2 * p);
    sabs += std::abs(beta[static_cast<size_t>(k + off)]) * std::pow(std::abs(double(k)), 2 * p + 2);
  }
  const double lead = 0.5 * std::abs(binom2h(two_h, 2 * p) * m2p) / den;
  const double kc = 0.5 * taylor_remainder_const(two_h, p, sabs) / den;
  const double s = 2.0 * p - two_h;
  long J = std::max<long>(2L * L + 2, 64);
  while ((2.0 * lead * kc + kc * kc) * zeta_tail(2.0 * s + 2.0, double(J)) > 0.5 * rel_tol &&
         J < (1L << 21))
    J *= 2;
  KahanSum acc;
  double c0 = cval(0);
  acc.add(c0 * c0);
  for (long i = 1; i <= J; ++i) {
    double cp = cval(i), cm = cval(-i);
    acc.add(cp * cp + cm * cm);
  }
  acc.add(2.0 * lead * lead * zeta_tail(2.0 * s, double(J)));  // both tails
  return acc.value();
}

double hurst_domain_max(const Filter& f) { return f.order == 1 ? 0.5 : 1.0; }

namespace {

struct KappaKey {
  std::vector<double> coeffs;
  bool operator<(const KappaKey& o) const {
    if (coeffs.size() != o.coeffs.size()) return coeffs.size() < o.coeffs.size();
    return std::memcmp(coeffs.data(), o.coeffs.data(), coeffs.size() * sizeof(double)) < 0;
  }
};

std::mutex kappa_mutex;
std::map<KappaKey, double> kappa_cache;

double kappa_objective(const Filter& f, double x) {
  const int p = f.order;
  if (p >= 2 && x > 1.0 - kSupH1Snap) x = 1.0;
  if (f.dilated_increment()) {
    if (p == 1) {
      // sup over [0,1/2] of the left-limit branch (the norm jumps down at 1/2)
      return l1_exact_signed(f, std::min(x, 0.5), -1);
    }
    return rho_l1_exact(f, x);
  }
  if (p == 1) x = std::min(x, 0.5 - 1e-9);
  return rho_l1_norm(f, x, 1e-9).l1_norm;
}

}  // namespace

double kappa(const Filter& f) {
  KappaKey key{f.coeffs};
  {
    std::lock_guard<std::mutex> lock(kappa_mutex);
    auto it = kappa_cache.find(key);
    if (it != kappa_cache.end()) return it->second;
  }
  const int p = f.order;
  if (p >= 2 && tau_a(f) == 0.0)
    throw std::domain_error("kappa requires tau != 0 for order >= 2");
  const double hi = hurst_domain_max(f);
  const int grid = static_cast<int>(std::lround(hi / 1e-3));
  double best = -1.0;
  int best_i = 0;
  for (int i = 0; i <= grid; ++i) {
    double v = kappa_objective(f, hi * i / grid);
    if (v > best) { best = v; best_i = i; }
  }
  // golden-section refinement around the grid argmax
  double a = hi * std::max(0, best_i - 1) / grid;
  double b = hi * std::min(grid, best_i + 1) / grid;
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = kappa_objective(f, c), fd = kappa_objective(f, d);
  while (b - a > 1e-8 * std::max(1.0, std::abs(a))) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a);
      fc = kappa_objective(f, c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a);
      fd = kappa_objective(f, d);
    }
  }
  best = std::max({best, fc, fd});
  double result = 2.0 * best;
  std::lock_guard<std::mutex> lock(kappa_mutex);
  kappa_cache.emplace(std::move(key), result);
  return result;
}

}  // namespace hurstci
