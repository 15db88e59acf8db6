#pragma once

namespace hurstci {

// kappa and effective sample size (n - ell in applications).
struct ConcentrationBound {
  double kappa = 0.0;
  long n_eff = 0;
};

// Parameters of the quadratic-form bound ||DZ||^2 <= a Z + b.
struct GeneralBoundParams {
  double a = 0.0;
  double b = 0.0;
};

// phi_{r,n}(t;kappa) = exp(-t sqrt(n)/kappa) (1 + t/sqrt(n))^{n/kappa}
double phi_r(double t, const ConcentrationBound& bound);
// phi_{l,n}(t;kappa) = exp(t sqrt(n)/kappa) (1 - t/sqrt(n))^{n/kappa} on [0, sqrt(n)), else 0
double phi_l(double t, const ConcentrationBound& bound);

// phi_r(t;a,b) = exp(-2t/a) (1 + at/b)^{2b/a^2}
double phi_r_general(double t, const GeneralBoundParams& params);
// phi_l(t;a,b) = exp(2t/a) (1 - at/b)^{2b/a^2} on [0, b/a), else 0
double phi_l_general(double t, const GeneralBoundParams& params);

// Comparison bounds: exp(-t^2/(at+b)) and exp(-t^2/b).
double nv_phi_r(double t, const GeneralBoundParams& params);
double nv_phi_l(double t, const GeneralBoundParams& params);

// Unique t with phi(t) = alpha, bisection to 1e-12 absolute in t.
// alpha outside (0,1) throws std::domain_error.
double invert_phi_r(double alpha, const ConcentrationBound& bound);
double invert_phi_l(double alpha, const ConcentrationBound& bound);
double invert_phi_r_general(double alpha, const GeneralBoundParams& params);
double invert_phi_l_general(double alpha, const GeneralBoundParams& params);
double invert_nv_phi_r(double alpha, const GeneralBoundParams& params);
double invert_nv_phi_l(double alpha, const GeneralBoundParams& params);

// q^a(alpha) = sqrt(2 kappa log(1/alpha)), the large-n limit of the inverses.
double q_asymptotic(double alpha, double kappa);

}  // namespace hurstci
