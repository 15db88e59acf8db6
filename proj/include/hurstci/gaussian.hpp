#pragma once

namespace hurstci {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile; rational approximation polished with Halley
// steps on erfc, |error| < 1e-14 on (1e-300, 1-1e-16).
double normal_quantile(double p);

}  // namespace hurstci
