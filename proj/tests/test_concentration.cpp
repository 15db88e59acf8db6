#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hurstci/concentration.hpp"
#include "hurstci/rng.hpp"

using namespace hurstci;
using Catch::Approx;

TEST_CASE("phi boundary behaviour") {
  ConcentrationBound b{4.0, 100};
  CHECK(phi_r(1e-12, b) == Approx(1.0).margin(1e-10));
  CHECK(phi_l(0.0, b) == 1.0);
  CHECK(phi_l(10.0, b) == 0.0);  // t = sqrt(n_eff) boundary
  CHECK(phi_l(12.0, b) == 0.0);
  GeneralBoundParams p{0.5, 4.0};
  CHECK(phi_l_general(8.0, p) == 0.0);  // t >= b/a saturates
  CHECK(phi_l_general(9.0, p) == 0.0);
}

TEST_CASE("reference quantile probes") {
  // right/left bounds at the kappa=4 hypothesis scale
  ConcentrationBound b100{4.0, 100};
  CHECK(phi_r(5.7249, b100) == Approx(0.05).margin(1e-4));
  CHECK(phi_l(4.1314, b100) == Approx(0.05).margin(1e-4));
  ConcentrationBound b1000{4.0, 1000};
  CHECK(invert_phi_l(0.10, b1000) == Approx(4.1000).margin(1.01e-4));
  CHECK(invert_phi_r(0.10, b1000) == Approx(4.4883).margin(1.01e-4));
  // comparison-bound quantile, hypothesis scale (2a, 2b) from (4/sqrt(50), 4)
  GeneralBoundParams g50{8.0 / std::sqrt(50.0), 8.0};
  CHECK(invert_nv_phi_r(0.01, g50) == Approx(9.2102).margin(1.01e-4));
  CHECK(invert_nv_phi_l(0.01, g50) == Approx(6.0697).margin(1.01e-4));
}

TEST_CASE("kappa-form equals the general form under the hypothesis map") {
  rng::Stream stream(7);
  for (int i = 0; i < 200; ++i) {
    double kap = 0.5 + 8.0 * stream.uniform01();
    long n = 10 + long(stream.uniform01() * 5000);
    double t = 0.05 + 6.0 * stream.uniform01();
    GeneralBoundParams p{2.0 * kap / std::sqrt(double(n)), 2.0 * kap};
    ConcentrationBound b{kap, n};
    CHECK(phi_r(t, b) == Approx(phi_r_general(t, p)).epsilon(1e-12));
    if (t < std::sqrt(double(n)))
      CHECK(phi_l(t, b) == Approx(phi_l_general(t, p)).epsilon(1e-12));
  }
}

TEST_CASE("small-a limit of the right bound") {
  // series oracle: log phi_r = -t^2/b + (2/3) a t^3 / b^2 + O(a^2)
  const double b = 4.0;
  for (double t : {0.5, 1.5, 3.0}) {
    double gauss = std::exp(-t * t / b);
    CHECK(phi_r_general(t, {1e-6, b}) == Approx(gauss).margin(2e-6));
    CHECK(phi_r_general(t, {1e-9, b}) == Approx(gauss).margin(1e-8));
    double correction = 2.0 / 3.0 * 1e-6 * t * t * t / (b * b);
    CHECK(std::log(phi_r_general(t, {1e-6, b})) - (-t * t / b) ==
          Approx(correction).epsilon(1e-3));
  }
}

TEST_CASE("inversion round trips") {
  for (double kap : {2.0, 16.0 / 3.0, 7.813554}) {
    for (long n : {48L, 500L, 9998L}) {
      ConcentrationBound b{kap, n};
      for (double alpha : {1e-6, 1e-3, 0.025, 0.2, 0.5}) {
        double tr = invert_phi_r(alpha, b);
        CHECK(phi_r(tr, b) == Approx(alpha).margin(1e-10));
        double tl = invert_phi_l(alpha, b);
        CHECK(phi_l(tl, b) == Approx(alpha).margin(1e-10));
      }
    }
  }
  SECTION("alpha near one gives a vanishing quantile") {
    ConcentrationBound b{4.0, 100};
    CHECK(invert_phi_r(0.9999, b) < 1e-3);
    CHECK(invert_phi_r(0.9999, b) > 0.0);
  }
  SECTION("domain errors") {
    ConcentrationBound b{4.0, 100};
    CHECK_THROWS_AS(invert_phi_r(0.0, b), std::domain_error);
    CHECK_THROWS_AS(invert_phi_l(1.0, b), std::domain_error);
  }
}

TEST_CASE("monotonicity") {
  ConcentrationBound b{5.0, 200};
  double prev = 1.0;
  for (double t = 0.05; t < 12.0; t += 0.05) {
    double v = phi_r(t, b);
    CHECK(v < prev);
    prev = v;
  }
  prev = 1.0 + 1e-12;
  for (double t = 0.0; t < std::sqrt(200.0) - 1e-9; t += 0.1) {
    double v = phi_l(t, b);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("comparison bounds dominate on the reference grid") {
  for (long n : {50L, 100L, 500L, 1000L, 10000L}) {
    GeneralBoundParams g{8.0 / std::sqrt(double(n)), 8.0};
    for (double alpha : {0.01, 0.025, 0.05, 0.10}) {
      CHECK(invert_nv_phi_r(alpha, g) >= invert_phi_r_general(alpha, g));
      CHECK(invert_nv_phi_l(alpha, g) >= invert_phi_l_general(alpha, g));
    }
  }
}

TEST_CASE("asymptotic quantile") {
  CHECK(q_asymptotic(std::exp(-1.0), 2.0) == Approx(2.0).epsilon(1e-14));
  CHECK(q_asymptotic(0.025, 16.0 / 3.0) ==
        Approx(std::sqrt(32.0 / 3.0 * std::log(40.0))).epsilon(1e-14));
  SECTION("finite-size inverses approach it") {
    ConcentrationBound b{4.0, 100000000L};
    for (double alpha : {0.01, 0.1}) {
      double q = q_asymptotic(alpha, 4.0);
      CHECK(invert_phi_r(alpha, b) == Approx(q).epsilon(1e-3));
      CHECK(invert_phi_l(alpha, b) == Approx(q).epsilon(1e-3));
    }
  }
  SECTION("closed-form left inverse of the comparison bound") {
    GeneralBoundParams g{0.3, 6.0};
    for (double alpha : {0.01, 0.2}) {
      CHECK(nv_phi_l(invert_nv_phi_l(alpha, g), g) == Approx(alpha).epsilon(1e-12));
      CHECK(invert_nv_phi_l(alpha, g) ==
            Approx(std::sqrt(6.0 * std::log(1.0 / alpha))).epsilon(1e-14));
    }
  }
}
