#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hurstci/gaussian.hpp"
#include "hurstci/intervals.hpp"
#include "oracles.hpp"

using namespace hurstci;
using Catch::Approx;

TEST_CASE("gn and its inverse") {
  Filter i2 = make_increment_filter(2);
  SECTION("closed form for the second increments") {
    for (long n : {3L, 100L, 5000L}) {
      for (double x : {0.1, 0.5, 0.9}) {
        double expect = 2.0 * x * std::log(double(n)) - std::log(4.0 - std::pow(4.0, x));
        CHECK(gn(x, i2, n) == Approx(expect).epsilon(1e-13));
      }
    }
  }
  SECTION("strictly increasing from the minimal n on") {
    for (long n : {3L, 10L, 1000L}) {
      double prev = -1e300;
      for (double x = 0.02; x < 0.99; x += 0.02) {
        double v = gn(x, i2, n);
        CHECK(v > prev);
        prev = v;
      }
    }
  }
  SECTION("round trip") {
    for (double x = 0.1; x < 0.91; x += 0.1) {
      CHECK(gn_inverse(gn(x, i2, 100), i2, 100) == Approx(x).margin(1e-10));
    }
  }
  SECTION("boundary signals") {
    CHECK(gn_inverse(-std::log(3.0) - 1.0, i2, 100) == 0.0);
    CHECK(gn_inverse(1e6, i2, 100) == 1.0);
  }
  SECTION("direct midpoint value") {
    double y = std::log(100.0) - std::log(2.0);
    CHECK(gn_inverse(y, i2, 100) == Approx(0.5).margin(1e-10));
  }
}

TEST_CASE("minimal invertible sample size") {
  CHECK(min_n_invertible(make_increment_filter(2)) == 3);
  CHECK(min_n_invertible(builtin_filter("d4")) == 4);
  CHECK(min_n_invertible(builtin_filter("c12")) == 12);
  // the exp-condition is slack here, so the filter length drives the bound
  CHECK(min_n_invertible(dilate(builtin_filter("d4"), 2)) == 7);
}

namespace {

SamplePath fresh_path(double h, long n, std::uint64_t seed) {
  return simulate({h, 1.0, n, seed});
}

}  // namespace

TEST_CASE("known-scale interval") {
  Filter i2 = make_increment_filter(2);
  SECTION("brackets the plug-in estimator") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
      SamplePath p = fresh_path(0.6, 200, seed);
      auto ci = ci_known_scale(p, i2, 0.05);
      REQUIRE(ci.feasible);
      double est = estimator_std(p, i2);
      CHECK(ci.lower <= est);
      CHECK(est <= ci.upper);
      CHECK(ci.lower >= 0.0);
      CHECK(ci.upper <= 1.0);
    }
  }
  SECTION("nesting in the level") {
    SamplePath p = fresh_path(0.4, 300, 9);
    auto narrow = ci_known_scale(p, i2, 0.10);
    auto wide = ci_known_scale(p, i2, 0.02);
    CHECK(wide.lower <= narrow.lower);
    CHECK(narrow.upper <= wide.upper);
  }
  SECTION("infeasible below the minimal sample size") {
    SamplePath p = fresh_path(0.5, 2, 1);
    CHECK_FALSE(ci_known_scale(p, i2, 0.05).feasible);
  }
  SECTION("p=1 filters clamp at 1/2") {
    Filter i1 = make_increment_filter(1);
    SamplePath p = fresh_path(0.45, 400, 11);
    auto ci = ci_known_scale(p, i1, 0.05);
    REQUIRE(ci.feasible);
    CHECK(ci.upper <= 0.5);
  }
  SECTION("diagnostics recorded") {
    SamplePath p = fresh_path(0.5, 100, 2);
    auto ci = ci_known_scale(p, i2, 0.05);
    CHECK(ci.diagnostics.s_values.size() == 1);
    CHECK(ci.diagnostics.q_values.size() == 2);
  }
}

TEST_CASE("unknown-scale interval") {
  Filter i2 = make_increment_filter(2);
  DilationDesign a2 = DilationDesign::standard(2);
  SECTION("scale invariance") {
    SamplePath p = fresh_path(0.55, 600, 17);
    auto base = ci_unknown_scale(p, i2, a2, 0.05);
    REQUIRE(base.feasible);
    for (double c : {1e-3, 7.0, 1e3}) {
      SamplePath scaled = p;
      for (double& v : scaled.values) v *= c;
      auto ci = ci_unknown_scale(scaled, i2, a2, 0.05);
      CHECK(ci.lower == Approx(base.lower).margin(1e-11));
      CHECK(ci.upper == Approx(base.upper).margin(1e-11));
    }
  }
  SECTION("step metadata does not enter") {
    SamplePath p = fresh_path(0.55, 300, 18);
    auto base = ci_unknown_scale(p, i2, a2, 0.05);
    SamplePath relabeled = p;
    relabeled.step *= 3.0;  // dilated observation window
    auto ci = ci_unknown_scale(relabeled, i2, a2, 0.05);
    CHECK(ci.lower == base.lower);
    CHECK(ci.upper == base.upper);
  }
  SECTION("matches the explicit two-dilation formulas") {
    SamplePath p = fresh_path(0.5, 500, 19);
    auto ci = ci_unknown_scale(p, i2, a2, 0.05);
    double s1 = quadratic_variation(p, i2).s_n;
    double s2 = quadratic_variation(p, dilate(i2, 2)).s_n;
    double lr = std::log(s2 / s1);
    ConcentrationBound b1{kappa(i2), 500 - 2};
    ConcentrationBound b2{kappa(dilate(i2, 2)), 500 - 4};
    double a = 0.05 / 4.0;
    double xl1 = 1.0 - invert_phi_l(a, b1) / std::sqrt(498.0);
    double xr1 = 1.0 + invert_phi_r(a, b1) / std::sqrt(498.0);
    double xl2 = 1.0 - invert_phi_l(a, b2) / std::sqrt(496.0);
    double xr2 = 1.0 + invert_phi_r(a, b2) / std::sqrt(496.0);
    double lo = std::max(0.0, (lr - std::log(xr2 / xl1)) / (2.0 * std::log(2.0)));
    double hi = std::min(1.0, (lr - std::log(xl2 / xr1)) / (2.0 * std::log(2.0)));
    CHECK(ci.lower == Approx(lo).margin(1e-12));
    CHECK(ci.upper == Approx(hi).margin(1e-12));
  }
  SECTION("brackets the regression estimator") {
    SamplePath p = fresh_path(0.7, 4000, 21);
    auto ci = ci_unknown_scale(p, i2, a2, 0.05);
    double est = estimator_gen(p, i2, 2);
    if (ci.lower > 0.0 && ci.upper < 1.0) {
      CHECK(ci.lower <= est);
      CHECK(est <= ci.upper);
    }
  }
  SECTION("design validation") {
    DilationDesign bad1{2, {0.5, 0.1}};
    CHECK_THROWS_AS(bad1.validate(), std::invalid_argument);  // sum != 0
    DilationDesign bad2{2, {1.0, -1.0}};
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);  // d^T log m < 0
    DilationDesign bad3{3, {-1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(bad3.validate(), std::invalid_argument);  // zero component
    SamplePath p = fresh_path(0.5, 100, 3);
    CHECK_THROWS_AS(ci_unknown_scale(p, i2, bad1, 0.05), std::invalid_argument);
  }
  SECTION("infeasible when the largest dilation does not fit") {
    SamplePath p = fresh_path(0.5, 10, 3);
    DilationDesign a5 = DilationDesign::standard(5);
    CHECK_FALSE(ci_unknown_scale(p, i2, a5, 0.05).feasible);
  }
  SECTION("nesting in the level") {
    SamplePath p = fresh_path(0.5, 2000, 23);
    auto narrow = ci_unknown_scale(p, i2, a2, 0.10);
    auto wide = ci_unknown_scale(p, i2, a2, 0.02);
    CHECK(wide.lower <= narrow.lower);
    CHECK(narrow.upper <= wide.upper);
  }
}

TEST_CASE("baseline interval feasibility thresholds") {
  SECTION("minimal n at the 5 percent level with h* = 0.8") {
    SamplePath p1110;  // n = 1108
    p1110.values.assign(1110, 0.0);
    p1110.values[1] = 1.0;  // content is irrelevant for feasibility
    CHECK(ci_bnp(p1110, 0.05, 0.8).feasible);
    SamplePath p1109;
    p1109.values.assign(1109, 0.0);
    p1109.values[1] = 1.0;
    CHECK_FALSE(ci_bnp(p1109, 0.05, 0.8).feasible);
  }
  SECTION("maximal usable h* at the 10 percent level, n = 500") {
    SamplePath p;
    p.values.assign(502, 0.0);
    p.values[1] = 1.0;
    CHECK(ci_bnp(p, 0.10, 0.695).feasible);
    CHECK_FALSE(ci_bnp(p, 0.10, 0.705).feasible);
  }
  SECTION("infeasible at small n and 1 percent") {
    SamplePath p;
    p.values.assign(102, 0.0);
    p.values[1] = 1.0;
    CHECK_FALSE(ci_bnp(p, 0.01, 0.05).feasible);
  }
  SECTION("covers on a real path when feasible") {
    SamplePath p = simulate({0.4, 1.0, 1502, 77});
    auto ci = ci_bnp(p, 0.05, 0.8);
    REQUIRE(ci.feasible);
    CHECK(ci.lower >= 0.0);
    CHECK(ci.lower < ci.upper);
  }
}

TEST_CASE("point estimators") {
  Filter i2 = make_increment_filter(2);
  SECTION("std estimator recovers H from an exact statistic") {
    SamplePath p = fresh_path(0.35, 256, 4);
    double target = pi_cov(i2, 0.35, 0) / std::pow(256.0, 0.7);
    double s = quadratic_variation(p, i2).s_n;
    for (double& v : p.values) v *= std::sqrt(target / s);
    CHECK(estimator_std(p, i2) == Approx(0.35).margin(1e-9));
  }
  SECTION("gen estimator closed form at M=2") {
    SamplePath p = fresh_path(0.6, 300, 6);
    double s1 = quadratic_variation(p, i2).s_n;
    double s2 = quadratic_variation(p, dilate(i2, 2)).s_n;
    CHECK(estimator_gen(p, i2, 2) ==
          Approx(std::log(s2 / s1) / (2.0 * std::log(2.0))).margin(1e-12));
  }
  SECTION("gen estimator is scale invariant") {
    SamplePath p = fresh_path(0.6, 300, 7);
    double base = estimator_gen(p, i2, 3);
    SamplePath scaled = p;
    for (double& v : scaled.values) v *= 123.456;
    CHECK(estimator_gen(scaled, i2, 3) == Approx(base).margin(1e-12));
  }
  SECTION("consistency along a fixed-seed ladder") {
    double prev_err = 1.0;
    for (long n : {64L, 512L, 4096L, 32768L}) {
      SamplePath p = simulate({0.7, 1.0, n, 12});
      double err = std::abs(estimator_std(p, i2) - 0.7);
      if (n > 64) CHECK(err < prev_err + 0.05);
      prev_err = err;
    }
    CHECK(prev_err < 0.02);
  }
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.975) == Approx(1.959964).margin(1e-6));
  for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
    CHECK(normal_quantile(p) == Approx(oracle::normal_quantile_bisect(p)).margin(1e-12));
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
}

TEST_CASE("asymptotic variances") {
  Filter i2 = make_increment_filter(2);
  CHECK(sigma_std_sq(i2, 0.5) == Approx(0.75).epsilon(1e-12));
  double l2 = std::log(2.0);
  CHECK(sigma_gen_sq(i2, 0.5, 2) == Approx(1.75 / (2.0 * l2 * l2)).margin(1e-6));
}

TEST_CASE("CLT intervals") {
  Filter i2 = make_increment_filter(2);
  SECTION("interval is centered at the estimator") {
    SamplePath p = fresh_path(0.5, 400, 8);
    auto ci = ci_clt_known(p, i2, 0.05);
    REQUIRE(ci.feasible);
    double est = estimator_std(p, i2);
    CHECK(ci.midpoint() == Approx(est).margin(1e-12));
    CHECK(ci.length() > 0.0);
  }
  SECTION("unknown-scale variant is scale free") {
    SamplePath p = fresh_path(0.5, 800, 10);
    auto base = ci_clt_unknown(p, i2, 2, 0.05);
    SamplePath scaled = p;
    for (double& v : scaled.values) v *= 31.7;
    auto ci = ci_clt_unknown(scaled, i2, 2, 0.05);
    CHECK(ci.lower == Approx(base.lower).margin(1e-9));
    CHECK(ci.upper == Approx(base.upper).margin(1e-9));
  }
  SECTION("p=1 filter in the non-square-summable regime") {
    Filter i1 = make_increment_filter(1);
    SamplePath p = fresh_path(0.9, 300, 13);
    CHECK_THROWS_AS(ci_clt_known(p, i1, 0.05), std::domain_error);
  }
}

TEST_CASE("length ratio profile") {
  Filter i2 = make_increment_filter(2);
  std::vector<double> grid;
  for (double h = 0.1; h < 0.91; h += 0.1) grid.push_back(h);
  SECTION("known case: concentration interval is wider everywhere") {
    auto prof = length_ratio_profile(i2, std::nullopt, 0.05, grid);
    REQUIRE(prof.size() == grid.size());
    for (const auto& pt : prof) {
      CHECK(pt.ratio > 1.0);
      CHECK(std::isfinite(pt.ratio));
    }
  }
  SECTION("continuity in H") {
    auto prof = length_ratio_profile(i2, 2, 0.05, grid);
    for (size_t i = 1; i < prof.size(); ++i)
      CHECK(std::abs(prof[i].ratio - prof[i - 1].ratio) < 0.5 * prof[i - 1].ratio + 0.5);
  }
}
