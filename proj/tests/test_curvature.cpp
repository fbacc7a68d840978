#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hardylab/curvature.hpp"
#include "oracles.hpp"

using namespace hardylab;

TEST_CASE("s_c matches the three closed forms") {
  CHECK(s_c(Curvature(0.0), 2.5) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(s_c(Curvature(1.0), kPi / 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  // sinh(1) by series oracle
  CHECK(s_c(Curvature(-1.0), 1.0) ==
        doctest::Approx(oracle::series_sinh(1.0)).epsilon(1e-14));
  CHECK(oracle::series_sinh(1.0) == doctest::Approx(1.1752011936438014));
}

TEST_CASE("ct_c matches the three closed forms") {
  CHECK(ct_c(Curvature(0.0), 4.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ct_c(Curvature(1.0), kPi / 2.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(ct_c(Curvature(-1.0), 2.0) ==
        doctest::Approx(oracle::series_coth(2.0)).epsilon(1e-14));
  CHECK(oracle::series_coth(2.0) == doctest::Approx(1.0373147207275482));
}

TEST_CASE("d_c defect values and signs") {
  CHECK(d_c(Curvature(0.0), 7.0) == 0.0);
  CHECK(d_c(Curvature(-1.0), 1.0) ==
        doctest::Approx(oracle::series_coth(1.0) - 1.0).epsilon(1e-13));
  CHECK(oracle::series_coth(1.0) - 1.0 == doctest::Approx(0.3130352854993312));
  const double v = d_c(Curvature(1.0), 1.0);
  CHECK(v == doctest::Approx(oracle::series_cot(1.0) - 1.0).epsilon(1e-13));
  CHECK(v < 0.0);  // spherical defect is negative away from the pole
  CHECK(d_c(Curvature(-1.0), 0.0) == 0.0);
}

TEST_CASE("domain handling: strict errors and saturate fallback") {
  CHECK_THROWS_AS(s_c(Curvature(1.0), kPi), std::domain_error);
  CHECK_THROWS_AS(ct_c(Curvature(4.0), kPi), std::domain_error);
  CHECK_THROWS_AS(ct_c(Curvature(0.0), 0.0), std::domain_error);
  CHECK_THROWS_AS(s_c(Curvature(0.0), -1.0), std::domain_error);
  CHECK(std::isfinite(s_c(Curvature(1.0), kPi, DomainPolicy::saturate)));
}

TEST_CASE("limits r -> 0: s_c(r)/r and r ct_c(r) approach 1") {
  for (double c : {-4.0, -1.0, 0.0, 1.0, 4.0}) {
    const double r = 1e-6;
    CHECK(s_c(Curvature(c), r) / r == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r * ct_c(Curvature(c), r) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("derivative identity s_c' = s_c ct_c (finite differences)") {
  for (double c : {-2.0, -1.0, 0.0, 0.5, 1.0}) {
    for (double r : {0.2, 0.7, 1.3, 2.1}) {
      if (c > 0.0 && r + 1e-5 >= kPi / std::sqrt(c)) continue;
      const double h = 1e-5;
      const double fd = (s_c(Curvature(c), r + h) - s_c(Curvature(c), r - h)) / (2 * h);
      CHECK(fd == doctest::Approx(s_c(Curvature(c), r) * ct_c(Curvature(c), r))
                      .epsilon(1e-6));
    }
  }
}

TEST_CASE("scaling law s_c(r) = s_{c/l^2}(l r)/l") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uc(-3.0, 3.0), ur(0.05, 1.0), ul(0.2, 4.0);
  for (int k = 0; k < 300; ++k) {
    const double c = uc(rng), r = ur(rng), l = ul(rng);
    if (c > 0.0 && r >= kPi / std::sqrt(c)) continue;
    const double lhs = s_c(Curvature(c), r);
    const double rhs = s_c(Curvature(c / (l * l)), l * r) / l;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("series/direct agreement across the switch threshold") {
  // reference in long double through the direct formulas
  auto ref_s = [](long double c, long double r) -> double {
    if (c > 0) return double(sinl(sqrtl(c) * r) / sqrtl(c));
    if (c < 0) return double(sinhl(sqrtl(-c) * r) / sqrtl(-c));
    return double(r);
  };
  for (double y : {1e-9, 1e-8, 1e-7}) {
    for (double sign : {-1.0, 1.0}) {
      const double r = 0.5;
      const double c = sign * y / (r * r);
      CHECK(s_c(Curvature(c), r) ==
            doctest::Approx(ref_s((long double)c, (long double)r)).epsilon(1e-14));
    }
  }
}

TEST_CASE("cot_mittag_leffler partial sums") {
  CHECK(std::fabs(cot_mittag_leffler(kPi / 2.0, 1000000)) < 1e-6);
  CHECK(cot_mittag_leffler(1.0, 1000000) ==
        doctest::Approx(oracle::series_cot(1.0)).epsilon(1e-5));
  CHECK(oracle::series_cot(1.0) == doctest::Approx(0.6420926159343306));
  // one term, closed form
  const double expect = 1.0 / 0.1 + 2.0 * 0.1 / (0.01 - kPi * kPi);
  CHECK(cot_mittag_leffler(0.1, 1) == doctest::Approx(expect).epsilon(1e-15));
  CHECK_THROWS_AS(cot_mittag_leffler(-0.1, 10), std::domain_error);
  CHECK_THROWS_AS(cot_mittag_leffler(3.5, 10), std::domain_error);
  CHECK_THROWS_AS(cot_mittag_leffler(1.0, 0), std::domain_error);
}

TEST_CASE("cot_mittag_leffler converges at first order in 1/terms") {
  for (double t : {0.3, 1.0, 2.5}) {
    const double e3 = std::fabs(cot_mittag_leffler(t, 1000) - oracle::series_cot(t));
    const double e4 = std::fabs(cot_mittag_leffler(t, 10000) - oracle::series_cot(t));
    CHECK(e3 / e4 == doctest::Approx(10.0).epsilon(0.15));
  }
}

TEST_CASE("hemisphere_constant printed-formula values") {
  CHECK(hemisphere_constant(3, 0.0) ==
        doctest::Approx(25.0 / (3.0 * kPi * kPi)).epsilon(1e-15));
  CHECK(hemisphere_constant(4, 0.0) ==
        doctest::Approx(25.0 / (kPi * kPi)).epsilon(1e-15));
  // monotone increase toward beta -> pi/2
  double prev = 0.0;
  for (double beta : {0.0, 0.5, 1.0, 1.3, 1.5, 1.56}) {
    const double v = hemisphere_constant(3, beta);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(hemisphere_constant(3, 1.5707) > 1e3);
  CHECK_THROWS_AS(hemisphere_constant(3, kPi / 2.0), std::domain_error);
  CHECK_THROWS_AS(hemisphere_constant(2, 0.0), std::domain_error);
}

TEST_CASE("r_ij_correction: zero cases and symmetry") {
  CHECK(r_ij_correction(Curvature(0.0), 1.0, 2.0) == 0.0);
  // equal distances annihilate the correction for every curvature
  for (double c : {-4.0, -1.0, -0.1, 0.7, 1.0})
    for (double d : {0.3, 1.0, 2.0}) {
      if (c > 0.0 && d >= kPi / std::sqrt(c)) continue;
      CHECK(std::fabs(r_ij_correction(Curvature(c), d, d)) < 1e-12);
    }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(0.05, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double a = ud(rng), b = ud(rng);
    CHECK(r_ij_correction(Curvature(-1.0), a, b) ==
          r_ij_correction(Curvature(-1.0), b, a));
  }
}

TEST_CASE("r_ij_correction nonnegative for c < 0 over the distance grid") {
  for (double c : {-0.3, -1.0, -4.0}) {
    for (int i = 1; i <= 40; ++i)
      for (int j = 1; j <= 40; ++j) {
        const double di = 0.25 * i, dj = 0.25 * j;
        CHECK(r_ij_correction(Curvature(c), di, dj) >= 0.0);
      }
  }
}

TEST_CASE("r_ij_correction blows up like 1/d_i^2 at a pole") {
  const double r3 = r_ij_correction(Curvature(-1.0), 1e-3, 1.0);
  const double r2 = r_ij_correction(Curvature(-1.0), 1e-2, 1.0);
  CHECK(r3 > r2);
  CHECK(r2 > 0.0);
  // series oracle near 0: R ~ C/d_i^2 with C = 1 - 2(1/s(1) - ct(1))/(-1)
  const double C = 1.0 + 2.0 * (1.0 / oracle::series_sinh(1.0) -
                                oracle::series_coth(1.0));
  CHECK(r3 * 1e-6 == doctest::Approx(C).epsilon(1e-2));
}

TEST_CASE("r_ij_correction series branch agrees with long-double direct form") {
  auto direct = [](long double c, long double di, long double dj) -> double {
    auto s = [&](long double r) {
      return c > 0 ? sinl(sqrtl(c) * r) / sqrtl(c) : sinhl(sqrtl(-c) * r) / sqrtl(-c);
    };
    auto ct = [&](long double r) {
      return c > 0 ? sqrtl(c) * cosl(sqrtl(c) * r) / sinl(sqrtl(c) * r)
                   : sqrtl(-c) * coshl(sqrtl(-c) * r) / sinhl(sqrtl(-c) * r);
    };
    return double(1.0L / (di * di) + 1.0L / (dj * dj) -
                  2.0L / (c * di * dj) * (1.0L / (s(di) * s(dj)) - ct(di) * ct(dj)));
  };
  for (double c : {1e-5, -1e-5, 5e-5, -2e-4}) {
    const double v = r_ij_correction(Curvature(c), 1.0, 2.0);
    CHECK(v == doctest::Approx(direct(c, 1.0L, 2.0L)).epsilon(1e-8));
  }
}

TEST_CASE("D_c lower bound 3|c|r^2/(pi^2+|c|r^2) for negative curvature") {
  for (double c : {-0.25, -1.0, -4.0}) {
    for (int k = 1; k <= 2000; ++k) {
      const double r = 20.0 * k / 2000.0;
      CHECK(d_c(Curvature(c), r) >= d_c_lower_bound(Curvature(c), r) - 1e-14);
    }
  }
}
