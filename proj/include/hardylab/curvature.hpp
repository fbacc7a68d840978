#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hardylab {

inline constexpr double kPi = 3.14159265358979323846;

// Below this value of c*r^2 the trig/hyperbolic forms switch to Taylor
// series; truncation error of the 4th-order series is < 1e-16 there.
inline constexpr double kSeriesThreshold = 1e-8;

enum class DomainPolicy { strict, saturate };

/// Sectional curvature of a model space.  Sign selects the geometry:
/// c < 0 hyperbolic, c = 0 Euclidean, c > 0 spherical.
class Curvature {
 public:
  explicit Curvature(double c) : c_(c) {
    if (!std::isfinite(c)) throw std::invalid_argument("curvature must be finite");
  }
  double value() const { return c_; }
  int sign() const { return c_ > 0.0 ? 1 : (c_ < 0.0 ? -1 : 0); }

  /// Radial domain limit: pi/sqrt(c) for c > 0, +inf otherwise.
  double domain_max() const {
    return c_ > 0.0 ? kPi / std::sqrt(c_) : std::numeric_limits<double>::infinity();
  }

  bool contains_radius(double r) const { return r >= 0.0 && r < domain_max(); }

 private:
  double c_;
};

namespace detail {

inline void check_radius(Curvature c, double r, const char* fn, bool allow_zero,
                         DomainPolicy policy, double& r_eff) {
  if (!(r >= 0.0) || (!allow_zero && r == 0.0))
    throw std::domain_error(std::string(fn) + ": radius must be " +
                            (allow_zero ? "nonnegative" : "positive"));
  r_eff = r;
  if (c.value() > 0.0 && r >= c.domain_max()) {
    if (policy == DomainPolicy::strict)
      throw std::domain_error(std::string(fn) +
                              ": radius reaches conjugate locus (r >= pi/sqrt(c))");
    r_eff = std::nextafter(c.domain_max(), 0.0);
  }
}

}  // namespace detail

/// Generalized sine s_c(r): sin(sqrt(c) r)/sqrt(c), r, or sinh(sqrt(-c) r)/sqrt(-c).
/// Analytic in y = c r^2; the series branch keeps it continuous at c = 0.
inline double s_c(Curvature c, double r, DomainPolicy policy = DomainPolicy::strict) {
  detail::check_radius(c, r, "s_c", /*allow_zero=*/true, policy, r);
  const double y = c.value() * r * r;
  if (std::fabs(y) < kSeriesThreshold)
    return r * (1.0 - y / 6.0 + y * y / 120.0 - y * y * y / 5040.0);
  if (c.value() > 0.0) {
    const double s = std::sqrt(c.value());
    return std::sin(s * r) / s;
  }
  const double s = std::sqrt(-c.value());
  return std::sinh(s * r) / s;
}

/// Generalized cotangent ct_c(r) = s_c'(r)/s_c(r).
inline double ct_c(Curvature c, double r, DomainPolicy policy = DomainPolicy::strict) {
  detail::check_radius(c, r, "ct_c", /*allow_zero=*/false, policy, r);
  const double y = c.value() * r * r;
  if (std::fabs(y) < kSeriesThreshold)
    return (1.0 - y / 3.0 - y * y / 45.0 - 2.0 * y * y * y / 945.0) / r;
  if (c.value() > 0.0) {
    const double s = std::sqrt(c.value());
    return s * std::cos(s * r) / std::sin(s * r);
  }
  const double s = std::sqrt(-c.value());
  return s / std::tanh(s * r);
}

/// Curvature defect D_c(r) = r ct_c(r) - 1.  Vanishes identically for c = 0;
/// positive for c < 0, negative for c > 0.  The direct form cancels
/// catastrophically for small c r^2, so the series branch switches earlier
/// than for s_c/ct_c (at |y| < 1e-4 the series is the more accurate route).
inline double d_c(Curvature c, double r, DomainPolicy policy = DomainPolicy::strict) {
  detail::check_radius(c, r, "d_c", /*allow_zero=*/true, policy, r);
  if (r == 0.0) return 0.0;
  const double y = c.value() * r * r;
  if (std::fabs(y) < 1e-4)
    return -y / 3.0 - y * y / 45.0 - 2.0 * y * y * y / 945.0 - y * y * y * y / 4725.0;
  return r * ct_c(c, r, policy) - 1.0;
}

/// Lower bound 3|c|r^2/(pi^2 + |c|r^2) <= D_c(r), valid for c <= 0.
inline double d_c_lower_bound(Curvature c, double r) {
  const double a = std::fabs(c.value()) * r * r;
  return 3.0 * a / (kPi * kPi + a);
}

/// Partial sum of the cotangent expansion cot t = 1/t + 2t sum_k (t^2 - pi^2 k^2)^-1.
/// Converges at rate O(1/terms); summed smallest-term-first.
inline double cot_mittag_leffler(double t, long terms) {
  if (!(t > 0.0 && t < kPi))
    throw std::domain_error("cot_mittag_leffler: t must lie in (0, pi)");
  if (terms < 1) throw std::domain_error("cot_mittag_leffler: terms must be >= 1");
  const double t2 = t * t;
  double acc = 0.0;
  for (long k = terms; k >= 1; --k) {
    const double pk = kPi * static_cast<double>(k);
    acc += 1.0 / (t2 - pk * pk);
  }
  return 1.0 / t + 2.0 * t * acc;
}

/// Zero-order constant C(n, beta) of the hemisphere inequality:
/// (n-1)(n-2) (7 pi^2 - 3 (beta + pi/2)^2) / (2 pi^2 (pi^2 - (beta + pi/2)^2)).
inline double hemisphere_constant(int n, double beta) {
  if (n < 3) throw std::domain_error("hemisphere_constant: n must be >= 3");
  if (!(beta >= 0.0 && beta < kPi / 2.0))
    throw std::domain_error("hemisphere_constant: beta must lie in [0, pi/2)");
  const double b = beta + kPi / 2.0;
  const double pi2 = kPi * kPi;
  return (n - 1) * (n - 2) * (7.0 * pi2 - 3.0 * b * b) / (2.0 * pi2 * (pi2 - b * b));
}

/// Curvature correction R_ij for a pole pair at distances (d_i, d_j):
///   1/d_i^2 + 1/d_j^2 - 2/(c d_i d_j) (1/(s_c(d_i) s_c(d_j)) - ct_c(d_i) ct_c(d_j))
/// for c != 0, and 0 for c = 0.  Symmetric in (d_i, d_j), vanishing when
/// d_i = d_j, nonnegative for c < 0.  Small-y series:
///   R = -c (d_i^2-d_j^2)^2/(12 d_i^2 d_j^2) [1 + (y_i+y_j)/10
///        + 17(y_i^2+y_j^2)/1680 + 29 y_i y_j/2520 + ...],  y_k = c d_k^2,
/// which avoids the double cancellation of the direct form.
inline double r_ij_correction(Curvature c, double d_i, double d_j,
                              DomainPolicy policy = DomainPolicy::strict) {
  if (!(d_i > 0.0) || !(d_j > 0.0))
    throw std::domain_error("r_ij_correction: distances must be positive");
  if (c.value() == 0.0) {
    detail::check_radius(c, d_i, "r_ij_correction", false, policy, d_i);
    return 0.0;
  }
  const double yi = c.value() * d_i * d_i;
  const double yj = c.value() * d_j * d_j;
  if (std::fmax(std::fabs(yi), std::fabs(yj)) < 1e-3) {
    const double diff2 = (d_i * d_i - d_j * d_j) * (d_i * d_i - d_j * d_j);
    const double lead = -c.value() * diff2 / (12.0 * d_i * d_i * d_j * d_j);
    return lead * (1.0 + (yi + yj) / 10.0 + 17.0 * (yi * yi + yj * yj) / 1680.0 +
                   29.0 * yi * yj / 2520.0);
  }
  const double si = s_c(c, d_i, policy);
  const double sj = s_c(c, d_j, policy);
  const double cti = ct_c(c, d_i, policy);
  const double ctj = ct_c(c, d_j, policy);
  const double r = 1.0 / (d_i * d_i) + 1.0 / (d_j * d_j) -
                   2.0 / (c.value() * d_i * d_j) * (1.0 / (si * sj) - cti * ctj);
  // R >= 0 for c <= 0; clamp the rounding residue of the double cancellation
  if (c.value() < 0.0 && r < 0.0) return 0.0;
  return r;
}

}  // namespace hardylab
