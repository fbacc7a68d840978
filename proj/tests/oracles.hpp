#pragma once

// Test-only reference implementations, independent of the library code paths:
// Taylor-series elementary functions and a bisection-free adaptive Simpson
// integrator.  Used to freeze expected values.

#include <cmath>
#include <functional>

namespace oracle {

inline double series_exp(double x) {
  double term = 1.0, acc = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= x / k;
    acc += term;
  }
  return acc;
}

inline double series_sinh(double x) {
  double term = x, acc = x;
  for (int k = 1; k < 40; ++k) {
    term *= x * x / ((2 * k) * (2 * k + 1));
    acc += term;
  }
  return acc;
}

inline double series_cosh(double x) {
  double term = 1.0, acc = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= x * x / ((2 * k - 1) * (2 * k));
    acc += term;
  }
  return acc;
}

inline double series_sin(double x) {
  double term = x, acc = x;
  for (int k = 1; k < 40; ++k) {
    term *= -x * x / ((2 * k) * (2 * k + 1));
    acc += term;
  }
  return acc;
}

inline double series_cos(double x) {
  double term = 1.0, acc = 1.0;
  for (int k = 1; k < 40; ++k) {
    term *= -x * x / ((2 * k - 1) * (2 * k));
    acc += term;
  }
  return acc;
}

inline double series_coth(double x) { return series_cosh(x) / series_sinh(x); }
inline double series_cot(double x) { return series_cos(x) / series_sin(x); }

// adaptive Simpson quadrature
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, 0.5 * eps, depth - 1) +
         simpson(f, m, b, fm, frm, fb, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-12) {
  const double m = 0.5 * (a + b);
  return simpson(f, a, b, f(a), f(m), f(b), eps, 40);
}

}  // namespace oracle
