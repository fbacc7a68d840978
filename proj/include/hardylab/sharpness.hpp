#pragma once

#include <json.hpp>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "hardylab/model_space.hpp"

namespace hardylab {

/// Logarithmic test-function family concentrating at a pole pair: on the
/// annulus [eps^2, sqrt(eps)] about either pole,
///   u(d) = log(d/eps^2)/log(1/eps) d^{(2-n)/2}        on [eps^2, eps],
///   u(d) = 2 log(sqrt(eps)/d)/log(1/eps) d^{(2-n)/2}  on [eps, sqrt(eps)],
/// and 0 elsewhere.  Requires disjoint supports: d_12 > 4 sqrt(eps).
class EpsilonFamily {
 public:
  EpsilonFamily(const ModelSpace& space, const PoleSet& poles, double epsilon);

  const ModelSpace& space() const { return *space_; }
  const PoleSet& poles() const { return *poles_; }
  double epsilon() const { return eps_; }

  double profile(double d) const;             // u as a function of pole distance
  double profile_derivative(double d) const;  // du/dd (piecewise analytic)

 private:
  const ModelSpace* space_;
  const PoleSet* poles_;
  double eps_;
};

/// Pointwise evaluation of the family member at an arbitrary point.
double eval_u_eps(const EpsilonFamily& fam, const ModelPoint& x);

/// The four functionals of the optimality argument and their combination.
struct SweepRecord {
  double epsilon = 0.0;
  double I = 0.0;  // int |grad u|^2
  double J = 0.0;  // int (1/d_1^2 + 1/d_2^2) u^2
  double K = 0.0;  // int sum_i (d_i lap d_i - (n-1))/d_i^2 u^2
  double L = 0.0;  // int <grad d_1, grad d_2>/(d_1 d_2) u^2
  double ratio = 0.0;   // (I - (n-2)/2 K) / (J - 2L)
  double target = 0.0;  // (n-2)^2 / 4
  double tol = 0.0;     // quadrature error estimate (max relative, refined run)

  nlohmann::ordered_json to_json() const;
};

/// Radial quadrature: log-spaced Gauss-Legendre panels (>= panels_per_decade
/// per decade, boundaries at the profile breakpoints), Gauss-Legendre in the
/// polar angle for the cross-pole weights.
struct SharpnessQuadrature {
  int panels_per_decade = 40;
  int gl_points = 8;
  int theta_points = 64;
};

SweepRecord functionals(const EpsilonFamily& fam,
                        const SharpnessQuadrature& quad = {});

std::vector<SweepRecord> sharpness_sweep(const ModelSpace& space,
                                         const PoleSet& poles,
                                         std::span<const double> eps_list,
                                         const SharpnessQuadrature& quad = {});

/// CSV: epsilon,I,J,K,L,ratio,target,tol
void write_sweep_csv(std::span<const SweepRecord> records, std::ostream& out);

/// Trial family for the Rayleigh probe: per-pole profiles d^{(2-n)/2} h(log d)
/// with h spanned by `hats` piecewise-linear bumps on
/// [d_min_frac, d_max_frac] x (minimal pole separation), identical at every pole.
struct TrialFamily {
  int hats = 12;
  double d_min_frac = 1e-4;
  double d_max_frac = 0.45;
};

struct RayleighResult {
  double quotient = 0.0;     // best found int |grad u|^2 / sum_{i<j} int W u^2
  double reference = 0.0;    // (n-2)^2/m^2, for context only
  int evaluations = 0;
  bool empirical = true;     // never a sharpness claim
  nlohmann::ordered_json to_json() const;
};

/// Derivative-free (coordinate search) minimization of the Rayleigh quotient
/// over the trial family; deterministic for a fixed seed, budget counts
/// quotient evaluations.
RayleighResult rayleigh_probe(const ModelSpace& space, const PoleSet& poles,
                              const TrialFamily& family, int budget,
                              std::uint64_t seed);

}  // namespace hardylab
