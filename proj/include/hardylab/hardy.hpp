#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "hardylab/axigrid.hpp"

namespace hardylab {

/// Result of one inequality verification run.  residual = lhs - rhs_total must
/// stay >= -tol, with tol self-calibrated from the grid volume self-test.
struct HardyReport {
  double lhs = 0.0;
  double rhs_pairwise = 0.0;
  double rhs_correction = 0.0;
  double residual = 0.0;
  double relative_margin = 0.0;
  double tol = 0.0;

  // config metadata
  std::string theorem;
  int n = 0;
  double c = 0.0;
  int m = 0;
  std::optional<double> k0;
  std::optional<double> beta;
  std::optional<double> zero_order_constant;   // C(n, beta)
  std::optional<double> residual_weak_bound;   // D_c replaced by its lower bound
  double volume_rel_error = 0.0;
  int theta_nodes = 0;
  int gl_points = 0;
  double delta = 0.0;

  nlohmann::ordered_json to_json() const;
};

/// |grad d_i / d_i - grad d_j / d_j|^2 expanded through the angle cosine:
/// 1/d_i^2 + 1/d_j^2 - 2 <grad d_i, grad d_j> / (d_i d_j).
double weight_pairwise_gradient(const ModelPoint& x, const ModelPoint& pole_i,
                                const ModelPoint& pole_j);
double weight_pairwise_cached(double d_i, double d_j, double cos_ij);

/// Euclidean two-pole weight |x_i - x_j|^2 / (|x - x_i|^2 |x - x_j|^2).
/// Equals weight_pairwise_gradient in flat space (parallelogrammoid identity).
double weight_euclidean_cz(const ModelPoint& x, const ModelPoint& pole_i,
                           const ModelPoint& pole_j);

/// Curved two-pole weight of the cosine-law inequality:
///   4 s_k0^2(d_ij/2) / (d_i d_j s_k0(d_i) s_k0(d_j)) + R_ij(k0),
/// reducing to d_ij^2/(d_i^2 d_j^2) when k0 = 0.  On a space form of
/// curvature c >= k0 it is dominated pointwise by weight_pairwise_gradient.
double weight_bipolar_curved(const ModelPoint& x, const ModelPoint& pole_i,
                             const ModelPoint& pole_j, Curvature k0);
double weight_bipolar_cached(Curvature k0, double d_i, double d_j, double d_ij);

/// Integral of sum_i (d_i lap d_i - (n-1))/d_i^2 u^2, which on a space form is
/// sum_i (n-1) D_c(d_i)/d_i^2 against u^2.  Zero for c = 0, >= 0 for c < 0,
/// <= 0 for c > 0.
double correction_term(const AxiGrid& grid, const AxiField& u);

struct VerifyOptions {
  /// add back the analytic 1/d^2 core integral over the excluded pole discs
  bool pole_core = true;
};

/// Dirichlet-energy inequality with the pairwise-gradient weight and the
/// curvature correction term.
HardyReport verify_theorem1(const AxiGrid& grid, const AxiField& u,
                            const VerifyOptions& opt = {});

/// Cosine-law variant: space curvature must satisfy c >= k0; the pairwise term
/// uses weight_bipolar_curved(., k0).
HardyReport verify_theorem2(const AxiGrid& grid, const AxiField& u, Curvature k0,
                            const VerifyOptions& opt = {});

/// Hemisphere inequality: lhs gains the zero-order term C(n, beta) int u^2;
/// the grid must be centered at the north pole and u must vanish on the equator.
HardyReport verify_hemisphere(const AxiGrid& grid, const AxiField& u,
                              const VerifyOptions& opt = {});

/// Cartan-Hadamard form (c < 0) with the explicit defect D_c; also evaluates
/// the weaker bound 3|c|r^2/(pi^2+|c|r^2) in place of D_c (larger margin).
HardyReport verify_remark_c(const AxiGrid& grid, const AxiField& u,
                            const VerifyOptions& opt = {});

}  // namespace hardylab
