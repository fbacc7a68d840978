#pragma once

#include <json.hpp>
#include <array>
#include <cstdint>

#include "hardylab/hardy.hpp"

namespace hardylab {

/// Geodesic triangle (pole_i, pole_j, x) with side lengths
/// d_i = d(x, pole_i), d_j = d(x, pole_j), d_ij = d(pole_i, pole_j).
struct GeodesicTriangle {
  std::array<ModelPoint, 3> vertices;  // pole_i, pole_j, x
  double d_i = 0.0, d_j = 0.0, d_ij = 0.0;
};

GeodesicTriangle make_triangle(const ModelPoint& pole_i, const ModelPoint& pole_j,
                               const ModelPoint& x);

/// Comparison triangle with the same side lengths realized by concrete points
/// in the space form of curvature c_target (dimension carried over).
/// Throws when the sides are not embeddable (triangle inequality, spherical
/// perimeter bound 2 pi / sqrt(c)).
GeodesicTriangle comparison_triangle(Curvature c_target, const GeodesicTriangle& t);

struct ToponogovResult {
  double gamma_space = 0.0;  // angle at x measured through the distance gradients
  double gamma_model = 0.0;  // angle at the comparison vertex (cosine law at k0)
  bool pass = false;
};

/// Angle comparison gamma_model <= gamma_space + tol, valid whenever the
/// triangle lives in curvature c >= k0.
ToponogovResult toponogov_check(const GeodesicTriangle& t, Curvature k0,
                                double tol = 1e-9);

enum class ComparisonSide { upper, lower };

/// Grid assertion of the two Laplacian comparisons:
///  upper: curvature bounded above by c_bound -> lap d >= (n-1) ct_{c_bound}
///  lower: curvature bounded below by c_bound -> lap d <= (n-1) ct_{c_bound}
/// evaluated on a space form of curvature c_space.
bool laplace_comparison_check(const ModelSpace& space, Curvature c_bound,
                              ComparisonSide side, std::span<const double> r_grid,
                              double tol = 1e-12);

struct SweepSummary {
  std::string name;
  int total = 0;
  int failures = 0;
  double worst_margin = 0.0;  // most negative slack observed

  bool pass() const { return failures == 0; }
  nlohmann::ordered_json to_json() const;
};

/// Randomized Toponogov sweep: triangles sampled in a geodesic ball of radius
/// min(1, 0.4 pi/sqrt(c)) (respecting the perimeter hypothesis), compared
/// against the space form k0 <= c.
SweepSummary toponogov_sweep(const ModelSpace& space, Curvature k0, int samples,
                             std::uint64_t seed, double tol = 1e-9);

/// Pointwise weight domination sweep: at random sample points,
/// weight_pairwise_gradient >= weight_bipolar_curved(., k0) - tol.
SweepSummary cosine_chain_check(const ModelSpace& space, const PoleSet& poles,
                                int samples, std::uint64_t seed, Curvature k0,
                                double tol = 1e-10);

/// Uniform random point in the geodesic ball of the given radius about base.
ModelPoint random_point_in_ball(const ModelPoint& base, double radius,
                                std::uint64_t seed, int index);

}  // namespace hardylab
