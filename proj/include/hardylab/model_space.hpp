#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hardylab/curvature.hpp"

namespace hardylab {

using Vec = Eigen::VectorXd;

class ModelSpace;

/// Point on a model space, stored in embedded coordinates: R^n for c = 0,
/// the radius-1/sqrt(c) sphere in R^{n+1} for c > 0, and the upper sheet of
/// the hyperboloid <x,x>_M = -1/|c| in Minkowski R^{n,1} for c < 0.
struct ModelPoint {
  Vec coords;
  const ModelSpace* space = nullptr;
};

/// Simply connected space form of dimension n >= 3 and constant curvature c.
class ModelSpace {
 public:
  ModelSpace(int n, Curvature c);

  int dim() const { return n_; }
  int embed_dim() const { return c_.value() == 0.0 ? n_ : n_ + 1; }
  Curvature curvature() const { return c_; }

  /// Bilinear form of the ambient embedding (Euclidean or Minkowski).
  double form(const Vec& u, const Vec& v) const;

  /// Canonical base point: origin for c = 0, "north pole" (0,...,0,rho) otherwise.
  ModelPoint origin() const;

  /// Validates the embedding constraint and returns the point.
  ModelPoint make_point(Vec coords) const;

  /// Rescales raw coordinates back onto the model (constraint drift repair).
  ModelPoint project(Vec coords) const;

  /// Unit tangent vectors at x spanning the coordinate 2-plane used by
  /// axisymmetric constructions: e(0) is the axis direction.
  Vec tangent_basis_vector(const ModelPoint& x, int k) const;

  bool same_space(const ModelSpace& other) const {
    return n_ == other.n_ && c_.value() == other.c_.value();
  }

 private:
  int n_;
  Curvature c_;
};

/// Geodesic distance between two points of the same space.
double distance(const ModelPoint& x, const ModelPoint& y);

/// Inverse exponential map: tangent vector v at x with exp_x(v) = y,
/// |v| = distance(x, y).
Vec log_map(const ModelPoint& x, const ModelPoint& y);

/// Exponential map: follows the geodesic from x with initial velocity v for
/// unit time.  Result is re-projected onto the model constraint.
ModelPoint exp_map(const ModelPoint& x, const Vec& v);

/// Unit gradient of the distance function d(., pole) at x (eikonal: |grad| = 1).
Vec grad_distance(const ModelPoint& x, const ModelPoint& pole);

/// Laplacian of the distance function at radius r: (n-1) ct_c(r).
double laplacian_distance(const ModelSpace& space, double r);

/// Inner product of the two unit distance gradients at x, i.e. the cosine of
/// the angle at x in the geodesic triangle (pole_i, pole_j, x).
double angle_cosine(const ModelPoint& x, const ModelPoint& pole_i,
                    const ModelPoint& pole_j);

/// Law of cosines on the space form of curvature c: cosine of the vertex angle
/// opposite the side d_ij when the adjacent sides have lengths d_i and d_j.
double cosine_law_angle(Curvature c, double d_i, double d_j, double d_ij);

/// Ordered set of m >= 2 pairwise distinct poles with cached distances.
/// For c > 0 every pole must lie strictly inside the open upper hemisphere.
class PoleSet {
 public:
  explicit PoleSet(std::vector<ModelPoint> poles);

  int size() const { return static_cast<int>(poles_.size()); }
  const ModelPoint& pole(int i) const { return poles_[static_cast<size_t>(i)]; }
  double dist(int i, int j) const { return dist_(i, j); }
  double min_separation() const;
  const ModelSpace& space() const { return *poles_.front().space; }

 private:
  std::vector<ModelPoint> poles_;
  Eigen::MatrixXd dist_;
};

/// Midpoint of the geodesic segment from a to b.
ModelPoint geodesic_midpoint(const ModelPoint& a, const ModelPoint& b);

/// Surface measure of the unit k-sphere, |S^k| = 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double unit_sphere_area(int k);

/// Exact volume of the geodesic ball of radius r (1D quadrature of s_c^{n-1}).
double ball_volume(const ModelSpace& space, double r);

/// Distance from the polar point (r, theta) about a base point to the on-axis
/// point at signed arc position a, via the space-form law of cosines.
double axis_distance(Curvature c, double r, double a, double cos_theta);

}  // namespace hardylab
