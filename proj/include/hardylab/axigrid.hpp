#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "hardylab/model_space.hpp"

namespace hardylab {

/// Ball (r_min = 0) or annulus about the center point.
struct RegionSpec {
  ModelPoint center;
  double r_min = 0.0;
  double r_max = 0.0;
};

struct GridResolution {
  int theta_nodes = 128;  // uniform trapezoid intervals on [0, pi]
  int gl_points = 12;     // Gauss-Legendre points per radial panel
  int base_panels = 24;   // uniform cap: no panel wider than span/base_panels
};

/// Axisymmetric scalar field u = F(rho, d_1, ..., d_m) given through its value
/// and partial derivatives in the distance coordinates (rho = distance to the
/// grid center).  |grad u|^2 follows from the chain rule and the cached
/// gradient cosines, with no finite differencing.
class AxiField {
 public:
  virtual ~AxiField() = default;
  virtual double value(double rho, std::span<const double> d) const = 0;
  virtual void partials(double rho, std::span<const double> d, double& u_rho,
                        std::span<double> u_d) const = 0;
};

/// 2D geodesic-polar quadrature grid about a base point whose axis passes
/// through every pole.  Radial panels are Gauss-Legendre with boundaries at
/// each pole radius (geometrically refined toward them); theta is a uniform
/// trapezoid on [0, pi].  Node weights carry the full volume density
/// sigma_{n-2} s_c(r)^{n-1} sin^{n-2}(theta).  Nodes within the exclusion
/// radius of a pole keep their coordinates but carry zero weight.
class AxiGrid {
 public:
  int radial_nodes() const { return static_cast<int>(r_.size()); }
  int theta_nodes() const { return static_cast<int>(theta_.size()); }
  int size() const { return radial_nodes() * theta_nodes(); }
  int num_poles() const { return static_cast<int>(axis_pos_.size()); }

  double r(int k) const { return r_[static_cast<size_t>(k)]; }
  double theta(int l) const { return theta_[static_cast<size_t>(l)]; }
  double weight(int k, int l) const { return w_[idx(k, l)]; }
  bool excluded(int k, int l) const { return excluded_[idx(k, l)] != 0; }
  double pole_distance(int k, int l, int i) const {
    return d_[idx(k, l) * static_cast<size_t>(num_poles()) + static_cast<size_t>(i)];
  }
  std::span<const double> pole_distances(int k, int l) const {
    return {d_.data() + idx(k, l) * static_cast<size_t>(num_poles()),
            static_cast<size_t>(num_poles())};
  }
  /// cos of the angle between grad rho and grad d_i at the node
  double cos_center_pole(int k, int l, int i) const {
    return cos_rd_[idx(k, l) * static_cast<size_t>(num_poles()) + static_cast<size_t>(i)];
  }
  /// cos of the angle between grad d_i and grad d_j at the node (i < j)
  double cos_pole_pair(int k, int l, int i, int j) const {
    return cos_dd_[idx(k, l) * static_cast<size_t>(npairs_) + pair_index(i, j)];
  }

  const ModelSpace& space() const { return *space_; }
  const PoleSet& poles() const { return *poles_; }
  const ModelPoint& center() const { return center_; }
  double pole_axis_position(int i) const { return axis_pos_[static_cast<size_t>(i)]; }
  double exclusion_radius(int i) const { return delta_[static_cast<size_t>(i)]; }
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }

  double volume() const { return volume_; }
  double volume_rel_error() const { return volume_rel_error_; }

  /// Embedded point of a node (reconstructed via the exponential map).
  ModelPoint node_point(int k, int l) const;

  /// |grad u|^2 of an analytic field at a node via the chain rule.
  double grad_square(int k, int l, const AxiField& u) const;

  friend AxiGrid build_axigrid(const ModelSpace& space, const PoleSet& poles,
                               const RegionSpec& region, const GridResolution& res,
                               double delta);

 private:
  size_t idx(int k, int l) const {
    return static_cast<size_t>(k) * static_cast<size_t>(theta_.size()) +
           static_cast<size_t>(l);
  }
  size_t pair_index(int i, int j) const;

  const ModelSpace* space_ = nullptr;
  const PoleSet* poles_ = nullptr;
  ModelPoint center_;
  Vec axis_;  // unit tangent at center toward pole 0
  std::vector<double> r_, theta_;
  std::vector<double> w_;
  std::vector<char> excluded_;
  std::vector<double> d_, cos_rd_, cos_dd_;
  std::vector<double> axis_pos_, delta_;
  int npairs_ = 0;
  double r_min_ = 0.0, r_max_ = 0.0;
  double volume_ = 0.0, volume_rel_error_ = 0.0;
};

AxiGrid build_axigrid(const ModelSpace& space, const PoleSet& poles,
                      const RegionSpec& region, const GridResolution& res,
                      double delta);

/// Scalar samples on a grid.
struct ScalarField {
  const AxiGrid* grid = nullptr;
  Eigen::VectorXd values;
};

ScalarField sample(const AxiGrid& grid, const AxiField& u);

/// Integral of the sampled field against the grid measure.
double integrate(const ScalarField& f);

/// Per-node finite-difference derivatives in (r, theta); second order on
/// smooth fields (3-point nonuniform stencils radially, central in theta).
struct GradientField {
  Eigen::VectorXd d_dr, d_dtheta;
};
GradientField gradient_field(const ScalarField& f);

/// Dirichlet energy of sampled values using the finite-difference gradient:
/// integral of (u_r)^2 + (u_theta / s_c(r))^2.
double dirichlet_energy_fd(const ScalarField& f);

/// CSV snapshot, one node per row: r,theta,weight,value.
void write_csv(const ScalarField& f, std::ostream& out);

// --- stock analytic fields ---------------------------------------------------

/// Smooth compactly supported bump of the center distance:
/// amplitude * exp(1 - 1/(1 - (rho/radius)^2)) for rho < radius, else 0.
class RadialBumpField final : public AxiField {
 public:
  RadialBumpField(double radius, double amplitude = 1.0)
      : radius_(radius), amplitude_(amplitude) {}
  double value(double rho, std::span<const double>) const override;
  void partials(double rho, std::span<const double>, double& u_rho,
                std::span<double> u_d) const override;

 private:
  double radius_, amplitude_;
};

/// Sum of bumps of the pole distances: sum_i amplitude * bump(d_i / radius).
class PoleBumpField final : public AxiField {
 public:
  PoleBumpField(double radius, double amplitude = 1.0)
      : radius_(radius), amplitude_(amplitude) {}
  double value(double rho, std::span<const double> d) const override;
  void partials(double rho, std::span<const double> d, double& u_rho,
                std::span<double> u_d) const override;

 private:
  double radius_, amplitude_;
};

/// cos(sqrt(c) rho)^p on the hemisphere grid; vanishes on the equator.
class CosPowerField final : public AxiField {
 public:
  CosPowerField(Curvature c, double power) : sqrt_c_(std::sqrt(c.value())), p_(power) {
    if (!(c.value() > 0.0)) throw std::invalid_argument("CosPowerField: needs c > 0");
  }
  double value(double rho, std::span<const double>) const override;
  void partials(double rho, std::span<const double>, double& u_rho,
                std::span<double> u_d) const override;

 private:
  double sqrt_c_, p_;
};

class ZeroField final : public AxiField {
 public:
  double value(double, std::span<const double>) const override { return 0.0; }
  void partials(double, std::span<const double>, double& u_rho,
                std::span<double> u_d) const override {
    u_rho = 0.0;
    for (auto& v : u_d) v = 0.0;
  }
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace hardylab
