#pragma once

#include <Eigen/Sparse>
#include <json.hpp>
#include <cstdint>
#include <functional>
#include <vector>

#include "hardylab/model_space.hpp"

namespace hardylab {

/// Uniform offset finite-volume grid in geodesic polar coordinates (r, theta)
/// about a base point, with two poles on the axis at signed arc positions.
/// Nodes at ((i+1/2) hr, (j+1/2) hth); Dirichlet ring at r = R; natural
/// (Neumann) closure at the origin and on the axis.  The stiffness matrix is
/// the edge-based Dirichlet form (an M-matrix), so nonnegative data produce
/// nonnegative solutions.
struct FvGrid {
  const ModelSpace* space = nullptr;
  int Nr = 0, Nth = 0;
  double R = 0.0, hr = 0.0, hth = 0.0;
  std::vector<double> r, th;
  Eigen::VectorXd w;           // node volume weights
  Eigen::VectorXd d1, d2;      // distances to the two poles per node
  Eigen::SparseMatrix<double> stiffness;
  double pole_axis_1 = 0.0, pole_axis_2 = 0.0;

  int index(int i, int j) const { return i * Nth + j; }
  int size() const { return Nr * Nth; }
};

FvGrid make_fv_grid(const ModelSpace& space, double R, int Nr, int Nth,
                    double pole_axis_1, double pole_axis_2);

/// Configuration of the two bipolar Schrodinger-type problems.
struct SchrodingerConfig {
  int n = 3;
  double c = -1.0;          // space curvature; equals the comparison bound k0
  double pole_separation = 2.0;
  double lambda = 0.5;      // in [0, (n-2)^2) resp. [0, (n-2)^2/4)
  double mu = 0.0;          // forcing parameter (negatively curved problem)
  double p = 3.0;           // subcritical exponent in (2, 2n/(n-2)) (hemisphere)
  double hemisphere_b = 0.8;  // pole height: poles (±a, 0, ..., 0, b)
  double truncation_radius = 8.0;
  int Nr = 200, Nth = 100;
};

/// Default instance of the negatively curved problem: n = 3, c = -1,
/// V = 1 + rho^2, W = exp(-rho), f(s) = s^2/(1+s^3) for s >= 0 (0 otherwise),
/// lambda = (n-2)^2/2.
SchrodingerConfig default_pm_config(double mu);

/// Default hemisphere instance: n = 3, p = 3, b = 0.8, lambda = (n-2)^2/8.
SchrodingerConfig default_hemisphere_config();

/// Assembled discrete problem on the hyperbolic truncated domain.
class PmProblem {
 public:
  explicit PmProblem(const SchrodingerConfig& cfg);

  const SchrodingerConfig& config() const { return cfg_; }
  const FvGrid& grid() const { return grid_; }
  const Eigen::SparseMatrix<double>& quadratic_form() const { return Q_; }

  double energy(const Eigen::VectorXd& u) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;
  Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& u) const;

  double v_norm(const Eigen::VectorXd& u) const;   // ||u||_V (no lambda part)
  double q_norm(const Eigen::VectorXd& u) const;   // sqrt(u' Q u)

  double f(double s) const;
  double F(double s) const;
  double f_prime(double s) const;

  double c_f() const { return c_f_; }
  double V0() const { return V0_; }
  double W_sup() const { return W_sup_; }
  double mu_zero_threshold() const { return V0_ / (W_sup_ * c_f_); }

  /// Smallest eigenvalue of the quadratic part (inverse power iteration);
  /// positive iff the discrete Hardy coercivity holds at this lambda.
  double coercivity_eigenvalue() const;

  const Eigen::VectorXd& potential_v() const { return V_; }
  const Eigen::VectorXd& potential_w() const { return W_; }
  const Eigen::VectorXd& hardy_weight() const { return omega_; }

  /// Preconditioned solve d = Q^{-1} g.
  Eigen::VectorXd solve_q(const Eigen::VectorXd& g) const;

 private:
  SchrodingerConfig cfg_;
  ModelSpace space_;
  FvGrid grid_;
  Eigen::VectorXd V_, W_, omega_;
  Eigen::SparseMatrix<double> Q_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
  double c_f_ = 0.0, V0_ = 0.0, W_sup_ = 0.0;
};

struct SolveResult {
  enum class Kind { zero, global_min, mountain_pass, nehari };

  Eigen::VectorXd field;
  double energy = 0.0;
  double residual_norm = 0.0;
  Kind classification = Kind::zero;
  int iterations = 0;
  bool converged = false;
  double field_min = 0.0;
  double field_norm = 0.0;  // ||.||_V

  nlohmann::ordered_json to_json(const FvGrid& grid) const;
};

struct PmDiagnostics {
  double c_f = 0.0, V0 = 0.0, W_sup = 0.0;
  double mu_zero_threshold = 0.0;  // V0 / (||W||_inf c_f)
  double mu0_estimate = 0.0;
  double coercivity_eigenvalue = 0.0;

  nlohmann::ordered_json to_json() const;
};

/// Trial family for the mu0 upper bound: radial bumps at several radii, each
/// scanned over amplitude.
struct TrialFieldFamily {
  std::vector<double> bump_radii = {1.5, 2.0, 3.0, 4.0};
  int amplitude_samples = 400;
};

/// Empirical upper bound for mu0 = 1/2 inf ||u||_V^2 / int W F(u).
double mu0_estimate(const PmProblem& prob, const TrialFieldFamily& family = {});

struct PmSolveOutput {
  std::vector<SolveResult> results;
  PmDiagnostics diagnostics;
};

/// Multi-start preconditioned descent (+ Newton polish).  Below the explicit
/// zero-solution threshold every start lands on the zero field.  For large mu
/// the output also carries a negative-energy minimizer and a mountain-pass
/// candidate located by a sphere-restricted minimax scan.
PmSolveOutput solve_pm(const SchrodingerConfig& cfg, int num_starts = 10,
                       std::uint64_t seed = 2024);

/// Assembled hemisphere problem (c = 1, Dirichlet equator ring).
class HemisphereProblem {
 public:
  explicit HemisphereProblem(const SchrodingerConfig& cfg);

  const SchrodingerConfig& config() const { return cfg_; }
  const FvGrid& grid() const { return grid_; }
  double zero_order_constant() const { return C_; }

  double energy(const Eigen::VectorXd& u) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;
  Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& u) const;
  double quadratic(const Eigen::VectorXd& u) const;  // u' Q u
  Eigen::VectorXd solve_q(const Eigen::VectorXd& g) const;

  /// Nehari scaling t(u) with d/dt E(t u) = 0 at t = t(u).
  double nehari_scale(const Eigen::VectorXd& u) const;

 private:
  SchrodingerConfig cfg_;
  ModelSpace space_;
  FvGrid grid_;
  double C_ = 0.0;
  Eigen::VectorXd omega_;
  Eigen::SparseMatrix<double> Q_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

/// Ground state via Nehari-manifold minimization with a Newton polish.
SolveResult solve_hemisphere(const SchrodingerConfig& cfg);

}  // namespace hardylab
