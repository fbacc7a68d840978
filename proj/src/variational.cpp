#include "hardylab/variational.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hardylab/hardy.hpp"

namespace hardylab {

FvGrid make_fv_grid(const ModelSpace& space, double R, int Nr, int Nth,
                    double pole_axis_1, double pole_axis_2) {
  if (Nr < 4 || Nth < 4) throw std::invalid_argument("make_fv_grid: grid too coarse");
  FvGrid g;
  g.space = &space;
  g.R = R;
  g.Nr = Nr;
  g.Nth = Nth;
  g.hr = R / Nr;
  g.hth = kPi / Nth;
  g.pole_axis_1 = pole_axis_1;
  g.pole_axis_2 = pole_axis_2;
  const Curvature c = space.curvature();
  const int n = space.dim();
  const double sig = unit_sphere_area(n - 2);
  for (int i = 0; i < Nr; ++i) g.r.push_back((i + 0.5) * g.hr);
  for (int j = 0; j < Nth; ++j) g.th.push_back((j + 0.5) * g.hth);

  const int N = Nr * Nth;
  g.w.resize(N);
  g.d1.resize(N);
  g.d2.resize(N);
  for (int i = 0; i < Nr; ++i) {
    const double sr = std::pow(s_c(c, g.r[static_cast<size_t>(i)]), n - 1);
    for (int j = 0; j < Nth; ++j) {
      const int id = g.index(i, j);
      const double th = g.th[static_cast<size_t>(j)];
      g.w[id] = sig * sr * std::pow(std::sin(th), n - 2) * g.hr * g.hth;
      g.d1[id] = axis_distance(c, g.r[static_cast<size_t>(i)], pole_axis_1, std::cos(th));
      g.d2[id] = axis_distance(c, g.r[static_cast<size_t>(i)], pole_axis_2, std::cos(th));
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(4 * N));
  auto add_edge = [&](int a, int b, double kap) {
    trip.emplace_back(a, a, kap);
    trip.emplace_back(b, b, kap);
    trip.emplace_back(a, b, -kap);
    trip.emplace_back(b, a, -kap);
  };
  for (int i = 0; i < Nr; ++i) {
    for (int j = 0; j < Nth; ++j) {
      const int id = g.index(i, j);
      const double th = g.th[static_cast<size_t>(j)];
      if (i + 1 < Nr) {
        const double re = (i + 1) * g.hr;
        const double me = sig * std::pow(s_c(c, re), n - 1) *
                          std::pow(std::sin(th), n - 2) * g.hr * g.hth;
        add_edge(id, g.index(i + 1, j), me / (g.hr * g.hr));
      } else {
        // Dirichlet ghost at r = R, half spacing
        const double me = sig * std::pow(s_c(c, R - 0.25 * g.hr), n - 1) *
                          std::pow(std::sin(th), n - 2) * 0.5 * g.hr * g.hth;
        trip.emplace_back(id, id, me * 4.0 / (g.hr * g.hr));
      }
      if (j + 1 < Nth) {
        const double te = (j + 1) * g.hth;
        const double sr = s_c(c, g.r[static_cast<size_t>(i)]);
        const double me = sig * std::pow(sr, n - 1) * std::pow(std::sin(te), n - 2) *
                          g.hr * g.hth;
        add_edge(id, g.index(i, j + 1), me / (g.hth * g.hth * sr * sr));
      }
    }
  }
  g.stiffness.resize(N, N);
  g.stiffness.setFromTriplets(trip.begin(), trip.end());
  return g;
}

SchrodingerConfig default_pm_config(double mu) {
  SchrodingerConfig cfg;
  cfg.n = 3;
  cfg.c = -1.0;
  cfg.pole_separation = 2.0;
  cfg.lambda = 0.5 * (cfg.n - 2) * (cfg.n - 2);
  cfg.mu = mu;
  cfg.truncation_radius = 8.0;
  cfg.Nr = 200;
  cfg.Nth = 100;
  return cfg;
}

SchrodingerConfig default_hemisphere_config() {
  SchrodingerConfig cfg;
  cfg.n = 3;
  cfg.c = 1.0;
  cfg.lambda = 0.125 * (cfg.n - 2) * (cfg.n - 2);
  cfg.p = 3.0;
  cfg.hemisphere_b = 0.8;
  cfg.Nr = 160;
  cfg.Nth = 96;
  return cfg;
}

// --- PmProblem ---------------------------------------------------------------

PmProblem::PmProblem(const SchrodingerConfig& cfg)
    : cfg_(cfg), space_(cfg.n, Curvature(cfg.c)) {
  if (!(cfg.c < 0.0))
    throw std::invalid_argument("PmProblem: requires a hyperbolic space form (c < 0)");
  if (!(cfg.lambda >= 0.0 && cfg.lambda < (cfg.n - 2) * (cfg.n - 2)))
    throw std::invalid_argument("PmProblem: lambda must lie in [0, (n-2)^2)");
  if (!(cfg.mu >= 0.0)) throw std::invalid_argument("PmProblem: mu must be >= 0");
  const double a = 0.5 * cfg.pole_separation;
  grid_ = make_fv_grid(space_, cfg.truncation_radius, cfg.Nr, cfg.Nth, a, -a);

  const Curvature k0 = space_.curvature();
  const double d12 = cfg.pole_separation;
  const int N = grid_.size();
  V_.resize(N);
  W_.resize(N);
  omega_.resize(N);
  for (int i = 0; i < grid_.Nr; ++i)
    for (int j = 0; j < grid_.Nth; ++j) {
      const int id = grid_.index(i, j);
      const double rho = grid_.r[static_cast<size_t>(i)];
      V_[id] = 1.0 + rho * rho;
      W_[id] = std::exp(-rho);
      const double sh = s_c(k0, 0.5 * d12);
      omega_[id] = sh * sh / (grid_.d1[id] * grid_.d2[id] * s_c(k0, grid_.d1[id]) *
                              s_c(k0, grid_.d2[id]));
    }
  // load-time hypothesis checks: (V1) V0 > 0, (V2) growth; W > 0 bounded
  // integrable; (f1)/(f2) for the concrete f below.
  V0_ = V_.minCoeff();
  W_sup_ = 1.0;  // exp(-rho) attains its sup at the base point
  if (!(V0_ > 0.0)) throw std::logic_error("PmProblem: (V1) failed");
  if (!(V_.maxCoeff() >= 65.0))
    throw std::logic_error("PmProblem: truncation too small for (V2) dominance");
  {
    double best = 0.0;
    for (int k = 1; k <= 4000; ++k) {
      const double s = 0.002 * k;
      best = std::fmax(best, f(s) / s);
    }
    c_f_ = best;  // max of s/(1+s^3): attained at s = 2^{-1/3}
    if (!(c_f_ > 0.0)) throw std::logic_error("PmProblem: c_f not positive");
    if (!(f(1e-8) / 1e-8 < 1e-6 && f(1e8) / 1e8 < 1e-6))
      throw std::logic_error("PmProblem: (f1) failed");
    if (!(F(1.0) > 0.0)) throw std::logic_error("PmProblem: (f2) failed");
  }

  Q_ = grid_.stiffness;
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < N; ++k)
    trip.emplace_back(k, k, grid_.w[k] * (V_[k] - cfg_.lambda * omega_[k]));
  Eigen::SparseMatrix<double> D(N, N);
  D.setFromTriplets(trip.begin(), trip.end());
  Q_ = Q_ + D;
  llt_.compute(Q_);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error(
        "PmProblem: quadratic part not positive definite (discrete Hardy "
        "coercivity failed at this lambda/grid)");
}

double PmProblem::f(double s) const {
  if (s <= 0.0) return 0.0;
  return s * s / (1.0 + s * s * s);
}
double PmProblem::F(double s) const {
  if (s <= 0.0) return 0.0;
  return std::log1p(s * s * s) / 3.0;
}
double PmProblem::f_prime(double s) const {
  if (s <= 0.0) return 0.0;
  const double d = 1.0 + s * s * s;
  return (2.0 * s - s * s * s * s) / (d * d);
}

double PmProblem::energy(const Eigen::VectorXd& u) const {
  double nl = 0.0;
  for (int k = 0; k < u.size(); ++k) nl += grid_.w[k] * W_[k] * F(u[k]);
  return 0.5 * u.dot(Q_ * u) - cfg_.mu * nl;
}

Eigen::VectorXd PmProblem::gradient(const Eigen::VectorXd& u) const {
  Eigen::VectorXd g = Q_ * u;
  for (int k = 0; k < u.size(); ++k) g[k] -= cfg_.mu * grid_.w[k] * W_[k] * f(u[k]);
  return g;
}

Eigen::SparseMatrix<double> PmProblem::hessian(const Eigen::VectorXd& u) const {
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < u.size(); ++k)
    trip.emplace_back(k, k, -cfg_.mu * grid_.w[k] * W_[k] * f_prime(u[k]));
  Eigen::SparseMatrix<double> D(u.size(), u.size());
  D.setFromTriplets(trip.begin(), trip.end());
  return Q_ + D;
}

double PmProblem::v_norm(const Eigen::VectorXd& u) const {
  double mass = 0.0;
  for (int k = 0; k < u.size(); ++k) mass += grid_.w[k] * V_[k] * u[k] * u[k];
  return std::sqrt(u.dot(grid_.stiffness * u) + mass);
}

double PmProblem::q_norm(const Eigen::VectorXd& u) const {
  return std::sqrt(std::fmax(0.0, u.dot(Q_ * u)));
}

Eigen::VectorXd PmProblem::solve_q(const Eigen::VectorXd& g) const {
  return llt_.solve(g);
}

double PmProblem::coercivity_eigenvalue() const {
  // inverse power iteration on Q with the diagonal mass matrix
  const int N = grid_.size();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(N, 1.0);
  x.normalize();
  double lam = 0.0;
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd y = llt_.solve(x);
    const double ny = y.norm();
    if (!(ny > 0.0)) break;
    x = y / ny;
    lam = x.dot(Q_ * x);
  }
  return lam;
}

double mu0_estimate(const PmProblem& prob, const TrialFieldFamily& family) {
  const FvGrid& g = prob.grid();
  double best = std::numeric_limits<double>::infinity();
  for (double radius : family.bump_radii) {
    Eigen::VectorXd b(g.size());
    for (int i = 0; i < g.Nr; ++i)
      for (int j = 0; j < g.Nth; ++j) {
        const double t = g.r[static_cast<size_t>(i)] / radius;
        b[g.index(i, j)] = t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
      }
    const double vb2 = prob.v_norm(b) * prob.v_norm(b);
    for (int s = 0; s < family.amplitude_samples; ++s) {
      const double t = std::pow(10.0, -2.0 + 4.0 * s / (family.amplitude_samples - 1));
      double denom = 0.0;
      for (int k = 0; k < g.size(); ++k)
        denom += g.w[k] * prob.potential_w()[k] * prob.F(t * b[k]);
      if (!(denom > 0.0)) continue;
      best = std::fmin(best, 0.5 * t * t * vb2 / denom);
    }
  }
  if (!std::isfinite(best))
    throw std::runtime_error(
        "mu0_estimate: no admissible trial (needs int W F(u) > 0; guaranteed by "
        "(f2) with a large enough amplitude)");
  return best;
}

namespace {

// preconditioned descent with Armijo backtracking; returns iterations used
int pg_descent(const PmProblem& prob, Eigen::VectorXd& u, int max_iter,
               double grad_tol) {
  int it = 0;
  for (; it < max_iter; ++it) {
    const Eigen::VectorXd g = prob.gradient(u);
    const Eigen::VectorXd d = prob.solve_q(g);
    const double slope = g.dot(d);
    if (std::sqrt(std::fabs(slope)) < grad_tol) break;
    double t = 1.0;
    const double e0 = prob.energy(u);
    while (t > 1e-14 && prob.energy(u - t * d) > e0 - 0.3 * t * slope) t *= 0.5;
    u -= t * d;
  }
  return it;
}

// Newton polish toward a critical point; trust region in the Q-norm
bool newton_polish(const PmProblem& prob, Eigen::VectorXd& u, double trust,
                   int max_iter, double tol, int& iters) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd g = prob.gradient(u);
    if (g.norm() < tol) {
      iters += it;
      return true;
    }
    lu.compute(prob.hessian(u));
    if (lu.info() != Eigen::Success) return false;
    Eigen::VectorXd du = lu.solve(g);
    const double nd = prob.q_norm(du);
    if (trust > 0.0 && nd > trust) du *= trust / nd;
    u -= du;
  }
  iters += max_iter;
  return prob.gradient(u).norm() < tol;
}

SolveResult make_result(const PmProblem& prob, const Eigen::VectorXd& u,
                        SolveResult::Kind kind, int iters, bool converged) {
  SolveResult r;
  r.field = u;
  r.energy = prob.energy(u);
  r.residual_norm = prob.gradient(u).norm();
  r.classification = kind;
  r.iterations = iters;
  r.converged = converged;
  r.field_min = u.size() ? u.minCoeff() : 0.0;
  r.field_norm = prob.v_norm(u);
  return r;
}

// minimize E on the sphere ||u||_Q = rho (projected preconditioned descent)
Eigen::VectorXd sphere_min(const PmProblem& prob, double rho, Eigen::VectorXd u,
                           int iters) {
  const double nu = prob.q_norm(u);
  if (!(nu > 0.0)) throw std::logic_error("sphere_min: zero start");
  u *= rho / nu;
  for (int k = 0; k < iters; ++k) {
    const Eigen::VectorXd g = prob.gradient(u);
    const Eigen::VectorXd d = prob.solve_q(g);
    u -= 0.25 * d;
    u *= rho / prob.q_norm(u);
  }
  return u;
}

}  // namespace

PmSolveOutput solve_pm(const SchrodingerConfig& cfg, int num_starts,
                       std::uint64_t seed) {
  PmProblem prob(cfg);
  PmSolveOutput out;
  out.diagnostics.c_f = prob.c_f();
  out.diagnostics.V0 = prob.V0();
  out.diagnostics.W_sup = prob.W_sup();
  out.diagnostics.mu_zero_threshold = prob.mu_zero_threshold();
  out.diagnostics.mu0_estimate = mu0_estimate(prob);
  out.diagnostics.coercivity_eigenvalue = prob.coercivity_eigenvalue();

  const int N = prob.grid().size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 0.5);

  double best_energy = 0.0;
  int best_index = -1;
  for (int s = 0; s < num_starts; ++s) {
    Eigen::VectorXd u(N);
    for (int k = 0; k < N; ++k) u[k] = gauss(rng);
    int iters = pg_descent(prob, u, 400, 1e-11);
    bool ok = true;
    if (prob.v_norm(u) > 1e-10)  // polish nonzero candidates to machine residual
      ok = newton_polish(prob, u, 0.0, 40, 1e-10, iters);
    SolveResult r = make_result(
        prob, u,
        prob.v_norm(u) < 1e-8 ? SolveResult::Kind::zero : SolveResult::Kind::global_min,
        iters, ok);
    if (r.classification == SolveResult::Kind::global_min && r.energy < best_energy) {
      best_energy = r.energy;
      best_index = static_cast<int>(out.results.size());
    }
    out.results.push_back(std::move(r));
  }

  // seed a descent from the mu0 trial minimizer as well: for mu above the
  // threshold this reliably reaches a negative-energy minimizer
  if (cfg.mu > 0.0) {
    Eigen::VectorXd b(N);
    const FvGrid& g = prob.grid();
    for (int i = 0; i < g.Nr; ++i)
      for (int j = 0; j < g.Nth; ++j) {
        const double t = g.r[static_cast<size_t>(i)] / 3.0;
        b[g.index(i, j)] = t < 1.0 ? 1.6 * std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
      }
    int iters = pg_descent(prob, b, 600, 1e-11);
    bool ok = true;
    if (prob.v_norm(b) > 1e-10) ok = newton_polish(prob, b, 0.0, 40, 1e-10, iters);
    SolveResult r = make_result(
        prob, b,
        prob.v_norm(b) < 1e-8 ? SolveResult::Kind::zero : SolveResult::Kind::global_min,
        iters, ok);
    if (r.classification == SolveResult::Kind::global_min && r.energy < best_energy) {
      best_energy = r.energy;
      best_index = static_cast<int>(out.results.size());
    }
    out.results.push_back(std::move(r));
  }

  // mountain-pass candidate between 0 and the best minimizer
  if (best_index >= 0 && best_energy < 0.0) {
    const Eigen::VectorXd& umin = out.results[static_cast<size_t>(best_index)].field;
    const double rmin = prob.q_norm(umin);
    Eigen::VectorXd warm = umin;
    Eigen::VectorXd best_u;
    double best_e = -std::numeric_limits<double>::infinity();
    const int scans = 24;
    for (int s = scans - 1; s >= 0; --s) {
      const double rho = 1e-3 * rmin *
                         std::pow(0.3 / 1e-3, static_cast<double>(s) / (scans - 1));
      warm = sphere_min(prob, rho, warm, 60);
      const double e = prob.energy(warm);
      if (e > best_e) {
        best_e = e;
        best_u = warm;
      }
    }
    Eigen::VectorXd u2 = best_u;
    int iters = 0;
    bool ok = newton_polish(prob, u2, 0.25 * prob.q_norm(best_u) + 1e-6, 80, 1e-10,
                            iters);
    const double e2 = prob.energy(u2);
    const bool distinct =
        prob.q_norm(u2) > 1e-8 && (u2 - umin).norm() > 1e-6 * (1.0 + umin.norm());
    SolveResult r = make_result(prob, u2, SolveResult::Kind::mountain_pass, iters,
                                ok && e2 > 0.0 && distinct);
    out.results.push_back(std::move(r));
  }
  return out;
}

nlohmann::ordered_json SolveResult::to_json(const FvGrid& grid) const {
  nlohmann::ordered_json j;
  const char* names[] = {"zero", "global-min", "mountain-pass", "nehari"};
  j["energy"] = energy;
  j["residual"] = residual_norm;
  j["classification"] = names[static_cast<int>(classification)];
  j["iterations"] = iterations;
  j["converged"] = converged;
  j["field_min"] = field_min;
  j["field_norm_V"] = field_norm;
  j["grid"] = {{"Nr", grid.Nr}, {"Nth", grid.Nth}, {"R", grid.R}};
  return j;
}

nlohmann::ordered_json PmDiagnostics::to_json() const {
  nlohmann::ordered_json j;
  j["c_f"] = c_f;
  j["V0"] = V0;
  j["W_sup"] = W_sup;
  j["mu_zero_threshold"] = mu_zero_threshold;
  j["mu0_estimate"] = mu0_estimate;
  j["coercivity_eigenvalue"] = coercivity_eigenvalue;
  return j;
}

// --- hemisphere problem ------------------------------------------------------

HemisphereProblem::HemisphereProblem(const SchrodingerConfig& cfg)
    : cfg_(cfg), space_(cfg.n, Curvature(cfg.c)) {
  if (!(cfg.c > 0.0))
    throw std::invalid_argument("HemisphereProblem: requires c > 0");
  const double two_star = 2.0 * cfg.n / (cfg.n - 2.0);
  if (!(cfg.p > 2.0 && cfg.p < two_star))
    throw std::invalid_argument(
        "HemisphereProblem: p must lie in (2, 2n/(n-2)) (subcritical range)");
  if (!(cfg.lambda >= 0.0 && cfg.lambda < 0.25 * (cfg.n - 2) * (cfg.n - 2)))
    throw std::invalid_argument("HemisphereProblem: lambda must lie in [0, (n-2)^2/4)");
  if (!(cfg.hemisphere_b > 0.0 && cfg.hemisphere_b < 1.0))
    throw std::invalid_argument("HemisphereProblem: pole height b must lie in (0, 1)");
  const double rho = 1.0 / std::sqrt(cfg.c);
  const double beta = std::acos(cfg.hemisphere_b) * rho;  // arc distance to poles
  const double equator = 0.5 * kPi * rho;
  grid_ = make_fv_grid(space_, equator, cfg.Nr, cfg.Nth, beta, -beta);

  C_ = hemisphere_constant(cfg.n, beta / rho);
  const int N = grid_.size();
  omega_.resize(N);
  const Curvature c(cfg.c);
  const double d12 = axis_distance(c, beta, -beta, 1.0);
  for (int k = 0; k < N; ++k) {
    const double di = grid_.d1[k], dj = grid_.d2[k];
    omega_[k] = weight_pairwise_cached(di, dj, cosine_law_angle(c, di, dj, d12));
  }
  Q_ = grid_.stiffness;
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < N; ++k)
    trip.emplace_back(k, k, grid_.w[k] * (C_ - cfg_.lambda * omega_[k]));
  Eigen::SparseMatrix<double> D(N, N);
  D.setFromTriplets(trip.begin(), trip.end());
  Q_ = Q_ + D;
  llt_.compute(Q_);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error(
        "HemisphereProblem: quadratic part not positive definite (discrete "
        "hemisphere coercivity failed)");
}

double HemisphereProblem::quadratic(const Eigen::VectorXd& u) const {
  return u.dot(Q_ * u);
}

double HemisphereProblem::energy(const Eigen::VectorXd& u) const {
  double nl = 0.0;
  for (int k = 0; k < u.size(); ++k)
    nl += grid_.w[k] * std::pow(std::fabs(u[k]), cfg_.p);
  return 0.5 * u.dot(Q_ * u) - nl / cfg_.p;
}

Eigen::VectorXd HemisphereProblem::gradient(const Eigen::VectorXd& u) const {
  Eigen::VectorXd g = Q_ * u;
  for (int k = 0; k < u.size(); ++k)
    g[k] -= grid_.w[k] * std::pow(std::fabs(u[k]), cfg_.p - 2.0) * u[k];
  return g;
}

Eigen::SparseMatrix<double> HemisphereProblem::hessian(const Eigen::VectorXd& u) const {
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < u.size(); ++k)
    trip.emplace_back(k, k,
                      -(cfg_.p - 1.0) * grid_.w[k] *
                          std::pow(std::fabs(u[k]), cfg_.p - 2.0));
  Eigen::SparseMatrix<double> D(u.size(), u.size());
  D.setFromTriplets(trip.begin(), trip.end());
  return Q_ + D;
}

Eigen::VectorXd HemisphereProblem::solve_q(const Eigen::VectorXd& g) const {
  return llt_.solve(g);
}

double HemisphereProblem::nehari_scale(const Eigen::VectorXd& u) const {
  const double q = quadratic(u);
  double nl = 0.0;
  for (int k = 0; k < u.size(); ++k)
    nl += grid_.w[k] * std::pow(std::fabs(u[k]), cfg_.p);
  if (!(q > 0.0) || !(nl > 0.0))
    throw std::domain_error("nehari_scale: degenerate field");
  return std::pow(q / nl, 1.0 / (cfg_.p - 2.0));
}

SolveResult solve_hemisphere(const SchrodingerConfig& cfg) {
  HemisphereProblem prob(cfg);
  const FvGrid& g = prob.grid();
  const int N = g.size();

  // positive start vanishing at the equator, projected onto the Nehari set
  Eigen::VectorXd u(N);
  for (int i = 0; i < g.Nr; ++i)
    for (int j = 0; j < g.Nth; ++j)
      u[g.index(i, j)] = std::cos(g.r[static_cast<size_t>(i)] / (g.R * 2.0 / kPi));
  u *= prob.nehari_scale(u);

  int iters = 0;
  for (int it = 0; it < 120; ++it, ++iters) {
    const Eigen::VectorXd grad = prob.gradient(u);
    const Eigen::VectorXd d = prob.solve_q(grad);
    u -= 0.4 * d;
    u = u.cwiseAbs();  // ground state is signless; keeps the iterate positive
    u *= prob.nehari_scale(u);
    if (grad.norm() < 1e-9) break;
  }
  // Newton polish
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool ok = false;
  for (int it = 0; it < 60; ++it, ++iters) {
    const Eigen::VectorXd grad = prob.gradient(u);
    if (grad.norm() < 1e-11) {
      ok = true;
      break;
    }
    lu.compute(prob.hessian(u));
    if (lu.info() != Eigen::Success) break;
    const Eigen::VectorXd du = lu.solve(grad);
    u -= du;
  }

  SolveResult r;
  r.field = u;
  r.energy = prob.energy(u);
  r.residual_norm = prob.gradient(u).norm();
  r.classification = SolveResult::Kind::nehari;
  r.iterations = iters;
  r.field_min = u.minCoeff();
  r.field_norm = std::sqrt(prob.quadratic(u));
  r.converged = ok && r.residual_norm < 1e-6 && r.field_min > 0.0 && r.energy > 0.0;
  return r;
}

}  // namespace hardylab
