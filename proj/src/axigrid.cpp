#include "hardylab/axigrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

namespace hardylab {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<size_t>(n), 0.0);
  w.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p1 = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      p1 = xi;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    x[static_cast<size_t>(i)] = xi;
    w[static_cast<size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

namespace {

// Panel boundaries on [r_min, r_max]: pole radii with geometric refinement
// toward them (halving down to the delta scale), then a uniform width cap.
std::vector<double> radial_panel_bounds(double r_min, double r_max,
                                        std::span<const double> pole_radii,
                                        double delta, int base_panels) {
  std::set<double> bounds{r_min, r_max};
  for (double a : pole_radii) {
    if (a <= r_min + 1e-14 || a >= r_max - 1e-14) continue;
    bounds.insert(a);
    const double room = 0.6 * std::min(a - r_min, r_max - a);
    for (double off = delta; off < room; off *= 2.0) {
      bounds.insert(a - off);
      bounds.insert(a + off);
    }
  }
  std::vector<double> b(bounds.begin(), bounds.end());
  std::vector<double> out;
  const double cap = (r_max - r_min) / base_panels;
  for (size_t i = 0; i + 1 < b.size(); ++i) {
    const double lo = b[i], hi = b[i + 1];
    const int k = std::max(1, static_cast<int>(std::ceil((hi - lo) / cap)));
    for (int j = 0; j < k; ++j) out.push_back(lo + (hi - lo) * j / k);
  }
  out.push_back(r_max);
  return out;
}

}  // namespace

size_t AxiGrid::pair_index(int i, int j) const {
  const int m = num_poles();
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return static_cast<size_t>(i * (2 * m - i - 1) / 2 + (j - i - 1));
}

ModelPoint AxiGrid::node_point(int k, int l) const {
  // any unit tangent orthogonal to the axis (all perp directions equivalent)
  Vec p;
  double pn = 0.0;
  for (int b = 0; b < space_->dim(); ++b) {
    const Vec e = space_->tangent_basis_vector(center_, b);
    p = e - space_->form(e, axis_) * axis_;
    pn = std::sqrt(std::max(0.0, space_->form(p, p)));
    if (pn > 1e-6) break;
  }
  if (!(pn > 1e-6)) throw std::logic_error("node_point: degenerate perp direction");
  p /= pn;
  const double rr = r(k), th = theta(l);
  const Vec v = rr * (std::cos(th) * axis_ + std::sin(th) * p);
  return exp_map(center_, v);
}

double AxiGrid::grad_square(int k, int l, const AxiField& u) const {
  const int m = num_poles();
  std::span<const double> d = pole_distances(k, l);
  double u_rho = 0.0;
  double buf[8];
  std::span<double> u_d(buf, static_cast<size_t>(m));
  u.partials(r(k), d, u_rho, u_d);
  double acc = u_rho * u_rho;
  for (int i = 0; i < m; ++i) {
    acc += u_d[static_cast<size_t>(i)] * u_d[static_cast<size_t>(i)];
    acc += 2.0 * u_rho * u_d[static_cast<size_t>(i)] * cos_center_pole(k, l, i);
    for (int j = i + 1; j < m; ++j)
      acc += 2.0 * u_d[static_cast<size_t>(i)] * u_d[static_cast<size_t>(j)] *
             cos_pole_pair(k, l, i, j);
  }
  return acc;
}

AxiGrid build_axigrid(const ModelSpace& space, const PoleSet& poles,
                      const RegionSpec& region, const GridResolution& res,
                      double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("build_axigrid: delta must be positive");
  if (!(region.r_max > region.r_min) || region.r_min < 0.0)
    throw std::invalid_argument("build_axigrid: bad radial region");
  if (space.curvature().value() > 0.0 &&
      region.r_max > space.curvature().domain_max() / 2.0 + 1e-12)
    throw std::invalid_argument("build_axigrid: region exceeds the open hemisphere");

  AxiGrid g;
  g.space_ = &space;
  g.poles_ = &poles;
  g.center_ = region.center;
  g.r_min_ = region.r_min;
  g.r_max_ = region.r_max;
  const int m = poles.size();
  g.npairs_ = m * (m - 1) / 2;

  // Axis through the poles: direction toward the first pole off-center.
  int ref = -1;
  for (int i = 0; i < m; ++i)
    if (distance(region.center, poles.pole(i)) > 1e-12) {
      ref = i;
      break;
    }
  if (ref < 0) throw std::invalid_argument("build_axigrid: all poles coincide with center");
  {
    const Vec v = log_map(region.center, poles.pole(ref));
    g.axis_ = v / std::sqrt(space.form(v, v));
  }
  g.axis_pos_.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double t = distance(region.center, poles.pole(i));
    double signed_t = t;
    if (t > 0.0) {
      const ModelPoint plus = exp_map(region.center, t * g.axis_);
      const ModelPoint minus = exp_map(region.center, -t * g.axis_);
      const double ep = distance(plus, poles.pole(i));
      const double em = distance(minus, poles.pole(i));
      const double tol = 1e-9 * std::max(1.0, t);
      if (ep <= tol)
        signed_t = t;
      else if (em <= tol)
        signed_t = -t;
      else
        throw std::invalid_argument("build_axigrid: poles do not lie on a common axis");
    }
    g.axis_pos_[static_cast<size_t>(i)] = signed_t;
  }
  g.delta_.assign(static_cast<size_t>(m), delta);

  // Radial nodes: GL points per panel.
  std::vector<double> pole_radii;
  for (double t : g.axis_pos_) pole_radii.push_back(std::fabs(t));
  const std::vector<double> bounds =
      radial_panel_bounds(region.r_min, region.r_max, pole_radii, delta, res.base_panels);
  std::vector<double> gx, gw;
  gauss_legendre(res.gl_points, gx, gw);

  std::vector<double> wr;  // radial quadrature weight including s^{n-1}
  const Curvature c = space.curvature();
  const int n = space.dim();
  for (size_t p = 0; p + 1 < bounds.size(); ++p) {
    const double lo = bounds[p], hi = bounds[p + 1];
    for (int q = 0; q < res.gl_points; ++q) {
      const double rr = 0.5 * (hi + lo) + 0.5 * (hi - lo) * gx[static_cast<size_t>(q)];
      g.r_.push_back(rr);
      wr.push_back(0.5 * (hi - lo) * gw[static_cast<size_t>(q)] *
                   std::pow(s_c(c, rr), n - 1));
    }
  }

  // Theta nodes: uniform trapezoid on [0, pi].
  const int NT = res.theta_nodes;
  std::vector<double> wth;
  for (int l = 0; l <= NT; ++l) {
    const double th = kPi * l / NT;
    g.theta_.push_back(th);
    double w = kPi / NT;
    if (l == 0 || l == NT) w *= 0.5;
    wth.push_back(w * std::pow(std::sin(th), n - 2));
  }

  const int NR = g.radial_nodes();
  const int NTH = g.theta_nodes();
  const double sig = unit_sphere_area(n - 2);
  g.w_.resize(static_cast<size_t>(NR) * static_cast<size_t>(NTH));
  g.excluded_.assign(g.w_.size(), 0);
  g.d_.resize(g.w_.size() * static_cast<size_t>(m));
  g.cos_rd_.resize(g.w_.size() * static_cast<size_t>(m));
  g.cos_dd_.resize(g.w_.size() * static_cast<size_t>(std::max(1, g.npairs_)));

  double vol = 0.0;
  for (int k = 0; k < NR; ++k) {
    for (int l = 0; l < NTH; ++l) {
      const size_t id = g.idx(k, l);
      const double w2d = sig * wr[static_cast<size_t>(k)] * wth[static_cast<size_t>(l)];
      g.w_[id] = w2d;
      vol += w2d;
      const double rr = g.r_[static_cast<size_t>(k)];
      const double costh = std::cos(g.theta_[static_cast<size_t>(l)]);
      bool excl = false;
      for (int i = 0; i < m; ++i) {
        const double di = axis_distance(c, rr, g.axis_pos_[static_cast<size_t>(i)], costh);
        g.d_[id * static_cast<size_t>(m) + static_cast<size_t>(i)] = di;
        if (di < delta) excl = true;
      }
      if (excl) {
        g.excluded_[id] = 1;
        g.w_[id] = 0.0;
      }
      for (int i = 0; i < m; ++i) {
        const double di = g.d_[id * static_cast<size_t>(m) + static_cast<size_t>(i)];
        const double ai = std::fabs(g.axis_pos_[static_cast<size_t>(i)]);
        // excluded nodes carry zero weight; park their cosines at 0 so that
        // weight * grad_square stays finite
        double cval = 0.0;
        if (!excl) cval = ai < 1e-14 ? 1.0 : cosine_law_angle(c, rr, di, ai);
        g.cos_rd_[id * static_cast<size_t>(m) + static_cast<size_t>(i)] = cval;
        for (int j = i + 1; j < m; ++j) {
          const double dj = g.d_[id * static_cast<size_t>(m) + static_cast<size_t>(j)];
          g.cos_dd_[id * static_cast<size_t>(g.npairs_) + g.pair_index(i, j)] =
              excl ? 0.0 : cosine_law_angle(c, di, dj, poles.dist(i, j));
        }
      }
    }
  }

  // Volume self-test against the 1D radial reference.
  const double v_exact =
      ball_volume(space, region.r_max) -
      (region.r_min > 0.0 ? ball_volume(space, region.r_min) : 0.0);
  g.volume_ = vol;
  g.volume_rel_error_ = std::fabs(vol - v_exact) / v_exact;
  return g;
}

ScalarField sample(const AxiGrid& grid, const AxiField& u) {
  ScalarField f;
  f.grid = &grid;
  f.values.resize(grid.size());
  for (int k = 0; k < grid.radial_nodes(); ++k)
    for (int l = 0; l < grid.theta_nodes(); ++l)
      f.values[k * grid.theta_nodes() + l] =
          u.value(grid.r(k), grid.pole_distances(k, l));
  return f;
}

double integrate(const ScalarField& f) {
  if (f.grid == nullptr || f.values.size() != f.grid->size())
    throw std::invalid_argument("integrate: field/grid shape mismatch");
  double acc = 0.0;
  const AxiGrid& g = *f.grid;
  for (int k = 0; k < g.radial_nodes(); ++k)
    for (int l = 0; l < g.theta_nodes(); ++l)
      acc += g.weight(k, l) * f.values[k * g.theta_nodes() + l];
  return acc;
}

namespace {

// first-derivative weights of the quadratic through (x0,x1,x2) evaluated at xc
void stencil3(double x0, double x1, double x2, double xc, double& w0, double& w1,
              double& w2) {
  w0 = (2.0 * xc - x1 - x2) / ((x0 - x1) * (x0 - x2));
  w1 = (2.0 * xc - x0 - x2) / ((x1 - x0) * (x1 - x2));
  w2 = (2.0 * xc - x0 - x1) / ((x2 - x0) * (x2 - x1));
}

}  // namespace

GradientField gradient_field(const ScalarField& f) {
  const AxiGrid& g = *f.grid;
  const int NR = g.radial_nodes(), NT = g.theta_nodes();
  GradientField out;
  out.d_dr.resize(g.size());
  out.d_dtheta.resize(g.size());
  for (int l = 0; l < NT; ++l) {
    for (int k = 0; k < NR; ++k) {
      const int k0 = std::clamp(k, 1, NR - 2);
      double w0, w1, w2;
      stencil3(g.r(k0 - 1), g.r(k0), g.r(k0 + 1), g.r(k), w0, w1, w2);
      out.d_dr[k * NT + l] = w0 * f.values[(k0 - 1) * NT + l] +
                             w1 * f.values[k0 * NT + l] +
                             w2 * f.values[(k0 + 1) * NT + l];
    }
  }
  for (int k = 0; k < NR; ++k) {
    for (int l = 0; l < NT; ++l) {
      const int l0 = std::clamp(l, 1, NT - 2);
      double w0, w1, w2;
      stencil3(g.theta(l0 - 1), g.theta(l0), g.theta(l0 + 1), g.theta(l), w0, w1, w2);
      out.d_dtheta[k * NT + l] = w0 * f.values[k * NT + (l0 - 1)] +
                                 w1 * f.values[k * NT + l0] +
                                 w2 * f.values[k * NT + (l0 + 1)];
    }
  }
  return out;
}

double dirichlet_energy_fd(const ScalarField& f) {
  const AxiGrid& g = *f.grid;
  const GradientField df = gradient_field(f);
  const Curvature c = g.space().curvature();
  double acc = 0.0;
  for (int k = 0; k < g.radial_nodes(); ++k) {
    const double s = s_c(c, g.r(k));
    for (int l = 0; l < g.theta_nodes(); ++l) {
      const int id = k * g.theta_nodes() + l;
      const double gr = df.d_dr[id];
      const double gt = df.d_dtheta[id] / s;
      acc += g.weight(k, l) * (gr * gr + gt * gt);
    }
  }
  return acc;
}

void write_csv(const ScalarField& f, std::ostream& out) {
  const AxiGrid& g = *f.grid;
  out << "r,theta,weight,value\n";
  char buf[160];
  for (int k = 0; k < g.radial_nodes(); ++k)
    for (int l = 0; l < g.theta_nodes(); ++l) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", g.r(k), g.theta(l),
                    g.weight(k, l), f.values[k * g.theta_nodes() + l]);
      out << buf;
    }
}

// --- stock fields ------------------------------------------------------------

namespace {
double bump(double t) { return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0; }
double dbump(double t) {
  if (t >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return bump(t) * (-2.0 * t / (s * s));
}
}  // namespace

double RadialBumpField::value(double rho, std::span<const double>) const {
  return amplitude_ * bump(rho / radius_);
}
void RadialBumpField::partials(double rho, std::span<const double>, double& u_rho,
                               std::span<double> u_d) const {
  u_rho = amplitude_ * dbump(rho / radius_) / radius_;
  for (auto& v : u_d) v = 0.0;
}

double PoleBumpField::value(double, std::span<const double> d) const {
  double acc = 0.0;
  for (double di : d) acc += amplitude_ * bump(di / radius_);
  return acc;
}
void PoleBumpField::partials(double, std::span<const double> d, double& u_rho,
                             std::span<double> u_d) const {
  u_rho = 0.0;
  for (size_t i = 0; i < d.size(); ++i)
    u_d[i] = amplitude_ * dbump(d[i] / radius_) / radius_;
}

double CosPowerField::value(double rho, std::span<const double>) const {
  const double cs = std::cos(sqrt_c_ * rho);
  return cs <= 0.0 ? 0.0 : std::pow(cs, p_);
}
void CosPowerField::partials(double rho, std::span<const double>, double& u_rho,
                             std::span<double> u_d) const {
  const double cs = std::cos(sqrt_c_ * rho);
  u_rho = cs <= 0.0 ? 0.0 : -p_ * std::pow(cs, p_ - 1.0) * std::sin(sqrt_c_ * rho) * sqrt_c_;
  for (auto& v : u_d) v = 0.0;
}

}  // namespace hardylab
