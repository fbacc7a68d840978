#include "hardylab/hardy.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab {

namespace {

void set_json(nlohmann::ordered_json& j, const char* key,
              const std::optional<double>& v) {
  if (v) j[key] = *v;
}

// u evaluated at pole i (d_i = 0, d_j = pole separation)
double value_at_pole(const AxiGrid& g, const AxiField& u, int i) {
  const int m = g.num_poles();
  std::vector<double> d(static_cast<size_t>(m), 0.0);
  for (int j = 0; j < m; ++j)
    d[static_cast<size_t>(j)] = (j == i) ? 0.0 : g.poles().dist(i, j);
  return u.value(std::fabs(g.pole_axis_position(i)), d);
}

// sigma_{n-1} int_0^delta t^{-2} s_c(t)^{n-1} dt  (the 1/d^2 core integral)
double core_integral(const ModelSpace& space, double delta) {
  std::vector<double> x, w;
  gauss_legendre(32, x, w);
  const Curvature c = space.curvature();
  const int n = space.dim();
  double acc = 0.0;
  for (size_t q = 0; q < x.size(); ++q) {
    const double t = 0.5 * delta * (x[q] + 1.0);
    acc += w[q] * std::pow(s_c(c, t), n - 1) / (t * t);
  }
  return unit_sphere_area(n - 1) * 0.5 * delta * acc;
}

// coefficient of 1/d_i^2 in weight_bipolar_curved as x -> x_i
double bipolar_core_coefficient(Curvature k0, double d_ij) {
  const double q = d_ij;
  const double sq = s_c(k0, q);
  const double lead = 4.0 * s_c(k0, q / 2.0) * s_c(k0, q / 2.0) / (q * sq);
  const double y = k0.value() * q * q;
  double r_coef;
  if (std::fabs(y) < 1e-6) {
    r_coef = -y / 12.0;
  } else {
    r_coef = 1.0 - (2.0 / (k0.value() * q)) * (1.0 / sq - ct_c(k0, q));
  }
  return lead + r_coef;
}

void check_compact_support(const AxiGrid& g, const AxiField& u) {
  // outermost two radial rings must carry exact zeros
  const int NR = g.radial_nodes();
  for (int k = NR - 2; k < NR; ++k)
    for (int l = 0; l < g.theta_nodes(); ++l)
      if (u.value(g.r(k), g.pole_distances(k, l)) != 0.0)
        throw std::invalid_argument(
            "verify: field does not vanish on the outermost two grid rings "
            "(compact-support hypothesis)");
}

struct Accumulated {
  double lhs = 0.0;
  double pairwise = 0.0;  // before the (n-2)^2/m^2 prefactor
  double corr = 0.0;      // sum_i (n-1) D_c(d_i)/d_i^2 u^2
  double corr_weak = 0.0;
  double mass = 0.0;  // int u^2
};

enum class PairWeight { gradient, bipolar };

Accumulated accumulate(const AxiGrid& g, const AxiField& u, PairWeight which,
                       Curvature k0, bool want_weak) {
  const int m = g.num_poles();
  const int n = g.space().dim();
  const Curvature c = g.space().curvature();
  Accumulated acc;
  std::vector<double> dij(static_cast<size_t>(m * m), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) dij[static_cast<size_t>(i * m + j)] = g.poles().dist(i, j);

  for (int k = 0; k < g.radial_nodes(); ++k) {
    for (int l = 0; l < g.theta_nodes(); ++l) {
      const double w = g.weight(k, l);
      if (w == 0.0) continue;
      const std::span<const double> d = g.pole_distances(k, l);
      const double uv = u.value(g.r(k), d);
      const double u2 = uv * uv;
      acc.lhs += w * g.grad_square(k, l, u);
      acc.mass += w * u2;
      if (u2 != 0.0) {
        for (int i = 0; i < m; ++i) {
          for (int j = i + 1; j < m; ++j) {
            const double wij =
                which == PairWeight::gradient
                    ? weight_pairwise_cached(d[static_cast<size_t>(i)],
                                             d[static_cast<size_t>(j)],
                                             g.cos_pole_pair(k, l, i, j))
                    : weight_bipolar_cached(k0, d[static_cast<size_t>(i)],
                                            d[static_cast<size_t>(j)],
                                            dij[static_cast<size_t>(i * m + j)]);
            acc.pairwise += w * wij * u2;
          }
          if (c.value() != 0.0) {
            const double di = d[static_cast<size_t>(i)];
            acc.corr += w * (n - 1) * d_c(c, di) / (di * di) * u2;
            if (want_weak)
              acc.corr_weak += w * (n - 1) * d_c_lower_bound(c, di) / (di * di) * u2;
          }
        }
      }
    }
  }
  return acc;
}

double pole_core_sum(const AxiGrid& g, const AxiField& u, PairWeight which,
                     Curvature k0) {
  // each pair (i, j) contributes a 1/d^2 core at both of its poles
  const int m = g.num_poles();
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const double ui2 = value_at_pole(g, u, i) * value_at_pole(g, u, i);
    if (ui2 == 0.0) continue;
    const double core = core_integral(g.space(), g.exclusion_radius(i));
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double coef = which == PairWeight::gradient
                              ? 1.0
                              : bipolar_core_coefficient(k0, g.poles().dist(i, j));
      total += ui2 * core * coef;
    }
  }
  return total;
}

HardyReport finish_report(const AxiGrid& g, std::string theorem, double lhs,
                          double rhs_pairwise, double rhs_correction) {
  HardyReport rep;
  rep.theorem = std::move(theorem);
  rep.lhs = lhs;
  rep.rhs_pairwise = rhs_pairwise;
  rep.rhs_correction = rhs_correction;
  rep.residual = lhs - rhs_pairwise - rhs_correction;
  rep.relative_margin = lhs != 0.0 ? rep.residual / lhs : 0.0;
  const double scale =
      std::fmax(std::fabs(lhs), std::fabs(rhs_pairwise) + std::fabs(rhs_correction));
  rep.tol = 10.0 * g.volume_rel_error() * scale + 1e-14 * scale;
  rep.n = g.space().dim();
  rep.c = g.space().curvature().value();
  rep.m = g.num_poles();
  rep.volume_rel_error = g.volume_rel_error();
  rep.theta_nodes = g.theta_nodes() - 1;
  rep.delta = g.exclusion_radius(0);
  return rep;
}

}  // namespace

nlohmann::ordered_json HardyReport::to_json() const {
  nlohmann::ordered_json j;
  j["lhs"] = lhs;
  j["rhs_pairwise"] = rhs_pairwise;
  j["rhs_correction"] = rhs_correction;
  j["residual"] = residual;
  j["relative_margin"] = relative_margin;
  j["tol"] = tol;
  nlohmann::ordered_json cfg;
  cfg["theorem"] = theorem;
  cfg["n"] = n;
  cfg["c"] = c;
  cfg["m"] = m;
  set_json(cfg, "k0", k0);
  set_json(cfg, "beta", beta);
  set_json(cfg, "zero_order_constant", zero_order_constant);
  set_json(cfg, "residual_weak_bound", residual_weak_bound);
  cfg["volume_rel_error"] = volume_rel_error;
  cfg["theta_nodes"] = theta_nodes;
  cfg["delta"] = delta;
  j["config"] = cfg;
  return j;
}

double weight_pairwise_cached(double d_i, double d_j, double cos_ij) {
  return 1.0 / (d_i * d_i) + 1.0 / (d_j * d_j) - 2.0 * cos_ij / (d_i * d_j);
}

double weight_pairwise_gradient(const ModelPoint& x, const ModelPoint& pole_i,
                                const ModelPoint& pole_j) {
  const double d_i = distance(x, pole_i);
  const double d_j = distance(x, pole_j);
  if (!(d_i > 0.0) || !(d_j > 0.0))
    throw std::domain_error("weight_pairwise_gradient: x coincides with a pole");
  return weight_pairwise_cached(d_i, d_j, angle_cosine(x, pole_i, pole_j));
}

double weight_euclidean_cz(const ModelPoint& x, const ModelPoint& pole_i,
                           const ModelPoint& pole_j) {
  if (x.space->curvature().value() != 0.0)
    throw std::domain_error("weight_euclidean_cz: defined for c = 0 only");
  const double d_i2 = (x.coords - pole_i.coords).squaredNorm();
  const double d_j2 = (x.coords - pole_j.coords).squaredNorm();
  if (!(d_i2 > 0.0) || !(d_j2 > 0.0))
    throw std::domain_error("weight_euclidean_cz: x coincides with a pole");
  return (pole_i.coords - pole_j.coords).squaredNorm() / (d_i2 * d_j2);
}

double weight_bipolar_cached(Curvature k0, double d_i, double d_j, double d_ij) {
  if (k0.value() == 0.0) return d_ij * d_ij / (d_i * d_i * d_j * d_j);
  const double sh = s_c(k0, d_ij / 2.0);
  return 4.0 * sh * sh / (d_i * d_j * s_c(k0, d_i) * s_c(k0, d_j)) +
         r_ij_correction(k0, d_i, d_j);
}

double weight_bipolar_curved(const ModelPoint& x, const ModelPoint& pole_i,
                             const ModelPoint& pole_j, Curvature k0) {
  const double d_i = distance(x, pole_i);
  const double d_j = distance(x, pole_j);
  if (!(d_i > 0.0) || !(d_j > 0.0))
    throw std::domain_error("weight_bipolar_curved: x coincides with a pole");
  return weight_bipolar_cached(k0, d_i, d_j, distance(pole_i, pole_j));
}

double correction_term(const AxiGrid& grid, const AxiField& u) {
  const Curvature c = grid.space().curvature();
  if (c.value() == 0.0) return 0.0;
  const int n = grid.space().dim();
  double acc = 0.0;
  for (int k = 0; k < grid.radial_nodes(); ++k)
    for (int l = 0; l < grid.theta_nodes(); ++l) {
      const double w = grid.weight(k, l);
      if (w == 0.0) continue;
      const double uv = u.value(grid.r(k), grid.pole_distances(k, l));
      if (uv == 0.0) continue;
      for (int i = 0; i < grid.num_poles(); ++i) {
        const double di = grid.pole_distance(k, l, i);
        acc += w * (n - 1) * d_c(c, di) / (di * di) * uv * uv;
      }
    }
  return acc;
}

HardyReport verify_theorem1(const AxiGrid& g, const AxiField& u,
                            const VerifyOptions& opt) {
  check_compact_support(g, u);
  const int n = g.space().dim();
  const int m = g.num_poles();
  const double pref = double(n - 2) * double(n - 2) / (double(m) * double(m));
  Accumulated acc =
      accumulate(g, u, PairWeight::gradient, g.space().curvature(), false);
  double pw = acc.pairwise;
  if (opt.pole_core)
    pw += pole_core_sum(g, u, PairWeight::gradient, g.space().curvature());
  HardyReport rep = finish_report(g, "theorem1", acc.lhs, pref * pw,
                                  (double(n - 2) / m) * acc.corr);
  return rep;
}

HardyReport verify_theorem2(const AxiGrid& g, const AxiField& u, Curvature k0,
                            const VerifyOptions& opt) {
  const double c = g.space().curvature().value();
  if (k0.value() > c)
    throw std::invalid_argument(
        "verify_theorem2: comparison hypothesis violated (k0 > c; requires the "
        "sectional curvature bounded below by k0)");
  check_compact_support(g, u);
  const int n = g.space().dim();
  const int m = g.num_poles();
  const double pref = double(n - 2) * double(n - 2) / (double(m) * double(m));
  Accumulated acc = accumulate(g, u, PairWeight::bipolar, k0, false);
  double pw = acc.pairwise;
  if (opt.pole_core) pw += pole_core_sum(g, u, PairWeight::bipolar, k0);
  HardyReport rep = finish_report(g, "theorem2", acc.lhs, pref * pw,
                                  (double(n - 2) / m) * acc.corr);
  rep.k0 = k0.value();
  return rep;
}

HardyReport verify_hemisphere(const AxiGrid& g, const AxiField& u,
                              const VerifyOptions& opt) {
  const ModelSpace& M = g.space();
  if (!(M.curvature().value() > 0.0))
    throw std::invalid_argument("verify_hemisphere: needs a spherical space form");
  if (distance(g.center(), M.origin()) > 1e-12)
    throw std::invalid_argument("verify_hemisphere: grid must be centered at the north pole");
  const double equator = M.curvature().domain_max() / 2.0;
  if (std::fabs(g.r_max() - equator) > 1e-12)
    throw std::invalid_argument("verify_hemisphere: grid must reach the equator");
  // boundary condition: u(equator) = 0
  {
    std::vector<double> d(static_cast<size_t>(g.num_poles()));
    for (double th : {0.0, kPi / 2.0, kPi}) {
      for (int i = 0; i < g.num_poles(); ++i)
        d[static_cast<size_t>(i)] = axis_distance(M.curvature(), equator,
                                                  g.pole_axis_position(i), std::cos(th));
      if (std::fabs(u.value(equator, d)) > 1e-12)
        throw std::invalid_argument(
            "verify_hemisphere: field does not vanish on the equator boundary");
    }
  }
  double beta = 0.0;
  for (int i = 0; i < g.num_poles(); ++i)
    beta = std::fmax(beta, std::fabs(g.pole_axis_position(i)));
  // beta is an arc length; hemisphere_constant expects the unit-sphere angle
  const double angle_beta = beta * std::sqrt(M.curvature().value());
  const double C = hemisphere_constant(M.dim(), angle_beta);

  const int n = M.dim();
  const int m = g.num_poles();
  const double pref = double(n - 2) * double(n - 2) / (double(m) * double(m));
  Accumulated acc =
      accumulate(g, u, PairWeight::gradient, M.curvature(), false);
  double pw = acc.pairwise;
  if (opt.pole_core)
    pw += pole_core_sum(g, u, PairWeight::gradient, M.curvature());
  HardyReport rep =
      finish_report(g, "hemisphere", acc.lhs + C * acc.mass, pref * pw, 0.0);
  rep.beta = angle_beta;
  rep.zero_order_constant = C;
  return rep;
}

HardyReport verify_remark_c(const AxiGrid& g, const AxiField& u,
                            const VerifyOptions& opt) {
  const Curvature c = g.space().curvature();
  if (!(c.value() < 0.0))
    throw std::invalid_argument("verify_remark_c: needs a hyperbolic space form (c < 0)");
  check_compact_support(g, u);
  const int n = g.space().dim();
  const int m = g.num_poles();
  const double pref = double(n - 2) * double(n - 2) / (double(m) * double(m));
  Accumulated acc = accumulate(g, u, PairWeight::gradient, c, true);
  double pw = acc.pairwise;
  if (opt.pole_core) pw += pole_core_sum(g, u, PairWeight::gradient, c);
  // the correction enters as (n-1)(n-2)/m int D_c(d_i)/d_i^2 u^2; acc.corr
  // already carries the (n-1) factor
  HardyReport rep = finish_report(g, "remark_c", acc.lhs, pref * pw,
                                  (double(n - 2) / m) * acc.corr);
  rep.residual_weak_bound =
      acc.lhs - pref * pw - (double(n - 2) / m) * acc.corr_weak;
  return rep;
}

}  // namespace hardylab
