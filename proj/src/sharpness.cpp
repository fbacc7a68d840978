#include "hardylab/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "hardylab/axigrid.hpp"
#include "hardylab/hardy.hpp"

namespace hardylab {

namespace {

// Gauss-Legendre panels on [lo, hi], log-spaced, at least ppd panels/decade.
struct RadialRule {
  std::vector<double> t, w;  // plain dt weights
};

RadialRule log_panels(double lo, double hi, int ppd, int gl) {
  RadialRule rule;
  std::vector<double> gx, gw;
  gauss_legendre(gl, gx, gw);
  const double decades = std::log10(hi / lo);
  const int panels = std::max(1, static_cast<int>(std::ceil(decades * ppd)));
  const double step = std::pow(hi / lo, 1.0 / panels);
  double a = lo;
  for (int p = 0; p < panels; ++p) {
    const double b = (p + 1 == panels) ? hi : a * step;
    for (int q = 0; q < gl; ++q) {
      rule.t.push_back(0.5 * (b + a) + 0.5 * (b - a) * gx[static_cast<size_t>(q)]);
      rule.w.push_back(0.5 * (b - a) * gw[static_cast<size_t>(q)]);
    }
    a = b;
  }
  return rule;
}

struct AngularRule {
  std::vector<double> cos_th, w;  // includes sin^{n-2}(theta)
};

AngularRule angular_rule(int points, int n) {
  AngularRule rule;
  std::vector<double> gx, gw;
  gauss_legendre(points, gx, gw);
  for (int q = 0; q < points; ++q) {
    const double th = 0.5 * kPi * (gx[static_cast<size_t>(q)] + 1.0);
    rule.cos_th.push_back(std::cos(th));
    rule.w.push_back(0.5 * kPi * gw[static_cast<size_t>(q)] *
                     std::pow(std::sin(th), n - 2));
  }
  return rule;
}

}  // namespace

EpsilonFamily::EpsilonFamily(const ModelSpace& space, const PoleSet& poles,
                             double epsilon)
    : space_(&space), poles_(&poles), eps_(epsilon) {
  if (poles.size() != 2)
    throw std::invalid_argument("EpsilonFamily: exactly two poles required");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("EpsilonFamily: epsilon must lie in (0, 1)");
  if (epsilon < 1e-5)
    throw std::invalid_argument(
        "EpsilonFamily: epsilon below the 1e-5 floor (d^{(2-n)/2} at d = eps^2 "
        "leaves the safe double range for n <= 8)");
  const double d12 = poles.dist(0, 1);
  if (!(4.0 * std::sqrt(epsilon) < d12))
    throw std::invalid_argument(
        "EpsilonFamily: supports overlap (requires d_12 > 4 sqrt(eps))");
  if (space.curvature().value() > 0.0 &&
      !space.curvature().contains_radius(std::sqrt(epsilon)))
    throw std::invalid_argument("EpsilonFamily: annulus exceeds the spherical domain");
}

double EpsilonFamily::profile(double d) const {
  const double e2 = eps_ * eps_, se = std::sqrt(eps_);
  if (d < e2 || d > se) return 0.0;
  const double q = 0.5 * (2.0 - space_->dim());
  const double invL = 1.0 / std::log(1.0 / eps_);
  if (d <= eps_) return std::log(d / e2) * invL * std::pow(d, q);
  return 2.0 * std::log(se / d) * invL * std::pow(d, q);
}

double EpsilonFamily::profile_derivative(double d) const {
  const double e2 = eps_ * eps_, se = std::sqrt(eps_);
  if (d < e2 || d > se) return 0.0;
  const double q = 0.5 * (2.0 - space_->dim());
  const double invL = 1.0 / std::log(1.0 / eps_);
  if (d <= eps_)
    return invL * std::pow(d, q - 1.0) * (1.0 + q * std::log(d / e2));
  return invL * std::pow(d, q - 1.0) * (-2.0 + 2.0 * q * std::log(se / d));
}

double eval_u_eps(const EpsilonFamily& fam, const ModelPoint& x) {
  const double d1 = distance(x, fam.poles().pole(0));
  const double d2 = distance(x, fam.poles().pole(1));
  const double v1 = fam.profile(d1);
  return v1 != 0.0 ? v1 : fam.profile(d2);
}

namespace {

struct FunctionalValues {
  double I = 0.0, J = 0.0, K = 0.0, L = 0.0;
};

FunctionalValues compute_functionals(const EpsilonFamily& fam,
                                     const SharpnessQuadrature& quad) {
  const ModelSpace& M = fam.space();
  const Curvature c = M.curvature();
  const int n = M.dim();
  const double eps = fam.epsilon();
  const double d12 = fam.poles().dist(0, 1);
  const double sig_r = unit_sphere_area(n - 1);
  const double sig_a = unit_sphere_area(n - 2);

  // one radial rule per smooth branch
  RadialRule inner = log_panels(eps * eps, eps, quad.panels_per_decade, quad.gl_points);
  RadialRule outer =
      log_panels(eps, std::sqrt(eps), quad.panels_per_decade, quad.gl_points);
  AngularRule ang = angular_rule(quad.theta_points, n);

  FunctionalValues out;
  // the two poles give identical contributions by symmetry of the space form;
  // compute one annulus and double
  auto add_branch = [&](const RadialRule& rule) {
    for (size_t a = 0; a < rule.t.size(); ++a) {
      const double t = rule.t[a];
      const double wt = rule.w[a];
      const double sn = std::pow(s_c(c, t), n - 1);
      const double phi = fam.profile(t);
      const double dphi = fam.profile_derivative(t);
      const double u2 = phi * phi;

      out.I += 2.0 * sig_r * wt * sn * dphi * dphi;
      out.J += 2.0 * sig_r * wt * sn * u2 / (t * t);
      if (c.value() != 0.0)
        out.K += 2.0 * sig_r * wt * sn * (n - 1) * d_c(c, t) / (t * t) * u2;

      // cross-pole weights: angular average around the active pole
      double avg_inv_d2 = 0.0;   // <1/d_other^2>
      double avg_cross = 0.0;    // <cos(gamma)/(t d_other)>
      double avg_defect = 0.0;   // <(n-1) D_c(d_other)/d_other^2>
      for (size_t b = 0; b < ang.cos_th.size(); ++b) {
        const double db = axis_distance(c, t, d12, ang.cos_th[b]);
        const double wb = ang.w[b];
        avg_inv_d2 += wb / (db * db);
        avg_cross += wb * cosine_law_angle(c, t, db, d12) / (t * db);
        if (c.value() != 0.0) avg_defect += wb * (n - 1) * d_c(c, db) / (db * db);
      }
      out.J += 2.0 * sig_a * wt * sn * u2 * avg_inv_d2;
      out.L += 2.0 * sig_a * wt * sn * u2 * avg_cross;
      if (c.value() != 0.0) out.K += 2.0 * sig_a * wt * sn * u2 * avg_defect;
    }
  };
  add_branch(inner);
  add_branch(outer);
  return out;
}

}  // namespace

SweepRecord functionals(const EpsilonFamily& fam, const SharpnessQuadrature& quad) {
  const FunctionalValues coarse = compute_functionals(fam, quad);
  SharpnessQuadrature fine = quad;
  fine.gl_points += 6;
  fine.theta_points *= 2;
  const FunctionalValues vals = compute_functionals(fam, fine);

  const int n = fam.space().dim();
  SweepRecord rec;
  rec.epsilon = fam.epsilon();
  rec.I = vals.I;
  rec.J = vals.J;
  rec.K = vals.K;
  rec.L = vals.L;
  rec.target = 0.25 * (n - 2) * (n - 2);
  const double denom = vals.J - 2.0 * vals.L;
  if (!(denom > 0.0)) throw std::runtime_error("functionals: J - 2L not positive");
  rec.ratio = (vals.I - 0.5 * (n - 2) * vals.K) / denom;
  double tol = 0.0;
  const double scale = std::fmax(1e-300, std::fabs(vals.J));
  tol = std::fmax(tol, std::fabs(vals.I - coarse.I) / scale);
  tol = std::fmax(tol, std::fabs(vals.J - coarse.J) / scale);
  tol = std::fmax(tol, std::fabs(vals.K - coarse.K) / scale);
  tol = std::fmax(tol, std::fabs(vals.L - coarse.L) / scale);
  rec.tol = tol;
  return rec;
}

std::vector<SweepRecord> sharpness_sweep(const ModelSpace& space,
                                         const PoleSet& poles,
                                         std::span<const double> eps_list,
                                         const SharpnessQuadrature& quad) {
  for (size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw std::invalid_argument("sharpness_sweep: eps_list must be decreasing");
  std::vector<SweepRecord> out;
  for (double eps : eps_list)
    out.push_back(functionals(EpsilonFamily(space, poles, eps), quad));
  return out;
}

nlohmann::ordered_json SweepRecord::to_json() const {
  nlohmann::ordered_json j;
  j["epsilon"] = epsilon;
  j["I"] = I;
  j["J"] = J;
  j["K"] = K;
  j["L"] = L;
  j["ratio"] = ratio;
  j["target"] = target;
  j["tol"] = tol;
  return j;
}

void write_sweep_csv(std::span<const SweepRecord> records, std::ostream& out) {
  out << "epsilon,I,J,K,L,ratio,target,tol\n";
  char buf[256];
  for (const SweepRecord& r : records) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.epsilon,
                  r.I, r.J, r.K, r.L, r.ratio, r.target, r.tol);
    out << buf;
  }
}

// --- Rayleigh probe ----------------------------------------------------------

namespace {

// piecewise-linear hat on the log-radius grid
struct HatBasis {
  std::vector<double> knots;  // log-radii, hats at knots[1..K]
  double value(int k, double logd) const {
    const double lo = knots[static_cast<size_t>(k - 1)];
    const double mid = knots[static_cast<size_t>(k)];
    const double hi = knots[static_cast<size_t>(k + 1)];
    if (logd <= lo || logd >= hi) return 0.0;
    return logd < mid ? (logd - lo) / (mid - lo) : (hi - logd) / (hi - mid);
  }
  double slope(int k, double logd) const {
    const double lo = knots[static_cast<size_t>(k - 1)];
    const double mid = knots[static_cast<size_t>(k)];
    const double hi = knots[static_cast<size_t>(k + 1)];
    if (logd <= lo || logd >= hi) return 0.0;
    return logd < mid ? 1.0 / (mid - lo) : -1.0 / (hi - mid);
  }
};

}  // namespace

nlohmann::ordered_json RayleighResult::to_json() const {
  nlohmann::ordered_json j;
  j["quotient"] = quotient;
  j["reference"] = reference;
  j["evaluations"] = evaluations;
  j["empirical"] = empirical;
  return j;
}

RayleighResult rayleigh_probe(const ModelSpace& space, const PoleSet& poles,
                              const TrialFamily& family, int budget,
                              std::uint64_t seed) {
  const int m = poles.size();
  const int n = space.dim();
  const Curvature c = space.curvature();
  const double sep = poles.min_separation();
  const double q = 0.5 * (2.0 - n);
  const int K = family.hats;
  if (K < 1 || budget < 1)
    throw std::invalid_argument("rayleigh_probe: empty family or budget");

  HatBasis basis;
  for (int k = 0; k <= K + 1; ++k)
    basis.knots.push_back(std::log(family.d_min_frac * sep) +
                          (std::log(family.d_max_frac * sep) -
                           std::log(family.d_min_frac * sep)) *
                              k / (K + 1));

  // Gram matrices over the trial span: every pole carries the same radial
  // profile, supports disjoint.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K, K);  // int <grad B_k, grad B_l>
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(K, K);  // sum_{i<j} int W B_k B_l
  RadialRule rule = log_panels(family.d_min_frac * sep, family.d_max_frac * sep,
                               30, 10);
  AngularRule ang = angular_rule(48, n);
  const double sig_r = unit_sphere_area(n - 1);
  const double sig_a = unit_sphere_area(n - 2);

  // pole axis positions relative to pole a (signed, along the common axis):
  // recovered from pairwise distances of the collinear configuration.
  // Use pole 0 as the origin with pole 1 in the positive direction.
  std::vector<double> axis(static_cast<size_t>(m), 0.0);
  axis[0] = 0.0;
  if (m > 1) axis[1] = poles.dist(0, 1);
  for (int i = 2; i < m; ++i) {
    const double d0 = poles.dist(0, i), d1 = poles.dist(1, i);
    // on-axis: either +d0 or -d0; pick the sign consistent with d(1, i)
    const double plus_err = std::fabs(std::fabs(axis[1] - d0) - d1);
    const double minus_err = std::fabs(std::fabs(axis[1] + d0) - d1);
    axis[static_cast<size_t>(i)] = plus_err <= minus_err ? d0 : -d0;
  }

  for (size_t a = 0; a < rule.t.size(); ++a) {
    const double t = rule.t[a];
    const double logt = std::log(t);
    const double wt = rule.w[a];
    const double sn = std::pow(s_c(c, t), n - 1);
    const double tq = std::pow(t, q);
    // radial gradient factors g_k = d/dt [hat_k(log t) t^q]
    std::vector<double> val(static_cast<size_t>(K)), grad(static_cast<size_t>(K));
    for (int k = 1; k <= K; ++k) {
      const double h = basis.value(k, logt);
      const double hp = basis.slope(k, logt);
      val[static_cast<size_t>(k - 1)] = h * tq;
      grad[static_cast<size_t>(k - 1)] = std::pow(t, q - 1.0) * (hp + q * h);
    }
    // weights around the active pole p: sum over pairs
    double w_total_radial = 0.0;  // coefficient of the radial 1/t^2 parts
    double w_total_smooth = 0.0;  // angular-averaged remainder
    for (int p = 0; p < m; ++p) {
      for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
          if (i == p || j == p) {
            const int other = (i == p) ? j : i;
            const double off = axis[static_cast<size_t>(other)] -
                               axis[static_cast<size_t>(p)];
            w_total_radial += 1.0 / (t * t);
            double avg = 0.0;
            for (size_t b = 0; b < ang.cos_th.size(); ++b) {
              const double db = axis_distance(c, t, off, ang.cos_th[b]);
              avg += ang.w[b] * (1.0 / (db * db) -
                                 2.0 * cosine_law_angle(c, t, db, std::fabs(off)) /
                                     (t * db));
            }
            w_total_smooth += avg;
          } else {
            const double off_i = axis[static_cast<size_t>(i)] -
                                 axis[static_cast<size_t>(p)];
            const double off_j = axis[static_cast<size_t>(j)] -
                                 axis[static_cast<size_t>(p)];
            double avg = 0.0;
            for (size_t b = 0; b < ang.cos_th.size(); ++b) {
              const double di = axis_distance(c, t, off_i, ang.cos_th[b]);
              const double dj = axis_distance(c, t, off_j, ang.cos_th[b]);
              avg += ang.w[b] * weight_pairwise_cached(
                                    di, dj,
                                    cosine_law_angle(c, di, dj, poles.dist(i, j)));
            }
            w_total_smooth += avg;
          }
        }
      }
    }
    for (int k = 0; k < K; ++k)
      for (int l = k; l < K; ++l) {
        const double gkl = grad[static_cast<size_t>(k)] * grad[static_cast<size_t>(l)];
        const double vkl = val[static_cast<size_t>(k)] * val[static_cast<size_t>(l)];
        // m identical pole annuli for the gradient Gram
        A(k, l) += m * sig_r * wt * sn * gkl;
        B(k, l) += wt * sn * vkl * (sig_r * w_total_radial + sig_a * w_total_smooth);
      }
  }
  A = A.selfadjointView<Eigen::Upper>();
  B = B.selfadjointView<Eigen::Upper>();

  int evals = 0;
  auto quotient = [&](const Eigen::VectorXd& p) {
    ++evals;
    const double den = p.dot(B * p);
    if (!(den > 1e-300)) return std::numeric_limits<double>::infinity();
    return p.dot(A * p) / den;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  Eigen::VectorXd p(K);
  for (int k = 0; k < K; ++k) {
    const double x = (k + 1.0) / (K + 1.0);  // tent-shaped start
    p(k) = std::min(x, 1.0 - x) + jitter(rng);
  }
  double best = quotient(p);
  if (std::isinf(best))
    throw std::invalid_argument("rayleigh_probe: degenerate family (zero denominator)");
  double step = 0.25;
  while (evals < budget && step > 1e-10) {
    bool improved = false;
    for (int k = 0; k < K && evals < budget; ++k) {
      for (double sgn : {+1.0, -1.0}) {
        Eigen::VectorXd trial = p;
        trial(k) += sgn * step;
        const double val2 = quotient(trial);
        if (val2 < best) {
          best = val2;
          p = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  RayleighResult res;
  res.quotient = best;
  res.reference = double(n - 2) * double(n - 2) / (double(m) * double(m));
  res.evaluations = evals;
  res.empirical = true;
  return res;
}

}  // namespace hardylab
