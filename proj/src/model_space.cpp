#include "hardylab/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hardylab {

namespace {

constexpr double kConstraintTol = 1e-9;

void require_same_space(const ModelPoint& x, const ModelPoint& y, const char* fn) {
  if (x.space == nullptr || y.space == nullptr || !x.space->same_space(*y.space))
    throw std::invalid_argument(std::string(fn) + ": points belong to different spaces");
}

// sin(t)/t and sinh(t)/t with series fallback near zero.
double sinc(double t) {
  if (std::fabs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sin(t) / t;
}
double sinhc(double t) {
  if (std::fabs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 + t2 / 6.0 + t2 * t2 / 120.0;
  }
  return std::sinh(t) / t;
}

}  // namespace

ModelSpace::ModelSpace(int n, Curvature c) : n_(n), c_(c) {
  if (n < 3) throw std::invalid_argument("ModelSpace: dimension must be >= 3");
}

double ModelSpace::form(const Vec& u, const Vec& v) const {
  if (c_.value() >= 0.0) return u.dot(v);
  const int N = embed_dim();
  return u.head(N - 1).dot(v.head(N - 1)) - u(N - 1) * v(N - 1);
}

ModelPoint ModelSpace::origin() const {
  Vec x = Vec::Zero(embed_dim());
  if (c_.value() != 0.0) x(embed_dim() - 1) = 1.0 / std::sqrt(std::fabs(c_.value()));
  return ModelPoint{std::move(x), this};
}

ModelPoint ModelSpace::make_point(Vec coords) const {
  if (coords.size() != embed_dim())
    throw std::invalid_argument("make_point: wrong coordinate length");
  const double c = c_.value();
  if (c != 0.0) {
    const double rho2 = 1.0 / std::fabs(c);
    ModelPoint p{coords, this};
    const double q = form(p.coords, p.coords);
    const double target = c > 0.0 ? rho2 : -rho2;
    if (std::fabs(q - target) > kConstraintTol * rho2)
      throw std::invalid_argument("make_point: embedding constraint violated");
    if (c < 0.0 && !(coords(embed_dim() - 1) > 0.0))
      throw std::invalid_argument("make_point: hyperboloid point must be on the upper sheet");
    return p;
  }
  return ModelPoint{std::move(coords), this};
}

ModelPoint ModelSpace::project(Vec coords) const {
  const double c = c_.value();
  if (c == 0.0) return ModelPoint{std::move(coords), this};
  const double rho2 = 1.0 / std::fabs(c);
  ModelPoint p{std::move(coords), this};
  const double q = form(p.coords, p.coords);
  if (c > 0.0) {
    if (!(q > 0.0)) throw std::invalid_argument("project: degenerate spherical point");
    p.coords *= std::sqrt(rho2 / q);
  } else {
    if (!(q < 0.0)) throw std::invalid_argument("project: point is not timelike");
    p.coords *= std::sqrt(rho2 / (-q));
    if (p.coords(embed_dim() - 1) < 0.0) p.coords = -p.coords;
  }
  return p;
}

Vec ModelSpace::tangent_basis_vector(const ModelPoint& x, int k) const {
  // Basis at the canonical origin transported bluntly: e_k is tangent at the
  // origin for every model.  For generic base points use Gram-Schmidt against
  // x under the model form.
  const int N = embed_dim();
  if (k < 0 || k >= n_) throw std::invalid_argument("tangent_basis_vector: bad index");
  Vec e = Vec::Zero(N);
  e(k) = 1.0;
  if (c_.value() == 0.0) return e;
  const double rho2 = 1.0 / std::fabs(c_.value());
  const double denom = c_.value() > 0.0 ? rho2 : -rho2;
  e -= (form(e, x.coords) / denom) * x.coords;
  const double norm = std::sqrt(form(e, e));
  if (!(norm > 1e-12))
    throw std::invalid_argument("tangent_basis_vector: basis degenerate at this point");
  return e / norm;
}

double distance(const ModelPoint& x, const ModelPoint& y) {
  require_same_space(x, y, "distance");
  const ModelSpace& M = *x.space;
  const double c = M.curvature().value();
  if (c == 0.0) return (x.coords - y.coords).norm();
  const double rho = 1.0 / std::sqrt(std::fabs(c));
  // Chord forms: well conditioned at small separations.
  if (c > 0.0) {
    const double chord = (x.coords - y.coords).norm();
    const double s = std::min(1.0, chord / (2.0 * rho));
    return 2.0 * rho * std::asin(s);
  }
  const Vec d = x.coords - y.coords;
  const double q = std::max(0.0, M.form(d, d));
  return 2.0 * rho * std::asinh(std::sqrt(q) / (2.0 * rho));
}

Vec log_map(const ModelPoint& x, const ModelPoint& y) {
  require_same_space(x, y, "log_map");
  const ModelSpace& M = *x.space;
  const double c = M.curvature().value();
  if (c == 0.0) {
    if ((x.coords - y.coords).norm() == 0.0)
      throw std::domain_error("log_map: coincident points");
    return y.coords - x.coords;
  }
  const double d = distance(x, y);
  if (d == 0.0) throw std::domain_error("log_map: coincident points");
  if (c > 0.0) {
    const double theta = std::sqrt(c) * d;
    if (theta >= kPi - 1e-12)
      throw std::domain_error("log_map: antipodal pair has no unique geodesic");
    return (y.coords - x.coords * std::cos(theta)) / sinc(theta);
  }
  const double theta = std::sqrt(-c) * d;
  return (y.coords - x.coords * std::cosh(theta)) / sinhc(theta);
}

ModelPoint exp_map(const ModelPoint& x, const Vec& v) {
  const ModelSpace& M = *x.space;
  const double c = M.curvature().value();
  if (c == 0.0) return ModelPoint{x.coords + v, &M};
  const double norm2 = M.form(v, v);
  if (!(norm2 >= 0.0)) throw std::invalid_argument("exp_map: non-spacelike tangent vector");
  const double t = std::sqrt(norm2);
  if (c > 0.0) {
    const double theta = std::sqrt(c) * t;
    return M.project(x.coords * std::cos(theta) + v * sinc(theta));
  }
  const double theta = std::sqrt(-c) * t;
  return M.project(x.coords * std::cosh(theta) + v * sinhc(theta));
}

Vec grad_distance(const ModelPoint& x, const ModelPoint& pole) {
  const double d = distance(x, pole);
  if (d == 0.0) throw std::domain_error("grad_distance: evaluation at the pole");
  return -log_map(x, pole) / d;
}

double laplacian_distance(const ModelSpace& space, double r) {
  return (space.dim() - 1) * ct_c(space.curvature(), r);
}

double angle_cosine(const ModelPoint& x, const ModelPoint& pole_i,
                    const ModelPoint& pole_j) {
  const ModelSpace& M = *x.space;
  const Vec gi = grad_distance(x, pole_i);
  const Vec gj = grad_distance(x, pole_j);
  return std::clamp(M.form(gi, gj), -1.0, 1.0);
}

double cosine_law_angle(Curvature c, double d_i, double d_j, double d_ij) {
  if (!(d_i > 0.0 && d_j > 0.0 && d_ij > 0.0))
    throw std::domain_error("cosine_law_angle: degenerate triangle");
  const double slack = 1e-12 * (d_i + d_j + d_ij);
  if (d_ij > d_i + d_j + slack || d_i > d_j + d_ij + slack ||
      d_j > d_i + d_ij + slack)
    throw std::domain_error("cosine_law_angle: triangle inequality violated");
  const double cv = c.value();
  const double d_max = std::max({d_i, d_j, d_ij});
  const double flat = (d_i * d_i + d_j * d_j - d_ij * d_ij) / (2.0 * d_i * d_j);
  if (cv == 0.0) return std::clamp(flat, -1.0, 1.0);
  if (cv > 0.0 && d_i + d_j + d_ij >= 2.0 * kPi / std::sqrt(cv))
    throw std::domain_error("cosine_law_angle: spherical perimeter bound violated");
  if (std::fabs(cv) * d_max * d_max < kSeriesThreshold) {
    // flat limit with first-order curvature correction (cancellation guard)
    const double corr = flat * (d_i * d_i + d_j * d_j) / 6.0 +
                        (std::pow(d_ij, 4) - std::pow(d_i, 4) - std::pow(d_j, 4) -
                         6.0 * d_i * d_i * d_j * d_j) /
                            (24.0 * d_i * d_j);
    return std::clamp(flat + cv * corr, -1.0, 1.0);
  }
  if (cv > 0.0) {
    const double s = std::sqrt(cv);
    const double num = std::cos(s * d_ij) - std::cos(s * d_i) * std::cos(s * d_j);
    const double den = std::sin(s * d_i) * std::sin(s * d_j);
    return std::clamp(num / den, -1.0, 1.0);
  }
  const double s = std::sqrt(-cv);
  const double num = std::cosh(s * d_i) * std::cosh(s * d_j) - std::cosh(s * d_ij);
  const double den = std::sinh(s * d_i) * std::sinh(s * d_j);
  return std::clamp(num / den, -1.0, 1.0);
}

PoleSet::PoleSet(std::vector<ModelPoint> poles) : poles_(std::move(poles)) {
  const int m = static_cast<int>(poles_.size());
  if (m < 2) throw std::invalid_argument("PoleSet: at least two poles required");
  const ModelSpace& M = *poles_.front().space;
  for (const auto& p : poles_)
    if (!p.space->same_space(M))
      throw std::invalid_argument("PoleSet: poles belong to different spaces");
  if (M.curvature().value() > 0.0) {
    for (const auto& p : poles_)
      if (!(p.coords(M.embed_dim() - 1) > 0.0))
        throw std::invalid_argument(
            "PoleSet: for c > 0 all poles must lie strictly inside the open upper "
            "hemisphere (convexity hypothesis)");
  }
  dist_.resize(m, m);
  dist_.setZero();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double d = distance(poles_[static_cast<size_t>(i)], poles_[static_cast<size_t>(j)]);
      if (!(d > 0.0)) throw std::invalid_argument("PoleSet: poles must be pairwise distinct");
      dist_(i, j) = dist_(j, i) = d;
    }
}

double PoleSet::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j) best = std::min(best, dist_(i, j));
  return best;
}

ModelPoint geodesic_midpoint(const ModelPoint& a, const ModelPoint& b) {
  const Vec v = log_map(a, b);
  return exp_map(a, 0.5 * v);
}

double unit_sphere_area(int k) {
  return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double ball_volume(const ModelSpace& space, double r) {
  // 64-point Gauss-Legendre on [0, r]; the integrand s_c^{n-1} is entire.
  static const int K = 64;
  static std::vector<double> xs, ws;
  if (xs.empty()) {
    // Golub-Welsch via Newton on Legendre polynomials.
    xs.resize(K);
    ws.resize(K);
    for (int i = 0; i < K; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (K + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= K; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        const double dp = K * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= K; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double dp = K * (x * p1 - p0) / (x * x - 1.0);
      xs[static_cast<size_t>(i)] = x;
      ws[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
  const Curvature c = space.curvature();
  const int n = space.dim();
  double acc = 0.0;
  for (int i = 0; i < K; ++i) {
    const double t = 0.5 * r * (xs[static_cast<size_t>(i)] + 1.0);
    acc += ws[static_cast<size_t>(i)] * std::pow(s_c(c, t), n - 1);
  }
  return unit_sphere_area(n - 1) * 0.5 * r * acc;
}

double axis_distance(Curvature c, double r, double a, double cos_theta) {
  const double cv = c.value();
  if (cv == 0.0)
    return std::sqrt(std::max(0.0, r * r + a * a - 2.0 * r * a * cos_theta));
  if (cv < 0.0) {
    const double s = std::sqrt(-cv);
    const double ch = std::cosh(s * r) * std::cosh(s * a) -
                      std::sinh(s * r) * std::sinh(s * a) * cos_theta;
    return std::acosh(std::max(1.0, ch)) / s;
  }
  const double s = std::sqrt(cv);
  const double cs = std::cos(s * r) * std::cos(s * a) +
                    std::sin(s * r) * std::sin(s * a) * cos_theta;
  return std::acos(std::clamp(cs, -1.0, 1.0)) / s;
}

}  // namespace hardylab
