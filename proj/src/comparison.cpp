#include "hardylab/comparison.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace hardylab {

namespace {

void check_embeddable(Curvature c, double a, double b, double cc) {
  if (!(a > 0.0 && b > 0.0 && cc > 0.0))
    throw std::domain_error("comparison_triangle: degenerate side lengths");
  if (a > b + cc + 1e-15 || b > a + cc + 1e-15 || cc > a + b + 1e-15)
    throw std::domain_error("comparison_triangle: triangle inequality violated");
  if (c.value() > 0.0) {
    const double limit = 2.0 * kPi / std::sqrt(c.value());
    if (a + b + cc >= limit)
      throw std::domain_error(
          "comparison_triangle: perimeter reaches 2 pi/sqrt(c) (not embeddable "
          "in the sphere of curvature c)");
  }
}

}  // namespace

GeodesicTriangle make_triangle(const ModelPoint& pole_i, const ModelPoint& pole_j,
                               const ModelPoint& x) {
  GeodesicTriangle t{{pole_i, pole_j, x},
                     distance(x, pole_i),
                     distance(x, pole_j),
                     distance(pole_i, pole_j)};
  if (!(t.d_i > 0.0 && t.d_j > 0.0 && t.d_ij > 0.0))
    throw std::domain_error("make_triangle: coincident vertices");
  return t;
}

GeodesicTriangle comparison_triangle(Curvature c_target, const GeodesicTriangle& t) {
  check_embeddable(c_target, t.d_i, t.d_j, t.d_ij);
  const ModelSpace& src = *t.vertices[0].space;
  // Realize the sides in the target space form: vertex x at the origin, the
  // poles along the first two basis directions with the cosine-law angle.
  // Target spaces are interned so the returned points stay valid.
  static thread_local std::map<std::pair<int, double>, ModelSpace> cache;
  const ModelSpace& M =
      cache.try_emplace({src.dim(), c_target.value()}, src.dim(), c_target)
          .first->second;
  const ModelPoint x = M.origin();
  const Vec e0 = M.tangent_basis_vector(x, 0);
  const Vec e1 = M.tangent_basis_vector(x, 1);
  const double cg = cosine_law_angle(c_target, t.d_i, t.d_j, t.d_ij);
  const double gamma = std::acos(std::clamp(cg, -1.0, 1.0));
  const ModelPoint pi = exp_map(x, t.d_i * e0);
  const ModelPoint pj = exp_map(x, t.d_j * (std::cos(gamma) * e0 + std::sin(gamma) * e1));
  GeodesicTriangle out{{pi, pj, x}, t.d_i, t.d_j, t.d_ij};
  return out;
}

ToponogovResult toponogov_check(const GeodesicTriangle& t, Curvature k0, double tol) {
  const Curvature c = t.vertices[0].space->curvature();
  if (k0.value() > c.value())
    throw std::invalid_argument(
        "toponogov_check: comparison hypothesis violated (k0 > c)");
  ToponogovResult res;
  // measured angle: embedded distance gradients at the vertex x
  const double cos_space = angle_cosine(t.vertices[2], t.vertices[0], t.vertices[1]);
  // comparison angle: cosine law in the space form of curvature k0
  const double cos_model = cosine_law_angle(k0, t.d_i, t.d_j, t.d_ij);
  res.gamma_space = std::acos(std::clamp(cos_space, -1.0, 1.0));
  res.gamma_model = std::acos(std::clamp(cos_model, -1.0, 1.0));
  res.pass = res.gamma_model <= res.gamma_space + tol;
  return res;
}

bool laplace_comparison_check(const ModelSpace& space, Curvature c_bound,
                              ComparisonSide side, std::span<const double> r_grid,
                              double tol) {
  const Curvature c = space.curvature();
  if (side == ComparisonSide::upper && !(c.value() <= c_bound.value()))
    throw std::invalid_argument(
        "laplace_comparison_check: upper bound requires c_space <= c_bound");
  if (side == ComparisonSide::lower && !(c.value() >= c_bound.value()))
    throw std::invalid_argument(
        "laplace_comparison_check: lower bound requires c_space >= c_bound");
  for (double r : r_grid) {
    const double lap = laplacian_distance(space, r);
    const double bound = (space.dim() - 1) * ct_c(c_bound, r);
    if (side == ComparisonSide::upper && lap < bound - tol) return false;
    if (side == ComparisonSide::lower && lap > bound + tol) return false;
  }
  return true;
}

nlohmann::ordered_json SweepSummary::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["total"] = total;
  j["failures"] = failures;
  j["worst_margin"] = worst_margin;
  j["pass"] = pass();
  return j;
}

ModelPoint random_point_in_ball(const ModelPoint& base, double radius,
                                std::uint64_t seed, int index) {
  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(index + 1));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const ModelSpace& M = *base.space;
  Vec v = Vec::Zero(M.embed_dim());
  double norm2 = 0.0;
  do {
    v.setZero();
    for (int k = 0; k < M.dim(); ++k) {
      const Vec e = M.tangent_basis_vector(base, k);
      v += gauss(rng) * e;
    }
    norm2 = M.form(v, v);
  } while (!(norm2 > 1e-24));
  v /= std::sqrt(norm2);
  const double r = radius * std::pow(unif(rng), 1.0 / M.dim());
  return exp_map(base, r * v);
}

SweepSummary toponogov_sweep(const ModelSpace& space, Curvature k0, int samples,
                             std::uint64_t seed, double tol) {
  SweepSummary s;
  s.name = "toponogov c=" + std::to_string(space.curvature().value()) +
           " k0=" + std::to_string(k0.value());
  const double cb = space.curvature().value();
  const double radius =
      cb > 0.0 ? std::min(1.0, 0.4 * kPi / std::sqrt(cb)) : 1.0;
  const ModelPoint base = space.origin();
  int produced = 0;
  int attempt = 0;
  while (produced < samples) {
    const int a = attempt++;
    ModelPoint p = random_point_in_ball(base, radius, seed, 3 * a);
    ModelPoint q = random_point_in_ball(base, radius, seed, 3 * a + 1);
    ModelPoint x = random_point_in_ball(base, radius, seed, 3 * a + 2);
    try {
      GeodesicTriangle t = make_triangle(p, q, x);
      // resample nearly degenerate triangles (arccos conditioning)
      const double worst_cos = std::fmax(
          std::fabs(cosine_law_angle(space.curvature(), t.d_i, t.d_j, t.d_ij)),
          std::fabs(cosine_law_angle(space.curvature(), t.d_ij, t.d_i, t.d_j)));
      if (worst_cos > 1.0 - 1e-8) continue;
      const ToponogovResult r = toponogov_check(t, k0, tol);
      ++produced;
      ++s.total;
      const double margin = r.gamma_space - r.gamma_model;
      s.worst_margin = std::fmin(s.worst_margin, margin);
      if (!r.pass) ++s.failures;
    } catch (const std::domain_error&) {
      continue;  // degenerate sample
    }
  }
  return s;
}

SweepSummary cosine_chain_check(const ModelSpace& space, const PoleSet& poles,
                                int samples, std::uint64_t seed, Curvature k0,
                                double tol) {
  if (k0.value() > space.curvature().value())
    throw std::invalid_argument(
        "cosine_chain_check: comparison hypothesis violated (k0 > c)");
  SweepSummary s;
  s.name = "cosine-chain c=" + std::to_string(space.curvature().value()) +
           " k0=" + std::to_string(k0.value());
  const double cb = space.curvature().value();
  const double radius = cb > 0.0 ? 0.45 * kPi / std::sqrt(cb) : 4.0;
  const ModelPoint base = space.origin();
  int produced = 0;
  int attempt = 0;
  while (produced < samples) {
    const int a = attempt++;
    ModelPoint x = random_point_in_ball(base, radius, seed, a);
    bool near_pole = false;
    for (int i = 0; i < poles.size(); ++i)
      if (distance(x, poles.pole(i)) < 1e-3) near_pole = true;
    if (near_pole) continue;
    ++produced;
    for (int i = 0; i < poles.size(); ++i)
      for (int j = i + 1; j < poles.size(); ++j) {
        const double lhs = weight_pairwise_gradient(x, poles.pole(i), poles.pole(j));
        const double rhs = weight_bipolar_curved(x, poles.pole(i), poles.pole(j), k0);
        ++s.total;
        const double margin = lhs - rhs;
        s.worst_margin = std::fmin(s.worst_margin, margin);
        if (margin < -tol) ++s.failures;
      }
  }
  return s;
}

}  // namespace hardylab
