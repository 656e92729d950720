#include "wgf/geometry.hpp"

#include <cmath>

namespace wgf {

namespace {

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    raise(ErrorKind::AlphaOutOfRange, "interpolation parameter must lie in [0,1]");
}

double sq_norm_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double dx = a[k] - b[k];
    s += dx * dx;
  }
  return s;
}

}  // namespace

BasedPlan make_based_plan(const ParticleMeasure& omega, const ParticleMeasure& mu0,
                          const ParticleMeasure& mu1) {
  auto m0 = unique_optimal_map(omega, mu0);
  auto m1 = unique_optimal_map(omega, mu1);
  return BasedPlan{omega, mu0, mu1, std::move(m0.assignment), std::move(m1.assignment)};
}

void validate_plan(const BasedPlan& plan) {
  const int n = plan.base.size();
  if (static_cast<int>(plan.sigma0.size()) != n || static_cast<int>(plan.sigma1.size()) != n)
    raise(ErrorKind::InvalidPlan, "assignment length does not match base size");
  const double opt0 = optimal_map(plan.base, plan.mu0).cost;
  const double opt1 = optimal_map(plan.base, plan.mu1).cost;
  if (pairing_cost(plan.base, plan.mu0, plan.sigma0) > opt0 + kTieTolerance)
    raise(ErrorKind::InvalidPlan, "projection onto (base, mu0) is not optimal");
  if (pairing_cost(plan.base, plan.mu1, plan.sigma1) > opt1 + kTieTolerance)
    raise(ErrorKind::InvalidPlan, "projection onto (base, mu1) is not optimal");
}

GeodesicPoint geodesic(const ParticleMeasure& mu0, const ParticleMeasure& mu1, double alpha) {
  require_alpha(alpha);
  const auto map = optimal_map(mu0, mu1);
  const int n = mu0.size();
  const int d = mu0.dim();
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k)
      coords[static_cast<std::size_t>(i) * d + k] =
          (1.0 - alpha) * mu0.coord(i, k) + alpha * mu1.coord(map.assignment[i], k);
  return GeodesicPoint{alpha, ParticleMeasure(std::move(coords), d)};
}

GeodesicPoint generalized_geodesic(const BasedPlan& plan, double alpha) {
  require_alpha(alpha);
  validate_plan(plan);
  const int n = plan.base.size();
  const int d = plan.base.dim();
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k)
      coords[static_cast<std::size_t>(i) * d + k] =
          (1.0 - alpha) * plan.mu0.coord(plan.sigma0[i], k) +
          alpha * plan.mu1.coord(plan.sigma1[i], k);
  return GeodesicPoint{alpha, ParticleMeasure(std::move(coords), d)};
}

double pseudo_metric(const BasedPlan& plan) {
  validate_plan(plan);
  const int n = plan.base.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    total += sq_norm_diff(plan.mu0.point(plan.sigma0[i]), plan.mu1.point(plan.sigma1[i]));
  return std::sqrt(total / n);
}

double transport_metric(const ParticleMeasure& omega, const ParticleMeasure& mu0,
                        const ParticleMeasure& mu1) {
  const auto plan = make_based_plan(omega, mu0, mu1);
  const int n = omega.size();
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    total += sq_norm_diff(mu0.point(plan.sigma0[i]), mu1.point(plan.sigma1[i]));
  return std::sqrt(total / n);
}

HilbertianCheck check_hilbertian_identity(const BasedPlan& plan, double alpha) {
  require_alpha(alpha);
  const auto mid = generalized_geodesic(plan, alpha);
  const int n = plan.base.size();

  double pairing_sq = 0.0;  // base atom i vs mu_alpha atom i
  for (int i = 0; i < n; ++i) pairing_sq += sq_norm_diff(plan.base.point(i), mid.measure.point(i));
  pairing_sq /= n;

  const double w0_sq = pairing_cost(plan.base, plan.mu0, plan.sigma0) / n;
  const double w1_sq = pairing_cost(plan.base, plan.mu1, plan.sigma1) / n;
  const double pm = pseudo_metric(plan);
  const double rhs = (1.0 - alpha) * w0_sq + alpha * w1_sq - alpha * (1.0 - alpha) * pm * pm;

  const double true_sq = [&] {
    const auto w2 = wasserstein_distance(plan.base, mid.measure);
    return w2 * w2;
  }();

  return HilbertianCheck{std::abs(pairing_sq - rhs), pairing_sq, true_sq};
}

double check_transport_geodesic_identity(const ParticleMeasure& omega, const ParticleMeasure& nu,
                                         const ParticleMeasure& mu0, const ParticleMeasure& mu1,
                                         double alpha) {
  require_alpha(alpha);
  const auto plan = make_based_plan(omega, mu0, mu1);
  const auto mid = generalized_geodesic(plan, alpha);

  const double dn0 = transport_metric(omega, nu, mu0);
  const double dn1 = transport_metric(omega, nu, mu1);
  const double d01 = transport_metric(omega, mu0, mu1);
  const double dna = transport_metric(omega, nu, mid.measure);

  const double rhs =
      (1.0 - alpha) * dn0 * dn0 + alpha * dn1 * dn1 - alpha * (1.0 - alpha) * d01 * d01;
  return std::abs(dna * dna - rhs);
}

FourPointCheck four_point_glue(const ParticleMeasure& omega, const ParticleMeasure& mu0,
                               const ParticleMeasure& mu1, const ParticleMeasure& nu,
                               double alpha) {
  require_alpha(alpha);
  const auto plan = make_based_plan(omega, mu0, mu1);
  const auto map_nu = unique_optimal_map(omega, nu);
  const int n = omega.size();
  const int d = omega.dim();

  const auto mid = generalized_geodesic(plan, alpha);

  // All four pseudo metrics read off the glued base-indexed family.
  double lhs = 0.0, dn0 = 0.0, dn1 = 0.0, d01 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = nu.point(map_nu.assignment[i]);
    const auto a = mu0.point(plan.sigma0[i]);
    const auto b = mu1.point(plan.sigma1[i]);
    for (int k = 0; k < d; ++k) {
      const double ma = (1.0 - alpha) * a[k] + alpha * b[k];
      lhs += (z[k] - ma) * (z[k] - ma);
      dn0 += (z[k] - a[k]) * (z[k] - a[k]);
      dn1 += (z[k] - b[k]) * (z[k] - b[k]);
      d01 += (a[k] - b[k]) * (a[k] - b[k]);
    }
  }
  lhs /= n;
  dn0 /= n;
  dn1 /= n;
  d01 /= n;

  const double rhs = (1.0 - alpha) * dn0 + alpha * dn1 - alpha * (1.0 - alpha) * d01;

  // The glued projection onto (omega, mu_alpha) is the identity pairing in
  // base order; compare with the solver optimum.
  std::vector<int> ident(n);
  for (int i = 0; i < n; ++i) ident[i] = i;
  const double glue_cost = pairing_cost(omega, mid.measure, ident);
  const double opt_cost = optimal_map(omega, mid.measure).cost;
  const bool glued_optimal = glue_cost <= opt_cost + 1e-9 * (1.0 + opt_cost);

  return FourPointCheck{std::abs(lhs - rhs), lhs, rhs, glued_optimal};
}

}  // namespace wgf
