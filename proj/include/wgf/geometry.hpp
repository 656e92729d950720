#pragma once

#include <vector>

#include "wgf/measure.hpp"
#include "wgf/transport.hpp"

namespace wgf {

/// Base-indexed 3-plan: base atom i is matched to mu0 atom sigma0[i] and to
/// mu1 atom sigma1[i]; both pairings must be optimal assignments.
struct BasedPlan {
  ParticleMeasure base;
  ParticleMeasure mu0;
  ParticleMeasure mu1;
  std::vector<int> sigma0;
  std::vector<int> sigma1;
};

struct GeodesicPoint {
  double alpha = 0.0;
  ParticleMeasure measure;
};

/// Canonical plan through the optimal maps from omega; raises
/// NonUniqueOptimum when either assignment has a cost tie.
BasedPlan make_based_plan(const ParticleMeasure& omega, const ParticleMeasure& mu0,
                          const ParticleMeasure& mu1);

/// Raises InvalidPlan when either projection fails to be an optimal
/// assignment (cost above the optimum beyond the tie tolerance).
void validate_plan(const BasedPlan& plan);

/// Constant-speed W2 geodesic: atoms (1-alpha) x_i + alpha y_{sigma(i)} with
/// sigma the optimal assignment from mu0 to mu1.
GeodesicPoint geodesic(const ParticleMeasure& mu0, const ParticleMeasure& mu1, double alpha);

/// Atoms (1-alpha) t_w^{mu0}(w_i) + alpha t_w^{mu1}(w_i), indexed by base
/// atoms.
GeodesicPoint generalized_geodesic(const BasedPlan& plan, double alpha);

/// W_{2,plan}(mu0, mu1) = sqrt((1/N) sum_i |x_{sigma0(i)} - y_{sigma1(i)}|^2).
double pseudo_metric(const BasedPlan& plan);

/// L^2(omega) distance between the optimal maps from omega; requires both
/// maps unique. Equals pseudo_metric of the canonical plan.
double transport_metric(const ParticleMeasure& omega, const ParticleMeasure& mu0,
                        const ParticleMeasure& mu1);

struct HilbertianCheck {
  double residual = 0.0;           // identity defect for the plan-indexed cost
  double plan_pairing_sq = 0.0;    // base-indexed pairing cost to mu_alpha
  double wasserstein_sq = 0.0;     // true W2^2(omega, mu_alpha)
};

/// Checks W2^2(w, mu_a) = (1-a) W2^2(w, mu0) + a W2^2(w, mu1)
///                        - a(1-a) W_{2,plan}^2(mu0, mu1)
/// with the first term read off the base-indexed pairing. That pairing cost
/// upper-bounds the true W2^2 and generically equals it; both are reported.
HilbertianCheck check_hilbertian_identity(const BasedPlan& plan, double alpha);

/// Residual of W_{2,w}^2(nu, mu_a) = (1-a) W_{2,w}^2(nu, mu0)
///   + a W_{2,w}^2(nu, mu1) - a(1-a) W_{2,w}^2(mu0, mu1), every metric
/// evaluated through the solver's optimal maps from omega.
double check_transport_geodesic_identity(const ParticleMeasure& omega, const ParticleMeasure& nu,
                                         const ParticleMeasure& mu0, const ParticleMeasure& mu1,
                                         double alpha);

struct FourPointCheck {
  double residual = 0.0;
  double lhs = 0.0;  // W^2_{2,glued}(nu, mu_alpha)
  double rhs = 0.0;
  bool glued_projection_optimal = true;  // base-indexed pairing to mu_alpha is optimal
};

/// Glues the three optimal maps from omega into a 4-tuple family
/// (w_i, x_{s0(i)}, y_{s1(i)}, z_{sn(i)}) and evaluates the pseudo-metric
/// convexity identity on it at the given alpha.
FourPointCheck four_point_glue(const ParticleMeasure& omega, const ParticleMeasure& mu0,
                               const ParticleMeasure& mu1, const ParticleMeasure& nu, double alpha);

}  // namespace wgf
