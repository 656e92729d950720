#pragma once

#include <span>
#include <string>
#include <vector>

#include "wgf/measure.hpp"

namespace wgf {

enum class TermKind {
  QuadraticPotential,    // coef * |x|^2 / 2, lambda = +coef
  CosinePotential,       // coef * cos(x_1), lambda = -coef
  QuadraticInteraction,  // kernel coef * |z|^2 / 2, lambda = 0
};

/// Particle energy built from closed-form terms. Potential terms evaluate as
/// (1/N) sum_i V(x_i), interaction terms as (1/(2N^2)) sum_{ij} W(x_i - x_j).
/// The convexity modulus along generalized geodesics is the sum of the term
/// moduli. Immutable; all evaluations are pure.
class Functional {
 public:
  struct Term {
    TermKind kind;
    double coef;
  };

  Functional() = default;  // the zero energy

  static Functional zero() { return Functional(); }
  static Functional potential_quadratic(double coef = 1.0);
  static Functional potential_cosine(double coef = 1.0);
  static Functional interaction_quadratic(double coef = 1.0);
  static Functional sum(const std::vector<Functional>& parts);

  bool is_zero() const { return terms_.empty(); }
  bool has_interaction() const;
  const std::vector<Term>& terms() const { return terms_; }

  /// Convexity modulus lambda along generalized geodesics.
  double lambda() const;

  /// max(0, -lambda); step sizes must stay below 1/lambda_minus.
  double lambda_minus() const;

  /// Canonical config-file spelling, e.g. "potential:quadratic" or
  /// "sum:[potential:quadratic,potential:cosine]".
  std::string id() const;

 private:
  std::vector<Term> terms_;
};

/// Parses "zero", "potential:quadratic[@coef]", "potential:cosine[@coef]",
/// "interaction:quadratic[@coef]" or "sum:[item,item,...]".
Functional parse_functional(const std::string& text);

/// Vector field with one d-vector per atom of `base` (an element of
/// L^2(base)).
struct SubdifferentialField {
  ParticleMeasure base;
  std::vector<double> vectors;  // n x d, row-major

  std::span<const double> at(int i) const {
    return {vectors.data() + static_cast<std::size_t>(i) * base.dim(),
            static_cast<std::size_t>(base.dim())};
  }
};

double energy(const Functional& E, const ParticleMeasure& mu);

/// Canonical gradient field: potential -> grad V(x_i); interaction ->
/// (1/N) sum_j grad W(x_i - x_j); sums add pointwise. For these smooth
/// energies this is a strong subdifferential.
SubdifferentialField strong_subdifferential(const Functional& E, const ParticleMeasure& mu);

/// |dE|(mu), computed as the L^2(mu) norm of the canonical gradient field.
double metric_slope(const Functional& E, const ParticleMeasure& mu);

/// Worst (minimal) slack of E(nu) - E(mu) - <xi, t_mu^nu - id>_{L^2(mu)}
/// - (lambda/2) W2^2(mu, nu) over the probes. A valid subdifferential keeps
/// this >= -1e-9.
double check_subdifferential(const Functional& E, const ParticleMeasure& mu,
                             const SubdifferentialField& xi,
                             const std::vector<ParticleMeasure>& probes);

/// For F = W2^2(omega, .): slack of the subdifferential inequality for the
/// field 2(t_w^mu - id) with modulus 2, evaluated in the transport metric
/// pairing. The identity is exact, so the returned worst absolute slack
/// stays within 1e-9. Returns the signed slack of largest magnitude.
double check_w2_squared_subdifferential(const ParticleMeasure& omega, const ParticleMeasure& mu,
                                        const std::vector<ParticleMeasure>& probes);

/// Reindexes a field over mu through the optimal assignment from omega,
/// yielding xi o t_w^mu as a field over omega.
SubdifferentialField compose_to_base(const SubdifferentialField& xi, const ParticleMeasure& omega);

/// Slack of E(nu) - E(mu) - <eta, t_w^nu - t_w^mu>_{L^2(omega)}
/// - (lambda/2) W_{2,omega}^2(mu, nu) over the probes (minimum).
double check_subdifferential_in_base(const Functional& E, const ParticleMeasure& omega,
                                     const ParticleMeasure& mu, const SubdifferentialField& eta,
                                     const std::vector<ParticleMeasure>& probes);

/// inf E over particle measures; analytic for the quadratic potential,
/// damped-Newton minimization (gradient certificate 1e-12) otherwise.
/// Requires lambda > 0 or an everywhere-bounded-below shipped form.
double functional_infimum(const Functional& E, int dim);

// Raw-buffer evaluation used by the solvers; coords is n x d row-major.
double energy_raw(const Functional& E, std::span<const double> coords, int n, int d);
void gradient_raw(const Functional& E, std::span<const double> coords, int n, int d,
                  std::span<double> out);
/// Dense Hessian of N * E as a function of atom positions, (n*d)^2 row-major.
std::vector<double> scaled_hessian_raw(const Functional& E, std::span<const double> coords, int n,
                                       int d);

}  // namespace wgf
