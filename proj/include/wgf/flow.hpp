#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "wgf/functional.hpp"
#include "wgf/measure.hpp"
#include "wgf/proximal.hpp"

namespace wgf {

struct FlowStep {
  double time = 0.0;
  ParticleMeasure measure;
  double energy = 0.0;
  double slope = 0.0;
  double step_w2 = 0.0;  // distance to the previous trace point
};

/// Discrete gradient-flow trajectory with per-step diagnostics. steps[0]
/// holds the initial measure. For varying schedules, elapsed[m] = S_m and
/// growth[m] = P_m = prod (1 - lambda^- h_k)^{-1} over the first m steps.
struct FlowTrace {
  std::vector<FlowStep> steps;
  std::vector<double> schedule;
  std::string functional_id;
  std::uint64_t seed = 0;
  std::vector<double> elapsed;
  std::vector<double> growth;

  const ParticleMeasure& final_measure() const { return steps.back().measure; }
};

/// n certified proximal steps of size tau.
FlowTrace discrete_flow(const Functional& E, double tau, int n, const ParticleMeasure& mu0);

/// Sequential certified steps h_1, ..., h_m.
FlowTrace varying_flow(const Functional& E, const std::vector<double>& schedule,
                       const ParticleMeasure& mu0);

/// Reference continuous flow: order-4 integration of the particle system
/// xdot_i = -xi_i(mu(t)) with a step-doubling certificate of 1e-10 on the
/// endpoint positions.
class ReferenceFlow {
 public:
  ReferenceFlow(Functional E, ParticleMeasure initial, double dt = 1e-2);

  /// State at time t (t >= 0), certified by step doubling.
  ParticleMeasure at(double t) const;

 private:
  Functional energy_;
  ParticleMeasure initial_;
  double dt_;
};

/// Convenience wrapper over ReferenceFlow::at.
ParticleMeasure reference_flow(const Functional& E, const ParticleMeasure& mu0, double t,
                               double dt = 1e-2);

struct ExpFormulaRow {
  int n = 0;
  double t = 0.0;
  double error = 0.0;  // W2(J^n_{t/n} mu0, mu(t))
  double bound = 0.0;  // sqrt(3) t / sqrt(n) e^{3 lambda^- t} |dE|(mu0)
  bool pass = false;
};

struct ExpFormulaTable {
  std::vector<ExpFormulaRow> rows;
  double slope_fit = 0.0;  // least-squares slope of log error vs log n
};

/// Requires every n in n_list to satisfy n > 2 lambda^- t.
ExpFormulaTable exponential_formula_experiment(const Functional& E, const ParticleMeasure& mu0,
                                               double t, const std::vector<int>& n_list);

struct SemigroupReport {
  struct Vanishing {
    double t = 0.0;
    double distance = 0.0;  // W2(S(t) mu0, mu0)
    double bound = 0.0;     // t e^{lambda^- t} |dE|(mu0) + 1e-9
    bool pass = false;
  };
  std::vector<Vanishing> vanishing;  // S(t) mu0 -> mu0 along a dyadic grid
  double semigroup_gap = 0.0;        // W2(S(t+s) mu0, S(t) S(s) mu0)
  bool semigroup_pass = false;
  double contraction_measured = 0.0;  // W2(S(t) mu0, S(t) nu0)
  double contraction_bound = 0.0;     // e^{-lambda t} W2(mu0, nu0) + 1e-9
  bool contraction_pass = false;
  double lipschitz_measured = 0.0;  // W2(mu(t), mu(s))
  double lipschitz_bound = 0.0;     // |t-s| e^{l^- t} e^{l^- s} |dE|(mu0) + 1e-9
  bool lipschitz_pass = false;

  bool pass() const;
};

/// nu0 is the seeded comparison point for the contraction check.
SemigroupReport semigroup_checks(const Functional& E, const ParticleMeasure& mu0,
                                 const ParticleMeasure& nu0, double t, double s);

/// E(mu(0)) - E(mu(t)) - integral of |dE|^2 along the reference flow
/// (composite Simpson, nodes >= 64); nonnegative up to quadrature error.
double energy_dissipation_check(const Functional& E, const ParticleMeasure& mu0, double t, int n);

/// CSV columns: step,time,energy,slope,step_w2.
void save_trace_csv(const FlowTrace& trace, std::ostream& out);
void save_experiment_csv(const ExpFormulaTable& table, std::ostream& out);

}  // namespace wgf
