#pragma once

#include "wgf/functional.hpp"
#include "wgf/measure.hpp"

namespace wgf {

/// Max-norm Euler-Lagrange residual accepted as a certificate.
inline constexpr double kElGate = 1e-10;
/// Inner solver drives the fixed-assignment gradient below this max-norm.
inline constexpr double kInnerGradientTol = 1e-12;
inline constexpr int kInnerIterationCap = 10000;

struct ProxResult {
  ParticleMeasure input;
  double tau = 0.0;
  ParticleMeasure output;
  double el_residual = 0.0;
  double phi_value = 0.0;
  int inner_iterations = 0;
};

/// Phi(tau, mu; nu) = W2^2(mu, nu) / (2 tau) + E(nu).
double quadratic_perturbation(const Functional& E, double tau, const ParticleMeasure& mu,
                              const ParticleMeasure& nu);

/// Minimizes the quadratic perturbation over N-atom measures by alternating
/// damped Newton in atom positions (fixed pairing) with reassignment, and
/// certifies the result through the Euler-Lagrange residual
/// max_i |(t_nu^mu(y_i) - y_i)/tau - xi_i(nu)| <= 1e-10.
ProxResult proximal_step(const Functional& E, double tau, const ParticleMeasure& mu);

/// Max-norm residual of (t_nu^mu - id)/tau = xi over the atoms of nu.
double el_residual(const Functional& E, double tau, const ParticleMeasure& mu,
                   const ParticleMeasure& nu);

/// W2 distance between J_tau mu and J_h applied to the geodesic point
/// ((tau-h)/tau t_mu^{J_tau mu} + (h/tau) id) # mu; small when the
/// large/small time-step identity holds.
double prox_split_check(const Functional& E, double tau, double h, const ParticleMeasure& mu);

}  // namespace wgf
