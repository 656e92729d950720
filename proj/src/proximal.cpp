#include "wgf/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "wgf/transport.hpp"

namespace wgf {

namespace {

void require_step(const Functional& E, double tau) {
  if (!(tau > 0.0)) raise(ErrorKind::InvalidParameter, "step size must be positive");
  const double lm = E.lambda_minus();
  if (lm > 0.0 && tau >= 1.0 / lm)
    raise(ErrorKind::StepTooLarge, "step must satisfy tau < 1/lambda^-");
}

// N * Phi with the pairing fixed: sum_i |y_i - x_{pi(i)}|^2 / (2 tau) + N E(y).
double objective(const Functional& E, double tau, const ParticleMeasure& mu,
                 const std::vector<int>& pi, std::span<const double> y, int n, int d) {
  double quad = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) {
      const double dz = y[static_cast<std::size_t>(i) * d + k] - mu.coord(pi[i], k);
      quad += dz * dz;
    }
  return quad / (2.0 * tau) + n * energy_raw(E, y, n, d);
}

// Damped Newton to max-norm gradient <= tol. The gradient per atom is the
// Euler-Lagrange field (y_i - x_{pi(i)})/tau + xi_i(y); the Hessian
// I/tau + Hess(N E) is positive definite for tau < 1/lambda^-.
int newton_minimize(const Functional& E, double tau, const ParticleMeasure& mu,
                    const std::vector<int>& pi, std::vector<double>& y, int n, int d,
                    int iteration_budget) {
  const int m = n * d;
  std::vector<double> xi(m);
  Eigen::VectorXd grad(m);
  const bool blockdiag = !E.has_interaction();

  int used = 0;
  while (used < iteration_budget) {
    gradient_raw(E, y, n, d, xi);
    double gmax = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) {
        const int a = i * d + k;
        grad[a] = (y[a] - mu.coord(pi[i], k)) / tau + xi[a];
        gmax = std::max(gmax, std::abs(grad[a]));
      }
    if (gmax <= kInnerGradientTol) return used;
    ++used;

    Eigen::VectorXd step(m);
    auto hess = scaled_hessian_raw(E, y, n, d);
    for (int a = 0; a < m; ++a) hess[static_cast<std::size_t>(a) * m + a] += 1.0 / tau;
    if (blockdiag) {
      // Potential-only Hessians decouple per atom.
      for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd Hi(d, d);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c)
            Hi(r, c) = hess[static_cast<std::size_t>(i * d + r) * m + (i * d + c)];
        step.segment(static_cast<Eigen::Index>(i) * d, d) =
            Hi.ldlt().solve(grad.segment(static_cast<Eigen::Index>(i) * d, d));
      }
    } else {
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> H(
          hess.data(), m, m);
      step = H.ldlt().solve(grad);
    }

    double ymax = 0.0, smax = 0.0;
    for (int a = 0; a < m; ++a) {
      ymax = std::max(ymax, std::abs(y[a]));
      smax = std::max(smax, std::abs(step[a]));
    }
    if (smax <= 1e-9 * (1.0 + ymax)) {
      // Newton decrement at rounding scale; the unit step lands within
      // round-off of the minimizer and a line search would only see noise.
      for (int a = 0; a < m; ++a) y[a] -= step[a];
      continue;
    }

    const double f0 = objective(E, tau, mu, pi, y, n, d);
    const double slack = 1e-14 * (1.0 + std::abs(f0));
    double t = 1.0;
    bool accepted = false;
    std::vector<double> trial(m);
    while (t >= 1e-12) {
      for (int a = 0; a < m; ++a) trial[a] = y[a] - t * step[a];
      if (objective(E, tau, mu, pi, trial, n, d) <= f0 + slack) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return used;  // descent blocked by round-off
    y = trial;
  }
  return used;
}

}  // namespace

double quadratic_perturbation(const Functional& E, double tau, const ParticleMeasure& mu,
                              const ParticleMeasure& nu) {
  if (!(tau > 0.0)) raise(ErrorKind::InvalidParameter, "step size must be positive");
  if (mu.size() != nu.size()) raise(ErrorKind::SizeMismatch, "measures differ in atom count");
  if (mu.dim() != nu.dim()) raise(ErrorKind::DimensionMismatch, "measures differ in dimension");
  const double w2 = wasserstein_distance(mu, nu);
  return w2 * w2 / (2.0 * tau) + energy(E, nu);
}

double el_residual(const Functional& E, double tau, const ParticleMeasure& mu,
                   const ParticleMeasure& nu) {
  if (!(tau > 0.0)) raise(ErrorKind::InvalidParameter, "step size must be positive");
  const auto back = unique_optimal_map(nu, mu);  // t_nu^mu
  const auto xi = strong_subdifferential(E, nu);
  const int n = nu.size();
  const int d = nu.dim();
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) {
      const double transport = (mu.coord(back.assignment[i], k) - nu.coord(i, k)) / tau;
      r = std::max(r, std::abs(transport - xi.vectors[static_cast<std::size_t>(i) * d + k]));
    }
  return r;
}

ProxResult proximal_step(const Functional& E, double tau, const ParticleMeasure& mu) {
  require_step(E, tau);
  const int n = mu.size();
  const int d = mu.dim();

  // nu^0 = mu, identity pairing; for small steps the assignment is stationary.
  // Phi decreases monotonically along the alternation (each inner solve and
  // each reassignment lowers it), so the current iterate is always the best.
  std::vector<double> y = mu.coords();
  std::vector<int> pi(n);
  std::iota(pi.begin(), pi.end(), 0);

  int inner_total = 0;
  const int outer_cap = 64;
  for (int outer = 0; outer < outer_cap; ++outer) {
    inner_total += newton_minimize(E, tau, mu, pi, y, n, d, kInnerIterationCap - inner_total);
    ParticleMeasure candidate(y, d);
    const double phi = quadratic_perturbation(E, tau, mu, candidate);

    // Reassign; stop once the pairing is stable.
    const auto forward = optimal_map(mu, candidate);
    std::vector<int> pi_next(n);
    for (int i = 0; i < n; ++i) pi_next[forward.assignment[i]] = i;
    const bool stable = pi_next == pi;
    pi = std::move(pi_next);
    if (!stable && inner_total < kInnerIterationCap) continue;

    const double residual = el_residual(E, tau, mu, candidate);
    if (residual <= kElGate)
      return ProxResult{mu, tau, std::move(candidate), residual, phi, inner_total};
    if (inner_total >= kInnerIterationCap) break;
  }

  raise(ErrorKind::NoConvergence, "proximal step failed the Euler-Lagrange gate");
}

double prox_split_check(const Functional& E, double tau, double h, const ParticleMeasure& mu) {
  if (!(h > 0.0) || h > tau) raise(ErrorKind::InvalidParameter, "need 0 < h <= tau");
  const auto big = proximal_step(E, tau, mu);
  const auto to_prox = optimal_map(mu, big.output);  // t_mu^{J_tau mu}

  const int n = mu.size();
  const int d = mu.dim();
  const double a = (tau - h) / tau;
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k)
      coords[static_cast<std::size_t>(i) * d + k] =
          a * big.output.coord(to_prox.assignment[i], k) + (h / tau) * mu.coord(i, k);
  const ParticleMeasure intermediate(std::move(coords), d);

  const auto small = proximal_step(E, h, intermediate);
  return wasserstein_distance(big.output, small.output);
}

}  // namespace wgf
