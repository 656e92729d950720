#include "wgf/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "wgf/transport.hpp"

namespace wgf {

namespace {

void require_coef(double coef) {
  if (!(coef > 0.0) || !std::isfinite(coef))
    raise(ErrorKind::InvalidParameter, "term coefficient must be positive and finite");
}

std::string term_id(const Functional::Term& t) {
  std::string base;
  switch (t.kind) {
    case TermKind::QuadraticPotential: base = "potential:quadratic"; break;
    case TermKind::CosinePotential: base = "potential:cosine"; break;
    case TermKind::QuadraticInteraction: base = "interaction:quadratic"; break;
  }
  if (t.coef != 1.0) base += "@" + format_double(t.coef);
  return base;
}

}  // namespace

Functional Functional::potential_quadratic(double coef) {
  require_coef(coef);
  Functional f;
  f.terms_.push_back({TermKind::QuadraticPotential, coef});
  return f;
}

Functional Functional::potential_cosine(double coef) {
  require_coef(coef);
  Functional f;
  f.terms_.push_back({TermKind::CosinePotential, coef});
  return f;
}

Functional Functional::interaction_quadratic(double coef) {
  require_coef(coef);
  Functional f;
  f.terms_.push_back({TermKind::QuadraticInteraction, coef});
  return f;
}

Functional Functional::sum(const std::vector<Functional>& parts) {
  Functional f;
  for (const auto& p : parts) f.terms_.insert(f.terms_.end(), p.terms_.begin(), p.terms_.end());
  return f;
}

bool Functional::has_interaction() const {
  for (const auto& t : terms_)
    if (t.kind == TermKind::QuadraticInteraction) return true;
  return false;
}

double Functional::lambda() const {
  double l = 0.0;
  for (const auto& t : terms_) {
    switch (t.kind) {
      case TermKind::QuadraticPotential: l += t.coef; break;
      case TermKind::CosinePotential: l -= t.coef; break;
      case TermKind::QuadraticInteraction: break;
    }
  }
  return l;
}

double Functional::lambda_minus() const { return std::max(0.0, -lambda()); }

std::string Functional::id() const {
  if (terms_.empty()) return "zero";
  if (terms_.size() == 1) return term_id(terms_.front());
  std::string out = "sum:[";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) out += ',';
    out += term_id(terms_[i]);
  }
  return out + "]";
}

Functional parse_functional(const std::string& text) {
  auto strip = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  const std::string spec = strip(text);
  if (spec == "zero") return Functional::zero();

  if (spec.rfind("sum:[", 0) == 0) {
    if (spec.back() != ']') raise(ErrorKind::InvalidParameter, "unterminated sum: " + text);
    std::vector<Functional> parts;
    std::stringstream items(spec.substr(5, spec.size() - 6));
    std::string item;
    while (std::getline(items, item, ','))
      if (!strip(item).empty()) parts.push_back(parse_functional(item));
    if (parts.empty()) raise(ErrorKind::InvalidParameter, "empty sum: " + text);
    return Functional::sum(parts);
  }

  std::string head = spec;
  double coef = 1.0;
  if (const auto at = spec.find('@'); at != std::string::npos) {
    head = strip(spec.substr(0, at));
    char* end = nullptr;
    coef = std::strtod(spec.c_str() + at + 1, &end);
    if (end == spec.c_str() + at + 1)
      raise(ErrorKind::InvalidParameter, "bad coefficient in: " + text);
  }
  if (head == "potential:quadratic") return Functional::potential_quadratic(coef);
  if (head == "potential:cosine") return Functional::potential_cosine(coef);
  if (head == "interaction:quadratic") return Functional::interaction_quadratic(coef);
  raise(ErrorKind::InvalidParameter, "unknown functional: " + text);
}

double energy_raw(const Functional& E, std::span<const double> coords, int n, int d) {
  double total = 0.0;
  for (const auto& t : E.terms()) {
    switch (t.kind) {
      case TermKind::QuadraticPotential: {
        double s = 0.0;
        for (double c : coords) s += c * c;
        total += t.coef * 0.5 * s / n;
        break;
      }
      case TermKind::CosinePotential: {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += std::cos(coords[static_cast<std::size_t>(i) * d]);
        total += t.coef * s / n;
        break;
      }
      case TermKind::QuadraticInteraction: {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j) {
            double sq = 0.0;
            for (int k = 0; k < d; ++k) {
              const double dz = coords[static_cast<std::size_t>(i) * d + k] -
                                coords[static_cast<std::size_t>(j) * d + k];
              sq += dz * dz;
            }
            s += sq;  // both ordered pairs, each kernel value sq/2
          }
        total += t.coef * 0.5 * s / (static_cast<double>(n) * n);
        break;
      }
    }
  }
  return total;
}

void gradient_raw(const Functional& E, std::span<const double> coords, int n, int d,
                  std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : E.terms()) {
    switch (t.kind) {
      case TermKind::QuadraticPotential:
        for (std::size_t a = 0; a < coords.size(); ++a) out[a] += t.coef * coords[a];
        break;
      case TermKind::CosinePotential:
        for (int i = 0; i < n; ++i)
          out[static_cast<std::size_t>(i) * d] -=
              t.coef * std::sin(coords[static_cast<std::size_t>(i) * d]);
        break;
      case TermKind::QuadraticInteraction: {
        // xi_i = (coef/N) sum_j (x_i - x_j) = coef (x_i - mean)
        std::vector<double> mean(d, 0.0);
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < d; ++k) mean[k] += coords[static_cast<std::size_t>(i) * d + k];
        for (int k = 0; k < d; ++k) mean[k] /= n;
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < d; ++k)
            out[static_cast<std::size_t>(i) * d + k] +=
                t.coef * (coords[static_cast<std::size_t>(i) * d + k] - mean[k]);
        break;
      }
    }
  }
}

std::vector<double> scaled_hessian_raw(const Functional& E, std::span<const double> coords, int n,
                                       int d) {
  const int m = n * d;
  std::vector<double> H(static_cast<std::size_t>(m) * m, 0.0);
  auto at = [&](int r, int c) -> double& { return H[static_cast<std::size_t>(r) * m + c]; };
  for (const auto& t : E.terms()) {
    switch (t.kind) {
      case TermKind::QuadraticPotential:
        for (int a = 0; a < m; ++a) at(a, a) += t.coef;
        break;
      case TermKind::CosinePotential:
        for (int i = 0; i < n; ++i)
          at(i * d, i * d) -= t.coef * std::cos(coords[static_cast<std::size_t>(i) * d]);
        break;
      case TermKind::QuadraticInteraction:
        // Hess(N E) v = coef (v_i - mean(v)).
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const double w = t.coef * ((i == j ? 1.0 : 0.0) - 1.0 / n);
            for (int k = 0; k < d; ++k) at(i * d + k, j * d + k) += w;
          }
        break;
    }
  }
  return H;
}

double energy(const Functional& E, const ParticleMeasure& mu) {
  return energy_raw(E, mu.coords(), mu.size(), mu.dim());
}

SubdifferentialField strong_subdifferential(const Functional& E, const ParticleMeasure& mu) {
  SubdifferentialField field{mu, std::vector<double>(mu.coords().size())};
  gradient_raw(E, mu.coords(), mu.size(), mu.dim(), field.vectors);
  return field;
}

double metric_slope(const Functional& E, const ParticleMeasure& mu) {
  std::vector<double> g(mu.coords().size());
  gradient_raw(E, mu.coords(), mu.size(), mu.dim(), g);
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s / mu.size());
}

double check_subdifferential(const Functional& E, const ParticleMeasure& mu,
                             const SubdifferentialField& xi,
                             const std::vector<ParticleMeasure>& probes) {
  const int n = mu.size();
  const int d = mu.dim();
  const double lambda = E.lambda();
  const double e_mu = energy(E, mu);
  double worst = 0.0;
  bool first = true;
  for (const auto& nu : probes) {
    const auto map = unique_optimal_map(mu, nu);
    double inner = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k)
        inner += xi.vectors[static_cast<std::size_t>(i) * d + k] *
                 (nu.coord(map.assignment[i], k) - mu.coord(i, k));
    inner /= n;
    const double w2_sq = map.cost / n;
    const double slack = energy(E, nu) - e_mu - inner - 0.5 * lambda * w2_sq;
    if (first || slack < worst) worst = slack;
    first = false;
  }
  return worst;
}

double check_w2_squared_subdifferential(const ParticleMeasure& omega, const ParticleMeasure& mu,
                                        const std::vector<ParticleMeasure>& probes) {
  const int n = omega.size();
  const int d = omega.dim();
  const auto to_mu = unique_optimal_map(omega, mu);
  const double f_mu = to_mu.cost / n;
  double worst = 0.0;
  for (const auto& nu : probes) {
    const auto to_nu = unique_optimal_map(omega, nu);
    const double f_nu = to_nu.cost / n;
    double inner = 0.0, metric_sq = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) {
        const double tm = mu.coord(to_mu.assignment[i], k);
        const double tn = nu.coord(to_nu.assignment[i], k);
        inner += 2.0 * (tm - omega.coord(i, k)) * (tn - tm);
        metric_sq += (tn - tm) * (tn - tm);
      }
    inner /= n;
    metric_sq /= n;
    const double slack = f_nu - f_mu - inner - metric_sq;
    if (std::abs(slack) > std::abs(worst)) worst = slack;
  }
  return worst;
}

SubdifferentialField compose_to_base(const SubdifferentialField& xi, const ParticleMeasure& omega) {
  const auto map = unique_optimal_map(omega, xi.base);
  const int n = omega.size();
  const int d = omega.dim();
  SubdifferentialField out{omega, std::vector<double>(static_cast<std::size_t>(n) * d)};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k)
      out.vectors[static_cast<std::size_t>(i) * d + k] =
          xi.vectors[static_cast<std::size_t>(map.assignment[i]) * d + k];
  return out;
}

double check_subdifferential_in_base(const Functional& E, const ParticleMeasure& omega,
                                     const ParticleMeasure& mu, const SubdifferentialField& eta,
                                     const std::vector<ParticleMeasure>& probes) {
  const int n = omega.size();
  const int d = omega.dim();
  const double lambda = E.lambda();
  const auto to_mu = unique_optimal_map(omega, mu);
  const double e_mu = energy(E, mu);
  double worst = 0.0;
  bool first = true;
  for (const auto& nu : probes) {
    const auto to_nu = unique_optimal_map(omega, nu);
    double inner = 0.0, metric_sq = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) {
        const double diff = nu.coord(to_nu.assignment[i], k) - mu.coord(to_mu.assignment[i], k);
        inner += eta.vectors[static_cast<std::size_t>(i) * d + k] * diff;
        metric_sq += diff * diff;
      }
    inner /= n;
    metric_sq /= n;
    const double slack = energy(E, nu) - e_mu - inner - 0.5 * lambda * metric_sq;
    if (first || slack < worst) worst = slack;
    first = false;
  }
  return worst;
}

double functional_infimum(const Functional& E, int dim) {
  if (E.is_zero()) return 0.0;

  // Interaction terms vanish at coincident atoms and are nonnegative, so the
  // infimum is attained by stacking every atom at the potential minimizer.
  bool pure_quadratic = true;
  bool has_potential = false;
  for (const auto& t : E.terms()) {
    if (t.kind == TermKind::CosinePotential) pure_quadratic = false;
    if (t.kind != TermKind::QuadraticInteraction) has_potential = true;
  }
  if (!has_potential) return 0.0;
  if (pure_quadratic) return 0.0;

  if (!(E.lambda() > 0.0))
    raise(ErrorKind::HypothesisViolated, "infimum certified only for lambda > 0");

  // Damped Newton on the one-atom energy from a few deterministic starts.
  const Functional& f = E;
  double best = std::numeric_limits<double>::infinity();
  SplitMix64 rng(0x5eedULL);
  for (int start = 0; start < 3; ++start) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim);
    if (start > 0)
      for (int k = 0; k < dim; ++k) x[k] = rng.next_in(-2.0, 2.0);
    std::vector<double> buf(dim), grad(dim);
    for (int iter = 0; iter < 200; ++iter) {
      for (int k = 0; k < dim; ++k) buf[k] = x[k];
      gradient_raw(f, buf, 1, dim, grad);
      double gnorm = 0.0;
      for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
      if (gnorm <= 1e-12) break;
      const auto hflat = scaled_hessian_raw(f, buf, 1, dim);
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> H(
          hflat.data(), dim, dim);
      Eigen::Map<const Eigen::VectorXd> g(grad.data(), dim);
      Eigen::VectorXd step = H.ldlt().solve(g);
      double t = 1.0;
      const double f0 = energy_raw(f, buf, 1, dim);
      while (t > 1e-12) {
        Eigen::VectorXd y = x - t * step;
        std::vector<double> ybuf(y.data(), y.data() + dim);
        if (energy_raw(f, ybuf, 1, dim) <= f0) break;
        t *= 0.5;
      }
      x -= t * step;
    }
    std::vector<double> xb(x.data(), x.data() + dim);
    best = std::min(best, energy_raw(f, xb, 1, dim));
  }
  return best;
}

}  // namespace wgf
