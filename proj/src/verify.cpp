#include "wgf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "wgf/flow.hpp"
#include "wgf/geometry.hpp"
#include "wgf/proximal.hpp"
#include "wgf/transport.hpp"

namespace wgf {

namespace {

constexpr double kDefaultTolFactor = 1e-8;
constexpr double kDiscretizationTolFactor = 1e-6;  // finite differences, quadrature

struct KindInfo {
  CheckKind kind;
  const char* name;
};

constexpr KindInfo kKinds[] = {
    {CheckKind::SlopeChain, "slope_chain"},
    {CheckKind::DiscreteEvi, "discrete_evi"},
    {CheckKind::TransportEvi, "transport_evi"},
    {CheckKind::ContractionPos, "contraction_pos"},
    {CheckKind::ContractionNeg, "contraction_neg"},
    {CheckKind::IteratedContraction, "iterated_contraction"},
    {CheckKind::AsymmetricRecursive, "asymmetric_recursive"},
    {CheckKind::LinearGrowth, "linear_growth"},
    {CheckKind::RasmussenBound, "rasmussen_bound"},
    {CheckKind::GenGeoConvexity, "gen_geo_convexity"},
    {CheckKind::VaryingRecursive, "varying_recursive"},
    {CheckKind::VaryingLinearGrowth, "varying_linear_growth"},
    {CheckKind::VaryingRasmussen, "varying_rasmussen"},
    {CheckKind::VaryingExpFormula, "varying_exp_formula"},
    {CheckKind::EviAlongFlow, "evi_along_flow"},
};

double w2_sq(const ParticleMeasure& a, const ParticleMeasure& b) {
  const double w = wasserstein_distance(a, b);
  return w * w;
}

double transport_metric_sq(const ParticleMeasure& base, const ParticleMeasure& a,
                           const ParticleMeasure& b) {
  const double w = transport_metric(base, a, b);
  return w * w;
}

// Distinct deterministic measures per role.
ParticleMeasure instance_measure(const CheckInstance& inst, std::uint64_t role) {
  return random_measure({derive_seed(inst.seed, role)}, inst.n_atoms, inst.dim, inst.box);
}

std::vector<double> varying_schedule(const CheckInstance& inst) {
  if (!inst.schedule.empty()) return inst.schedule;
  SplitMix64 rng(derive_seed(inst.seed, 0xabcdULL));
  std::vector<double> schedule(inst.m_steps);
  for (double& h : schedule) h = inst.tau * rng.next_in(0.2, 1.0);
  return schedule;
}

// Partition of [0, t] with every step in (0, hmax], avoiding trailing
// slivers that would make the proximal solve ill-scaled.
std::vector<double> partition_schedule(const CheckInstance& inst, double hmax) {
  if (!inst.schedule.empty()) return inst.schedule;
  SplitMix64 rng(derive_seed(inst.seed, 0xfeedULL));
  std::vector<double> schedule;
  double remaining = inst.t;
  while (remaining > 0.0) {
    if (remaining <= hmax) {
      schedule.push_back(remaining);
      break;
    }
    double step = hmax * rng.next_in(0.5, 1.0);
    if (remaining - step < 0.1 * hmax) step = remaining / 2.0;
    schedule.push_back(step);
    remaining -= step;
  }
  return schedule;
}

void require_hypothesis(bool ok, const char* message) {
  if (!ok) raise(ErrorKind::HypothesisViolated, message);
}

void require_step_hypothesis(const Functional& E, double tau) {
  require_hypothesis(tau > 0.0, "step size must be positive");
  const double lm = E.lambda_minus();
  require_hypothesis(lm == 0.0 || tau < 1.0 / lm, "needs tau < 1/lambda^-");
}

// J_tau^k mu for k = 0..n.
std::vector<ParticleMeasure> prox_sequence(const Functional& E, double tau, int n,
                                           const ParticleMeasure& mu) {
  std::vector<ParticleMeasure> seq;
  seq.reserve(n + 1);
  seq.push_back(mu);
  for (int k = 0; k < n; ++k) seq.push_back(proximal_step(E, tau, seq.back()).output);
  return seq;
}

std::vector<ParticleMeasure> prox_sequence(const Functional& E, const std::vector<double>& steps,
                                           const ParticleMeasure& mu) {
  std::vector<ParticleMeasure> seq;
  seq.reserve(steps.size() + 1);
  seq.push_back(mu);
  for (double h : steps) seq.push_back(proximal_step(E, h, seq.back()).output);
  return seq;
}

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

Sides eval_slope_chain(const Functional& E, const CheckInstance& inst) {
  require_step_hypothesis(E, inst.tau);
  const auto mu = instance_measure(inst, 0);
  const double tau = inst.tau;
  const double lambda = E.lambda();
  const auto nu = proximal_step(E, tau, mu).output;

  const double a = tau * tau * metric_slope(E, nu) * metric_slope(E, nu);
  const double b = w2_sq(mu, nu);
  const double c =
      2.0 * tau / (1.0 + lambda * tau) * (energy(E, mu) - energy(E, nu) - b / (2.0 * tau));
  const double dd = tau * tau / ((1.0 + lambda * tau) * (1.0 + lambda * tau)) *
                    metric_slope(E, mu) * metric_slope(E, mu);

  // Report the tightest link of a <= b <= c <= d.
  Sides out;
  const double links[3][2] = {{a, b}, {b, c}, {c, dd}};
  const char* names[3] = {"slope_vs_step", "step_vs_energy", "energy_vs_slope"};
  int worst = 0;
  for (int i = 1; i < 3; ++i)
    if (links[i][1] - links[i][0] < links[worst][1] - links[worst][0]) worst = i;
  out.lhs = links[worst][0];
  out.rhs = links[worst][1];
  out.note = names[worst];
  return out;
}

Sides eval_discrete_evi(const Functional& E, const CheckInstance& inst, bool transport_form) {
  require_step_hypothesis(E, inst.tau);
  const auto mu = instance_measure(inst, 0);
  const auto nu = instance_measure(inst, 1);
  const double tau = inst.tau;
  const double lambda = E.lambda();
  const auto jmu = proximal_step(E, tau, mu).output;

  const double dist_sq =
      transport_form ? transport_metric_sq(mu, jmu, nu) : w2_sq(jmu, nu);
  Sides out;
  out.lhs = (dist_sq - w2_sq(mu, nu)) / (2.0 * tau) + 0.5 * lambda * dist_sq;
  out.rhs = energy(E, nu) - energy(E, jmu) - w2_sq(mu, jmu) / (2.0 * tau);
  return out;
}

Sides eval_contraction(const Functional& E, const CheckInstance& inst, bool positive_branch) {
  const double lambda = E.lambda();
  if (positive_branch)
    require_hypothesis(lambda > 0.0, "contraction_pos needs lambda > 0");
  else
    require_hypothesis(lambda <= 0.0, "contraction_neg needs lambda <= 0");
  require_step_hypothesis(E, inst.tau);

  const auto mu = instance_measure(inst, 0);
  const auto nu = instance_measure(inst, 1);
  const double tau = inst.tau;
  const auto jmu = proximal_step(E, tau, mu).output;
  const auto jnu = proximal_step(E, tau, nu).output;

  const double before = wasserstein_distance(mu, nu);
  const double after = wasserstein_distance(jmu, jnu);
  const double slope_mu = metric_slope(E, mu);

  Sides out;
  out.lhs = (1.0 + lambda * tau) * (1.0 + lambda * tau) * after * after;
  out.rhs = before * before + tau * tau * slope_mu * slope_mu;
  if (positive_branch)
    out.rhs += 2.0 * lambda * tau * tau * (energy(E, nu) - functional_infimum(E, inst.dim));
  out.note = after <= before ? "exact_contraction=1" : "exact_contraction=0";
  return out;
}

Sides eval_iterated_contraction(const Functional& E, const CheckInstance& inst) {
  require_step_hypothesis(E, inst.tau);
  require_hypothesis(inst.n_steps >= 1, "needs n >= 1");
  const auto mu = instance_measure(inst, 0);
  const auto nu = instance_measure(inst, 1);
  const double tau = inst.tau;
  const double lambda = E.lambda();
  const int n = inst.n_steps;

  const auto jmu = prox_sequence(E, tau, n, mu);
  const auto jnu = prox_sequence(E, tau, n, nu);
  const double factor = std::pow(1.0 + lambda * tau, -2.0 * n);
  const double slope_mu = metric_slope(E, mu);

  Sides out;
  out.lhs = w2_sq(jmu[n], jnu[n]);
  if (lambda > 0.0) {
    out.rhs = factor * w2_sq(mu, nu) +
              n * tau * tau *
                  (slope_mu * slope_mu +
                   2.0 * lambda * (energy(E, nu) - functional_infimum(E, inst.dim)));
  } else {
    out.rhs = factor * w2_sq(mu, nu) + n * tau * tau * factor * slope_mu * slope_mu;
  }
  return out;
}

Sides eval_asymmetric_recursive(const Functional& E, const CheckInstance& inst) {
  require_step_hypothesis(E, inst.tau);
  require_hypothesis(inst.h > 0.0 && inst.h <= inst.tau, "needs 0 < h <= tau");
  require_hypothesis(inst.n_steps >= 1 && inst.m_steps >= 1, "needs n, m >= 1");
  const auto mu = instance_measure(inst, 0);
  const double tau = inst.tau;
  const double h = inst.h;
  const double lm = E.lambda_minus();
  const int n = inst.n_steps;
  const int m = inst.m_steps;

  const auto coarse = prox_sequence(E, tau, n, mu);
  const auto fine = prox_sequence(E, h, m, mu);
  const double slope_mu = metric_slope(E, mu);

  Sides out;
  out.lhs = (1.0 - lm * h) * (1.0 - lm * h) * w2_sq(coarse[n], fine[m]);
  out.rhs = h / tau / (1.0 - lm * tau) * w2_sq(coarse[n - 1], fine[m - 1]) +
            (tau - h) / tau * w2_sq(fine[m - 1], coarse[n]) +
            2.0 * h * h * std::pow(1.0 - lm * h, -2.0 * m) * slope_mu * slope_mu;
  return out;
}

Sides eval_linear_growth(const Functional& E, const CheckInstance& inst) {
  require_step_hypothesis(E, inst.tau);
  require_hypothesis(inst.n_steps >= 0, "needs n >= 0");
  const auto mu = instance_measure(inst, 0);
  const int n = inst.n_steps;
  const double tau = inst.tau;
  const double lm = E.lambda_minus();
  const auto seq = prox_sequence(E, tau, n, mu);

  Sides out;
  out.lhs = wasserstein_distance(seq[n], mu);
  out.rhs = n * tau * std::pow(1.0 - tau * lm, -static_cast<double>(n)) * metric_slope(E, mu);
  return out;
}

Sides eval_rasmussen(const Functional& E, const CheckInstance& inst) {
  require_step_hypothesis(E, inst.tau);
  require_hypothesis(inst.h > 0.0 && inst.h <= inst.tau, "needs 0 < h <= tau");
  require_hypothesis(inst.n_steps >= 0 && inst.m_steps >= 0, "needs n, m >= 0");
  const auto mu = instance_measure(inst, 0);
  const double tau = inst.tau;
  const double h = inst.h;
  const double lm = E.lambda_minus();
  const int n = inst.n_steps;
  const int m = inst.m_steps;

  const auto coarse = prox_sequence(E, tau, n, mu);
  const auto fine = prox_sequence(E, h, m, mu);
  const double slope_mu = metric_slope(E, mu);

  Sides out;
  out.lhs = w2_sq(coarse[n], fine[m]);
  out.rhs = ((n * tau - m * h) * (n * tau - m * h) + tau * h * m + 2.0 * tau * tau * n) *
            std::pow(1.0 - lm * tau, -2.0 * n) * std::pow(1.0 - lm * h, -2.0 * m) * slope_mu *
            slope_mu;
  return out;
}

Sides eval_gen_geo_convexity(const Functional& E, const CheckInstance& inst) {
  require_hypothesis(inst.alpha >= 0.0 && inst.alpha <= 1.0, "needs alpha in [0,1]");
  const auto omega = instance_measure(inst, 0);
  const auto mu0 = instance_measure(inst, 1);
  const auto mu1 = instance_measure(inst, 2);
  const double alpha = inst.alpha;

  const auto plan = make_based_plan(omega, mu0, mu1);
  const auto mid = generalized_geodesic(plan, alpha);
  const double pseudo = pseudo_metric(plan);

  Sides out;
  out.lhs = energy(E, mid.measure);
  out.rhs = (1.0 - alpha) * energy(E, mu0) + alpha * energy(E, mu1) -
            alpha * (1.0 - alpha) * 0.5 * E.lambda() * pseudo * pseudo;
  return out;
}

Sides eval_varying_recursive(const Functional& E, const CheckInstance& inst) {
  require_step_hypothesis(E, inst.tau);
  require_hypothesis(inst.n_steps >= 1, "needs n >= 1");
  const auto schedule = varying_schedule(inst);
  require_hypothesis(!schedule.empty(), "needs m >= 1");
  for (double h : schedule)
    require_hypothesis(h > 0.0 && h <= inst.tau, "needs 0 < h_k <= tau");

  const auto mu = instance_measure(inst, 0);
  const double tau = inst.tau;
  const double lm = E.lambda_minus();
  const int n = inst.n_steps;
  const int m = static_cast<int>(schedule.size());
  const double hm = schedule.back();

  const auto coarse = prox_sequence(E, tau, n, mu);
  const auto fine = prox_sequence(E, schedule, mu);
  double pm = 1.0;
  for (double h : schedule) pm /= (1.0 - lm * h);
  const double slope_mu = metric_slope(E, mu);

  Sides out;
  out.lhs = (1.0 - lm * hm) * (1.0 - lm * hm) * w2_sq(coarse[n], fine[m]);
  out.rhs = hm / tau / (1.0 - lm * tau) * w2_sq(coarse[n - 1], fine[m - 1]) +
            (tau - hm) / tau * w2_sq(fine[m - 1], coarse[n]) +
            2.0 * hm * hm * pm * pm * slope_mu * slope_mu;
  return out;
}

Sides eval_varying_linear_growth(const Functional& E, const CheckInstance& inst) {
  const auto schedule = varying_schedule(inst);
  const double lm = E.lambda_minus();
  for (double h : schedule) {
    require_hypothesis(h > 0.0, "steps must be positive");
    require_hypothesis(lm == 0.0 || h < 1.0 / lm, "needs h_k < 1/lambda^-");
  }
  const auto mu = instance_measure(inst, 0);
  const auto fine = prox_sequence(E, schedule, mu);
  double sm = 0.0, pm = 1.0;
  for (double h : schedule) {
    sm += h;
    pm /= (1.0 - lm * h);
  }

  Sides out;
  out.lhs = wasserstein_distance(fine.back(), mu);
  out.rhs = metric_slope(E, mu) * sm * pm;
  return out;
}

Sides eval_varying_rasmussen(const Functional& E, const CheckInstance& inst) {
  require_step_hypothesis(E, inst.tau);
  require_hypothesis(inst.n_steps >= 0, "needs n >= 0");
  const auto schedule = varying_schedule(inst);
  for (double h : schedule)
    require_hypothesis(h > 0.0 && h <= inst.tau, "needs 0 < h_k <= tau");

  const auto mu = instance_measure(inst, 0);
  const double tau = inst.tau;
  const double lm = E.lambda_minus();
  const int n = inst.n_steps;

  const auto coarse = prox_sequence(E, tau, n, mu);
  const auto fine = prox_sequence(E, schedule, mu);
  double sm = 0.0, pm = 1.0;
  for (double h : schedule) {
    sm += h;
    pm /= (1.0 - lm * h);
  }
  const double slope_mu = metric_slope(E, mu);

  Sides out;
  out.lhs = w2_sq(coarse[n], fine.back());
  out.rhs = ((n * tau - sm) * (n * tau - sm) + tau * sm + 2.0 * tau * tau * n) *
            std::pow(1.0 - lm * tau, -2.0 * n) * pm * pm * slope_mu * slope_mu;
  return out;
}

Sides eval_varying_exp_formula(const Functional& E, const CheckInstance& inst) {
  require_hypothesis(inst.t > 0.0, "needs t > 0");
  const double lm = E.lambda_minus();
  const auto schedule = partition_schedule(inst, inst.h);
  double hmax = 0.0, total = 0.0;
  for (double h : schedule) {
    require_hypothesis(h > 0.0, "steps must be positive");
    hmax = std::max(hmax, h);
    total += h;
  }
  require_hypothesis(std::abs(total - inst.t) <= 1e-9, "schedule must partition [0, t]");
  require_hypothesis(lm == 0.0 || hmax <= 1.0 / (2.0 * lm), "needs |h| <= 1/(2 lambda^-)");

  const auto mu = instance_measure(inst, 0);
  const auto fine = prox_sequence(E, schedule, mu);
  const auto target = reference_flow(E, mu, inst.t);

  Sides out;
  out.lhs = wasserstein_distance(target, fine.back());
  out.rhs = 2.0 * std::sqrt(hmax * hmax + 3.0 * hmax * inst.t) * std::exp(4.0 * lm * inst.t) *
            metric_slope(E, mu);
  std::ostringstream note;
  note << "steps=" << schedule.size() << ";hmax=" << format_double(hmax);
  out.note = note.str();
  return out;
}

Sides eval_evi_along_flow(const Functional& E, const CheckInstance& inst) {
  require_hypothesis(inst.t > 0.0, "needs t > 0");
  require_hypothesis(inst.probe_times >= 1, "needs probe times");
  const auto mu0 = instance_measure(inst, 0);
  const auto omega = instance_measure(inst, 1);
  const double lambda = E.lambda();
  const ReferenceFlow flow(E, mu0);
  const double e_omega = energy(E, omega);

  const double delta = 1e-4;
  Sides out;
  bool first = true;
  double worst = 0.0;
  for (int k = 1; k <= inst.probe_times; ++k) {
    const double tk = inst.t * k / inst.probe_times;
    const double g_mid = w2_sq(flow.at(tk), omega);
    const double g_plus = w2_sq(flow.at(tk + delta), omega);
    const double g_minus = w2_sq(flow.at(std::max(0.0, tk - delta)), omega);
    const double derivative = (g_plus - g_minus) / (2.0 * delta);

    const double lhs = 0.5 * derivative + 0.5 * lambda * g_mid;
    const double rhs = e_omega - energy(E, flow.at(tk));
    if (first || rhs - lhs < worst) {
      worst = rhs - lhs;
      out.lhs = lhs;
      out.rhs = rhs;
      first = false;
    }
  }
  return out;
}

}  // namespace

const char* kind_name(CheckKind kind) {
  for (const auto& info : kKinds)
    if (info.kind == kind) return info.name;
  return "unknown";
}

CheckKind kind_from_name(const std::string& name) {
  for (const auto& info : kKinds)
    if (name == info.name) return info.kind;
  raise(ErrorKind::InvalidParameter, "unknown check kind: " + name);
}

std::vector<CheckKind> all_kinds() {
  std::vector<CheckKind> kinds;
  for (const auto& info : kKinds) kinds.push_back(info.kind);
  return kinds;
}

std::string CheckInstance::params_text() const {
  std::ostringstream out;
  out << "tau=" << format_double(tau) << ";h=" << format_double(h) << ";n=" << n_steps
      << ";m=" << m_steps << ";t=" << format_double(t) << ";alpha=" << format_double(alpha)
      << ";box=" << format_double(box);
  return out.str();
}

InequalityReport check(CheckKind kind, const CheckInstance& instance) {
  InequalityReport report;
  report.kind = kind_name(kind);
  report.instance = instance;

  const Functional E = parse_functional(instance.functional);
  const double tol_factor =
      kind == CheckKind::EviAlongFlow ? kDiscretizationTolFactor : kDefaultTolFactor;

  try {
    Sides sides;
    switch (kind) {
      case CheckKind::SlopeChain: sides = eval_slope_chain(E, instance); break;
      case CheckKind::DiscreteEvi: sides = eval_discrete_evi(E, instance, false); break;
      case CheckKind::TransportEvi: sides = eval_discrete_evi(E, instance, true); break;
      case CheckKind::ContractionPos: sides = eval_contraction(E, instance, true); break;
      case CheckKind::ContractionNeg: sides = eval_contraction(E, instance, false); break;
      case CheckKind::IteratedContraction: sides = eval_iterated_contraction(E, instance); break;
      case CheckKind::AsymmetricRecursive: sides = eval_asymmetric_recursive(E, instance); break;
      case CheckKind::LinearGrowth: sides = eval_linear_growth(E, instance); break;
      case CheckKind::RasmussenBound: sides = eval_rasmussen(E, instance); break;
      case CheckKind::GenGeoConvexity: sides = eval_gen_geo_convexity(E, instance); break;
      case CheckKind::VaryingRecursive: sides = eval_varying_recursive(E, instance); break;
      case CheckKind::VaryingLinearGrowth:
        sides = eval_varying_linear_growth(E, instance);
        break;
      case CheckKind::VaryingRasmussen: sides = eval_varying_rasmussen(E, instance); break;
      case CheckKind::VaryingExpFormula: sides = eval_varying_exp_formula(E, instance); break;
      case CheckKind::EviAlongFlow: sides = eval_evi_along_flow(E, instance); break;
    }
    report.lhs = sides.lhs;
    report.rhs = sides.rhs;
    report.note = sides.note;
    report.slack = sides.rhs - sides.lhs;
    report.tolerance = tol_factor * (1.0 + std::abs(sides.lhs) + std::abs(sides.rhs));
    report.pass = report.slack >= -report.tolerance;
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::HypothesisViolated) throw;
    report.hypothesis_ok = false;
    report.pass = false;
    report.note = err.what();
  }
  return report;
}

SweepOptions default_sweep_options() {
  SweepOptions options;
  options.seeds.resize(84);
  for (std::size_t i = 0; i < options.seeds.size(); ++i) options.seeds[i] = i + 1;
  options.functionals = {"potential:quadratic", "potential:cosine", "interaction:quadratic",
                         "sum:[potential:quadratic,potential:cosine]"};
  options.sizes = {{2, 1}, {4, 2}, {8, 3}};
  return options;
}

namespace {

// Draws per-instance parameters inside each inequality's hypothesis ranges.
CheckInstance draw_instance(CheckKind kind, std::uint64_t seed, const std::string& functional,
                            int n_atoms, int dim, double box) {
  CheckInstance inst;
  inst.seed = seed;
  inst.functional = functional;
  inst.n_atoms = n_atoms;
  inst.dim = dim;
  inst.box = box;

  SplitMix64 rng(derive_seed(seed, 0x1000 + static_cast<std::uint64_t>(kind)));
  inst.tau = rng.next_in(0.1, 0.45);
  inst.h = inst.tau * rng.next_in(0.25, 1.0);
  inst.n_steps = 1 + static_cast<int>(rng.next_u64() % 3);
  inst.m_steps = 1 + static_cast<int>(rng.next_u64() % 5);
  inst.t = rng.next_in(0.25, 1.0);
  inst.alpha = rng.next_unit();
  inst.probe_times = 4;
  if (kind == CheckKind::VaryingExpFormula) inst.h = rng.next_in(0.05, 0.1);
  return inst;
}

}  // namespace

long SweepSummary::failures() const {
  long f = 0;
  for (const auto& [name, s] : by_kind) f += s.failed + s.errors;
  return f;
}

long SweepSummary::evaluated() const {
  long e = 0;
  for (const auto& [name, s] : by_kind) e += s.evaluated;
  return e;
}

SweepSummary sweep(const SweepOptions& options) {
  if (options.kinds.empty()) raise(ErrorKind::InvalidParameter, "kind list must be nonempty");
  SweepSummary summary;
  for (CheckKind kind : options.kinds) summary.by_kind[kind_name(kind)];  // stable ordering

  for (CheckKind kind : options.kinds) {
    auto& agg = summary.by_kind[kind_name(kind)];
    for (std::uint64_t seed : options.seeds)
      for (const auto& functional : options.functionals)
        for (const auto& [n_atoms, dim] : options.sizes) {
          const CheckInstance inst =
              draw_instance(kind, seed, functional, n_atoms, dim, options.box);
          try {
            InequalityReport report = check(kind, inst);
            if (!report.hypothesis_ok) {
              ++agg.hypothesis_violated;
            } else {
              ++agg.evaluated;
              if (report.pass)
                ++agg.passed;
              else
                ++agg.failed;
              if (!agg.any_evaluated || report.slack < agg.worst_slack) {
                agg.worst_slack = report.slack;
                agg.worst_lhs = report.lhs;
                agg.worst_rhs = report.rhs;
                agg.any_evaluated = true;
                agg.worst_instance = "seed=" + std::to_string(seed) + ";functional=" + functional +
                                     ";" + inst.params_text();
              }
              if (report.note.rfind("exact_contraction=", 0) == 0) {
                ++summary.exact_contraction_total;
                if (report.note.back() == '1') ++summary.exact_contraction_holds;
              }
            }
            if (options.keep_reports) summary.reports.push_back(std::move(report));
          } catch (const Error& err) {
            ++agg.errors;
            if (options.keep_reports) {
              InequalityReport failed;
              failed.kind = kind_name(kind);
              failed.instance = inst;
              failed.pass = false;
              failed.note = err.what();
              summary.reports.push_back(std::move(failed));
            }
          }
        }
  }
  return summary;
}

namespace {

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

void save_sweep_csv(const SweepSummary& summary, std::ostream& out) {
  out << "kind,seed,functional,n_atoms,dim,params,lhs,rhs,slack,pass\n";
  for (const auto& r : summary.reports) {
    out << r.kind << ',' << r.instance.seed << ',' << csv_quote(r.instance.functional) << ','
        << r.instance.n_atoms << ',' << r.instance.dim << ',' << csv_quote(r.instance.params_text())
        << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
        << format_double(r.slack) << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

}  // namespace wgf
