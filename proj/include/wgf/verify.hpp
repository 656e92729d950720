#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wgf/functional.hpp"
#include "wgf/measure.hpp"

namespace wgf {

/// One checker per displayed inequality/identity. Fixed-step exponential
/// formula lives in the flow experiment; everything else is here.
enum class CheckKind {
  SlopeChain,
  DiscreteEvi,
  TransportEvi,
  ContractionPos,
  ContractionNeg,
  IteratedContraction,
  AsymmetricRecursive,
  LinearGrowth,
  RasmussenBound,
  GenGeoConvexity,
  VaryingRecursive,
  VaryingLinearGrowth,
  VaryingRasmussen,
  VaryingExpFormula,
  EviAlongFlow,
};

const char* kind_name(CheckKind kind);
CheckKind kind_from_name(const std::string& name);
std::vector<CheckKind> all_kinds();

/// Everything needed to regenerate one check deterministically.
struct CheckInstance {
  std::uint64_t seed = 1;
  std::string functional = "potential:quadratic";
  int n_atoms = 4;
  int dim = 2;
  double box = 1.0;
  double tau = 0.25;
  double h = 0.125;  // small step; also the max step for varying_exp_formula
  int n_steps = 2;
  int m_steps = 4;
  double t = 0.5;
  double alpha = 0.5;
  int probe_times = 8;          // evi_along_flow probe count
  std::vector<double> schedule;  // explicit varying schedule; derived if empty

  std::string params_text() const;  // compact "tau=...;h=...;..." descriptor
};

struct InequalityReport {
  std::string kind;
  CheckInstance instance;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  double tolerance = 0.0;
  bool pass = false;
  bool hypothesis_ok = true;
  std::string note;
};

/// Evaluates both sides of the kind's displayed inequality from primitive
/// operations. Hypothesis failures are reported (hypothesis_ok = false),
/// never silently skipped; solver errors propagate.
InequalityReport check(CheckKind kind, const CheckInstance& instance);

struct SweepOptions {
  std::vector<CheckKind> kinds = all_kinds();
  std::vector<std::uint64_t> seeds;                // default 1..84
  std::vector<std::string> functionals;            // default: the shipped four
  std::vector<std::pair<int, int>> sizes;          // default {2x1, 4x2, 8x3}
  double box = 1.0;
  bool keep_reports = true;
};

SweepOptions default_sweep_options();

struct KindSummary {
  long evaluated = 0;
  long passed = 0;
  long failed = 0;
  long hypothesis_violated = 0;
  long errors = 0;
  double worst_slack = 0.0;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  bool any_evaluated = false;
  std::string worst_instance;
};

struct SweepSummary {
  std::map<std::string, KindSummary> by_kind;
  std::vector<InequalityReport> reports;
  // Empirical record of the exact (unconditional) contraction
  // W2(J mu, J nu) <= W2(mu, nu); data only, nothing asserted.
  long exact_contraction_holds = 0;
  long exact_contraction_total = 0;

  long failures() const;
  long evaluated() const;
};

/// Deterministic Cartesian sweep: kinds x seeds x functionals x sizes, with
/// per-instance parameters derived from the seed. Per-instance errors are
/// aggregated, not rethrown.
SweepSummary sweep(const SweepOptions& options);

/// CSV schema: kind,seed,functional,n_atoms,dim,params,lhs,rhs,slack,pass.
void save_sweep_csv(const SweepSummary& summary, std::ostream& out);

}  // namespace wgf
