#pragma once

#include <json.hpp>

#include "wgf/geometry.hpp"
#include "wgf/proximal.hpp"
#include "wgf/transport.hpp"
#include "wgf/verify.hpp"

namespace wgf {

inline nlohmann::json to_json(const TransportMap& map) {
  return {{"n", map.source.size()}, {"assignment", map.assignment}, {"cost", map.cost}};
}

inline nlohmann::json to_json(const TransportPlan& plan) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : plan.pairs) pairs.push_back({{"i", p.i}, {"j", p.j}, {"mass", p.mass}});
  return {{"n", plan.source.size()}, {"pairs", pairs}};
}

inline nlohmann::json to_json(const BasedPlan& plan) {
  return {{"base_size", plan.base.size()}, {"sigma0", plan.sigma0}, {"sigma1", plan.sigma1}};
}

inline nlohmann::json to_json(const ProxResult& result) {
  return {{"tau", result.tau},
          {"el_residual", result.el_residual},
          {"phi_value", result.phi_value},
          {"inner_iterations", result.inner_iterations},
          {"n", result.input.size()},
          {"dim", result.input.dim()}};
}

inline nlohmann::json to_json(const InequalityReport& report) {
  return {{"kind", report.kind},
          {"seed", report.instance.seed},
          {"functional", report.instance.functional},
          {"n_atoms", report.instance.n_atoms},
          {"dim", report.instance.dim},
          {"params", report.instance.params_text()},
          {"lhs", report.lhs},
          {"rhs", report.rhs},
          {"slack", report.slack},
          {"tolerance", report.tolerance},
          {"pass", report.pass},
          {"hypothesis_ok", report.hypothesis_ok},
          {"note", report.note}};
}

inline nlohmann::json summary_json(const SweepSummary& summary) {
  nlohmann::json kinds;
  for (const auto& [name, agg] : summary.by_kind) {
    kinds[name] = {{"evaluated", agg.evaluated},
                   {"passed", agg.passed},
                   {"failed", agg.failed},
                   {"hypothesis_violated", agg.hypothesis_violated},
                   {"errors", agg.errors},
                   {"worst_slack", agg.any_evaluated ? agg.worst_slack : 0.0},
                   {"worst_instance", agg.worst_instance}};
  }
  return {{"kinds", kinds},
          {"exact_contraction",
           {{"holds", summary.exact_contraction_holds},
            {"total", summary.exact_contraction_total}}}};
}

}  // namespace wgf
