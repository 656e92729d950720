#pragma once

#include <vector>

#include "wgf/measure.hpp"

namespace wgf {

/// Absolute tolerance on total squared-displacement cost below which two
/// assignments count as a cost tie.
inline constexpr double kTieTolerance = 1e-12;

/// Permutation-induced transport map: source atom i is sent to target atom
/// assignment[i]. `cost` is the unnormalized sum_i |x_i - y_{sigma(i)}|^2,
/// so W2^2 = cost / N.
struct TransportMap {
  ParticleMeasure source;
  ParticleMeasure target;
  std::vector<int> assignment;
  double cost = 0.0;

  double w2() const;
};

/// Uniform coupling as explicit (i, j, mass) triples. A permutation-induced
/// plan has exactly N pairs of mass 1/N.
struct TransportPlan {
  ParticleMeasure source;
  ParticleMeasure target;
  struct Pair {
    int i;
    int j;
    double mass;
  };
  std::vector<Pair> pairs;
};

TransportPlan plan_from_map(const TransportMap& map);

/// Cost-minimizing assignment for sum |x_i - y_{sigma(i)}|^2; among cost
/// ties (within kTieTolerance on total cost) returns the lexicographically
/// smallest permutation.
TransportMap optimal_map(const ParticleMeasure& mu, const ParticleMeasure& nu);

/// Like optimal_map but raises NonUniqueOptimum when a different permutation
/// matches the optimal cost within kTieTolerance.
TransportMap unique_optimal_map(const ParticleMeasure& mu, const ParticleMeasure& nu);

/// Second-best total cost minus best total cost (+inf for N = 1).
double assignment_cost_gap(const ParticleMeasure& mu, const ParticleMeasure& nu);

double wasserstein_distance(const ParticleMeasure& mu, const ParticleMeasure& nu);

/// Exhaustive minimum over all N! permutations (N <= 9) with the same
/// tie-break as optimal_map. This is the oracle the fast solver is checked
/// against; it shares no code with the Hungarian path.
TransportMap brute_force_map(const ParticleMeasure& mu, const ParticleMeasure& nu);

inline constexpr int kBruteForceMaxAtoms = 9;

/// True iff no cycle of length <= cycle_length_max over matched pairs
/// improves the quadratic cost: sum_k <x_{i_k} - x_{i_{k+1}}, y_{sigma(i_k)}>
/// >= -1e-10 for every cycle.
bool is_cyclically_monotone(const TransportMap& map, int cycle_length_max);

/// Inverse assignment; requires the map to be the unique optimum.
TransportMap compose_inverse(const TransportMap& map);

/// Unnormalized squared-displacement cost of a given pairing.
double pairing_cost(const ParticleMeasure& mu, const ParticleMeasure& nu,
                    const std::vector<int>& assignment);

}  // namespace wgf
