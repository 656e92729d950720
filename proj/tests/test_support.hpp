#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "wgf/measure.hpp"

namespace wgft {

inline wgf::ParticleMeasure seeded(std::uint64_t seed, int n, int d, double box = 1.0) {
  return wgf::random_measure({seed, "splitmix64/uniform-v1"}, n, d, box);
}

// Deterministic Fisher-Yates atom shuffle.
inline wgf::ParticleMeasure shuffled(const wgf::ParticleMeasure& mu, std::uint64_t seed) {
  wgf::SplitMix64 rng(seed);
  std::vector<int> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  for (int i = mu.size() - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<double> coords;
  coords.reserve(mu.coords().size());
  for (int i : order)
    for (int k = 0; k < mu.dim(); ++k) coords.push_back(mu.coord(i, k));
  return wgf::ParticleMeasure(std::move(coords), mu.dim());
}

}  // namespace wgft
