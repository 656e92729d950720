#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wgf/errors.hpp"

namespace wgf {

/// Default relative tolerance for floating-point comparisons.
inline constexpr double kRelTolerance = 1e-9;

/// N equal-mass atoms in R^d; every atom carries mass 1/N implicitly.
/// Immutable after construction, safe to share across threads.
class ParticleMeasure {
 public:
  ParticleMeasure() = default;

  /// Takes flattened row-major coordinates (n*dim entries). Validates
  /// n >= 1, dim >= 1 and finiteness of every entry.
  ParticleMeasure(std::vector<double> coords, int dim);

  int size() const { return dim_ == 0 ? 0 : static_cast<int>(coords_.size()) / dim_; }
  int dim() const { return dim_; }

  std::span<const double> point(int i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }
  double coord(int i, int k) const { return coords_[static_cast<std::size_t>(i) * dim_ + k]; }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::vector<double> coords_;
  int dim_ = 0;
};

/// Builds a measure from a point list; atoms keep the given order.
ParticleMeasure make_measure(const std::vector<std::vector<double>>& points);

/// Convenience for 1-d measures.
ParticleMeasure make_measure_1d(const std::vector<double>& points);

/// (1/N) * sum_i |x_i|^2.
double second_moment(const ParticleMeasure& mu);

/// Uniform barycenter of the atoms.
std::vector<double> mean_point(const ParticleMeasure& mu);

/// Atom-wise translation by v (dimension must match).
ParticleMeasure translate(const ParticleMeasure& mu, std::span<const double> v);

/// Order-insensitive multiset equality up to coordinate tolerance.
bool approx_equal_as_measures(const ParticleMeasure& a, const ParticleMeasure& b,
                              double tol = kRelTolerance);

/// Identifies a deterministic instance stream. Identical seed + generator
/// produce bit-identical measures on every platform.
struct InstanceSeed {
  std::uint64_t seed = 0;
  std::string generator = "splitmix64/uniform-v1";
};

/// Deterministic 64-bit stream (splitmix64) with an explicit
/// bit-to-double mapping so sequences are platform independent.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t state_;
};

/// Derives an independent sub-stream seed (for probes, shuffles, schedules).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

/// n i.i.d.-style uniform points in [-box, box]^d from the seeded stream.
ParticleMeasure random_measure(const InstanceSeed& seed, int n, int d, double box);

/// CSV with header `dim,n` then one row of d comma-separated coordinates
/// per atom; round-trips value-exactly.
void save_csv(const ParticleMeasure& mu, std::ostream& out);
ParticleMeasure load_csv(std::istream& in);

/// 17-significant-digit formatting used for all persisted floating output.
std::string format_double(double value);

}  // namespace wgf
