#include "wgf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace wgf {

ParticleMeasure::ParticleMeasure(std::vector<double> coords, int dim) {
  if (dim < 1) raise(ErrorKind::InvalidParameter, "dimension must be >= 1");
  if (coords.empty()) raise(ErrorKind::EmptyInput, "measure needs at least one atom");
  if (coords.size() % static_cast<std::size_t>(dim) != 0)
    raise(ErrorKind::DimensionMismatch, "coordinate count not a multiple of dimension");
  for (double c : coords)
    if (!std::isfinite(c)) raise(ErrorKind::NonFiniteCoordinate, "coordinate is NaN or Inf");
  coords_ = std::move(coords);
  dim_ = dim;
}

ParticleMeasure make_measure(const std::vector<std::vector<double>>& points) {
  if (points.empty()) raise(ErrorKind::EmptyInput, "empty point list");
  const std::size_t d = points.front().size();
  if (d == 0) raise(ErrorKind::InvalidParameter, "points must have dimension >= 1");
  std::vector<double> coords;
  coords.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.size() != d) raise(ErrorKind::DimensionMismatch, "points have mixed dimensions");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return ParticleMeasure(std::move(coords), static_cast<int>(d));
}

ParticleMeasure make_measure_1d(const std::vector<double>& points) {
  if (points.empty()) raise(ErrorKind::EmptyInput, "empty point list");
  return ParticleMeasure(points, 1);
}

double second_moment(const ParticleMeasure& mu) {
  double sum = 0.0;
  for (double c : mu.coords()) sum += c * c;
  return sum / mu.size();
}

std::vector<double> mean_point(const ParticleMeasure& mu) {
  std::vector<double> m(mu.dim(), 0.0);
  for (int i = 0; i < mu.size(); ++i)
    for (int k = 0; k < mu.dim(); ++k) m[k] += mu.coord(i, k);
  for (double& c : m) c /= mu.size();
  return m;
}

ParticleMeasure translate(const ParticleMeasure& mu, std::span<const double> v) {
  if (static_cast<int>(v.size()) != mu.dim())
    raise(ErrorKind::DimensionMismatch, "translation vector dimension mismatch");
  std::vector<double> coords = mu.coords();
  for (int i = 0; i < mu.size(); ++i)
    for (int k = 0; k < mu.dim(); ++k) coords[static_cast<std::size_t>(i) * mu.dim() + k] += v[k];
  return ParticleMeasure(std::move(coords), mu.dim());
}

bool approx_equal_as_measures(const ParticleMeasure& a, const ParticleMeasure& b, double tol) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  const int n = a.size();
  const int d = a.dim();
  // Greedy multiset matching; robust against atom reordering.
  std::vector<char> used(n, 0);
  for (int i = 0; i < n; ++i) {
    bool found = false;
    for (int j = 0; j < n && !found; ++j) {
      if (used[j]) continue;
      bool close = true;
      for (int k = 0; k < d; ++k) {
        const double x = a.coord(i, k), y = b.coord(j, k);
        if (std::abs(x - y) > tol * (1.0 + std::max(std::abs(x), std::abs(y)))) {
          close = false;
          break;
        }
      }
      if (close) {
        used[j] = 1;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 rng(seed ^ (0x6a09e667f3bcc909ULL + salt * 0x9e3779b97f4a7c15ULL));
  return rng.next_u64();
}

ParticleMeasure random_measure(const InstanceSeed& seed, int n, int d, double box) {
  if (seed.generator != "splitmix64/uniform-v1")
    raise(ErrorKind::InvalidParameter, "unknown generator: " + seed.generator);
  if (n < 1) raise(ErrorKind::InvalidParameter, "atom count must be >= 1");
  if (d < 1) raise(ErrorKind::InvalidParameter, "dimension must be >= 1");
  if (!(box > 0.0)) raise(ErrorKind::InvalidParameter, "box radius must be > 0");
  SplitMix64 rng(seed.seed);
  std::vector<double> coords(static_cast<std::size_t>(n) * d);
  for (double& c : coords) c = rng.next_in(-box, box);
  return ParticleMeasure(std::move(coords), d);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void save_csv(const ParticleMeasure& mu, std::ostream& out) {
  out << mu.dim() << ',' << mu.size() << '\n';
  for (int i = 0; i < mu.size(); ++i) {
    for (int k = 0; k < mu.dim(); ++k) {
      if (k) out << ',';
      out << format_double(mu.coord(i, k));
    }
    out << '\n';
  }
}

ParticleMeasure load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) raise(ErrorKind::EmptyInput, "empty measure file");
  int dim = 0, n = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &dim, &n) != 2 || dim < 1 || n < 1)
    raise(ErrorKind::InvalidParameter, "bad measure header: " + line);
  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(n) * dim);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) raise(ErrorKind::InvalidParameter, "truncated measure file");
    std::stringstream row(line);
    std::string cell;
    int k = 0;
    while (std::getline(row, cell, ',')) {
      coords.push_back(std::strtod(cell.c_str(), nullptr));
      ++k;
    }
    if (k != dim) raise(ErrorKind::DimensionMismatch, "row has wrong arity");
  }
  return ParticleMeasure(std::move(coords), dim);
}

}  // namespace wgf
