#include "adm/random_fields.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace adm {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ull + stream + 0x632BE59BD9B4E019ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

double uniform_pm1(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

ScalarField synthesize(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude) {
  const int d = grid.dim();
  std::vector<std::array<int, 3>> waves;
  for (int a = -kmax; a <= kmax; ++a) {
    for (int b = -kmax; b <= kmax; ++b) {
      if (d == 2) {
        waves.push_back({a, b, 0});
        continue;
      }
      for (int c = -kmax; c <= kmax; ++c) waves.push_back({a, b, c});
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<double> ca(waves.size()), sa(waves.size());
  for (std::size_t w = 0; w < waves.size(); ++w) {
    ca[w] = uniform_pm1(rng);
    sa[w] = uniform_pm1(rng);
  }
  const double norm = amplitude / std::sqrt(2.0 * static_cast<double>(waves.size()));
  ScalarField out(grid);
  if (amplitude == 0.0) return out;
  const double h = grid.spacing();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto idx = grid.unravel(p);
    double v = 0.0;
    for (std::size_t w = 0; w < waves.size(); ++w) {
      const double phase = h * (waves[w][0] * idx[0] + waves[w][1] * idx[1] + waves[w][2] * idx[2]);
      v += ca[w] * std::cos(phase) + sa[w] * std::sin(phase);
    }
    out[p] = norm * v;
  }
  return out;
}

void require_band(const TorusGrid& grid, int kmax) {
  if (kmax < 0 || 2 * kmax >= grid.n()) {
    throw InvalidArgument("kmax must satisfy 0 <= kmax < n/2, got " + std::to_string(kmax));
  }
}

}  // namespace

ScalarField random_scalar(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude) {
  require_band(grid, kmax);
  return synthesize(grid, derive_seed(seed, 0), kmax, amplitude);
}

VectorField random_vector(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude) {
  require_band(grid, kmax);
  std::vector<ScalarField> c;
  for (int i = 0; i < grid.dim(); ++i) {
    c.push_back(synthesize(grid, derive_seed(seed, 100 + i), kmax, amplitude));
  }
  return VectorField(std::move(c));
}

SymTensorField random_sym2(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude,
                           Variance variance) {
  require_band(grid, kmax);
  std::vector<ScalarField> c;
  for (int s = 0; s < grid.sym_components(); ++s) {
    c.push_back(synthesize(grid, derive_seed(seed, 200 + s), kmax, amplitude));
  }
  return SymTensorField(variance, std::move(c));
}

MetricField random_metric(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude) {
  SymTensorField g = SymTensorField::identity(grid, Variance::covariant);
  if (amplitude != 0.0) g += random_sym2(grid, seed, kmax, amplitude);
  if (!is_positive_definite(g)) {
    throw DegenerateMetric("random metric with amplitude " + std::to_string(amplitude) +
                           " is not positive-definite; lower the amplitude");
  }
  return MetricField(std::move(g));
}

AnyField random_band_limited(const TorusGrid& grid, std::uint64_t seed, int kmax, FieldKind kind,
                             double amplitude) {
  switch (kind) {
    case FieldKind::scalar:
      return random_scalar(grid, seed, kmax, amplitude);
    case FieldKind::vector:
      return random_vector(grid, seed, kmax, amplitude);
    case FieldKind::sym2:
      return random_sym2(grid, seed, kmax, amplitude);
    case FieldKind::metric:
      return random_metric(grid, seed, kmax, amplitude);
  }
  throw InvalidArgument("unknown field kind");
}

}  // namespace adm
