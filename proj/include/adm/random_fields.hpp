#pragma once
// Seeded band-limited test fields.
//
// Each component is a finite trigonometric sum over wavevectors with
// |k_i| <= kmax, coefficients uniform in [-1, 1] drawn from mt19937_64, scaled
// by amplitude / sqrt(#terms). Bits depend only on (seed, component, grid).

#include <cstdint>
#include <variant>

#include "adm/fields.hpp"

namespace adm {

enum class FieldKind { scalar, vector, sym2, metric };

using AnyField = std::variant<ScalarField, VectorField, SymTensorField, MetricField>;

/// splitmix64 of (seed, stream); used to give independent fields distinct seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// kind == metric returns delta + amplitude * (random sym2) and throws
/// DegenerateMetric when that fails the positive-definiteness test.
AnyField random_band_limited(const TorusGrid& grid, std::uint64_t seed, int kmax, FieldKind kind,
                             double amplitude);

ScalarField random_scalar(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude);
VectorField random_vector(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude);
SymTensorField random_sym2(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude,
                           Variance variance = Variance::covariant);
MetricField random_metric(const TorusGrid& grid, std::uint64_t seed, int kmax, double amplitude);

}  // namespace adm
