#pragma once
// Pointwise and along-axis arithmetic kernels used by every field operation.
//
// Two implementations exist: a portable scalar reference and an AVX2/FMA
// variant compiled in its own translation unit. `active()` picks one at first
// use from the CPU feature bits; VERIFY_SIMD=scalar forces the reference path.
// The two tables are tested for equivalence, not bit-identity: the AVX2
// variant contracts multiply-adds. `sum` is the exception and is bit-identical
// across variants (same four-lane accumulation order, no FMA).

#include <cstddef>
#include <string_view>

namespace adm::simd {

struct AxisPlan {
  const double* matrix;      // n x n, row-major, matrix[i*n+j]
  const double* transposed;  // transposed[j*n+i] == matrix[i*n+j]
  std::size_t n;
  std::size_t outer;  // product of extents before the axis
  std::size_t inner;  // product of extents after the axis
};

struct Kernels {
  std::string_view name;

  /// y[i] = a * x[i]
  void (*scale)(std::size_t n, double a, const double* x, double* y);
  /// y[i] += a * x[i]
  void (*axpy)(std::size_t n, double a, const double* x, double* y);
  /// z[i] = x[i] + y[i]
  void (*add)(std::size_t n, const double* x, const double* y, double* z);
  /// z[i] = x[i] - y[i]
  void (*sub)(std::size_t n, const double* x, const double* y, double* z);
  /// z[i] = x[i] * y[i]
  void (*mul)(std::size_t n, const double* x, const double* y, double* z);
  /// z[i] += x[i] * y[i]
  void (*fma)(std::size_t n, const double* x, const double* y, double* z);
  /// z[i] += a * x[i] * y[i]
  void (*scaled_fma)(std::size_t n, double a, const double* x, const double* y,
                     double* z);
  /// Four-lane accumulation, lanes combined as (l0+l1)+(l2+l3), then tail.
  double (*sum)(std::size_t n, const double* x);
  /// out = matrix applied along one axis of a row-major block.
  void (*apply_along_axis)(const AxisPlan& plan, const double* in, double* out);
  /// Inverse and determinant of pointwise symmetric 2x2 matrices given as
  /// component planes (00, 01, 11).
  void (*sym_inverse2)(std::size_t n, const double* const* g, double* const* inv,
                       double* det);
  /// Same for 3x3; planes ordered (00, 01, 02, 11, 12, 22).
  void (*sym_inverse3)(std::size_t n, const double* const* g, double* const* inv,
                       double* det);
};

const Kernels& scalar_kernels();

/// nullptr when the AVX2 translation unit was not built.
const Kernels* avx2_kernels();

/// True when the running CPU reports both AVX2 and FMA.
bool cpu_has_avx2_fma();

/// Kernel table selected for this process.
const Kernels& active();

}  // namespace adm::simd
