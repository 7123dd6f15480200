#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "adm/simd/kernels.hpp"

namespace adm {

/// Uniform periodic grid on the flat torus [0, 2pi)^d.
///
/// Points are stored row-major with axis 0 slowest: the point with indices
/// (i0, i1[, i2]) sits at offset ((i0 * n) + i1) * n + i2. Copies are cheap
/// and share the differentiation matrix.
class TorusGrid {
 public:
  /// dim in {2, 3}; n even and >= 8.
  TorusGrid(int dim, int n);

  int dim() const { return impl_->dim; }
  int n() const { return impl_->n; }
  double spacing() const { return impl_->spacing; }
  double cell_weight() const { return impl_->weight; }
  std::size_t size() const { return impl_->size; }

  /// Integer frequencies 0, 1, ..., n/2-1, -n/2, ..., -1 in FFT order.
  std::span<const int> wavenumbers() const { return impl_->wavenumbers; }

  /// Periodic spectral differentiation matrix (Nyquist mode differentiates to 0).
  std::span<const double> diff_matrix() const { return impl_->diff; }

  simd::AxisPlan axis_plan(int axis) const;

  /// Coordinate of `point` along `axis`.
  double coordinate(std::size_t point, int axis) const;
  std::size_t index(std::array<int, 3> idx) const;
  std::array<int, 3> unravel(std::size_t point) const;

  /// Number of independent symmetric 2-tensor components, d(d+1)/2.
  int sym_components() const { return dim() * (dim() + 1) / 2; }

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.impl_ == b.impl_ || (a.dim() == b.dim() && a.n() == b.n());
  }

 private:
  struct Impl {
    int dim;
    int n;
    double spacing;
    double weight;
    std::size_t size;
    std::vector<int> wavenumbers;
    std::vector<double> diff;
    std::vector<double> diff_t;
  };
  std::shared_ptr<const Impl> impl_;
};

/// Packed index of the symmetric component (i, j), i <= j after sorting.
/// d=2: 00 01 11; d=3: 00 01 02 11 12 22.
constexpr int sym_index(int dim, int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i * dim - i * (i - 1) / 2 + (j - i);
}

/// 1 on the diagonal, 2 off it.
constexpr int sym_multiplicity(int i, int j) { return i == j ? 1 : 2; }

}  // namespace adm
