#include "adm/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "adm/errors.hpp"

namespace adm {

TorusGrid::TorusGrid(int dim, int n) {
  if (dim != 2 && dim != 3) {
    throw InvalidArgument("torus dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (n < 8 || n % 2 != 0) {
    throw InvalidArgument("points per axis must be even and >= 8, got " + std::to_string(n));
  }
  auto impl = std::make_shared<Impl>();
  impl->dim = dim;
  impl->n = n;
  impl->spacing = 2.0 * std::numbers::pi / n;
  impl->weight = std::pow(impl->spacing, dim);
  impl->size = static_cast<std::size_t>(std::pow(n, dim));
  impl->wavenumbers.resize(n);
  for (int k = 0; k < n; ++k) impl->wavenumbers[k] = k < n / 2 ? k : k - n;

  impl->diff.assign(static_cast<std::size_t>(n) * n, 0.0);
  impl->diff_t.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int m = i - j;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const double v = 0.5 * sign / std::tan(0.5 * m * impl->spacing);
      impl->diff[i * n + j] = v;
      impl->diff_t[j * n + i] = v;
    }
  }
  impl_ = std::move(impl);
}

simd::AxisPlan TorusGrid::axis_plan(int axis) const {
  std::size_t outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= n();
  for (int a = axis + 1; a < dim(); ++a) inner *= n();
  return {impl_->diff.data(), impl_->diff_t.data(), static_cast<std::size_t>(n()), outer, inner};
}

std::array<int, 3> TorusGrid::unravel(std::size_t point) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(point % n());
    point /= n();
  }
  return idx;
}

double TorusGrid::coordinate(std::size_t point, int axis) const {
  return unravel(point)[axis] * spacing();
}

std::size_t TorusGrid::index(std::array<int, 3> idx) const {
  std::size_t p = 0;
  for (int a = 0; a < dim(); ++a) {
    const int i = ((idx[a] % n()) + n()) % n();
    p = p * n() + i;
  }
  return p;
}

}  // namespace adm
