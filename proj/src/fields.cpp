#include "adm/fields.hpp"

#include <cmath>

#include "adm/simd/kernels.hpp"

namespace adm {

void require_same_grid(const TorusGrid& a, const TorusGrid& b) {
  if (!(a == b)) throw GridMismatch();
}

ScalarField::ScalarField(TorusGrid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

ScalarField::ScalarField(TorusGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("scalar field value count does not match grid size");
  }
}

ScalarField ScalarField::constant(const TorusGrid& grid, double c) {
  return ScalarField(grid, std::vector<double>(grid.size(), c));
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  simd::active().add(size(), data(), o.data(), data());
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  simd::active().sub(size(), data(), o.data(), data());
  return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
  require_same_grid(grid_, o.grid_);
  simd::active().mul(size(), data(), o.data(), data());
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  simd::active().scale(size(), a, data(), data());
  return *this;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid_, b.grid_);
  ScalarField out(a.grid_);
  simd::active().mul(a.size(), a.data(), b.data(), out.data());
  return out;
}

void fma_into(ScalarField& acc, const ScalarField& a, const ScalarField& b) {
  require_same_grid(acc.grid(), a.grid());
  require_same_grid(acc.grid(), b.grid());
  simd::active().fma(acc.size(), a.data(), b.data(), acc.data());
}

void fma_into(ScalarField& acc, double alpha, const ScalarField& a, const ScalarField& b) {
  require_same_grid(acc.grid(), a.grid());
  require_same_grid(acc.grid(), b.grid());
  simd::active().scaled_fma(acc.size(), alpha, a.data(), b.data(), acc.data());
}

void axpy_into(ScalarField& acc, double alpha, const ScalarField& x) {
  require_same_grid(acc.grid(), x.grid());
  simd::active().axpy(acc.size(), alpha, x.data(), acc.data());
}

SymTensorField::SymTensorField(const TorusGrid& grid, Variance variance)
    : grid_(grid), variance_(variance), comps_(grid.sym_components(), ScalarField(grid)) {}

SymTensorField::SymTensorField(Variance variance, std::vector<ScalarField> comps)
    : grid_(comps.empty() ? throw InvalidArgument("symmetric tensor needs components")
                          : comps.front().grid()),
      variance_(variance),
      comps_(std::move(comps)) {
  if (static_cast<int>(comps_.size()) != grid_.sym_components()) {
    throw InvalidArgument("symmetric tensor needs d(d+1)/2 components");
  }
  for (const auto& c : comps_) require_same_grid(grid_, c.grid());
}

SymTensorField SymTensorField::identity(const TorusGrid& grid, Variance variance) {
  SymTensorField t(grid, variance);
  for (int i = 0; i < grid.dim(); ++i) t(i, i) = ScalarField::constant(grid, 1.0);
  return t;
}

double SymTensorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.max_abs());
  return m;
}

void SymTensorField::require_compatible(const SymTensorField& o) const {
  require_same_grid(grid_, o.grid_);
  if (variance_ != o.variance_) throw InvalidArgument("symmetric tensor variance mismatch");
}

SymTensorField& SymTensorField::operator+=(const SymTensorField& o) {
  require_compatible(o);
  for (std::size_t s = 0; s < comps_.size(); ++s) comps_[s] += o.comps_[s];
  return *this;
}

SymTensorField& SymTensorField::operator-=(const SymTensorField& o) {
  require_compatible(o);
  for (std::size_t s = 0; s < comps_.size(); ++s) comps_[s] -= o.comps_[s];
  return *this;
}

SymTensorField& SymTensorField::operator*=(double a) {
  for (auto& c : comps_) c *= a;
  return *this;
}

SymTensorField operator*(const ScalarField& s, SymTensorField t) {
  for (auto& c : t.comps_) c *= s;
  return t;
}

bool is_positive_definite(const SymTensorField& g) {
  const int d = g.dim();
  for (std::size_t p = 0; p < g.grid().size(); ++p) {
    const double a = g(0, 0)[p];
    if (!(a > 0.0)) return false;
    const double m2 = a * g(1, 1)[p] - g(0, 1)[p] * g(0, 1)[p];
    if (!(m2 > 0.0)) return false;
    if (d == 3) {
      const double b = g(0, 1)[p], c = g(0, 2)[p];
      const double dd = g(1, 1)[p], e = g(1, 2)[p], f = g(2, 2)[p];
      const double m3 = a * (dd * f - e * e) - b * (b * f - e * c) + c * (b * e - dd * c);
      if (!(m3 > 0.0)) return false;
    }
  }
  return true;
}

MetricField::MetricField(SymTensorField g) : g_(std::move(g)) {
  if (g_.variance() != Variance::covariant) {
    throw InvalidArgument("a metric must be a covariant tensor");
  }
  if (!is_positive_definite(g_)) {
    throw DegenerateMetric("metric is not positive-definite at every grid point");
  }
}

MetricField MetricField::flat(const TorusGrid& grid) {
  return MetricField(SymTensorField::identity(grid, Variance::covariant));
}

ChristoffelField::ChristoffelField(const TorusGrid& grid)
    : grid_(grid), comps_(static_cast<std::size_t>(grid.dim()) * grid.sym_components(), ScalarField(grid)) {}

double ChristoffelField::max_abs() const {
  double m = 0.0;
  for (const auto& c : comps_) m = std::max(m, c.max_abs());
  return m;
}

}  // namespace adm
