#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "adm/errors.hpp"
#include "adm/grid.hpp"

namespace adm {

class ScalarField {
 public:
  explicit ScalarField(TorusGrid grid);
  ScalarField(TorusGrid grid, std::vector<double> values);

  static ScalarField constant(const TorusGrid& grid, double c);

  /// Samples f(x, y, z) at every grid point (z = 0 for d = 2).
  template <class F>
  static ScalarField sample(const TorusGrid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const auto idx = grid.unravel(p);
      const double h = grid.spacing();
      out.values_[p] = f(idx[0] * h, idx[1] * h, idx[2] * h);
    }
    return out;
  }

  template <class F>
  ScalarField map(F&& f) const {
    ScalarField out(grid_);
    for (std::size_t p = 0; p < values_.size(); ++p) out.values_[p] = f(values_[p]);
    return out;
  }

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }
  double operator[](std::size_t p) const { return values_[p]; }
  double& operator[](std::size_t p) { return values_[p]; }

  double max_abs() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(const ScalarField& o);
  ScalarField& operator*=(double a);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double a, ScalarField f) { return f *= a; }
  friend ScalarField operator-(ScalarField f) { return f *= -1.0; }

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

void require_same_grid(const TorusGrid& a, const TorusGrid& b);

/// acc += a * b
void fma_into(ScalarField& acc, const ScalarField& a, const ScalarField& b);
/// acc += alpha * a * b
void fma_into(ScalarField& acc, double alpha, const ScalarField& a, const ScalarField& b);
/// acc += alpha * x
void axpy_into(ScalarField& acc, double alpha, const ScalarField& x);

/// d scalar components; Tag distinguishes vectors from one-forms.
template <class Tag>
class RankOneField {
 public:
  explicit RankOneField(const TorusGrid& grid)
      : grid_(grid), comps_(grid.dim(), ScalarField(grid)) {}
  explicit RankOneField(std::vector<ScalarField> comps) : grid_(checked_grid(comps)), comps_(std::move(comps)) {}

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  const ScalarField& operator[](int i) const { return comps_[i]; }
  ScalarField& operator[](int i) { return comps_[i]; }
  const std::vector<ScalarField>& components() const { return comps_; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : comps_) m = std::max(m, c.max_abs());
    return m;
  }

  RankOneField& operator+=(const RankOneField& o) {
    for (int i = 0; i < dim(); ++i) comps_[i] += o.comps_[i];
    return *this;
  }
  RankOneField& operator-=(const RankOneField& o) {
    for (int i = 0; i < dim(); ++i) comps_[i] -= o.comps_[i];
    return *this;
  }
  RankOneField& operator*=(double a) {
    for (auto& c : comps_) c *= a;
    return *this;
  }
  friend RankOneField operator+(RankOneField a, const RankOneField& b) { return a += b; }
  friend RankOneField operator-(RankOneField a, const RankOneField& b) { return a -= b; }
  friend RankOneField operator*(double a, RankOneField f) { return f *= a; }
  friend RankOneField operator*(const ScalarField& s, RankOneField f) {
    for (auto& c : f.comps_) c *= s;
    return f;
  }

 private:
  static TorusGrid checked_grid(const std::vector<ScalarField>& comps) {
    if (comps.empty()) throw InvalidArgument("rank-one field needs components");
    const TorusGrid& g = comps.front().grid();
    if (static_cast<int>(comps.size()) != g.dim()) {
      throw InvalidArgument("rank-one field needs exactly d components");
    }
    for (const auto& c : comps) require_same_grid(g, c.grid());
    return g;
  }

  TorusGrid grid_;
  std::vector<ScalarField> comps_;
};

struct VectorTag;
struct OneFormTag;
using VectorField = RankOneField<VectorTag>;
using OneFormField = RankOneField<OneFormTag>;

enum class Variance { covariant, contravariant };

/// Symmetric 2-tensor; only the i <= j components are stored.
class SymTensorField {
 public:
  SymTensorField(const TorusGrid& grid, Variance variance);
  SymTensorField(Variance variance, std::vector<ScalarField> comps);

  /// Kronecker delta with the given variance.
  static SymTensorField identity(const TorusGrid& grid, Variance variance);

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  Variance variance() const { return variance_; }
  const ScalarField& operator()(int i, int j) const { return comps_[sym_index(dim(), i, j)]; }
  ScalarField& operator()(int i, int j) { return comps_[sym_index(dim(), i, j)]; }
  const std::vector<ScalarField>& components() const { return comps_; }
  std::vector<ScalarField>& components() { return comps_; }

  double max_abs() const;

  SymTensorField& operator+=(const SymTensorField& o);
  SymTensorField& operator-=(const SymTensorField& o);
  SymTensorField& operator*=(double a);
  friend SymTensorField operator+(SymTensorField a, const SymTensorField& b) { return a += b; }
  friend SymTensorField operator-(SymTensorField a, const SymTensorField& b) { return a -= b; }
  friend SymTensorField operator*(double a, SymTensorField t) { return t *= a; }
  friend SymTensorField operator*(const ScalarField& s, SymTensorField t);

 private:
  void require_compatible(const SymTensorField& o) const;

  TorusGrid grid_;
  Variance variance_;
  std::vector<ScalarField> comps_;
};

/// Covariant symmetric tensor that is positive-definite at every grid point.
class MetricField {
 public:
  /// Throws DegenerateMetric if any leading principal minor is <= 0 anywhere,
  /// InvalidArgument if `g` is not covariant.
  explicit MetricField(SymTensorField g);

  static MetricField flat(const TorusGrid& grid);

  const SymTensorField& tensor() const { return g_; }
  const TorusGrid& grid() const { return g_.grid(); }
  int dim() const { return g_.dim(); }
  const ScalarField& operator()(int i, int j) const { return g_(i, j); }

 private:
  SymTensorField g_;
};

/// True iff every leading principal minor is positive at every point.
bool is_positive_definite(const SymTensorField& g);

/// Gamma^k_ij with the lower pair stored symmetrically.
class ChristoffelField {
 public:
  explicit ChristoffelField(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  const ScalarField& operator()(int k, int i, int j) const {
    return comps_[k * grid_.sym_components() + sym_index(dim(), i, j)];
  }
  ScalarField& operator()(int k, int i, int j) {
    return comps_[k * grid_.sym_components() + sym_index(dim(), i, j)];
  }
  double max_abs() const;

 private:
  TorusGrid grid_;
  std::vector<ScalarField> comps_;
};

}  // namespace adm
