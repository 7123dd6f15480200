#pragma once
// Discrete canonical Poisson structure on phase space.
//
// Degrees of freedom are the packed metric components gamma_ij(x_k), i <= j,
// followed by conjugate momenta
//     p_A = w * m_ij * sqrt(det g) * g^ia g^jb pi_ab,
// with w the cell weight and m_ij the off-diagonal multiplicity (1 or 2). With
// this scaling sum_A dF/dgamma_A dG/dp_A is the quadrature of the continuum
// pairing of variational derivatives.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "adm/constraints.hpp"

namespace adm {

class DofVector {
 public:
  explicit DofVector(const TorusGrid& grid);
  DofVector(const TorusGrid& grid, std::vector<double> values);

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  /// Offset where the momentum block starts (= number of metric DOFs).
  std::size_t momentum_offset() const { return values_.size() / 2; }
  /// Position of component (i, j) at grid point k inside one block.
  std::size_t block_index(int i, int j, std::size_t point) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> metric_block() const { return values().first(momentum_offset()); }
  std::span<const double> momentum_block() const { return values().subspan(momentum_offset()); }
  double operator[](std::size_t a) const { return values_[a]; }
  double& operator[](std::size_t a) { return values_[a]; }

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

struct GradientStrategy {
  enum class Method { central_fd, higher_order_fd };
  Method method = Method::central_fd;
  /// Per-DOF step is eta * max(1, |value|).
  double eta = 1e-6;
  /// Combine steps h and h/2 to cancel the leading truncation term.
  bool richardson = false;

  std::string describe() const;
};

DofVector pack_canonical(const PhaseSpacePoint& p);

/// Throws DegenerateMetric when the metric block is not positive-definite.
PhaseSpacePoint unpack_canonical(const DofVector& v);

/// dF/dDOF_A for every A by finite differences. A step that leaves the
/// positive-definite cone is retried once at a tenth of its size.
DofVector functional_gradient(const Functional& f, const PhaseSpacePoint& p,
                              const GradientStrategy& s = {});

/// sum_A (dF/dgamma_A dG/dp_A - dG/dgamma_A dF/dp_A), fixed summation order.
double poisson_pairing(const DofVector& df, const DofVector& dg);

double poisson_bracket(const Functional& f, const Functional& g, const PhaseSpacePoint& p,
                       const GradientStrategy& s = {});

/// p -> {F, G}(p), labelled as a nested bracket.
Functional bracket_as_functional(const Functional& f, const Functional& g,
                                 const GradientStrategy& s = {});

/// |lhs - rhs| with a scale for relative comparison.
struct Residual {
  double lhs = 0.0;
  double rhs = 0.0;
  double absolute = 0.0;
  double scale = 0.0;
  double relative = 0.0;
};

/// Scales below this are treated as this, so residuals of identities whose
/// two sides both vanish are reported relative to an absolute floor.
inline constexpr double kScaleFloor = 1e-6;

Residual compare(double lhs, double rhs);

struct DewittReport {
  Residual shift_shift;  // {C_X, C_Y} vs C_[X,Y]
  Residual shift_lapse;  // {C_X, C_phi} vs C_{X.phi}
  Residual lapse_lapse;  // {C_phi, C_psi} vs C_{g^-1(phi dpsi - psi dphi)}
};

DewittReport dewitt_residuals(const PhaseSpacePoint& p, const VectorField& x, const VectorField& y,
                              const ScalarField& phi, const ScalarField& psi,
                              const GradientStrategy& s = {});

/// (phi grad psi - psi grad phi) with the gradient taken in `g`.
VectorField lapse_pair_shift(const MetricField& g, const ScalarField& phi, const ScalarField& psi);

/// ([X,Y] + phi grad psi - psi grad phi, X.psi - Y.phi) with a frozen metric.
Section frozen_section_bracket(const MetricField& frozen, const Section& a, const Section& b);

/// [a,[b,c]] + [b,[c,a]] + [c,[a,b]] under frozen_section_bracket.
Section frozen_jacobiator(const MetricField& frozen, const Section& a, const Section& b,
                          const Section& c);

/// ((L_X g^-1)(phi dpsi - psi dphi), 0).
Section jacobi_anomaly(const MetricField& frozen, const VectorField& x, const ScalarField& phi,
                       const ScalarField& psi);

/// Sup-norm distance between the jacobiator of ((X,0),(0,phi),(0,psi)) and
/// the anomaly section.
double frozen_jacobiator_residual(const MetricField& frozen, const VectorField& x,
                                  const ScalarField& phi, const ScalarField& psi);

/// Report record {relation, residual, scale, relative, grid, seed, strategy}.
nlohmann::json bracket_record(const std::string& relation, const Residual& r, const TorusGrid& grid,
                              std::uint64_t seed, const GradientStrategy& s);

}  // namespace adm
