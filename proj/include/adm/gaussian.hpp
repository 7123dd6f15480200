#pragma once
// Gaussian normal form g = gamma(t) - dt^2 near the slice t = 0, gaussian
// extension of (shift, lapse) data, and the identities it satisfies.
//
// Spacetime tensors are handled as (spatial, mixed, tt) blocks; no 4D grid is
// built. Time derivatives of metric paths are exact (polynomial paths); time
// derivatives of sampled vector fields use 5-point finite-difference weights.

#include <span>
#include <vector>

#include <json.hpp>

#include "adm/constraints.hpp"

namespace adm {

/// gamma(t) = sum_k t^k gamma_k on the window [-T, T].
class MetricPath {
 public:
  /// gamma_0 must be positive-definite (DegenerateMetric otherwise). If some of
  /// the 33 uniform samples of [-T, T] are not positive-definite, T is halved
  /// until they all are; window() reports the final value.
  MetricPath(std::vector<SymTensorField> coefficients, double half_window);

  static MetricPath constant(const MetricField& g, double half_window);

  const std::vector<SymTensorField>& coefficients() const { return coeffs_; }
  const TorusGrid& grid() const { return coeffs_.front().grid(); }
  double window() const { return half_window_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Throws OutsideWindow when |t| > window().
  void require_in_window(double t) const;

  SymTensorField tensor_at(double t) const;
  MetricField metric_at(double t) const;

  /// Coefficient-wise sum; the window is the smaller of the two.
  friend MetricPath operator+(const MetricPath& a, const MetricPath& b);

 private:
  std::vector<SymTensorField> coeffs_;
  double half_window_;
};

inline constexpr int kWindowSamples = 33;

/// d^order gamma / dt^order at t, exact.
SymTensorField path_derivative(const MetricPath& path, double t, int order);

/// K = -1/2 d gamma/dt.
SymTensorField second_fundamental_form(const MetricPath& path, double t);

/// v = X(t) + phi(t) n sampled at strictly increasing times containing 0.
struct SpacetimeVectorField {
  std::vector<double> times;
  std::vector<VectorField> shift;
  std::vector<ScalarField> lapse;

  SpacetimeVectorField(std::vector<double> t, std::vector<VectorField> x, std::vector<ScalarField> phi);

  std::size_t zero_index() const;
};

/// Options for the extension ODE. A non-positive max_step means "min gap / 8".
struct ExtensionOptions {
  double max_step = 0.0;
};

/// Solves dX/dt = grad_{gamma(t)} phi_0, dphi/dt = 0 with classical RK4 from
/// t = 0 to every sample. The lapse is copied, not integrated.
SpacetimeVectorField gaussian_extend(const MetricPath& path, const Section& a,
                                     std::span<const double> t_samples,
                                     const ExtensionOptions& opts = {});

/// sup |X(t) - X_0 - t grad_{gamma_0} phi_0|.
double first_order_defect(const MetricPath& path, const Section& a, double t,
                          const ExtensionOptions& opts = {});

struct GaussianityResidual {
  double shift = 0.0;  // max_t |dX/dt - grad_{gamma(t)} phi|
  double lapse = 0.0;  // max_t |dphi/dt|
  double max() const { return shift > lapse ? shift : lapse; }
};

/// Needs at least 5 samples; InvalidArgument otherwise.
GaussianityResidual gaussianity_residual(const MetricPath& path, const SpacetimeVectorField& v);

/// Blocks of L_v g for g = gamma(t) - dt^2.
struct SpacetimeSymmetric {
  SymTensorField spatial;  // (L_v g)_ij
  OneFormField mixed;      // (L_v g)_it
  ScalarField tt;          // (L_v g)_tt
};

/// Full coordinate formula (L_v g)_{mu nu} = v.d g + g d v + g d v at time t;
/// time derivatives of v come from the nearest 5 samples.
SpacetimeSymmetric spacetime_lie_derivative(const MetricPath& path, const SpacetimeVectorField& v,
                                            double t);

/// Tangential and normal parts of the spacetime bracket [v, w] of the gaussian
/// extensions of a and b at t = 0, from sampled extensions.
struct SplitVector {
  VectorField tangential;
  ScalarField normal;
};

/// Sample spacing used by the spacetime-bracket routes.
inline constexpr double kBracketSampleSpacing = 0.02;

SplitVector gaussian_bracket_split(const MetricPath& path, const Section& a, const Section& b,
                                   double spacing = kBracketSampleSpacing);

struct NonGaussianity {
  double identity_residual = 0.0;  // |LHS - RHS| sup over components
  double witness = 0.0;            // |LHS|, generically nonzero
};

/// LHS = i_n L_[v,w] g at t = 0 via spacetime brackets and Lie derivatives of
/// the sampled extensions; RHS = i_{grad phi} L_Y g - i_{grad psi} L_X g
/// + 2 i_{phi grad psi - psi grad phi} K from slice data alone.
NonGaussianity nongaussian_bracket_residual(const MetricPath& path, const Section& a,
                                            const Section& b,
                                            double spacing = kBracketSampleSpacing);

/// Weights w_j with f^(order)(z) ~ sum_j w_j f(x_j) (Fornberg's recursion).
std::vector<double> fd_weights(double z, std::span<const double> nodes, int order);

nlohmann::json to_json(const MetricPath& path);
MetricPath metric_path_from_json(const nlohmann::json& j);

}  // namespace adm
