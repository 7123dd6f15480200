#pragma once
// Spectral tensor calculus on the flat torus.
//
// Every derivative is the exact derivative of the band-limited trigonometric
// interpolant, so identities that are exact in the continuum hold to rounding
// on inputs whose products stay below the Nyquist frequency.

#include <utility>

#include "adm/fields.hpp"

namespace adm {

/// d/dx^axis of the trigonometric interpolant of f.
ScalarField spectral_derivative(const ScalarField& f, int axis);

/// Pointwise inverse, contravariant result.
SymTensorField metric_inverse(const MetricField& g);

ScalarField metric_determinant(const MetricField& g);

/// Quantities derived from a metric that most operators need together.
struct MetricGeometry {
  SymTensorField inverse;
  ScalarField det;
  ScalarField sqrt_det;
  ChristoffelField christoffel;
};

MetricGeometry analyze(const MetricField& g);

/// Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij).
ChristoffelField christoffel(const MetricField& g);
ChristoffelField christoffel(const MetricField& g, const SymTensorField& inverse);

/// Ricci scalar with R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj + Gamma Gamma terms,
/// R = g^jl R^i_jil. Positive on round spheres.
ScalarField scalar_curvature(const MetricField& g);
ScalarField scalar_curvature(const MetricField& g, const MetricGeometry& geo);

/// The differential d(phi).
OneFormField differential(const ScalarField& phi);

/// T^ij a_j for contravariant T.
VectorField raise(const SymTensorField& inverse, const OneFormField& a);

/// g_ij X^j.
OneFormField lower(const MetricField& g, const VectorField& x);

/// g^ij d_j phi.
VectorField grad_spatial(const MetricField& g, const ScalarField& phi);

/// (div pi)_j = g^ik nabla_i pi_kj for covariant pi.
OneFormField divergence_sym(const MetricField& g, const SymTensorField& pi);
OneFormField divergence_sym(const MetricGeometry& geo, const SymTensorField& pi);

/// X^i d_i phi.
ScalarField directional_derivative(const VectorField& x, const ScalarField& phi);

/// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Lie derivative of a symmetric 2-tensor of either variance.
SymTensorField lie_derivative_sym2(const VectorField& x, const SymTensorField& t);

/// (Tr pi, Tr pi^2) with pi viewed as the endomorphism g^ik pi_kj.
std::pair<ScalarField, ScalarField> traces(const MetricField& g, const SymTensorField& pi);
std::pair<ScalarField, ScalarField> traces(const SymTensorField& inverse, const SymTensorField& pi);

/// Integral of f sqrt(det g) by the uniform rule.
double integrate_density(const MetricField& g, const ScalarField& f);
double integrate_density(const ScalarField& sqrt_det, const ScalarField& f);

/// Plain sum of f times the cell weight.
double integrate(const ScalarField& f);

/// T(a, .) for covariant T and a vector a: the one-form T_ij a^i.
OneFormField contract_first(const SymTensorField& t, const VectorField& a);

}  // namespace adm
