#pragma once
// Trivialized Lie algebroid of slice evolutions: bracket of constant sections,
// anchor by gaussian extension, and its compatibility with the constraint
// brackets.

#include <span>
#include <vector>

#include "adm/canonical.hpp"
#include "adm/gaussian.hpp"

namespace adm {

/// Time-sampled spatial symmetric tensors on a metric path's window.
struct TangentPath {
  std::vector<double> times;
  std::vector<SymTensorField> samples;

  double max_abs() const;
};

/// ([X,Y] + phi grad psi - psi grad phi, X.psi - Y.phi) at the metric g0.
/// Same formula as frozen_section_bracket.
Section section_bracket(const MetricField& g0, const Section& a, const Section& b);

/// alpha(t) = -(L_{X(t)} gamma(t) + phi dgamma/dt) for the gaussian extension
/// (X(t), phi) of a.
TangentPath anchor(const MetricPath& path, const Section& a, std::span<const double> t_samples,
                   const ExtensionOptions& opts = {});

/// Nine uniform samples of the path's window, including 0.
std::vector<double> default_anchor_samples(const MetricPath& path);

/// True iff the anchor of a vanishes to `tol` at every default sample.
bool anchor_kernel_test(const MetricPath& path, const Section& a, double tol);

/// {C_a, C_b}(p) against C_{[a,b]}(p) with the bracket taken at p's metric.
Residual bracket_constraint_compat(const PhaseSpacePoint& p, const Section& a, const Section& b,
                                   const GradientStrategy& s = {});

/// bracket_constraint_compat for every pair (lhs[i], rhs[j]), row-major, with
/// one gradient per section.
std::vector<Residual> bracket_constraint_compat_table(const PhaseSpacePoint& p,
                                                      std::span<const Section> lhs,
                                                      std::span<const Section> rhs,
                                                      const GradientStrategy& s = {});

/// Jacobiator of section_bracket with the metric held at g.
Section section_jacobiator(const MetricField& g, const Section& a, const Section& b,
                           const Section& c);

/// Sup-norm distance between the t = 0 split of the spacetime bracket of the
/// gaussian extensions and section_bracket(gamma(0), a, b).
double spacetime_bracket_agreement(const MetricPath& path, const Section& a, const Section& b);

}  // namespace adm
