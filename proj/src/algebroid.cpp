#include "adm/algebroid.hpp"

#include <algorithm>

#include "adm/geometry.hpp"

namespace adm {

double TangentPath::max_abs() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.max_abs());
  return m;
}

Section section_bracket(const MetricField& g0, const Section& a, const Section& b) {
  return frozen_section_bracket(g0, a, b);
}

TangentPath anchor(const MetricPath& path, const Section& a, std::span<const double> t_samples,
                   const ExtensionOptions& opts) {
  const SpacetimeVectorField v = gaussian_extend(path, a, t_samples, opts);
  TangentPath out;
  out.times = v.times;
  for (std::size_t j = 0; j < v.times.size(); ++j) {
    const double t = v.times[j];
    SymTensorField alpha = lie_derivative_sym2(v.shift[j], path.tensor_at(t));
    alpha += v.lapse[j] * path_derivative(path, t, 1);
    alpha *= -1.0;
    out.samples.push_back(std::move(alpha));
  }
  return out;
}

std::vector<double> default_anchor_samples(const MetricPath& path) {
  std::vector<double> t;
  for (int j = -4; j <= 4; ++j) t.push_back(path.window() * j / 4.0);
  return t;
}

bool anchor_kernel_test(const MetricPath& path, const Section& a, double tol) {
  return anchor(path, a, default_anchor_samples(path)).max_abs() <= tol;
}

Residual bracket_constraint_compat(const PhaseSpacePoint& p, const Section& a, const Section& b,
                                   const GradientStrategy& s) {
  const double lhs = poisson_bracket(constraint_functional(a, "_a"), constraint_functional(b, "_b"), p, s);
  const double rhs = smeared_constraint(section_bracket(p.gamma(), a, b), p);
  return compare(lhs, rhs);
}

std::vector<Residual> bracket_constraint_compat_table(const PhaseSpacePoint& p,
                                                      std::span<const Section> lhs,
                                                      std::span<const Section> rhs,
                                                      const GradientStrategy& s) {
  std::vector<DofVector> gl, gr;
  for (const Section& a : lhs) gl.push_back(functional_gradient(constraint_functional(a, "_a"), p, s));
  for (const Section& b : rhs) gr.push_back(functional_gradient(constraint_functional(b, "_b"), p, s));
  std::vector<Residual> out;
  out.reserve(lhs.size() * rhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      const double rb = smeared_constraint(section_bracket(p.gamma(), lhs[i], rhs[j]), p);
      out.push_back(compare(poisson_pairing(gl[i], gr[j]), rb));
    }
  }
  return out;
}

Section section_jacobiator(const MetricField& g, const Section& a, const Section& b,
                           const Section& c) {
  return frozen_jacobiator(g, a, b, c);
}

double spacetime_bracket_agreement(const MetricPath& path, const Section& a, const Section& b) {
  const SplitVector split = gaussian_bracket_split(path, a, b);
  const Section expected = section_bracket(path.metric_at(0.0), a, b);
  return std::max((split.tangential - expected.shift).max_abs(),
                  (split.normal - expected.lapse).max_abs());
}

}  // namespace adm
