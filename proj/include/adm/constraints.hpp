#pragma once
// Vacuum ADM constraints and their smeared scalar forms.

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "adm/fields.hpp"

namespace adm {

/// A point (gamma, pi) of the cotangent bundle of metrics; pi is a covariant
/// tensor (not a density).
class PhaseSpacePoint {
 public:
  PhaseSpacePoint(MetricField gamma, SymTensorField pi);

  /// (delta, 0): the flat vacuum point.
  static PhaseSpacePoint flat(const TorusGrid& grid);

  const MetricField& gamma() const { return gamma_; }
  const SymTensorField& pi() const { return pi_; }
  const TorusGrid& grid() const { return gamma_.grid(); }

 private:
  MetricField gamma_;
  SymTensorField pi_;
};

/// Shift vector field and lapse function.
struct Section {
  VectorField shift;
  ScalarField lapse;

  Section(VectorField x, ScalarField phi);
  static Section zero(const TorusGrid& grid);
  static Section of_shift(VectorField x);
  static Section of_lapse(ScalarField phi);

  const TorusGrid& grid() const { return lapse.grid(); }
  double max_abs() const { return std::max(shift.max_abs(), lapse.max_abs()); }

  Section& operator+=(const Section& o);
  Section& operator-=(const Section& o);
  Section& operator*=(double a);
  friend Section operator+(Section a, const Section& b) { return a += b; }
  friend Section operator-(Section a, const Section& b) { return a -= b; }
  friend Section operator*(double a, Section s) { return s *= a; }
};

/// Structured name of a functional, kept so nested brackets print symbolically.
struct FunctionalLabel {
  enum class Kind { section, product, nested_bracket, custom };
  Kind kind = Kind::custom;
  std::string text;
  std::vector<std::shared_ptr<const FunctionalLabel>> children;

  std::string describe() const;
};

/// Real-valued function on phase space. Evaluators must be pure: they are
/// called concurrently during gradient evaluation.
class Functional {
 public:
  using Evaluator = std::function<double(const PhaseSpacePoint&)>;

  Functional(FunctionalLabel label, Evaluator eval);

  double operator()(const PhaseSpacePoint& p) const { return (*eval_)(p); }
  const FunctionalLabel& label() const { return *label_; }
  std::shared_ptr<const FunctionalLabel> label_ptr() const { return label_; }

 private:
  std::shared_ptr<const FunctionalLabel> label_;
  std::shared_ptr<const Evaluator> eval_;
};

/// C_mom^i = -2 g^ij (div_g pi)_j.
VectorField momentum_constraint(const PhaseSpacePoint& p);

/// C_en = -R(g) + Tr(pi^2) - (Tr pi)^2 / (d - 1).
ScalarField energy_constraint(const PhaseSpacePoint& p);

/// Integral of g(X, C_mom) + phi C_en against the metric volume.
double smeared_constraint(const Section& a, const PhaseSpacePoint& p);

/// p -> smeared_constraint(a, p), labelled as a section constraint.
Functional constraint_functional(Section a, std::string name = {});

}  // namespace adm
