#include "adm/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adm/geometry.hpp"
#include "adm/snapshot.hpp"

namespace adm {

MetricPath::MetricPath(std::vector<SymTensorField> coefficients, double half_window)
    : coeffs_(std::move(coefficients)), half_window_(half_window) {
  if (coeffs_.empty()) throw InvalidArgument("metric path needs at least one coefficient");
  if (!(half_window_ > 0.0)) throw InvalidArgument("metric path window must be positive");
  for (const auto& c : coeffs_) {
    require_same_grid(coeffs_.front().grid(), c.grid());
    if (c.variance() != Variance::covariant) {
      throw InvalidArgument("metric path coefficients must be covariant");
    }
  }
  if (!is_positive_definite(coeffs_.front())) {
    throw DegenerateMetric("metric path is not positive-definite at t = 0");
  }
  for (int attempt = 0; attempt < 60; ++attempt) {
    bool ok = true;
    for (int s = 0; s < kWindowSamples && ok; ++s) {
      const double t = -half_window_ + 2.0 * half_window_ * s / (kWindowSamples - 1);
      ok = is_positive_definite(tensor_at(t));
    }
    if (ok) return;
    half_window_ *= 0.5;
  }
  throw DegenerateMetric("could not find a positive-definite window for the metric path");
}

MetricPath MetricPath::constant(const MetricField& g, double half_window) {
  return MetricPath({g.tensor()}, half_window);
}

void MetricPath::require_in_window(double t) const {
  if (!(std::abs(t) <= half_window_)) {
    throw OutsideWindow("t = " + std::to_string(t) + " outside the window [-" +
                        std::to_string(half_window_) + ", " + std::to_string(half_window_) + "]");
  }
}

SymTensorField MetricPath::tensor_at(double t) const {
  SymTensorField out = coeffs_.back();
  for (int k = degree() - 1; k >= 0; --k) {
    out *= t;
    out += coeffs_[k];
  }
  return out;
}

MetricField MetricPath::metric_at(double t) const {
  require_in_window(t);
  return MetricField(tensor_at(t));
}

MetricPath operator+(const MetricPath& a, const MetricPath& b) {
  const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  std::vector<SymTensorField> sum;
  for (std::size_t k = 0; k < n; ++k) {
    SymTensorField c(a.grid(), Variance::covariant);
    if (k < a.coeffs_.size()) c += a.coeffs_[k];
    if (k < b.coeffs_.size()) c += b.coeffs_[k];
    sum.push_back(std::move(c));
  }
  return MetricPath(std::move(sum), std::min(a.window(), b.window()));
}

SymTensorField path_derivative(const MetricPath& path, double t, int order) {
  if (order < 1) throw InvalidArgument("path derivative order must be >= 1");
  path.require_in_window(t);
  const auto& c = path.coefficients();
  SymTensorField out(path.grid(), Variance::covariant);
  // d^m/dt^m t^k = k!/(k-m)! t^(k-m)
  for (int k = path.degree(); k >= order; --k) {
    double factor = 1.0;
    for (int i = 0; i < order; ++i) factor *= (k - i);
    out += (factor * std::pow(t, k - order)) * c[k];
  }
  return out;
}

SymTensorField second_fundamental_form(const MetricPath& path, double t) {
  SymTensorField k = path_derivative(path, t, 1);
  k *= -0.5;
  return k;
}

SpacetimeVectorField::SpacetimeVectorField(std::vector<double> t, std::vector<VectorField> x,
                                           std::vector<ScalarField> phi)
    : times(std::move(t)), shift(std::move(x)), lapse(std::move(phi)) {
  if (times.empty() || times.size() != shift.size() || times.size() != lapse.size()) {
    throw InvalidArgument("spacetime vector field needs one shift and lapse per sample time");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidArgument("sample times must be strictly increasing");
  }
  zero_index();
}

std::size_t SpacetimeVectorField::zero_index() const {
  const auto it = std::find(times.begin(), times.end(), 0.0);
  if (it == times.end()) throw InvalidArgument("sample times must contain 0");
  return static_cast<std::size_t>(it - times.begin());
}

std::vector<double> fd_weights(double z, std::span<const double> x, int order) {
  const int n = static_cast<int>(x.size());
  if (n <= order) throw InvalidArgument("not enough nodes for the requested derivative order");
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

namespace {

/// First index of the 5 consecutive samples closest to t.
std::size_t stencil_start(const std::vector<double>& times, double t) {
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - t) < std::abs(times[nearest] - t)) nearest = i;
  }
  const std::size_t last = times.size() - 5;
  return std::min(nearest >= 2 ? nearest - 2 : 0, last);
}

template <class Field>
Field combine(const std::vector<Field>& samples, std::size_t start, const std::vector<double>& w) {
  Field out = w[0] * samples[start];
  for (std::size_t j = 1; j < w.size(); ++j) out += w[j] * samples[start + j];
  return out;
}

struct SampledState {
  VectorField x;
  VectorField x_dot;
  ScalarField phi;
  ScalarField phi_dot;
};

SampledState interpolate(const SpacetimeVectorField& v, double t) {
  if (v.times.size() < 5) throw InvalidArgument("need at least 5 time samples");
  const std::size_t s = stencil_start(v.times, t);
  const std::span<const double> nodes(v.times.data() + s, 5);
  const auto w0 = fd_weights(t, nodes, 0);
  const auto w1 = fd_weights(t, nodes, 1);
  return {combine(v.shift, s, w0), combine(v.shift, s, w1), combine(v.lapse, s, w0),
          combine(v.lapse, s, w1)};
}

VectorField gaussian_rhs(const MetricPath& path, const OneFormField& dphi, double t) {
  return raise(metric_inverse(path.metric_at(t)), dphi);
}

}  // namespace

SpacetimeVectorField gaussian_extend(const MetricPath& path, const Section& a,
                                     std::span<const double> t_samples, const ExtensionOptions& opts) {
  require_same_grid(path.grid(), a.grid());
  std::vector<double> times(t_samples.begin(), t_samples.end());
  for (double t : times) path.require_in_window(t);
  SpacetimeVectorField probe(times, std::vector<VectorField>(times.size(), a.shift),
                             std::vector<ScalarField>(times.size(), a.lapse));
  const std::size_t zero = probe.zero_index();

  double min_gap = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double gap = times[i] - times[i - 1];
    min_gap = i == 1 ? gap : std::min(min_gap, gap);
  }
  double step = min_gap / 8.0;
  if (opts.max_step > 0.0) step = times.size() > 1 ? std::min(step, opts.max_step) : opts.max_step;

  const OneFormField dphi = differential(a.lapse);
  auto march = [&](std::size_t from, std::size_t to) {
    VectorField x = probe.shift[from];
    const double t0 = times[from];
    const double span = times[to] - t0;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / step - 1e-12)));
    const double h = span / steps;
    for (int s = 0; s < steps; ++s) {
      const double t = t0 + s * h;
      const VectorField k1 = gaussian_rhs(path, dphi, t);
      const VectorField k23 = gaussian_rhs(path, dphi, t + 0.5 * h);
      const VectorField k4 = gaussian_rhs(path, dphi, t + h);
      // classical RK4; k2 == k3 because the right-hand side does not depend on X
      VectorField incr = k1;
      incr += 4.0 * k23;
      incr += k4;
      x += (h / 6.0) * incr;
    }
    probe.shift[to] = std::move(x);
  };
  for (std::size_t i = zero + 1; i < times.size(); ++i) march(i - 1, i);
  for (std::size_t i = zero; i-- > 0;) march(i + 1, i);
  return probe;
}

double first_order_defect(const MetricPath& path, const Section& a, double t,
                          const ExtensionOptions& opts) {
  if (t == 0.0) return 0.0;
  const std::vector<double> times = t > 0 ? std::vector<double>{0.0, t} : std::vector<double>{t, 0.0};
  const SpacetimeVectorField v = gaussian_extend(path, a, times, opts);
  VectorField defect = v.shift[t > 0 ? 1 : 0];
  defect -= a.shift;
  defect -= t * grad_spatial(path.metric_at(0.0), a.lapse);
  return defect.max_abs();
}

GaussianityResidual gaussianity_residual(const MetricPath& path, const SpacetimeVectorField& v) {
  if (v.times.size() < 5) throw InvalidArgument("gaussianity residual needs at least 5 time samples");
  GaussianityResidual r;
  for (double t : v.times) {
    const SampledState s = interpolate(v, t);
    VectorField diff = s.x_dot;
    diff -= grad_spatial(path.metric_at(t), s.phi);
    r.shift = std::max(r.shift, diff.max_abs());
    r.lapse = std::max(r.lapse, s.phi_dot.max_abs());
  }
  return r;
}

SpacetimeSymmetric spacetime_lie_derivative(const MetricPath& path, const SpacetimeVectorField& v,
                                            double t) {
  const MetricField g = path.metric_at(t);
  const SymTensorField g_dot = path_derivative(path, t, 1);
  const SampledState s = interpolate(v, t);
  const int d = g.dim();
  const TorusGrid& grid = g.grid();

  // Coordinate formula with v = (X^i, phi), g_ij = gamma_ij, g_it = 0, g_tt = -1:
  //   (L_v g)_ij = X^k d_k g_ij + phi d_t g_ij + g_kj d_i X^k + g_ik d_j X^k + g_tj d_i phi + g_it d_j phi
  //   (L_v g)_it = g_ik d_t X^k + g_tt d_i phi
  //   (L_v g)_tt = 2 g_tt d_t phi
  SymTensorField spatial(grid, Variance::covariant);
  std::vector<std::vector<ScalarField>> dx(d);
  for (int a = 0; a < d; ++a) {
    for (int k = 0; k < d; ++k) dx[a].push_back(spectral_derivative(s.x[k], a));
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      ScalarField& o = spatial(i, j);
      for (int k = 0; k < d; ++k) fma_into(o, s.x[k], spectral_derivative(g(i, j), k));
      fma_into(o, s.phi, g_dot(i, j));
      for (int k = 0; k < d; ++k) {
        fma_into(o, g(k, j), dx[i][k]);
        fma_into(o, g(i, k), dx[j][k]);
      }
    }
  }
  OneFormField mixed(grid);
  const OneFormField dphi = differential(s.phi);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) fma_into(mixed[i], g(i, k), s.x_dot[k]);
    mixed[i] -= dphi[i];
  }
  ScalarField tt = -2.0 * s.phi_dot;
  return {std::move(spatial), std::move(mixed), std::move(tt)};
}

namespace {

std::vector<double> bracket_samples(const MetricPath& path, double spacing) {
  const double h = std::min(spacing, path.window() / 4.0);
  std::vector<double> t;
  for (int j = -4; j <= 4; ++j) t.push_back(j * h);
  return t;
}

/// Spacetime bracket [v, w] at every sample whose centered 5-point stencil fits.
struct SampledBracket {
  std::vector<double> times;
  std::vector<VectorField> tangential;
  std::vector<ScalarField> normal;
};

SampledBracket sampled_bracket(const MetricPath& path, const Section& a, const Section& b,
                               double spacing) {
  const std::vector<double> times = bracket_samples(path, spacing);
  const SpacetimeVectorField v = gaussian_extend(path, a, times);
  const SpacetimeVectorField w = gaussian_extend(path, b, times);
  SampledBracket out;
  for (std::size_t j = 2; j + 2 < times.size(); ++j) {
    const std::span<const double> nodes(times.data() + j - 2, 5);
    const auto w1 = fd_weights(times[j], nodes, 1);
    const VectorField x_dot = combine(v.shift, j - 2, w1);
    const VectorField y_dot = combine(w.shift, j - 2, w1);
    const ScalarField phi_dot = combine(v.lapse, j - 2, w1);
    const ScalarField psi_dot = combine(w.lapse, j - 2, w1);
    const VectorField& x = v.shift[j];
    const VectorField& y = w.shift[j];
    const ScalarField& phi = v.lapse[j];
    const ScalarField& psi = w.lapse[j];
    // [v,w]^mu = v^nu d_nu w^mu - w^nu d_nu v^mu with v^t = phi, w^t = psi
    VectorField tangential = lie_bracket(x, y);
    tangential += phi * y_dot;
    tangential -= psi * x_dot;
    ScalarField normal = directional_derivative(x, psi);
    normal -= directional_derivative(y, phi);
    fma_into(normal, phi, psi_dot);
    fma_into(normal, -1.0, psi, phi_dot);
    out.times.push_back(times[j]);
    out.tangential.push_back(std::move(tangential));
    out.normal.push_back(std::move(normal));
  }
  return out;
}

}  // namespace

SplitVector gaussian_bracket_split(const MetricPath& path, const Section& a, const Section& b,
                                   double spacing) {
  SampledBracket s = sampled_bracket(path, a, b, spacing);
  const std::size_t mid = s.times.size() / 2;
  return {std::move(s.tangential[mid]), std::move(s.normal[mid])};
}

NonGaussianity nongaussian_bracket_residual(const MetricPath& path, const Section& a,
                                            const Section& b, double spacing) {
  require_same_grid(path.grid(), a.grid());
  require_same_grid(path.grid(), b.grid());
  const SampledBracket u = sampled_bracket(path, a, b, spacing);
  const std::size_t mid = u.times.size() / 2;
  const auto w1 = fd_weights(0.0, u.times, 1);
  const VectorField u_dot = combine(u.tangential, 0, w1);
  const ScalarField ut_dot = combine(u.normal, 0, w1);

  const MetricField g = path.metric_at(0.0);
  const int d = g.dim();
  // LHS: (L_u g)(n, .) with components (L_u g)_ti and (L_u g)_tt
  OneFormField lhs(g.grid());
  const OneFormField dut = differential(u.normal[mid]);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) fma_into(lhs[i], g(i, k), u_dot[k]);
    lhs[i] -= dut[i];
  }
  const ScalarField lhs_tt = -2.0 * ut_dot;

  // RHS from slice data only
  const VectorField grad_phi = grad_spatial(g, a.lapse);
  const VectorField grad_psi = grad_spatial(g, b.lapse);
  OneFormField rhs = contract_first(lie_derivative_sym2(b.shift, g.tensor()), grad_phi);
  rhs -= contract_first(lie_derivative_sym2(a.shift, g.tensor()), grad_psi);
  VectorField pair = a.lapse * grad_psi;
  pair -= b.lapse * grad_phi;
  rhs += 2.0 * contract_first(second_fundamental_form(path, 0.0), pair);

  NonGaussianity r;
  r.identity_residual = std::max((lhs - rhs).max_abs(), lhs_tt.max_abs());
  r.witness = std::max(lhs.max_abs(), lhs_tt.max_abs());
  return r;
}

nlohmann::json to_json(const MetricPath& path) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : path.coefficients()) coeffs.push_back(to_snapshot(c));
  return {{"window", {-path.window(), path.window()}}, {"coefficients", coeffs}};
}

MetricPath metric_path_from_json(const nlohmann::json& j) {
  try {
    const auto window = j.at("window").get<std::vector<double>>();
    if (window.size() != 2 || !(window[0] < 0.0) || window[0] != -window[1]) {
      throw InvalidArgument("metric path window must be [-T, T] with T > 0");
    }
    std::vector<SymTensorField> coeffs;
    for (const auto& c : j.at("coefficients")) {
      SnapshotField f = from_snapshot(c);
      if (auto* m = std::get_if<MetricField>(&f)) {
        coeffs.push_back(m->tensor());
      } else if (auto* s = std::get_if<SymTensorField>(&f)) {
        coeffs.push_back(std::move(*s));
      } else {
        throw InvalidArgument("metric path coefficients must be sym2 or metric snapshots");
      }
    }
    return MetricPath(std::move(coeffs), window[1]);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed metric path: ") + e.what());
  }
}

}  // namespace adm
