#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "resonance/numerics/precision.hpp"

namespace resonance::numerics {

struct QuadResult {
  std::complex<double> value{};
  double err_estimate = 0.0;   // sum of |coarse - refined| over accepted panels
  int panels_used = 0;
  bool converged = true;       // false when some panel hit max_quad_depth
};

struct QuadOptions {
  int order = 16;                  // Gauss-Legendre points per panel
  double grading = 0.15;           // split ratio toward a singular endpoint
  double max_panel_width = std::numeric_limits<double>::infinity();
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Nodes and weights for the requested order, computed once and cached.
const GaussLegendreRule& gauss_legendre(int order);

// Fixed-order rule on [a, b].
template <class F>
auto gauss_panel(const F& f, double a, double b, const GaussLegendreRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  using R = decltype(f(mid));
  R acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

using Integrand = std::function<std::complex<double>(double)>;

// Adaptive Gauss-Legendre over [a, b]. Panels are split at every listed
// singularity and never straddle one; a panel touching a singularity is
// split geometrically toward it. A panel is accepted when its single-panel
// value and the value over its two children agree within its share of
// ctx.target_abs_err. On depth exhaustion the best value is returned with
// converged == false and the unresolved differences folded into err_estimate.
QuadResult adaptive_quad(const Integrand& f, double a, double b,
                         std::span<const double> singularities, const PrecisionContext& ctx,
                         const QuadOptions& opts = {});

}  // namespace resonance::numerics
