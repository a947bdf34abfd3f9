#include "resonance/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "resonance/error.hpp"
#include "resonance/numerics/summation.hpp"

namespace resonance::numerics {
namespace {

GaussLegendreRule build_rule(int order) {
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < (order + 1) / 2; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (order + 0.5L));
    long double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= order; ++k) {
        long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1;
      dp = order * (x * p1 - p0) / (x * x - 1);
      long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    // Recompute the derivative at the converged node for the weight.
    long double p0 = 1, p1 = x;
    for (int k = 2; k <= order; ++k) {
      long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1);
    long double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[order - 1 - i] = static_cast<double>(x);
    rule.nodes[i] = static_cast<double>(-x);
    rule.weights[i] = rule.weights[order - 1 - i] = static_cast<double>(w);
  }
  return rule;
}

struct Panel {
  double a;
  double b;
  bool sing_left;
  bool sing_right;
};

class Integrator {
 public:
  Integrator(const Integrand& f, const PrecisionContext& ctx, const QuadOptions& opts)
      : f_(f), ctx_(ctx), opts_(opts), rule_(gauss_legendre(opts.order)) {}

  void run(const Panel& p, double tol) { refine(p, panel(p), tol, 0); }

  QuadResult result() const {
    QuadResult r;
    r.value = sum_.value();
    r.err_estimate = err_.value();
    r.panels_used = accepted_;
    r.converged = converged_;
    return r;
  }

 private:
  std::complex<double> panel(const Panel& p) const { return gauss_panel(f_, p.a, p.b, rule_); }

  double split_point(const Panel& p) const {
    const double w = p.b - p.a;
    if (p.sing_left && !p.sing_right) return p.a + opts_.grading * w;
    if (p.sing_right && !p.sing_left) return p.b - opts_.grading * w;
    return p.a + 0.5 * w;
  }

  void refine(const Panel& p, std::complex<double> coarse, double tol, int depth) {
    // A panel only a few ulps wide cannot be split further; its coarse value
    // is kept and charged in full to the error estimate.
    const double scale = std::max(std::fabs(p.a), std::fabs(p.b));
    if (p.b - p.a <= 256 * std::numeric_limits<double>::epsilon() * scale) {
      accept(coarse, std::abs(coarse), false);
      return;
    }
    const double m = split_point(p);
    const Panel left{p.a, m, p.sing_left, false};
    const Panel right{m, p.b, false, p.sing_right};
    const std::complex<double> ql = panel(left);
    const std::complex<double> qr = panel(right);
    const std::complex<double> fine = ql + qr;
    const double diff = std::abs(fine - coarse);
    if (diff <= tol || depth >= ctx_.max_quad_depth) {
      accept(fine, diff, diff > tol);
      return;
    }
    refine(left, ql, 0.5 * tol, depth + 1);
    refine(right, qr, 0.5 * tol, depth + 1);
  }

  void accept(std::complex<double> value, double err, bool exhausted) {
    if (exhausted) converged_ = false;
    sum_.add(value);
    err_.add(err);
    ++accepted_;
  }

  const Integrand& f_;
  const PrecisionContext& ctx_;
  const QuadOptions& opts_;
  const GaussLegendreRule& rule_;
  CompensatedComplexSum<double> sum_;
  CompensatedSum<double> err_;
  int accepted_ = 0;
  bool converged_ = true;
};

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1 || order > 256) throw Error(Errc::invalid_argument, "Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

QuadResult adaptive_quad(const Integrand& f, double a, double b, std::span<const double> singularities,
                         const PrecisionContext& ctx, const QuadOptions& opts) {
  if (!(a < b)) throw Error(Errc::invalid_argument, "adaptive_quad requires a < b");
  if (!std::is_sorted(singularities.begin(), singularities.end())) {
    throw Error(Errc::invalid_argument, "singularities must be sorted");
  }
  std::vector<double> breaks{a};
  std::vector<bool> singular{false};
  for (double s : singularities) {
    if (!(s > a && s < b)) throw Error(Errc::invalid_argument, "singularity outside (a, b)");
    if (s == breaks.back()) continue;
    breaks.push_back(s);
    singular.push_back(true);
  }
  breaks.push_back(b);
  singular.push_back(false);

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    const int pieces = std::isfinite(opts.max_panel_width)
                           ? std::max(1, static_cast<int>(std::ceil((hi - lo) / opts.max_panel_width)))
                           : 1;
    for (int k = 0; k < pieces; ++k) {
      const double pa = k == 0 ? lo : lo + (hi - lo) * k / pieces;
      const double pb = k == pieces - 1 ? hi : lo + (hi - lo) * (k + 1) / pieces;
      panels.push_back({pa, pb, k == 0 && singular[i], k == pieces - 1 && singular[i + 1]});
    }
  }

  Integrator integrator(f, ctx, opts);
  const double tol = ctx.panel_tolerance(panels.size());
  for (const Panel& p : panels) integrator.run(p, tol);
  return integrator.result();
}

}  // namespace resonance::numerics
