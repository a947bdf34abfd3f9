#include <algorithm>
#include <cmath>

#include "resonance/convolution/convolution.hpp"
#include "resonance/error.hpp"
#include "resonance/numerics/parallel.hpp"
#include "resonance/numerics/quadrature.hpp"
#include "resonance/numerics/summation.hpp"
#include "resonance/search/search.hpp"

namespace resonance::search {
namespace {

constexpr int kChebPoints = 25;
constexpr int kFPoints = 17;

std::vector<double> cheb_nodes(int n) {
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = std::cos(M_PI * (k + 0.5) / n);
  return x;
}

std::vector<double> cheb_coeffs(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  std::vector<double> c(n);
  for (int j = 0; j < n; ++j) {
    numerics::CompensatedSum<double> s;
    for (int k = 0; k < n; ++k) s.add(f[k] * std::cos(M_PI * j * (k + 0.5) / n));
    c[j] = 2.0 / n * s.value();
  }
  c[0] *= 0.5;
  return c;
}

double clenshaw(const std::vector<double>& c, double x) {
  double b1 = 0, b2 = 0;
  for (std::size_t j = c.size() - 1; j > 0; --j) {
    const double b0 = 2 * x * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

}  // namespace

SmoothedS::SmoothedS(const zeta::ZeroLedger& ledger, const KernelParams& params, double t_lo, double t_hi, double U,
                     double table_step, int threads)
    : ledger_(&ledger), params_(params), t_lo_(t_lo), t_hi_(t_hi), U_(U) {
  if (!(t_lo < t_hi) || !(U > 0)) throw Error(Errc::invalid_argument, "SmoothedS needs t_lo < t_hi and U > 0");
  if (t_hi + U > ledger.upper_t()) {
    throw Error(Errc::invalid_argument, "ledger height " + std::to_string(ledger.upper_t()) + " below t_hi + U");
  }
  // Antiderivative of the kernel from -U, as a Hermite table with exact slopes.
  const auto n = static_cast<std::size_t>(std::ceil(2 * U / table_step));
  kc_.x0 = -U;
  kc_.h = 2 * U / static_cast<double>(n);
  kc_.value.resize(n + 1);
  kc_.slope.resize(n + 1);
  const auto& g8 = numerics::gauss_legendre(8);
  numerics::CompensatedSum<double> run;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = -U + kc_.h * static_cast<double>(i);
    kc_.value[i] = run.value();
    kc_.slope[i] = kernel_lab::sign_kernel(x, params);
    if (i == n) break;
    for (std::size_t k = 0; k < g8.nodes.size(); ++k) {
      run.add(0.5 * kc_.h * g8.weights[k] * kernel_lab::sign_kernel(x + 0.5 * kc_.h * (g8.nodes[k] + 1), params));
    }
  }
  mass_ = kc_.value.back();

  const auto& ord = ledger.ordinates();
  for (auto it = ord.rbegin(); it != ord.rend(); ++it) {
    if (*it < U) neg_.push_back(-*it);
  }

  const auto& g20 = numerics::gauss_legendre(20);
  const auto np = static_cast<std::size_t>(std::ceil(U));
  const double hp = 2 * U / static_cast<double>(np);
  for (std::size_t k = 0; k < np; ++k) {
    const double a = -U + hp * static_cast<double>(k);
    for (std::size_t i = 0; i < g20.nodes.size(); ++i) {
      const double u = a + 0.5 * hp * (g20.nodes[i] + 1);
      nodes_.push_back(u);
      wk_.push_back(0.5 * hp * g20.weights[i] * kernel_lab::sign_kernel(u, params));
    }
  }

  // theta part: while the window still reaches x = 0 the integral carries
  // the kernel's band limit and needs short panels; past it the only nearby
  // singularities are those of theta at x = +-i/2, so widths can grow with
  // the distance from t = U.
  for (double a = t_lo; a < t_hi;) {
    const double width = a < U + 2 ? 2.0 : std::clamp(a - U, 2.0, 4096.0);
    const double b = std::min(a + width, t_hi);
    panels_.push_back({a, b, {}});
    a = b;
  }
  const auto x = cheb_nodes(kChebPoints);
  std::vector<double> probe_err(panels_.size(), 0.0);
  numerics::parallel_for(panels_.size(), threads, [&](std::size_t p) {
    Panel& pan = panels_[p];
    std::vector<double> f(kChebPoints);
    for (int k = 0; k < kChebPoints; ++k) f[k] = theta_part_direct(0.5 * (pan.a + pan.b) + 0.5 * (pan.b - pan.a) * x[k]);
    pan.c = cheb_coeffs(f);
    if (p % 8 == 0) {
      const double t = pan.a + 0.3819660112501051 * (pan.b - pan.a);
      probe_err[p] = std::fabs(theta_part(t) - theta_part_direct(t));
    }
  });
  const double theta_err = *std::max_element(probe_err.begin(), probe_err.end());

  // Cubic Hermite error h^4/384 max|K'''|, with |K'''| <= omega^3 max|K| for
  // a kernel band-limited to omega = 2 alpha + L (Bernstein).
  const double omega = 2 * params.alpha() + params.L();
  const double k3 = std::pow(omega, 3) * 5 * params.alpha() * params.alpha();
  const double per_point = std::pow(kc_.h, 4) / 384 * k3;
  const auto lo_it = std::lower_bound(ord.begin(), ord.end(), t_hi - U);
  const auto hi_it = std::lower_bound(ord.begin(), ord.end(), t_hi + U);
  const double points = static_cast<double>((hi_it - lo_it) + static_cast<long>(neg_.size()) + 1);
  error_bound_ = per_point * points + 10 * theta_err / M_PI + 1e-15 * std::fabs(mass_) * ledger.count();
}

double SmoothedS::theta_part_direct(double t) const {
  numerics::CompensatedSum<double> acc;
  for (std::size_t i = 0; i < nodes_.size(); ++i) acc.add(wk_[i] * zeta::theta(t + nodes_[i]));
  return acc.value();
}

double SmoothedS::theta_part(double t) const {
  auto it = std::upper_bound(panels_.begin(), panels_.end(), t, [](double v, const Panel& p) { return v < p.b; });
  if (it == panels_.end()) --it;
  const double x = (2 * t - it->a - it->b) / (it->b - it->a);
  return clenshaw(it->c, std::clamp(x, -1.0, 1.0));
}

double SmoothedS::operator()(double t) const {
  const auto& ord = ledger_->ordinates();
  const double x0 = t - U_;
  const double x1 = t + U_;
  double q0;
  std::size_t lo;
  if (x0 >= 0) {
    lo = static_cast<std::size_t>(std::upper_bound(ord.begin(), ord.end(), x0) - ord.begin());
    q0 = static_cast<double>(lo) - 1;
  } else {
    lo = 0;
    q0 = 1 - static_cast<double>(std::upper_bound(ord.begin(), ord.end(), -x0) - ord.begin());
  }
  const auto hi = static_cast<std::size_t>(std::lower_bound(ord.begin(), ord.end(), x1) - ord.begin());
  double jumps = static_cast<double>(hi - lo);
  double kc_sum = kernels::hermite_table_sum(kc_, std::span<const double>(ord.data() + lo, hi - lo), t);
  if (x0 < 0) {
    const auto first = static_cast<std::size_t>(std::upper_bound(neg_.begin(), neg_.end(), x0) - neg_.begin());
    jumps += static_cast<double>(neg_.size() - first);
    kc_sum += kernels::hermite_table_sum(kc_, std::span<const double>(neg_.data() + first, neg_.size() - first), t);
    if (x1 > 0) {
      jumps -= 2;
      kc_sum -= 2 * kc_.eval(-t);
    }
  }
  const double step = (q0 + jumps) * mass_ - kc_sum;
  return step - theta_part(t) / M_PI;
}

double max_signed_s(const zeta::ZeroLedger& ledger, double lo, double hi, int sign) {
  if (!(lo <= hi)) throw Error(Errc::invalid_argument, "max_signed_s needs lo <= hi");
  if (std::max(std::fabs(lo), std::fabs(hi)) > ledger.upper_t()) {
    throw Error(Errc::invalid_argument, "range beyond the ledger height");
  }
  const double s = sign;
  double best = std::max(s * ledger.s_value(lo), s * ledger.s_value(hi));
  // theta' vanishes near |x| = 6.2898; S turns there.
  for (double x : {-6.289835988, 6.289835988}) {
    if (x > lo && x < hi) best = std::max(best, s * ledger.s_value(x));
  }
  if (lo < 0 && hi > 0) best = std::max(best, 1.0);
  // At a jump the larger one-sided limit is the midpoint value plus 1/2.
  const auto& ord = ledger.ordinates();
  auto scan = [&](double a, double b, double mirror) {
    auto it = std::upper_bound(ord.begin(), ord.end(), a);
    for (; it != ord.end() && *it < b; ++it) best = std::max(best, s * ledger.s_value(mirror * *it) + 0.5);
  };
  if (hi > 0) scan(std::max(lo, 0.0), hi, 1.0);
  if (lo < 0) scan(std::max(-hi, 0.0), -lo, -1.0);
  return best;
}

double i1_ledger_height(double T, double beta, const I1Options& opts) {
  const double U = convolution::truncation(T);
  const double t_hi = opts.t_hi > 0 ? opts.t_hi
                                    : std::min(T * std::log(T), T * std::sqrt(2 * std::log(1 / opts.tail_rel)));
  (void)beta;
  return std::max(t_hi + U, 2 * T * std::log(T)) + 1;
}

I1Result compute_I1(double T, double beta, const KernelParams& params, const ResonatorWeights& w,
                    const zeta::ZeroLedger* ledger, const PrecisionContext& ctx, const I1Options& opts) {
  I1Result out;
  const double U = convolution::truncation(T);
  out.t_lo = opts.t_lo != 0 ? opts.t_lo : std::pow(T, beta);
  out.t_hi = opts.t_hi != 0 ? opts.t_hi : std::min(T * std::log(T), T * std::sqrt(2 * std::log(1 / opts.tail_rel)));
  if (!(out.t_lo < out.t_hi)) throw Error(Errc::invalid_argument, "empty I1 window");
  if (!opts.constant_s && !ledger) throw Error(Errc::invalid_argument, "compute_I1 needs a zero ledger");

  std::optional<SmoothedS> F;
  if (opts.constant_s) {
    out.kernel_mass = kernel_mass(params, U);
  } else {
    F.emplace(*ledger, params, out.t_lo, out.t_hi, U, opts.table_step, opts.threads);
    out.kernel_mass = F->kernel_mass();
  }

  const double spread = w.size() ? w.log_m.back() - w.log_m.front() : 0.0;
  const double width = std::min(1.0, 8.0 / std::max(spread, 1e-300));
  const auto total = static_cast<std::size_t>(std::ceil((out.t_hi - out.t_lo) / width));
  const double h = (out.t_hi - out.t_lo) / static_cast<double>(total);
  const std::size_t used = opts.max_panels ? std::min(total, opts.max_panels) : total;

  struct PanelResult {
    double value = 0, err = 0, moment = 0, max_f = 0;
  };
  std::vector<PanelResult> res(used);
  const auto& g32 = numerics::gauss_legendre(32);
  const auto& g24 = numerics::gauss_legendre(24);
  const auto xf = cheb_nodes(kFPoints);
  numerics::parallel_for(used, opts.threads, [&](std::size_t p) {
    const double a = out.t_lo + h * static_cast<double>(p);
    const double b = p + 1 == total ? out.t_hi : a + h;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::vector<double> c;
    PanelResult r;
    if (F) {
      std::vector<double> f(kFPoints);
      for (int k = 0; k < kFPoints; ++k) {
        f[k] = (*F)(mid + half * xf[k]);
        r.max_f = std::max(r.max_f, std::fabs(f[k]));
      }
      c = cheb_coeffs(f);
    } else {
      r.max_f = std::fabs(out.kernel_mass);
    }
    auto fval = [&](double t) { return F ? clenshaw(c, (t - mid) / half) : out.kernel_mass; };
    auto rule_sum = [&](const numerics::GaussLegendreRule& rule, double& moment) {
      numerics::CompensatedSum<double> acc, mom;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = mid + half * rule.nodes[i];
        const double x = t / T;
        const double wgt = half * rule.weights[i] * resonator::resonator_abs_sq(t, w) * std::exp(-0.5 * x * x);
        acc.add(wgt * fval(t));
        mom.add(wgt);
      }
      moment = mom.value();
      return acc.value();
    };
    double m24;
    r.value = rule_sum(g32, r.moment);
    const double v24 = rule_sum(g24, m24);
    const double cheb_tail = F ? std::fabs(c[kFPoints - 1]) + std::fabs(c[kFPoints - 2]) + F->error_bound() : 0.0;
    r.err = std::fabs(r.value - v24) + cheb_tail * r.moment;
    res[p] = r;
  });

  numerics::CompensatedSum<double> value, err, moment;
  double max_f = 0;
  for (const auto& r : res) {
    value.add(r.value);
    err.add(r.err);
    moment.add(r.moment);
    max_f = std::max(max_f, r.max_f);
  }
  numerics::CompensatedSum<double> r0;
  for (double r : w.r) r0.add(r);
  const double r0_sq = r0.value() * r0.value();
  auto gauss_mass = [&](double a, double b) {
    return T * std::sqrt(M_PI / 2) * (std::erfc(a / (std::sqrt(2.0) * T)) - std::erfc(b / (std::sqrt(2.0) * T)));
  };
  const double reach_end = out.t_lo + h * static_cast<double>(used);
  if (used < total) {
    out.budget_exhausted = true;
    err.add(2 * max_f * r0_sq * gauss_mass(reach_end, out.t_hi));
  }
  const double nominal_hi = T * std::log(T);
  if (opts.t_hi == 0 && out.t_hi < nominal_hi) err.add(2 * max_f * r0_sq * gauss_mass(out.t_hi, nominal_hi));
  out.value = value.value();
  out.err_estimate = err.value();
  out.window_moment = moment.value();
  out.panels = used;
  out.gauss_moment = resonator::resonator_norms(w, T, ctx).gauss_moment;
  if (ledger) {
    const double lo = std::min(0.5 * std::pow(T, beta), out.t_lo - U);
    const double hi = std::min(ledger->upper_t(), std::max(2 * T * std::log(T), out.t_hi + U));
    out.max_signed_s = max_signed_s(*ledger, std::max(lo, -ledger->upper_t()), hi, params.sign);
    out.majorant = out.max_signed_s * std::fabs(out.kernel_mass) * out.gauss_moment;
  }
  return out;
}

}  // namespace resonance::search
