#include <algorithm>
#include <cmath>

#include "resonance/arith/primes.hpp"
#include "resonance/convolution/convolution.hpp"
#include "resonance/error.hpp"
#include "resonance/numerics/quadrature.hpp"
#include "resonance/numerics/summation.hpp"
#include "resonance/search/search.hpp"

namespace resonance::search {
namespace {

using resonator::gaussian_transform;
using resonator::u128;

constexpr double kSqrt2 = 1.41421356237309504880;

std::vector<long double> logs_of(const ResonatorWeights& w) {
  std::vector<long double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = std::log(static_cast<long double>(w.m[i]));
  return out;
}

// omega = log(m_b / (m_a n)), exactly zero when m_b = m_a n.
long double omega(const ResonatorWeights& w, const std::vector<long double>& lm, std::size_t a, std::size_t b,
                  std::uint64_t n, long double ln) {
  u128 prod;
  if (!__builtin_mul_overflow(w.m[a], static_cast<u128>(n), &prod) && prod == w.m[b]) return 0;
  return lm[b] - lm[a] - ln;
}

double dawson_quadrature(double x) {
  // D(x) = int_0^x exp(-v (2x - v)) dv; the integrand falls off on the scale
  // 1/(2x), so panels of that width keep 20-point Gauss-Legendre exact.
  const auto& rule = numerics::gauss_legendre(20);
  const int panels = std::max(1, static_cast<int>(std::ceil(x / (0.5 / x))));
  const double h = x / panels;
  numerics::CompensatedSum<double> acc;
  for (int k = 0; k < panels; ++k) {
    const double a = k * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double v = a + 0.5 * h * (rule.nodes[i] + 1);
      acc.add(0.5 * h * rule.weights[i] * std::exp(-v * (2 * x - v)));
    }
  }
  return acc.value();
}

}  // namespace

GCoefficients prop22_coefficients(double alpha, double H) {
  if (!(alpha > 0)) throw Error(Errc::invalid_argument, "alpha must be positive");
  GCoefficients g;
  const double lo = std::max(2.0, std::ceil(std::exp(H - 2 * alpha)));
  const double hi = std::floor(std::exp(H + 2 * alpha));
  if (hi > 1e15) throw Error(Errc::support_too_large, "tent support beyond 1e15");
  if (lo > hi) return g;
  for (const auto& pp : arith::prime_powers_in(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi))) {
    const double w = kernel_lab::tent_weight(pp.n, alpha, H);
    if (w > 0) g.terms.emplace_back(pp.n, pp.log_p * w / std::log(static_cast<double>(pp.n)));
  }
  return g;
}

double dawson(double x) {
  const double ax = std::fabs(x);
  double d;
  if (ax <= 1) {
    // sum (-1)^k 2^k x^{2k+1} / (2k+1)!!
    const double x2 = 2 * ax * ax;
    double term = ax, sum = ax;
    for (int k = 1; k < 40 && std::fabs(term) > 1e-18 * sum; ++k) {
      term *= -x2 / (2 * k + 1);
      sum += term;
    }
    d = sum;
  } else if (ax <= 10) {
    d = dawson_quadrature(ax);
  } else {
    // 1/(2x) sum (2k-1)!! / (2x^2)^k
    const double y = 1 / (2 * ax * ax);
    double term = 1, sum = 1;
    for (int k = 1; k < 60; ++k) {
      const double next = term * (2 * k - 1) * y;
      if (next > term || next < 1e-18 * sum) break;
      term = next;
      sum += term;
    }
    d = sum / (2 * ax);
  }
  return x < 0 ? -d : d;
}

double gaussian_moment_G(const GCoefficients& g, const ResonatorWeights& w, double T, const PrecisionContext& ctx) {
  const auto lm = logs_of(w);
  const double floor_rel = std::min(1e-30, ctx.target_abs_err * 1e-10);
  const long double cut = std::sqrt(-2 * std::log(floor_rel)) / T;
  numerics::CompensatedSum<double> acc;
  for (const auto& [n, c] : g.terms) {
    const long double ln = std::log(static_cast<long double>(n));
    const double coef = c / std::sqrt(static_cast<double>(n));
    for (std::size_t a = 0; a < w.size(); ++a) {
      const long double target = lm[a] + ln;
      auto b = static_cast<std::size_t>(std::lower_bound(lm.begin(), lm.end(), target - cut) - lm.begin());
      for (; b < w.size() && lm[b] <= target + cut; ++b) {
        acc.add(coef * w.r[a] * w.r[b] * gaussian_transform(static_cast<double>(omega(w, lm, a, b, n, ln)), T));
      }
    }
  }
  return acc.value();
}

double half_line_sine_moment(const GCoefficients& g, const ResonatorWeights& w, double T) {
  const auto lm = logs_of(w);
  numerics::CompensatedSum<double> acc;
  for (const auto& [n, c] : g.terms) {
    const long double ln = std::log(static_cast<long double>(n));
    const double coef = c / std::sqrt(static_cast<double>(n));
    for (std::size_t a = 0; a < w.size(); ++a) {
      for (std::size_t b = 0; b < w.size(); ++b) {
        const double om = static_cast<double>(omega(w, lm, a, b, n, ln));
        acc.add(coef * w.r[a] * w.r[b] * kSqrt2 * T * dawson(om * T / kSqrt2));
      }
    }
  }
  return acc.value();
}

std::complex<double> direct_moment(const GCoefficients& g, const ResonatorWeights& w, double T, double a, double b) {
  if (!(a < b)) return 0.0;
  std::vector<double> logs_n, coefs;
  double max_ln = 0;
  for (const auto& [n, c] : g.terms) {
    logs_n.push_back(std::log(static_cast<double>(n)));
    coefs.push_back(c / std::sqrt(static_cast<double>(n)));
    max_ln = std::max(max_ln, logs_n.back());
  }
  const double spread = w.size() ? w.log_m.back() - w.log_m.front() : 0.0;
  const double omega_max = max_ln + spread + 1 / T;
  const double width = std::min(3.0 / omega_max, T);
  const auto& rule = numerics::gauss_legendre(24);
  const auto panels = static_cast<std::size_t>(std::ceil((b - a) / width));
  const double h = (b - a) / static_cast<double>(panels);
  numerics::CompensatedComplexSum<double> acc;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = lo + 0.5 * h * (rule.nodes[i] + 1);
      const double x = t / T;
      const std::complex<double> G = kernels::dirichlet_sum(t, 0.0, logs_n, coefs);
      acc.add(0.5 * h * rule.weights[i] * std::exp(-0.5 * x * x) * resonator::resonator_abs_sq(t, w) * G);
    }
  }
  return acc.value();
}

double kernel_mass(const KernelParams& params, double U) {
  const auto& rule = numerics::gauss_legendre(20);
  const auto panels = static_cast<std::size_t>(std::ceil(U));
  const double h = 2 * U / static_cast<double>(panels);
  numerics::CompensatedSum<double> acc;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = -U + h * static_cast<double>(k);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc.add(0.5 * h * rule.weights[i] * kernel_lab::sign_kernel(lo + 0.5 * h * (rule.nodes[i] + 1), params));
    }
  }
  return acc.value();
}

double min_weight_over_P(const KernelParams& params, const PrimeWindow& window, double lambda_prime) {
  if (window.empty()) throw Error(Errc::invalid_argument, "empty prime window");
  const double L = params.L();
  double best = INFINITY;
  for (std::uint64_t p : window.primes) {
    const double lp = std::log(static_cast<double>(p));
    const double w = kernel_lab::tent_weight(p, params.alpha(), L);
    if (lp < (1 - 2 * lambda_prime) * L || lp > (1 + 2 * lambda_prime) * L || !(w > 0)) {
      throw Error(Errc::scale_mismatch, "p = " + std::to_string(p) + " lies outside (log T)^{1 -+ 2 lambda'}");
    }
    best = std::min(best, w);
  }
  return best;
}

nlohmann::json to_json(const MomentReport& r) {
  nlohmann::json j = {{"T", r.T},
                      {"lambda", r.lambda},
                      {"sign", r.sign},
                      {"i2_value", r.i2_value},
                      {"i2_reference", r.i2_reference},
                      {"kernel_mass", r.kernel_mass},
                      {"ratio", r.ratio}};
  if (r.has_i1) {
    j["i1_value"] = r.i1_value;
    j["i1_err"] = r.i1_err;
  }
  return j;
}

MomentReport compute_I2(double T, const KernelParams& params, const ResonatorWeights& w, const PrecisionContext& ctx) {
  MomentReport r;
  r.T = T;
  r.lambda = params.lambda;
  r.sign = params.sign;
  const double L = params.L();
  r.i2_value = 0.25 * gaussian_moment_G(prop22_coefficients(params.alpha(), L), w, T, ctx);
  r.i2_reference = T * std::sqrt(std::log(T) * L * kernel_lab::log3(T)) * w.f_sq_sum;
  r.kernel_mass = kernel_mass(params, convolution::truncation(T));
  r.ratio = r.i2_value / r.i2_reference;
  return r;
}

WindowedI2 compute_I2_windowed(double T, double beta, const KernelParams& params, const ResonatorWeights& w,
                               const PrecisionContext& ctx, bool full) {
  WindowedI2 out;
  out.t_lo = std::pow(T, beta);
  out.t_hi = T * std::log(T);
  const double alpha = params.alpha();
  numerics::CompensatedSum<double> r0;
  for (double r : w.r) r0.add(r);
  const double r0_sq = r0.value() * r0.value();
  // Beyond T log T the weight is below exp(-(log T)^2 / 2).
  const double tail_mass = T * std::sqrt(M_PI / 2) * std::erfc(out.t_hi / (kSqrt2 * T));
  auto abs_sum = [](const GCoefficients& g) {
    double s = 0;
    for (const auto& [n, c] : g.terms) s += std::fabs(c) / std::sqrt(static_cast<double>(n));
    return s;
  };

  const GCoefficients gA = prop22_coefficients(alpha, params.L());
  out.completed = gaussian_moment_G(gA, w, T, ctx);
  const std::complex<double> headA = direct_moment(gA, w, T, 0.0, out.t_lo);
  out.real_part = 0.25 * out.completed - 0.5 * headA.real();
  out.err = 0.5 * abs_sum(gA) * r0_sq * tail_mass + 1e-12 * (std::fabs(out.completed) + std::abs(headA));
  if (full) {
    const GCoefficients gB = prop22_coefficients(alpha, 0.0);
    const double sine = half_line_sine_moment(gB, w, T);
    const std::complex<double> headB = direct_moment(gB, w, T, 0.0, out.t_lo);
    out.first_sum = params.sign * 1.5 * (sine - headB.imag());
    out.err += 1.5 * abs_sum(gB) * r0_sq * tail_mass + 1e-12 * 1.5 * (std::fabs(sine) + std::abs(headB));
  }
  out.value = out.real_part + out.first_sum;
  const double env = 2 * convolution::lemma_envelope(alpha, params.L(), T) +
                     (full ? 3 * convolution::lemma_envelope(alpha, 0.0, T) : 0.0);
  out.lemma_err = env / M_PI * resonator::resonator_norms(w, T, ctx).gauss_moment;
  return out;
}

double theorem_reference(double T) {
  return std::sqrt(std::log(T) * kernel_lab::log3(T) / kernel_lab::log2(T));
}

}  // namespace resonance::search
