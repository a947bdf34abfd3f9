#include "resonance/convolution/convolution.hpp"

#include <algorithm>
#include <cmath>

#include "resonance/arith/primes.hpp"
#include "resonance/error.hpp"
#include "resonance/numerics/summation.hpp"

namespace resonance::convolution {
namespace {

using cplx = std::complex<double>;

// Panels no wider than a quarter period of the fastest kernel oscillation.
double panel_width(double alpha, double H) { return std::min(2.0, M_PI / (2 * (2 * alpha + std::fabs(H)) + 1)); }

std::vector<double> shifted(std::span<const double> x_singularities, double t, double U) {
  std::vector<double> out;
  out.reserve(x_singularities.size());
  for (double x : x_singularities) {
    const double u = x - t;
    if (u > -U && u < U && (out.empty() || u > out.back())) out.push_back(u);
  }
  return out;
}

std::vector<double> line_singularities(const zeta::CriticalLine& line, double t, double U) {
  const double reach = std::max(std::fabs(t - U), std::fabs(t + U));
  if (reach > line.upper()) {
    throw Error(Errc::invalid_argument, "zero ledger ends at " + std::to_string(line.upper()) +
                                            ", integration reaches " + std::to_string(reach));
  }
  return line.ledger().singularities(t - U, t + U);
}

QuadResult integrate(const numerics::Integrand& g, double U, const std::vector<double>& u_singularities,
                     const PrecisionContext& ctx, double max_panel_width) {
  numerics::QuadOptions opts;
  opts.max_panel_width = max_panel_width;
  QuadResult r = numerics::adaptive_quad(g, -U, U, u_singularities, ctx, opts);
  if (!r.converged) throw Error(Errc::quadrature_exhausted, "convolution integral did not converge");
  return r;
}

double log_T(double T) {
  if (!(T > std::exp(1.0))) throw Error(Errc::invalid_argument, "T must exceed e");
  return std::log(T);
}

// Sum of Lambda(n) w_n / ((log n) n^{1/2 + it}) over prime powers.
cplx weighted_prime_sum(double t, double alpha, double H, const VonMangoldt& lambda) {
  std::vector<cplx> terms;
  for (const PrimeSumTerm& term : prime_sum_terms(t, alpha, H, lambda)) {
    const double log_n = std::log(static_cast<double>(term.n));
    terms.push_back(term.phase * (term.lambda_n * term.weight / (log_n * std::sqrt(static_cast<double>(term.n)))));
  }
  return numerics::stable_sum(terms);
}

}  // namespace

double truncation(double T) {
  const double l = log_T(T);
  return l * l * l;
}

double lemma_envelope(double alpha, double H, double T) {
  return kCCal * std::exp(2 * alpha + std::fabs(H)) / truncation(T);
}

bool in_lemma_range(double t, double T, double beta) {
  return t >= std::pow(T, beta) && t <= T * std::log(T);
}

std::vector<PrimeSumTerm> prime_sum_terms(double t, double alpha, double H, const VonMangoldt& lambda) {
  if (!(alpha > 0)) throw Error(Errc::invalid_argument, "alpha must be positive");
  const double lo = std::exp(H - 2 * alpha);
  const double hi = std::exp(H + 2 * alpha);
  if (hi > 1e15) throw Error(Errc::support_too_large, "tent support exceeds 1e15");
  std::vector<PrimeSumTerm> out;
  if (hi < 2) return out;
  const auto first = static_cast<std::uint64_t>(std::max(2.0, std::ceil(lo)));
  const auto last = static_cast<std::uint64_t>(std::floor(hi));
  if (first > last) return out;
  for (const arith::PrimePower& pp : arith::prime_powers_in(first, last)) {
    const double w = kernel_lab::tent_weight(pp.n, alpha, H);
    if (w <= 0) continue;
    const double lam = lambda ? lambda(pp.n) : pp.log_p;
    const double arg = -t * std::log(static_cast<double>(pp.n));
    out.push_back({pp.n, lam, w, std::polar(1.0, arg)});
  }
  return out;
}

cplx rhs_prime_sum(double t, double alpha, double H, const PrecisionContext&, const VonMangoldt& lambda) {
  return M_PI / 2 * weighted_prime_sum(t, alpha, H, lambda);
}

QuadResult line_integral(const LineFunction& f, double t, const Kernel& k, double U,
                         std::span<const double> x_singularities, const PrecisionContext& ctx,
                         double max_panel_width) {
  if (!(U > 0)) throw Error(Errc::invalid_argument, "integration half-width must be positive");
  const std::vector<double> sing = shifted(x_singularities, t, U);
  return integrate([&](double u) { return f(t + u) * k(u); }, U, sing, ctx, max_panel_width);
}

LineFunction line_log_zeta(const zeta::CriticalLine& line) {
  return [&line](double x) { return line.log_zeta(x); };
}

namespace {

QuadResult line_integral(const zeta::CriticalLine& line, double t, const Kernel& k, double U,
                         const PrecisionContext& ctx, double max_panel_width) {
  const std::vector<double> sing = shifted(line_singularities(line, t, U), t, U);
  return integrate([&](double u) { return line.log_zeta_at(t, u) * k(u); }, U, sing, ctx, max_panel_width);
}

Kernel lemma_kernel(double alpha, double H) {
  return [alpha, H](double u) { return kernel_lab::fejer_factor(u, alpha) * std::polar(1.0, H * u); };
}

Kernel signed_kernel(const KernelParams& p) {
  return [p](double u) { return cplx(kernel_lab::sign_kernel(u, p)); };
}

}  // namespace

QuadResult lhs_lemma_integral(const LineFunction& f, std::span<const double> x_singularities, double t,
                              double alpha, double H, double T, const PrecisionContext& ctx) {
  if (!(alpha > 0)) throw Error(Errc::invalid_argument, "alpha must be positive");
  return line_integral(f, t, lemma_kernel(alpha, H), truncation(T), x_singularities, ctx, panel_width(alpha, H));
}

QuadResult lhs_lemma_integral(double t, double alpha, double H, double T, const zeta::CriticalLine& line,
                              const PrecisionContext& ctx) {
  if (!(alpha > 0)) throw Error(Errc::invalid_argument, "alpha must be positive");
  return line_integral(line, t, lemma_kernel(alpha, H), truncation(T), ctx, panel_width(alpha, H));
}

ResidualReport lemma_residual(double t, double alpha, double H, double T, const zeta::CriticalLine& line,
                              const PrecisionContext& ctx, const VonMangoldt& lambda) {
  ResidualReport r;
  r.t = t;
  r.alpha = alpha;
  r.H = H;
  r.T = T;
  const QuadResult q = lhs_lemma_integral(t, alpha, H, T, line, ctx);
  r.lhs = q.value;
  r.quad_err = q.err_estimate;
  r.rhs = rhs_prime_sum(t, alpha, H, ctx, lambda);
  r.envelope = lemma_envelope(alpha, H, T);
  r.envelope_applicable = in_lemma_range(t, T);
  finalize(r);
  return r;
}

QuadResult signed_lhs(const LineFunction& f, std::span<const double> x_singularities, double t,
                      const KernelParams& p, const PrecisionContext& ctx) {
  return line_integral(f, t, signed_kernel(p), truncation(p.T), x_singularities, ctx, panel_width(p.alpha(), p.L()));
}

QuadResult signed_lhs(double t, const KernelParams& p, const zeta::CriticalLine& line, const PrecisionContext& ctx) {
  return line_integral(line, t, signed_kernel(p), truncation(p.T), ctx, panel_width(p.alpha(), p.L()));
}

cplx signed_rhs(double t, const KernelParams& p, SignedMode mode, const PrecisionContext&) {
  const double alpha = p.alpha();
  cplx out = cplx(0, M_PI / 2) * weighted_prime_sum(t, alpha, p.L(), {});
  if (mode == SignedMode::full) out += p.sign * 1.5 * M_PI * weighted_prime_sum(t, alpha, 0.0, {});
  return out;
}

ResidualReport signed_residual(double t, const KernelParams& p, const zeta::CriticalLine& line,
                               const PrecisionContext& ctx) {
  ResidualReport r;
  r.t = t;
  r.alpha = p.alpha();
  r.H = p.L();
  r.T = p.T;
  const QuadResult q = signed_lhs(t, p, line, ctx);
  r.lhs = q.value;
  r.quad_err = q.err_estimate;
  r.rhs = signed_rhs(t, p, SignedMode::full, ctx);
  r.envelope = 3 * lemma_envelope(r.alpha, 0.0, p.T) + 2 * lemma_envelope(r.alpha, p.L(), p.T);
  r.envelope_applicable = in_lemma_range(t, p.T);
  finalize(r);
  return r;
}

FirstSumBound first_sum_bound_check(const KernelParams& p) {
  const double alpha = p.alpha();
  std::vector<double> terms;
  for (const PrimeSumTerm& term : prime_sum_terms(0.0, alpha, 0.0)) {
    const double n = static_cast<double>(term.n);
    terms.push_back(term.lambda_n * term.weight / (std::log(n) * std::sqrt(n)));
  }
  return {numerics::stable_sum(terms), kCCal2 * std::pow(std::log(p.T), p.lambda)};
}

}  // namespace resonance::convolution
