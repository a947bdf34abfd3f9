#include "resonance/kernel_lab/kernel_lab.hpp"

#include <cmath>
#include <complex>

#include "resonance/error.hpp"
#include "resonance/kernels/kernels.hpp"

namespace resonance::kernel_lab {
namespace {
constexpr double kSeriesThreshold = 0x1p-20;
constexpr int kContourOrder = 8;
}  // namespace

double log2(double T) { return std::log(std::log(T)); }
double log3(double T) { return std::log(std::log(std::log(T))); }

KernelParams make_kernel_params(double lambda, double T, int sign) {
  if (!(lambda > 0 && lambda < 0.5)) throw Error(Errc::invalid_argument, "lambda must lie in (0, 1/2)");
  if (!(T >= std::exp(M_E))) throw Error(Errc::invalid_argument, "T must be at least e^e");
  if (sign != 1 && sign != -1) throw Error(Errc::invalid_argument, "sign must be +1 or -1");
  return {lambda, T, sign};
}

double tent_weight_log(double log_n, double alpha, double H) {
  return std::max(0.0, 2 * alpha - std::fabs(H - log_n));
}

double tent_weight(std::uint64_t n, double alpha, double H) {
  return tent_weight_log(std::log(static_cast<double>(n)), alpha, H);
}

double fejer_factor(double u, double alpha) {
  const double x = alpha * u;
  if (std::fabs(x) < kSeriesThreshold) return alpha * alpha * (1 - x * x / 3);
  const double s = std::sin(x) / u;
  return s * s;
}

double sign_kernel(double u, const KernelParams& p) {
  const double L = p.L();
  return fejer_factor(u, p.lambda * L) * (3.0 * p.sign - 2 * std::sin(u * L));
}

double contour_truncation_envelope(std::uint64_t n, double alpha, double H, double U) {
  return std::exp(2 * alpha + H) / (static_cast<double>(n) * U);
}

double default_truncation(double alpha, double H, double tol) { return std::exp(2 * alpha + std::fabs(H)) / tol; }

ResidualReport contour_tent_check(std::uint64_t n, double alpha, double H, double U, const PrecisionContext& ctx) {
  if (n < 2) throw Error(Errc::invalid_argument, "contour_tent_check requires n >= 2");
  if (!(alpha > 0) || !(U > 0)) throw Error(Errc::invalid_argument, "alpha and U must be positive");
  ResidualReport r;
  r.alpha = alpha;
  r.H = H;
  r.envelope = contour_truncation_envelope(n, alpha, H, U);
  if (r.envelope > ctx.target_abs_err) {
    throw Error(Errc::truncation_too_small, "envelope " + std::to_string(r.envelope) + " above tolerance at U = " +
                                               std::to_string(U));
  }
  // On s = 1 + iy the integrand is sum_k a_k e^{c_k} e^{i c_k y} / (1 + iy)^2
  // with c_k = H - log n + {2a, 0, -2a}; conjugate symmetry in y folds the
  // range onto [0, U] and leaves (1/pi) Re.
  const double logn = std::log(static_cast<double>(n));
  const double c = H - logn;
  const double freqs[3] = {c + 2 * alpha, c, c - 2 * alpha};
  const std::complex<double> amps[3] = {std::exp(freqs[0]), -2 * std::exp(freqs[1]), std::exp(freqs[2])};
  const double width = M_PI / (2 * (alpha + std::fabs(H) + logn));
  const auto coarse = kernels::rational_oscillatory_integral(amps, freqs, 0.0, U, width, kContourOrder);
  const auto fine = kernels::rational_oscillatory_integral(amps, freqs, 0.0, U, width / 2, kContourOrder);
  r.lhs = fine.real() / M_PI;
  r.rhs = tent_weight_log(logn, alpha, H);
  r.quad_err = std::fabs(fine.real() - coarse.real()) / M_PI;
  finalize(r);
  return r;
}

}  // namespace resonance::kernel_lab
