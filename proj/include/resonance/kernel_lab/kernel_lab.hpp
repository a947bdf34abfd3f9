#pragma once

#include <cstdint>

#include "resonance/numerics/precision.hpp"
#include "resonance/report.hpp"

namespace resonance::kernel_lab {

using numerics::PrecisionContext;

// Iterated logarithms: log2(T) = log log T, log3(T) = log log log T.
double log2(double T);
double log3(double T);

struct KernelParams {
  double lambda = 0.45;
  double T = 0.0;
  int sign = 1;

  double L() const { return log2(T); }             // log log T
  double alpha() const { return lambda * L(); }
};

// Validates 0 < lambda < 1/2, T >= e^e, sign = +-1.
KernelParams make_kernel_params(double lambda, double T, int sign);

// max{0, 2 alpha - |H - log n|}.
double tent_weight(std::uint64_t n, double alpha, double H);
double tent_weight_log(double log_n, double alpha, double H);

// (sin(alpha u) / u)^2, equal to alpha^2 at u = 0.
double fejer_factor(double u, double alpha);

// fejer_factor(u, lambda log2 T) * (3 sign - 2 sin(u log2 T)).
double sign_kernel(double u, const KernelParams& p);

// Envelope e^{2 alpha + H} / (n U) for truncating the contour at |Im s| = U.
double contour_truncation_envelope(std::uint64_t n, double alpha, double H, double U);

// Smallest U whose envelope e^{2 alpha + |H|}/U meets the tolerance.
double default_truncation(double alpha, double H, double tol);

// (1/2 pi i) times the integral over Re s = 1, |Im s| <= U of
// n^{-s} ((e^{alpha s} - e^{-alpha s}) / s)^2 e^{H s} ds, against
// tent_weight(n, alpha, H). Throws truncation_too_small when the envelope
// exceeds ctx.target_abs_err.
ResidualReport contour_tent_check(std::uint64_t n, double alpha, double H, double U, const PrecisionContext& ctx);

}  // namespace resonance::kernel_lab
