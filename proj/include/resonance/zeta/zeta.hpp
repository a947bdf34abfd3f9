#pragma once

#include <complex>

#include "resonance/numerics/precision.hpp"

namespace resonance::zeta {

using numerics::PrecisionContext;

// Below this height zeta on the critical line is evaluated by Euler-Maclaurin,
// above it by Riemann-Siegel (unless the context asks for more than the
// Riemann-Siegel remainder allows, in which case Euler-Maclaurin is used).
inline constexpr double kRiemannSiegelCrossover = 500.0;

struct CriticalValue {
  double t = 0.0;
  std::complex<double> zeta;   // zeta(1/2 + it)
  double z_hardy = 0.0;        // Z(t), |Z| = |zeta|
  double err = 0.0;
};

struct ArgumentValue {
  double t = 0.0;
  double s_val = 0.0;
  bool at_zero_ordinate = false;
  double err = 0.0;
};

struct ZetaValue {
  std::complex<double> value;
  double err = 0.0;
};

// Riemann-Siegel theta, theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi.
// Odd in t; long double internally, asymptotic series for |t| >= 30.
double theta(double t);

// Same, evaluated in the working type of the context.
double theta(double t, const PrecisionContext& ctx);

// zeta(sigma + it) by Euler-Maclaurin in the working type of the context.
// Throws precision_exhausted when rounding at that width exceeds the target.
ZetaValue zeta_em(double sigma, double t, const PrecisionContext& ctx);

// Z(t) by Riemann-Siegel with corrections C_0..C_4; err bounds the remainder
// plus phase rounding. Requires t >= 2*pi.
ZetaValue riemann_siegel_z(double t);

double hardy_z(double t, const PrecisionContext& ctx);
CriticalValue zeta_half(double t, const PrecisionContext& ctx);

// log zeta(sigma + it) continued from s = 2 along 2 -> 2 + it -> sigma + it.
// At t = 0 and sigma < 1 the imaginary part is the midpoint value 0.
std::complex<double> log_zeta_path(double sigma, double t, const PrecisionContext& ctx);

// S(t) = Im log_zeta_path(1/2, t) / pi, with the midpoint convention at zero
// ordinates (detected as a sign change of Z within kOrdinateResolution).
ArgumentValue s_of_t(double t, const PrecisionContext& ctx);

inline constexpr double kOrdinateResolution = 1e-7;

// (t/2pi) log(t/2pi) - t/2pi + 7/8.
double rvm_main_term(double t);

}  // namespace resonance::zeta
