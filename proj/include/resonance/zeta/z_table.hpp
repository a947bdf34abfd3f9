#pragma once

#include <array>
#include <vector>

#include "resonance/zeta/ledger.hpp"

namespace resonance::zeta {

// Piecewise Chebyshev interpolant of Hardy's Z on [0, upper], extended as an
// even function. Z is entire, so fixed-width panels of modest degree resolve
// it uniformly; log|Z| near its zeros is then cheap to sample densely.
class HardyZTable {
 public:
  HardyZTable() = default;
  HardyZTable(double upper, const PrecisionContext& ctx, double width = 1.0, int degree = 24);

  double upper() const { return upper_; }
  double operator()(double x) const { return eval(x, 0.0); }

  // Z(x + dx) with dx a rounding-level correction to x (the error term of a
  // two-sum), resolved inside the panel coordinate.
  double eval(double x, double dx) const;

  // Z and its first three derivatives at 0 <= x <= upper.
  std::array<double, 4> jet(double x) const;

  // Largest deviation from direct evaluation seen at the off-node probes
  // taken while building (one per panel).
  double max_probe_error() const { return max_probe_error_; }

 private:
  double upper_ = 0.0;
  double width_ = 1.0;
  int degree_ = 0;
  std::vector<double> coeffs_;   // (degree + 1) per panel
  double max_probe_error_ = 0.0;
};

// Zero ledger plus Z table over the same range: everything needed to sample
// log zeta(1/2 + ix) for |x| <= upper.
class CriticalLine {
 public:
  CriticalLine(ZeroLedger ledger, const PrecisionContext& ctx);

  static CriticalLine build(double upper, const PrecisionContext& ctx);

  const ZeroLedger& ledger() const { return ledger_; }
  const HardyZTable& z() const { return z_; }
  double upper() const { return ledger_.upper_t(); }

  // log|Z(x)| + i pi S(x). Within kFactorRadius of an ordinate g, log|Z|
  // is taken as log|x - g| plus the log of a Taylor quotient, so the
  // singularity sits exactly at the ledger ordinate.
  std::complex<double> log_zeta(double x) const;
  double log_abs_z(double x) const;

  // log zeta(1/2 + i(t + u)) for quadrature in u. The offset from the nearest
  // singular point x_s (= +-gamma or 0) is taken as u - (x_s - t), which is
  // exact near breakpoints computed the same way, so neither the log
  // singularity nor the jump of S is blurred by the rounding of t + u.
  std::complex<double> log_zeta_at(double t, double u) const;

  static constexpr double kFactorRadius = 1e-3;
  double s_value(double x) const { return ledger_.s_value(x); }

 private:
  ZeroLedger ledger_;
  HardyZTable z_;
  std::vector<std::array<double, 3>> quotient_;   // Z', Z''/2, Z'''/6 at each ordinate
};

}  // namespace resonance::zeta
