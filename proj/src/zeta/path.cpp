#include <cmath>

#include "em.hpp"
#include "resonance/zeta/zeta.hpp"

namespace resonance::zeta {
namespace {

using detail::Cx;
using detail::EulerMaclaurin;

constexpr double kQuarterPi = M_PI / 4;
constexpr int kInitialSegments = 16;

// Continuous variation of arg zeta along sigma in [lo, hi] at fixed t.
// A segment is accepted when the rotation across it and across each half is
// below pi/4 and the two halves rotate by similar amounts; otherwise it is
// bisected. Failing to resolve above a width of a few ulps means the segment
// ends at (or numerically on) a zero.
template <class Real>
class ArgTracker {
 public:
  ArgTracker(const EulerMaclaurin<Real>& em) : em_(em) {}

  Cx<Real> value(double sigma) const {
    auto v = em_.eval(sigma);
    if (static_cast<double>(detail::abs(v.z)) <= v.err) {
      throw Error(Errc::ordinate_of_zero, "zeta vanishes numerically at sigma = " + std::to_string(sigma));
    }
    return v.z;
  }

  double rotation(double a, const Cx<Real>& za, double b, const Cx<Real>& zb) const {
    const double d = static_cast<double>(detail::arg(zb / za));
    const double m = 0.5 * (a + b);
    if (!(m > a && m < b)) {
      throw Error(Errc::ordinate_of_zero, "argument not resolved near sigma = " + std::to_string(a));
    }
    const Cx<Real> zm = value(m);
    const double d1 = static_cast<double>(detail::arg(zm / za));
    const double d2 = static_cast<double>(detail::arg(zb / zm));
    if (std::fabs(d) < kQuarterPi && std::fabs(d1) < kQuarterPi && std::fabs(d2) < kQuarterPi &&
        std::fabs(d1 - d2) < kQuarterPi / 2) {
      return d1 + d2;
    }
    return rotation(a, za, m, zm) + rotation(m, zm, b, zb);
  }

 private:
  const EulerMaclaurin<Real>& em_;
};

template <class Real>
std::complex<double> log_zeta_path_impl(double sigma, double t, const PrecisionContext& ctx) {
  EulerMaclaurin<Real> em(t, sigma, 2.0, ctx.target_abs_err);
  if (em.rounding() > ctx.target_abs_err) {
    throw Error(Errc::precision_exhausted, "rounding exceeds target_abs_err on the path");
  }
  ArgTracker<Real> tracker(em);
  Cx<Real> prev = tracker.value(2.0);
  // Re zeta(2 + it) >= 2 - pi^2/6 > 0, so the principal branch is the
  // continuation from arg zeta(2) = 0 along the vertical leg.
  double total = static_cast<double>(detail::arg(prev));
  double a = 2.0;
  for (int k = 1; k <= kInitialSegments; ++k) {
    const double b = k == kInitialSegments ? sigma : 2.0 - (2.0 - sigma) * k / kInitialSegments;
    const Cx<Real> zb = tracker.value(b);
    // Segments run from larger to smaller sigma; rotation() only needs a != b.
    total += b < a ? -tracker.rotation(b, zb, a, prev) : tracker.rotation(a, prev, b, zb);
    prev = zb;
    a = b;
  }
  using std::log;
  return {static_cast<double>(log(detail::norm(prev)) / 2), total};
}

}  // namespace

std::complex<double> log_zeta_path(double sigma, double t, const PrecisionContext& ctx) {
  if (!(sigma >= 0.5)) throw Error(Errc::invalid_argument, "log_zeta_path requires sigma >= 1/2");
  if (t < 0) return std::conj(log_zeta_path(sigma, -t, ctx));
  if (t == 0) {
    if (sigma == 1.0) throw Error(Errc::invalid_argument, "zeta has a pole at s = 1");
    const ZetaValue v = zeta_em(sigma, 0.0, ctx);
    return {std::log(std::fabs(v.value.real())), 0.0};
  }
  return numerics::dispatch_tier(ctx, [&](auto tag) {
    return log_zeta_path_impl<decltype(tag)>(sigma, t, ctx);
  });
}

ArgumentValue s_of_t(double t, const PrecisionContext& ctx) {
  if (t < 0) {
    ArgumentValue v = s_of_t(-t, ctx);
    v.t = t;
    v.s_val = -v.s_val;
    return v;
  }
  ArgumentValue out;
  out.t = t;
  if (t == 0) return out;  // midpoint of S(0-) = 1 and S(0+) = -1
  const double d = kOrdinateResolution;
  const double za = hardy_z(t - d, ctx);
  const double zb = hardy_z(t + d, ctx);
  if (za == 0 || zb == 0 || std::signbit(za) != std::signbit(zb)) {
    const double lo = log_zeta_path(0.5, t - 2 * d, ctx).imag() / M_PI;
    const double hi = log_zeta_path(0.5, t + 2 * d, ctx).imag() / M_PI;
    out.s_val = 0.5 * (lo + hi);
    out.at_zero_ordinate = true;
    out.err = 4 * d * std::log(t + 2) + ctx.target_abs_err;
    return out;
  }
  out.s_val = log_zeta_path(0.5, t, ctx).imag() / M_PI;
  out.err = ctx.target_abs_err;
  return out;
}

}  // namespace resonance::zeta
