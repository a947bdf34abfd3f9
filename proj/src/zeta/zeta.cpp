#include "resonance/zeta/zeta.hpp"

#include <cmath>

#include "em.hpp"

namespace resonance::zeta {
namespace {

using detail::Cx;
using detail::EulerMaclaurin;

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

template <class Real>
void require_precision(const EulerMaclaurin<Real>& em, const PrecisionContext& ctx) {
  if (em.rounding() > ctx.target_abs_err) {
    throw Error(Errc::precision_exhausted,
                "rounding at " + std::to_string(ctx.working_bits()) + " bits exceeds target_abs_err");
  }
}

template <class Real>
std::complex<double> to_complex(const Cx<Real>& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

// Z and zeta at one ordinate, both from Euler-Maclaurin in type Real.
template <class Real>
CriticalValue critical_em(double t, const PrecisionContext& ctx) {
  EulerMaclaurin<Real> em(t, 0.5, 0.5, ctx.target_abs_err);
  require_precision(em, ctx);
  const auto v = em.eval(0.5);
  const Real th = detail::theta_hp<Real>(Real(t));
  const Cx<Real> rot = detail::expi(th) * v.z;
  CriticalValue out;
  out.t = t;
  out.zeta = to_complex(v.z);
  out.z_hardy = static_cast<double>(rot.re);
  out.err = v.err + 2 * std::numeric_limits<double>::epsilon() * std::abs(out.z_hardy);
  return out;
}

CriticalValue critical_value(double t, const PrecisionContext& ctx) {
  if (t > kRiemannSiegelCrossover && ctx.tier() == numerics::Tier::extended) {
    const ZetaValue rs = riemann_siegel_z(t);
    if (rs.err <= ctx.target_abs_err) {
      const double z = rs.value.real();
      const double th = theta(t);
      return {t, std::polar(z, -th), z, rs.err};
    }
  }
  return numerics::dispatch_tier(ctx, [&](auto tag) { return critical_em<decltype(tag)>(t, ctx); });
}

}  // namespace

double theta(double t) {
  if (t < 0) return -theta(-t);
  if (t < 30) return static_cast<double>(detail::theta_hp<long double>(static_cast<long double>(t)));
  const long double x = t;
  const long double r = 1 / x;
  const long double r2 = r * r;
  const long double series =
      r * (1.0L / 48 + r2 * (7.0L / 5760 + r2 * (31.0L / 80640 + r2 * (127.0L / 430080 + r2 * (511.0L / 1216512)))));
  return static_cast<double>(x / 2 * std::log(x / (2 * kPiL)) - x / 2 - kPiL / 8 + series);
}

double theta(double t, const PrecisionContext& ctx) {
  if (ctx.tier() == numerics::Tier::extended) return theta(t);
  return numerics::dispatch_tier(ctx, [&](auto tag) {
    using Real = decltype(tag);
    return static_cast<double>(detail::theta_hp<Real>(Real(t)));
  });
}

ZetaValue zeta_em(double sigma, double t, const PrecisionContext& ctx) {
  return numerics::dispatch_tier(ctx, [&](auto tag) {
    using Real = decltype(tag);
    EulerMaclaurin<Real> em(t, sigma, sigma, ctx.target_abs_err);
    require_precision(em, ctx);
    const auto v = em.eval(sigma);
    return ZetaValue{to_complex(v.z), v.err};
  });
}

double hardy_z(double t, const PrecisionContext& ctx) { return critical_value(std::fabs(t), ctx).z_hardy; }

CriticalValue zeta_half(double t, const PrecisionContext& ctx) {
  CriticalValue v = critical_value(std::fabs(t), ctx);
  if (t < 0) {
    v.t = t;
    v.zeta = std::conj(v.zeta);
  }
  return v;
}

double rvm_main_term(double t) {
  const double x = t / (2 * M_PI);
  return x * std::log(x) - x + 7.0 / 8.0;
}

}  // namespace resonance::zeta
