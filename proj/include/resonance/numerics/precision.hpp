#pragma once

#include <cstddef>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/float128.hpp>

namespace resonance::numerics {

inline constexpr int kPrecisionFloor = 64;
inline constexpr int kPrecisionCeiling = 256;

// Working types behind the precision tiers. A request is served by the
// smallest tier whose mantissa is at least the requested width.
using Extended = long double;                    // 64-bit mantissa on x86-64
using Quad = boost::multiprecision::float128;    // 113-bit mantissa
using Wide = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

enum class Tier { extended, quad, wide };

struct PrecisionContext {
  int precision_bits = kPrecisionFloor;
  double target_abs_err = 1e-10;
  int max_quad_depth = 48;

  // Tolerance each initial quadrature panel must meet so that the sum over
  // `panels` panels stays within target_abs_err.
  double panel_tolerance(std::size_t panels) const {
    return panels == 0 ? target_abs_err : target_abs_err / static_cast<double>(panels);
  }

  Tier tier() const noexcept {
    if (precision_bits <= 64) return Tier::extended;
    if (precision_bits <= 113) return Tier::quad;
    return Tier::wide;
  }

  // Mantissa width actually used by the tier.
  int working_bits() const noexcept {
    switch (tier()) {
      case Tier::extended: return 64;
      case Tier::quad: return 113;
      case Tier::wide: return 256;
    }
    return 64;
  }
};

PrecisionContext make_context(int precision_bits, double target_abs_err, int max_quad_depth = 48);

// Same tolerances, different precision.
PrecisionContext with_bits(const PrecisionContext& ctx, int precision_bits);
PrecisionContext with_tolerance(const PrecisionContext& ctx, double target_abs_err);

// Calls f(Real{}) with the working type selected by the context tier.
template <class F>
decltype(auto) dispatch_tier(const PrecisionContext& ctx, F&& f) {
  switch (ctx.tier()) {
    case Tier::quad: return f(Quad{});
    case Tier::wide: return f(Wide{});
    case Tier::extended: break;
  }
  return f(Extended{});
}

}  // namespace resonance::numerics
