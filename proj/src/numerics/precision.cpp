#include "resonance/numerics/precision.hpp"

#include <cmath>
#include <string>

#include "resonance/error.hpp"

namespace resonance {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::precision_exhausted: return "precision-exhausted";
    case Errc::quadrature_exhausted: return "quadrature-exhausted";
    case Errc::ordinate_of_zero: return "ordinate-of-zero";
    case Errc::unresolved_pair: return "unresolved-pair";
    case Errc::truncation_too_small: return "truncation-too-small";
    case Errc::scale_too_small: return "scale-too-small";
    case Errc::support_too_large: return "support-too-large";
    case Errc::scale_mismatch: return "scale-mismatch";
    case Errc::io: return "io";
  }
  return "unknown";
}

namespace numerics {

PrecisionContext make_context(int precision_bits, double target_abs_err, int max_quad_depth) {
  if (precision_bits < kPrecisionFloor) {
    throw Error(Errc::invalid_argument,
                "precision below floor (" + std::to_string(precision_bits) + " < " +
                    std::to_string(kPrecisionFloor) + ")");
  }
  if (precision_bits > kPrecisionCeiling) {
    throw Error(Errc::invalid_argument,
                "precision above ceiling (" + std::to_string(precision_bits) + " > " +
                    std::to_string(kPrecisionCeiling) + ")");
  }
  if (!(target_abs_err > 0.0) || !std::isfinite(target_abs_err)) {
    throw Error(Errc::invalid_argument, "target_abs_err must be positive and finite");
  }
  if (max_quad_depth <= 0) {
    throw Error(Errc::invalid_argument, "max_quad_depth must be positive");
  }
  return PrecisionContext{precision_bits, target_abs_err, max_quad_depth};
}

PrecisionContext with_bits(const PrecisionContext& ctx, int precision_bits) {
  return make_context(precision_bits, ctx.target_abs_err, ctx.max_quad_depth);
}

PrecisionContext with_tolerance(const PrecisionContext& ctx, double target_abs_err) {
  return make_context(ctx.precision_bits, target_abs_err, ctx.max_quad_depth);
}

}  // namespace numerics
}  // namespace resonance
