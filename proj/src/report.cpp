#include "resonance/report.hpp"

#include <cmath>

namespace resonance {

void finalize(ResidualReport& r, double safety) {
  r.residual = std::abs(r.lhs - r.rhs);
  r.pass = std::isfinite(r.residual) && std::isfinite(r.envelope) && r.residual <= safety * r.envelope + r.quad_err;
}

nlohmann::json to_json(const ResidualReport& r) {
  return {{"t", r.t},
          {"alpha", r.alpha},
          {"H", r.H},
          {"T", r.T},
          {"lhs_re", r.lhs.real()},
          {"lhs_im", r.lhs.imag()},
          {"rhs_re", r.rhs.real()},
          {"rhs_im", r.rhs.imag()},
          {"residual", r.residual},
          {"envelope", r.envelope},
          {"quad_err", r.quad_err},
          {"envelope_applicable", r.envelope_applicable},
          {"pass", r.pass}};
}

}  // namespace resonance
