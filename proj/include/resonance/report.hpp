#pragma once

#include <complex>
#include <json.hpp>

namespace resonance {

// Outcome of one identity check: a numerically computed side against a
// reference side, with the error envelope the identity allows.
struct ResidualReport {
  double t = 0.0;
  double alpha = 0.0;
  double H = 0.0;
  double T = 0.0;
  std::complex<double> lhs;
  std::complex<double> rhs;
  double residual = 0.0;
  double envelope = 0.0;
  double quad_err = 0.0;
  bool envelope_applicable = true;   // false outside the stated parameter range
  bool pass = false;
};

// pass iff residual <= safety * envelope + quad_err.
void finalize(ResidualReport& r, double safety = 1.0);

nlohmann::json to_json(const ResidualReport& r);

}  // namespace resonance
