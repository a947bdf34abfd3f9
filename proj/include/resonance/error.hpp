#pragma once

#include <stdexcept>
#include <string>

namespace resonance {

// Failure categories. The CLI maps these onto exit codes.
enum class Errc {
  invalid_argument,        // precondition violated by the caller
  precision_exhausted,     // requested tolerance not reachable at this precision
  quadrature_exhausted,    // adaptive refinement hit max depth
  ordinate_of_zero,        // path passes within resolution of a zero
  unresolved_pair,         // two zeros closer than the refinement floor
  truncation_too_small,    // contour truncation envelope above tolerance
  scale_too_small,         // log_3 N undefined at this T
  support_too_large,       // 2^|P| above the enumeration cap
  scale_mismatch,          // resonator prime outside the kernel support
  io,                      // malformed or unreadable file
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace resonance
