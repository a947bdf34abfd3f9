#pragma once

#include <complex>
#include <filesystem>
#include <vector>

#include "resonance/zeta/zeta.hpp"

namespace resonance::zeta {

// Located zeros 1/2 + i gamma with 0 < gamma <= upper_t. Immutable once
// built; extension returns a new ledger, so a ledger can be shared freely
// between threads.
class ZeroLedger {
 public:
  ZeroLedger() = default;
  ZeroLedger(double upper_t, std::vector<double> ordinates, bool verified);

  double upper_t() const { return upper_t_; }
  long count() const { return static_cast<long>(ordinates_.size()); }
  bool verified() const { return verified_; }
  const std::vector<double>& ordinates() const { return ordinates_; }

  // N(x) for 0 <= x <= upper_t, an ordinate equal to x counted with weight 1/2.
  double n_of_t(double x) const;

  // S(x) = N(x) - theta(x)/pi - 1, extended as an odd function, with S(0) = 0.
  double s_value(double x) const;

  // log zeta(1/2 + ix) = log|Z(x)| + i pi S(x); conjugate symmetric in x.
  std::complex<double> log_zeta(double x, const PrecisionContext& ctx) const;

  // Points in the open interval (a, b) where log zeta(1/2 + ix) is singular
  // or S jumps: +-gamma and 0. Sorted ascending.
  std::vector<double> singularities(double a, double b) const;

  // Same zeros up to a larger height, rescanning only (upper_t, new_upper].
  ZeroLedger extended(double new_upper, const PrecisionContext& ctx) const;

  // CSV: a "# {json}" header, then "ordinate,index" rows at %.17g.
  void save_csv(const std::filesystem::path& path) const;
  static ZeroLedger load_csv(const std::filesystem::path& path);

 private:
  double upper_t_ = 0.0;
  std::vector<double> ordinates_;
  bool verified_ = false;
};

// Zeros on (0, upper_t] from sign changes of Z, with a golden-section search
// for near-missing pairs. The count is checked against the path value of S at
// block ends; a block that disagrees is rescanned at half the step, and
// unresolved_pair is raised when that does not help.
ZeroLedger count_zeros(double upper_t, const PrecisionContext& ctx);

}  // namespace resonance::zeta
