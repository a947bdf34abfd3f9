#include <cstddef>

#include "resonance/kernels/kernels.hpp"

namespace resonance::kernels {
namespace {
bool use_avx2() { return active_isa() == Isa::avx2; }
}  // namespace

void sincos(std::span<const double> x, std::span<double> s, std::span<double> c) {
  if (use_avx2()) return avx2::sincos(x, s, c);
  scalar::sincos(x, s, c);
}

std::complex<double> dirichlet_sum(double t, double phase0, std::span<const double> logs,
                                   std::span<const double> coeffs) {
  if (use_avx2()) return avx2::dirichlet_sum(t, phase0, logs, coeffs);
  return scalar::dirichlet_sum(t, phase0, logs, coeffs);
}

void dirichlet_sum_batch(std::span<const double> ts, double phase0, std::span<const double> logs,
                         std::span<const double> coeffs, std::span<std::complex<double>> out) {
  const bool wide = use_avx2();
  for (std::size_t j = 0; j < ts.size(); ++j) {
    out[j] = wide ? avx2::dirichlet_sum(ts[j], phase0, logs, coeffs)
                  : scalar::dirichlet_sum(ts[j], phase0, logs, coeffs);
  }
}

std::complex<double> rational_oscillatory_integral(std::span<const std::complex<double>> amps,
                                                   std::span<const double> freqs, double lo, double hi,
                                                   double width, int order) {
  if (use_avx2()) return avx2::rational_oscillatory_integral(amps, freqs, lo, hi, width, order);
  return scalar::rational_oscillatory_integral(amps, freqs, lo, hi, width, order);
}

double hermite_table_sum(const HermiteTable& table, std::span<const double> points, double shift) {
  if (use_avx2()) return avx2::hermite_table_sum(table, points, shift);
  return scalar::hermite_table_sum(table, points, shift);
}

}  // namespace resonance::kernels
