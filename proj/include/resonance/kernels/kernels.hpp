#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "resonance/kernels/isa.hpp"

namespace resonance::kernels {

// Cubic Hermite interpolant on a uniform grid x0 + i*h. Outside the grid the
// end values are held constant.
struct HermiteTable {
  double x0 = 0.0;
  double h = 1.0;
  std::vector<double> value;
  std::vector<double> slope;

  double x_end() const { return x0 + h * static_cast<double>(value.size() - 1); }
  double eval(double x) const;
};

// Each kernel comes in three flavours: the dispatching entry point, the
// scalar reference, and the AVX2 variant. Calling avx2::* on a CPU without
// AVX2/FMA is undefined; go through the dispatcher unless testing.

// s[i] = sin(x[i]), c[i] = cos(x[i]).
void sincos(std::span<const double> x, std::span<double> s, std::span<double> c);

// sum_k coeff[k] * exp(i * (phase0 - t * logs[k])), compensated per lane.
std::complex<double> dirichlet_sum(double t, double phase0, std::span<const double> logs,
                                   std::span<const double> coeffs);

// out[j] = dirichlet_sum(ts[j], phase0, logs, coeffs).
void dirichlet_sum_batch(std::span<const double> ts, double phase0, std::span<const double> logs,
                         std::span<const double> coeffs, std::span<std::complex<double>> out);

// Integral over [lo, hi] of sum_k amps[k] exp(i freqs[k] y) / (1 + i y)^2 dy,
// Gauss-Legendre of `order` points (multiple of 4) on equal panels no wider
// than `width`.
std::complex<double> rational_oscillatory_integral(std::span<const std::complex<double>> amps,
                                                   std::span<const double> freqs, double lo, double hi,
                                                   double width, int order);

// sum_j table(points[j] - shift).
double hermite_table_sum(const HermiteTable& table, std::span<const double> points, double shift);

namespace scalar {
void sincos(std::span<const double> x, std::span<double> s, std::span<double> c);
std::complex<double> dirichlet_sum(double t, double phase0, std::span<const double> logs,
                                   std::span<const double> coeffs);
std::complex<double> rational_oscillatory_integral(std::span<const std::complex<double>> amps,
                                                   std::span<const double> freqs, double lo, double hi,
                                                   double width, int order);
double hermite_table_sum(const HermiteTable& table, std::span<const double> points, double shift);
}  // namespace scalar

namespace avx2 {
void sincos(std::span<const double> x, std::span<double> s, std::span<double> c);
std::complex<double> dirichlet_sum(double t, double phase0, std::span<const double> logs,
                                   std::span<const double> coeffs);
std::complex<double> rational_oscillatory_integral(std::span<const std::complex<double>> amps,
                                                   std::span<const double> freqs, double lo, double hi,
                                                   double width, int order);
double hermite_table_sum(const HermiteTable& table, std::span<const double> points, double shift);
}  // namespace avx2

}  // namespace resonance::kernels
