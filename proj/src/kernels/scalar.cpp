#include <algorithm>
#include <cmath>

#include "resonance/kernels/kernels.hpp"
#include "resonance/numerics/quadrature.hpp"
#include "resonance/numerics/summation.hpp"

namespace resonance::kernels {

double HermiteTable::eval(double x) const {
  const std::size_t n = value.size();
  if (n == 0) return 0.0;
  const double pos = (x - x0) / h;
  if (!(pos > 0.0)) return value.front();
  if (pos >= static_cast<double>(n - 1)) return value.back();
  const auto i = static_cast<std::size_t>(pos);
  const double s = pos - static_cast<double>(i);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * value[i] + h10 * h * slope[i] + h01 * value[i + 1] + h11 * h * slope[i + 1];
}

namespace scalar {

void sincos(std::span<const double> x, std::span<double> s, std::span<double> c) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

std::complex<double> dirichlet_sum(double t, double phase0, std::span<const double> logs,
                                   std::span<const double> coeffs) {
  numerics::CompensatedSum<double> re, im;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    const double a = std::fma(-t, logs[k], phase0);
    re.add(coeffs[k] * std::cos(a));
    im.add(coeffs[k] * std::sin(a));
  }
  return {re.value(), im.value()};
}

std::complex<double> rational_oscillatory_integral(std::span<const std::complex<double>> amps,
                                                   std::span<const double> freqs, double lo, double hi,
                                                   double width, int order) {
  if (!(hi > lo)) return {};
  const auto& rule = numerics::gauss_legendre(order);
  const double span = hi - lo;
  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(span / width)));
  const double h = span / static_cast<double>(panels);
  numerics::CompensatedComplexSum<double> total;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * h;
    double pr = 0.0, pi = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double y = mid + 0.5 * h * rule.nodes[i];
      const double q = 1.0 + y * y;
      const double q2 = q * q;
      const double rr = (1.0 - y * y) / q2;
      const double ri = -2.0 * y / q2;
      double sr = 0.0, si = 0.0;
      for (std::size_t k = 0; k < freqs.size(); ++k) {
        const double a = freqs[k] * y;
        const double cs = std::cos(a), sn = std::sin(a);
        sr += amps[k].real() * cs - amps[k].imag() * sn;
        si += amps[k].real() * sn + amps[k].imag() * cs;
      }
      pr += rule.weights[i] * (sr * rr - si * ri);
      pi += rule.weights[i] * (sr * ri + si * rr);
    }
    total.add({0.5 * h * pr, 0.5 * h * pi});
  }
  return total.value();
}

double hermite_table_sum(const HermiteTable& table, std::span<const double> points, double shift) {
  numerics::CompensatedSum<double> acc;
  for (double p : points) acc.add(table.eval(p - shift));
  return acc.value();
}

}  // namespace scalar
}  // namespace resonance::kernels
