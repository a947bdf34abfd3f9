#include "resonance/zeta/z_table.hpp"

#include <algorithm>
#include <cmath>

#include "resonance/error.hpp"
#include "resonance/numerics/summation.hpp"

namespace resonance::zeta {

HardyZTable::HardyZTable(double upper, const PrecisionContext& ctx, double width, int degree)
    : upper_(upper), width_(width), degree_(degree) {
  if (!(upper > 0) || !(width > 0) || degree < 2) throw Error(Errc::invalid_argument, "bad Z table shape");
  const int n = degree + 1;
  const auto panels = static_cast<std::size_t>(std::ceil(upper / width));
  coeffs_.assign(panels * n, 0.0);
  std::vector<double> nodes(n), values(n);
  for (int j = 0; j < n; ++j) nodes[j] = std::cos(M_PI * (j + 0.5) / n);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (int j = 0; j < n; ++j) values[j] = hardy_z(mid + 0.5 * width * nodes[j], ctx);
    double* c = &coeffs_[p * n];
    for (int k = 0; k < n; ++k) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += values[j] * std::cos(M_PI * k * (j + 0.5) / n);
      c[k] = (k == 0 ? 1.0 : 2.0) * s / n;
    }
    const double probe = mid + 0.5 * width * 0.4142135623730951;
    if (probe <= upper) max_probe_error_ = std::max(max_probe_error_, std::fabs((*this)(probe) - hardy_z(probe, ctx)));
  }
}

double HardyZTable::eval(double x, double dx) const {
  if (x < 0) {
    x = -x;
    dx = -dx;
  }
  if (x > upper_) throw Error(Errc::invalid_argument, "Z table queried beyond its range");
  const int n = degree_ + 1;
  const auto panels = coeffs_.size() / n;
  const auto p = std::min(static_cast<std::size_t>(x / width_), panels - 1);
  const double y = 2 * ((x - (p + 0.5) * width_) + dx) / width_;
  const double* c = &coeffs_[p * n];
  double b1 = 0, b2 = 0;
  for (int k = n - 1; k >= 1; --k) {
    const double b0 = 2 * y * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return y * b1 - b2 + c[0];
}

std::array<double, 4> HardyZTable::jet(double x) const {
  if (x < 0 || x > upper_) throw Error(Errc::invalid_argument, "Z table queried beyond its range");
  const int n = degree_ + 1;
  const auto panels = coeffs_.size() / n;
  const auto p = std::min(static_cast<std::size_t>(x / width_), panels - 1);
  const double y = 2 * (x - (p + 0.5) * width_) / width_;
  const double* c = &coeffs_[p * n];
  // T_k and its first three derivatives by the three-term recurrence.
  double t0 = 1, t1 = y, d0 = 0, d1 = 1, e0 = 0, e1 = 0, f0 = 0, f1 = 0;
  std::array<double, 4> out{c[0] + c[1] * y, c[1], 0, 0};
  for (int k = 1; k + 1 < n; ++k) {
    const double t2 = 2 * y * t1 - t0;
    const double d2 = 2 * t1 + 2 * y * d1 - d0;
    const double e2 = 4 * d1 + 2 * y * e1 - e0;
    const double f2 = 6 * e1 + 2 * y * f1 - f0;
    out[0] += c[k + 1] * t2;
    out[1] += c[k + 1] * d2;
    out[2] += c[k + 1] * e2;
    out[3] += c[k + 1] * f2;
    t0 = t1, t1 = t2, d0 = d1, d1 = d2, e0 = e1, e1 = e2, f0 = f1, f1 = f2;
  }
  const double s = 2 / width_;
  out[1] *= s;
  out[2] *= s * s;
  out[3] *= s * s * s;
  return out;
}

CriticalLine::CriticalLine(ZeroLedger ledger, const PrecisionContext& ctx)
    : ledger_(std::move(ledger)), z_(ledger_.upper_t(), ctx) {
  quotient_.reserve(ledger_.ordinates().size());
  for (double g : ledger_.ordinates()) {
    const auto j = z_.jet(g);
    quotient_.push_back({j[1], j[2] / 2, j[3] / 6});
  }
}

CriticalLine CriticalLine::build(double upper, const PrecisionContext& ctx) {
  return CriticalLine(count_zeros(upper, ctx), ctx);
}

double CriticalLine::log_abs_z(double x) const {
  const double ax = std::fabs(x);
  const auto& g = ledger_.ordinates();
  if (!g.empty()) {
    auto it = std::lower_bound(g.begin(), g.end(), ax);
    auto k = static_cast<std::size_t>(it - g.begin());
    if (it == g.end() || (k > 0 && ax - g[k - 1] < *it - ax)) --k;
    // Rounding of t + u can land exactly on the ordinate.
    double h = ax - g[k];
    if (h == 0) h = std::nextafter(g[k], 2 * g[k]) - g[k];
    if (std::fabs(h) < kFactorRadius) {
      const auto& q = quotient_[k];
      return std::log(std::fabs(h)) + std::log(std::fabs(q[0] + h * (q[1] + h * q[2])));
    }
  }
  return std::log(std::fabs(z_(ax)));
}

std::complex<double> CriticalLine::log_zeta_at(double t, double u) const {
  // x + dx == t + u exactly; the quadrature resolves u far below ulp(x).
  double x, dx;
  numerics::two_sum(t, u, x, dx);
  const double ax = std::fabs(x);
  const auto& g = ledger_.ordinates();
  if (g.empty()) return log_zeta(x);
  auto it = std::lower_bound(g.begin(), g.end(), ax);
  auto k = static_cast<std::size_t>(it - g.begin());
  if (it == g.end() || (k > 0 && ax - g[k - 1] < *it - ax)) --k;
  const double sign = x < 0 ? -1.0 : 1.0;
  double h = sign * (u - (sign * g[k] - t));   // |x| - g[k]

  // Near x = 0 the jump of S is at u = -t, which t + u resolves exactly.
  double n = static_cast<double>(k) + (h > 0 ? 1.0 : h < 0 ? 0.0 : 0.5);
  const double th = theta(ax) + 0.5 * std::log(ax / (2 * M_PI)) * sign * dx;
  double s = x == 0 ? 0.0 : sign * (n - th / M_PI - 1.0);

  double log_abs;
  if (std::fabs(h) < kFactorRadius) {
    if (h == 0) h = std::nextafter(g[k], 2 * g[k]) - g[k];
    const auto& q = quotient_[k];
    log_abs = std::log(std::fabs(h)) + std::log(std::fabs(q[0] + h * (q[1] + h * q[2])));
  } else {
    log_abs = std::log(std::fabs(z_.eval(x, dx)));
  }
  return {log_abs, M_PI * s};
}

std::complex<double> CriticalLine::log_zeta(double x) const {
  return {log_abs_z(x), M_PI * ledger_.s_value(x)};
}

}  // namespace resonance::zeta
