#pragma once

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "cx.hpp"
#include "resonance/error.hpp"

namespace resonance::zeta::detail {

template <class Real>
Real pi_v() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
double eps_v() {
  return static_cast<double>(std::numeric_limits<Real>::epsilon());
}

// B_{2k} / (2k)! for k = 0 .. kBernoulliCount-1.
inline constexpr int kBernoulliCount = 200;

template <class Real>
const std::vector<Real>& bernoulli_over_factorial() {
  static const std::vector<Real> table = [] {
    std::vector<Real> out;
    Real fact = 1;
    for (int k = 0; k < kBernoulliCount; ++k) {
      if (k > 0) fact *= Real(2 * k - 1) * Real(2 * k);
      out.push_back(boost::math::bernoulli_b2n<Real>(k) / fact);
    }
    return out;
  }();
  return table;
}

// Im log Gamma(1/4 + it/2) - (t/2) log pi, by Stirling after shifting the
// argument out to |z| >= R.
template <class Real>
Real theta_hp(const Real& t) {
  using std::atan2;
  using std::log;
  const int digits = std::numeric_limits<Real>::digits;
  const Real radius = Real(digits) / 6;
  Cx<Real> z(Real(1) / 4, t / 2);
  Real shift_arg = 0;
  while (abs(z) < radius) {
    shift_arg += arg(z);
    z.re += 1;
  }
  // Stirling: (z - 1/2) log z - z + log(2pi)/2 + sum B_2k / (2k (2k-1) z^{2k-1}).
  Cx<Real> lz = log(z);
  Cx<Real> acc = (z - Cx<Real>(Real(1) / 2)) * lz - z;
  const auto& b = bernoulli_over_factorial<Real>();
  Cx<Real> zinv = Cx<Real>(Real(1)) / z;
  Cx<Real> z2inv = zinv * zinv;
  Cx<Real> pw = zinv;
  const Real eps = std::numeric_limits<Real>::epsilon();
  Real fact = 1;  // (2k)! / (2k (2k-1)) = (2k-2)!
  for (int k = 1; k < kBernoulliCount; ++k) {
    if (k > 1) fact *= Real(2 * k - 3) * Real(2 * k - 2);
    Cx<Real> term = pw * Cx<Real>(b[k] * fact);
    acc += term;
    if (abs(term) < eps * abs(acc)) break;
    pw *= z2inv;
  }
  return acc.im - shift_arg - t / 2 * log(pi_v<Real>());
}

// Euler-Maclaurin summation for zeta(sigma + it) at fixed t, valid for sigma
// in [sigma_lo, sigma_hi]. The phases n^{-it} are computed once.
template <class Real>
class EulerMaclaurin {
 public:
  struct Value {
    Cx<Real> z;
    double err;
  };

  EulerMaclaurin(double t, double sigma_lo, double sigma_hi, double tol) : t_(t) {
    using std::ceil;
    using std::log;
    const double smax = std::hypot(std::max(std::fabs(sigma_lo), std::fabs(sigma_hi)), t);
    m_ = static_cast<int>(std::clamp(std::ceil(-std::log(tol) / 0.81) + 2, 4.0, 190.0));
    n_ = static_cast<long>(1.5 * (smax + 2 * m_) / (2 * M_PI)) + 2;
    n_ = std::max(n_, 8L);
    const double lnN = std::log(static_cast<double>(n_));
    // Phase errors of size eps * t log n are independent across n and add
    // like a random walk; the magnitudes add linearly.
    rounding_ = eps_v<Real>() * (4 * (std::fabs(t) * lnN + 4) * std::sqrt(lnN + 1) +
                                 2 * std::sqrt(static_cast<double>(n_)));
    logs_.resize(n_ + 1);
    phase_.resize(n_ + 1);
    const Real rt(t);
    for (long n = 1; n <= n_; ++n) {
      logs_[n] = log(Real(n));
      phase_[n] = expi(Real(-(rt * logs_[n])));
    }
    coef_ = &bernoulli_over_factorial<Real>();
  }

  long terms() const { return n_; }
  double rounding() const { return rounding_; }

  Value eval(double sigma) const {
    using std::exp;
    if (sigma == 1.0 && t_ == 0.0) throw Error(Errc::invalid_argument, "zeta has a pole at s = 1");
    const Cx<Real> s{Real(sigma), Real(t_)};
    const Real rs(sigma);
    Cx<Real> sum;
    for (long n = 1; n < n_; ++n) {
      const Real mag = exp(-rs * logs_[n]);
      sum += Cx<Real>(mag * phase_[n].re, mag * phase_[n].im);
    }
    const Real magN = exp(-rs * logs_[n_]);
    const Cx<Real> nms(magN * phase_[n_].re, magN * phase_[n_].im);  // N^{-s}
    const Real rn(n_);
    sum += Cx<Real>(rn) * nms / (s - Cx<Real>(Real(1)));
    sum += Cx<Real>(nms.re / 2, nms.im / 2);
    Cx<Real> poch = s;                                // s (s+1) ... (s+2k-2)
    Cx<Real> pw(nms.re / rn, nms.im / rn);            // N^{-s-2k+1}
    const Real n2 = rn * rn;
    const auto& b = *coef_;
    Cx<Real> term;
    for (int k = 1; k <= m_ + 1; ++k) {
      term = Cx<Real>(b[k]) * poch * pw;
      if (k == m_ + 1) break;
      sum += term;
      poch *= Cx<Real>(rs + Real(2 * k - 1), Real(t_)) * Cx<Real>(rs + Real(2 * k), Real(t_));
      pw = Cx<Real>(pw.re / n2, pw.im / n2);
    }
    const double bound = static_cast<double>(abs(term)) *
                         std::hypot(sigma + 2 * m_ + 1, t_) / (sigma + 2 * m_ + 1);
    return {sum, bound + rounding_};
  }

 private:
  double t_;
  int m_ = 0;
  long n_ = 0;
  double rounding_ = 0;
  std::vector<Real> logs_;
  std::vector<Cx<Real>> phase_;
  const std::vector<Real>* coef_ = nullptr;
};

}  // namespace resonance::zeta::detail
