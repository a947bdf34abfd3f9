#pragma once

#include <complex>
#include <span>

namespace resonance::numerics {

// Knuth's error-free transformation: a + b == s + e exactly.
template <class Real>
inline void two_sum(const Real& a, const Real& b, Real& s, Real& e) {
  s = a + b;
  Real bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

// Cascaded compensated accumulator. Terms are added in call order; the
// running value is carried in three components, so the result is faithfully
// rounded unless the condition number of the sum exceeds ~1/u^2.
template <class Real>
class CompensatedSum {
 public:
  void add(const Real& x) {
    Real s, e, s2, e2;
    two_sum(hi_, x, s, e);
    two_sum(lo_, e, s2, e2);
    hi_ = s;
    lo_ = s2;
    tail_ += e2;
  }

  CompensatedSum& operator+=(const Real& x) {
    add(x);
    return *this;
  }

  Real value() const {
    Real s, e;
    two_sum(hi_, lo_ + tail_, s, e);
    return s;
  }

 private:
  Real hi_{0};
  Real lo_{0};
  Real tail_{0};
};

template <class Real>
class CompensatedComplexSum {
 public:
  void add(const std::complex<Real>& z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  CompensatedComplexSum& operator+=(const std::complex<Real>& z) {
    add(z);
    return *this;
  }
  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<Real> re_;
  CompensatedSum<Real> im_;
};

// Compensated sum in ascending index order. The result does not depend on
// how callers partition work across threads as long as they hand in the
// terms in index order.
double stable_sum(std::span<const double> terms);
std::complex<double> stable_sum(std::span<const std::complex<double>> terms);

}  // namespace resonance::numerics
