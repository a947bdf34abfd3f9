#pragma once

// Minimal complex arithmetic over any real type with ADL math functions.
// std::complex is only specified for the built-in floating types.

#include <cmath>

namespace resonance::zeta::detail {

template <class Real>
struct Cx {
  Real re{0};
  Real im{0};

  Cx() = default;
  Cx(Real r) : re(std::move(r)) {}
  Cx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Cx& operator+=(const Cx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cx& operator-=(const Cx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Cx& operator*=(const Cx& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  Cx& operator/=(const Cx& o) {
    Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = r;
    return *this;
  }
  friend Cx operator+(Cx a, const Cx& b) { return a += b; }
  friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
  friend Cx operator*(Cx a, const Cx& b) { return a *= b; }
  friend Cx operator/(Cx a, const Cx& b) { return a /= b; }
  friend Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
};

template <class Real>
Real norm(const Cx<Real>& z) {
  return z.re * z.re + z.im * z.im;
}

template <class Real>
Real abs(const Cx<Real>& z) {
  using std::sqrt;
  return sqrt(norm(z));
}

template <class Real>
Real arg(const Cx<Real>& z) {
  using std::atan2;
  return atan2(z.im, z.re);
}

template <class Real>
Cx<Real> log(const Cx<Real>& z) {
  using std::log;
  return Cx<Real>(log(norm(z)) / 2, arg(z));
}

// e^{i x}
template <class Real>
Cx<Real> expi(const Real& x) {
  using std::cos;
  using std::sin;
  return Cx<Real>(cos(x), sin(x));
}

}  // namespace resonance::zeta::detail
