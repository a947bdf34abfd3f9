#include <cmath>
#include <map>

#include "doctest.h"
#include "resonance/convolution/convolution.hpp"
#include "resonance/error.hpp"
#include "resonance/numerics/quadrature.hpp"
#include "resonance/search/search.hpp"

using namespace resonance;
using namespace resonance::search;

namespace {

const auto ctx = numerics::make_context(64, 1e-10);

ResonatorWeights three_prime(double T) {
  auto rp = resonator::make_resonator_params(1e12, 0.5, 1000, std::pair{36.0, 44.0});
  return resonator::build_M_prime(T, resonator::build_support_M(resonator::prime_window(rp), rp));
}

const zeta::ZeroLedger& ledger_to(double height) {
  static std::map<double, zeta::ZeroLedger> cache;
  auto it = cache.find(height);
  if (it == cache.end()) it = cache.emplace(height, zeta::count_zeros(height, ctx)).first;
  return it->second;
}

}  // namespace

TEST_CASE("dawson against mpmath") {
  const std::pair<double, double> cases[] = {
      {0.1, 0.0993359923978528611}, {0.5, 0.424436383502022296}, {1.0, 0.538079506912768419},
      {1.5, 0.428249071085398625},  {2.0, 0.301340388923791966}, {5.0, 0.102134074424276835},
      {9.9, 0.0507667506518046994}, {10.1, 0.0497512566108298044}, {50.0, 0.0100020012012016830},
      {1000.0, 0.000500000250000375001}};
  for (auto [x, d] : cases) {
    CHECK(dawson(x) == doctest::Approx(d).epsilon(1e-13));
    CHECK(dawson(-x) == doctest::Approx(-d).epsilon(1e-13));
  }
  CHECK(dawson(0.0) == 0.0);
}

TEST_CASE("prop22 coefficients") {
  const double H = std::log(3.0);
  const auto g = prop22_coefficients(0.5, H);
  std::map<std::uint64_t, double> c(g.terms.begin(), g.terms.end());
  CHECK(c.size() == 6);
  for (std::uint64_t n : {2, 3, 4, 5, 7, 8}) CHECK(c.count(n) == 1);
  CHECK(c[3] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c[4] == doctest::Approx(std::log(2.0) * (1 - std::log(4.0 / 3)) / std::log(4.0)).epsilon(1e-14));
  CHECK(c[2] == doctest::Approx(1 - std::log(1.5)).epsilon(1e-14));
  for (auto [n, v] : g.terms) CHECK(v >= 0);
  CHECK(prop22_coefficients(0.1, 0.0).terms.empty());
  CHECK_THROWS_AS(prop22_coefficients(0.0, 1.0), Error);
}

TEST_CASE("gaussian moment of one term against one resonator point") {
  ResonatorWeights w;
  w.m = {1};
  w.log_m = {0.0};
  w.r = {1.0};
  w.j = {0};
  GCoefficients g;
  g.terms = {{2, 0.7}};
  for (double T : {0.5, 1.0, 3.0}) {
    const double l2 = std::log(2.0);
    const double expect = 0.7 / std::sqrt(2.0) * T * std::sqrt(2 * M_PI) * std::exp(-T * T * l2 * l2 / 2);
    CHECK(gaussian_moment_G(g, w, T, ctx) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("closed forms against direct quadrature on three primes") {
  for (double T : {2.0, 5.0}) {
    const auto w = three_prime(T);
    for (double H : {0.0, 1.3}) {
      const auto g = prop22_coefficients(0.9, H);
      const double reach = 40 * T;   // exp(-800) beyond
      const auto full = direct_moment(g, w, T, -reach, reach);
      const double closed = gaussian_moment_G(g, w, T, ctx);
      CHECK(std::fabs(full.real() - closed) <= 1e-8 * std::fabs(closed));
      CHECK(std::fabs(full.imag()) <= 1e-8 * std::fabs(closed));
      const auto half = direct_moment(g, w, T, 0.0, reach);
      const double sine = half_line_sine_moment(g, w, T);
      CHECK(std::fabs(half.imag() - sine) <= 1e-8 * std::fabs(sine));
    }
  }
}

TEST_CASE("min weight over the window") {
  // log2 T = log 37 puts the single prime at the apex.
  const double T = std::exp(37.0);
  auto p = kernel_lab::make_kernel_params(0.45, T, 1);
  auto rp = resonator::make_resonator_params(1e12, 0.5);
  const auto window = resonator::prime_window(rp);
  REQUIRE(window.primes == std::vector<std::uint64_t>{37});
  CHECK(min_weight_over_P(p, window) == doctest::Approx(2 * p.alpha()).epsilon(1e-12));

  for (double lt : {8.0, 10.0, 12.0}) {
    auto q = kernel_lab::make_kernel_params(0.45, std::exp(lt), 1);
    const double expect = 2 * q.alpha() - std::fabs(q.L() - std::log(37.0));
    CHECK(min_weight_over_P(q, window) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(min_weight_over_P(q, window) / q.L() > 0);
  }
  // At T = e^8, 43 > (log T)^{1.8} = 42.2 while 37 and 41 still fit.
  auto rp3 = resonator::make_resonator_params(1e12, 0.5, 1000, std::pair{36.0, 44.0});
  const auto w3 = resonator::prime_window(rp3);
  auto q10 = kernel_lab::make_kernel_params(0.45, std::exp(10.0), 1);
  CHECK(min_weight_over_P(q10, w3) == doctest::Approx(2 * q10.alpha() - std::fabs(q10.L() - std::log(43.0))));
  try {
    min_weight_over_P(kernel_lab::make_kernel_params(0.45, std::exp(8.0), 1), w3);
    FAIL("expected scale_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::scale_mismatch);
    CHECK(std::string(e.what()).find("43") != std::string::npos);
  }
}

TEST_CASE("I2 for a single prime reduces to the diagonal term") {
  const double T = std::exp(8.0);
  auto rp = resonator::make_resonator_params(1e12, 0.5, 1000, std::pair{36.0, 37.0});
  const auto w = resonator::build_resonator(rp);
  REQUIRE(w.size() == 2);
  auto p = kernel_lab::make_kernel_params(0.45, T, 1);
  const double w37 = 2 * p.alpha() - std::fabs(p.L() - std::log(37.0));
  const double expect = 0.25 * w37 / std::sqrt(37.0) * w.r[0] * w.r[1] * T * std::sqrt(2 * M_PI);
  const auto rep = compute_I2(T, p, w, ctx);
  CHECK(rep.i2_value == doctest::Approx(expect).epsilon(1e-12));
  CHECK(rep.i2_reference > 0);
  CHECK(rep.kernel_mass > 0);
  CHECK(rep.ratio > 0);
  const auto j = to_json(rep);
  CHECK(j.contains("i2_value"));
  CHECK_FALSE(j.contains("i1_value"));
}

TEST_CASE("windowed I2 stays close to the completed form") {
  const double T = std::exp(8.0);
  const auto w = three_prime(T);
  auto p = kernel_lab::make_kernel_params(0.45, T, 1);
  const auto win = compute_I2_windowed(T, 0.5, p, w, ctx, false);
  // The head [0, T^beta] holds a fraction about T^{beta - 1} of the mass.
  CHECK(std::fabs(win.real_part - 0.25 * win.completed) < 0.05 * std::fabs(win.completed));
  CHECK(win.real_part > 0);
  const auto full = compute_I2_windowed(T, 0.5, p, w, ctx, true);
  auto q = kernel_lab::make_kernel_params(0.45, T, -1);
  const auto neg = compute_I2_windowed(T, 0.5, q, w, ctx, true);
  CHECK(full.first_sum == doctest::Approx(-neg.first_sum).epsilon(1e-14));
  CHECK(full.real_part == neg.real_part);
}

TEST_CASE("smoothed S against direct quadrature") {
  const double T = std::exp(6.0);
  auto p = kernel_lab::make_kernel_params(0.45, T, 1);
  const double U = convolution::truncation(T);
  const auto& ledger = ledger_to(500);
  SmoothedS F(ledger, p, 20, 200, U);
  CHECK(F.kernel_mass() == doctest::Approx(kernel_mass(p, U)).epsilon(1e-12));
  const auto qctx = numerics::make_context(64, 1e-9);
  for (double t : {20.0, 33.7, 150.0, 199.0}) {
    std::vector<double> us;
    for (double x : ledger.singularities(t - U, t + U)) us.push_back(x - t);
    numerics::QuadOptions o;
    o.max_panel_width = 0.5;
    const auto q = numerics::adaptive_quad(
        [&](double u) { return std::complex<double>(ledger.s_value(t + u) * kernel_lab::sign_kernel(u, p)); }, -U, U,
        us, qctx, o);
    CHECK(std::fabs(F(t) - q.value.real()) <= 1e-8 + q.err_estimate);
    CHECK(std::fabs(F.theta_part(t) - F.theta_part_direct(t)) < 1e-9);
  }
  CHECK_THROWS_AS(SmoothedS(ledger, p, 20, 400, U), Error);
}

TEST_CASE("I1 with S = 1 separates") {
  const double T = std::exp(5.0);
  const auto w = three_prime(T);
  auto p = kernel_lab::make_kernel_params(0.45, T, 1);
  I1Options o;
  o.constant_s = true;
  o.t_lo = -12 * T;
  o.t_hi = 12 * T;
  const auto r = compute_I1(T, 0.5, p, w, nullptr, ctx, o);
  CHECK(r.value == doctest::Approx(r.kernel_mass * r.gauss_moment).epsilon(1e-10));
  CHECK(r.window_moment == doctest::Approx(r.gauss_moment).epsilon(1e-10));
}

TEST_CASE("I1 equals I2 at T = e^7") {
  const double T = std::exp(7.0);
  const auto w = three_prime(T);
  const auto& ledger = ledger_to(i1_ledger_height(T, 0.5));
  for (int sign : {1, -1}) {
    auto p = kernel_lab::make_kernel_params(0.45, T, sign);
    const auto i2 = compute_I2_windowed(T, 0.5, p, w, ctx, true);
    const auto i1 = compute_I1(T, 0.5, p, w, &ledger, ctx);
    CAPTURE(sign);
    CAPTURE(i1.value);
    CAPTURE(i2.value);
    CHECK(std::fabs(i1.value - i2.value) <= i1.err_estimate + i2.err + i2.lemma_err);
    CHECK(std::fabs(i1.value - i2.value) <= 1e-2 * std::fabs(i2.value));
    CHECK(i1.value <= i1.majorant);
    if (sign == 1) {
      CHECK(i1.kernel_mass > 0);
      CHECK(i1.gauss_moment > 0);
      CHECK(i1.max_signed_s > 0);
    }
  }
}

TEST_CASE("I1 budget exhaustion keeps honest error bars") {
  const double T = std::exp(6.0);
  const auto w = three_prime(T);
  const auto& ledger = ledger_to(i1_ledger_height(T, 0.5));
  auto p = kernel_lab::make_kernel_params(0.45, T, 1);
  const auto full = compute_I1(T, 0.5, p, w, &ledger, ctx);
  I1Options o;
  o.max_panels = full.panels / 3;
  const auto part = compute_I1(T, 0.5, p, w, &ledger, ctx, o);
  CHECK(part.budget_exhausted);
  CHECK_FALSE(full.budget_exhausted);
  CHECK(std::fabs(part.value - full.value) <= part.err_estimate);
}

TEST_CASE("max_signed_s bounds a fine grid") {
  const auto& ledger = ledger_to(500);
  for (int sign : {1, -1}) {
    for (auto [lo, hi] : {std::pair{-30.0, 120.0}, std::pair{14.0, 14.2}, std::pair{200.0, 260.0}}) {
      double dense = -INFINITY;
      for (double t = lo; t <= hi; t += 1e-3) dense = std::max(dense, sign * ledger.s_value(t));
      const double m = max_signed_s(ledger, lo, hi, sign);
      CHECK(m >= dense - 1e-12);
      CHECK(m <= dense + 5e-3);
    }
  }
}

TEST_CASE("extreme scan against the dense oracle") {
  const auto& ledger = ledger_to(500);
  const SFunction s = [&](double t) { return ledger.s_value(t); };
  const double T = 400;
  const auto w = three_prime(T);
  ScanOptions o;
  o.t_lo = 10;
  for (int sign : {1, -1}) {
    const auto dense = dense_scan(10, T, sign, 0.01, s);
    const auto scan = extreme_scan(T, 0.5, sign, 0.01, dense.evaluations / 10, w, s, o);
    CAPTURE(sign);
    CHECK(scan.evaluations <= dense.evaluations / 10);
    CHECK(scan.found);
    CHECK(scan.s_star == doctest::Approx(dense.s_star).epsilon(1e-12));
    CHECK(scan.t_star >= scan.t_lo);
    CHECK(scan.t_star <= scan.t_hi);
    CHECK(scan.resonator_weight <= resonator::resonator_abs_sq(0, w) * (1 + 1e-12));
  }
  const auto coarse = extreme_scan(T, 0.5, 1, 0.01, 0, w, s, o);
  CHECK(coarse.coarse_only);
  CHECK(coarse.evaluations == 0);
  CHECK_FALSE(coarse.found);
  CHECK(to_json(coarse)["s_star"].is_null());
  CHECK(to_json(coarse).contains("note"));

  double prev = -INFINITY;
  for (double top : {100.0, 200.0, 400.0}) {
    const auto r = dense_scan(10, top, 1, 0.01, s);
    CHECK(r.s_star >= prev);
    prev = r.s_star;
  }
  CHECK_THROWS_AS(extreme_scan(T, 0.5, 2, 0.01, 10, w, s, o), Error);
}
