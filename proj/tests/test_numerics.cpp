#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "resonance/error.hpp"
#include "resonance/numerics/parallel.hpp"
#include "resonance/numerics/precision.hpp"
#include "resonance/numerics/quadrature.hpp"
#include "resonance/numerics/summation.hpp"

using namespace resonance;
using namespace resonance::numerics;

TEST_CASE("make_context tiers and validation") {
  auto c = make_context(128, 1e-20);
  CHECK(c.precision_bits == 128);
  CHECK(c.tier() == Tier::wide);
  CHECK(make_context(64, 1e-10).tier() == Tier::extended);
  CHECK(make_context(113, 1e-10).tier() == Tier::quad);
  try {
    make_context(32, 1e-10);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_argument);
    CHECK(std::string(e.what()).find("precision below floor") != std::string::npos);
  }
  CHECK_THROWS_AS(make_context(64, 0.0), Error);
  CHECK_THROWS_AS(make_context(64, -1.0), Error);
  CHECK_THROWS_AS(make_context(64, NAN), Error);
  CHECK_THROWS_AS(make_context(512, 1e-10), Error);
  CHECK(c.panel_tolerance(4) == doctest::Approx(2.5e-21));
}

TEST_CASE("adaptive_quad polynomial and log singularity") {
  auto ctx = make_context(64, 1e-13);
  auto r = adaptive_quad([](double u) { return std::complex<double>(u * u); }, 0, 1, {}, ctx);
  CHECK(std::abs(r.value.real() - 1.0 / 3.0) < 1e-15);
  CHECK(r.converged);

  const double sing[] = {0.0};
  auto l = adaptive_quad([](double u) { return std::complex<double>(std::log(std::abs(u))); }, -1, 1, sing,
                         ctx);
  CHECK(std::abs(l.value.real() + 2.0) < 1e-12);
  CHECK(l.err_estimate < 1e-12);
}

TEST_CASE("adaptive_quad squared sinc against frozen oracle") {
  const double oracle = 3.12169731122386626538672904789;
  auto f = [](double u) { return std::complex<double>(u == 0 ? 1.0 : std::pow(std::sin(u) / u, 2)); };
  double prev = INFINITY;
  for (double tol : {1e-6, 1e-9, 1e-12, 1e-14}) {
    auto r = adaptive_quad(f, -50, 50, {}, make_context(64, tol));
    const double err = std::abs(r.value.real() - oracle);
    CHECK(err <= tol * 10);
    // Halving the tolerance never makes things worse beyond roundoff.
    CHECK(err <= prev + 1e-15);
    prev = err;
  }
  auto fine = adaptive_quad(f, -50, 50, {}, make_context(64, 1e-13));
  CHECK(std::abs(fine.value.real() - oracle) < 1e-12);
}

TEST_CASE("adaptive_quad is linear") {
  auto ctx = make_context(64, 1e-11);
  const double sing[] = {0.3};
  auto f = [](double u) { return std::complex<double>(std::log(std::abs(u - 0.3)), std::cos(5 * u)); };
  auto g = [](double u) { return std::complex<double>(std::exp(-u * u), u); };
  const std::complex<double> a(2.0, -1.0), b(-0.5, 3.0);
  auto rf = adaptive_quad(f, -1, 2, sing, ctx);
  auto rg = adaptive_quad(g, -1, 2, sing, ctx);
  auto rh = adaptive_quad([&](double u) { return a * f(u) + b * g(u); }, -1, 2, sing, ctx);
  const double bound = std::abs(a) * rf.err_estimate + std::abs(b) * rg.err_estimate + rh.err_estimate + 1e-13;
  CHECK(std::abs(rh.value - (a * rf.value + b * rg.value)) <= bound);
}

TEST_CASE("adaptive_quad rejects bad intervals and reports exhaustion") {
  auto ctx = make_context(64, 1e-10);
  CHECK_THROWS_AS(adaptive_quad([](double) { return std::complex<double>(1); }, 1, 0, {}, ctx), Error);
  const double outside[] = {5.0};
  CHECK_THROWS_AS(adaptive_quad([](double) { return std::complex<double>(1); }, 0, 1, outside, ctx), Error);
  // 1/sqrt|u| is integrable but GL converges slowly; a shallow depth cap must
  // be reported rather than hidden.
  auto shallow = make_context(64, 1e-15, 3);
  const double sing[] = {0.0};
  auto r = adaptive_quad([](double u) { return std::complex<double>(1 / std::sqrt(std::abs(u))); }, -1, 1,
                         sing, shallow);
  CHECK_FALSE(r.converged);
  CHECK(r.err_estimate > 0);
  CHECK(std::abs(r.value.real() - 4.0) <= r.err_estimate * 10);
}

TEST_CASE("stable_sum cancellation and empty sum") {
  const std::complex<double> terms[] = {1.0, -1.0, 1e-30};
  CHECK(stable_sum(terms) == std::complex<double>(1e-30));
  CHECK(stable_sum(std::span<const std::complex<double>>{}) == std::complex<double>(0));
}

TEST_CASE("stable_sum beats the naive fold on 1e6 copies of 0.1") {
  std::vector<double> v(1000000, 0.1);
  double naive = 0;
  for (double x : v) naive += x;
  // Exact rational value of 10^6 * fl(0.1) rounds to 100000 in double.
  const double exact = 100000.0;
  const double s = stable_sum(v);
  CHECK(std::abs(s - exact) < std::abs(naive - exact));
  CHECK(s == exact);
}

TEST_CASE("stable_sum is insensitive to ordering") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mag(-20, 20);
  std::vector<double> v(5000);
  for (auto& x : v) x = std::ldexp((rng() & 1) ? 1.0 : -1.0, static_cast<int>(mag(rng))) * (1 + mag(rng) / 40);
  const double a = stable_sum(v);
  std::sort(v.begin(), v.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  const double b = stable_sum(v);
  CHECK(std::abs(a - b) <= 2 * std::numeric_limits<double>::epsilon() * std::abs(a));
}

TEST_CASE("parallel_for results do not depend on thread count") {
  std::vector<double> one(1000), four(1000);
  auto body = [](std::vector<double>& out) {
    return [&out](std::size_t i) { out[i] = std::sin(static_cast<double>(i)); };
  };
  parallel_for(one.size(), 1, body(one));
  parallel_for(four.size(), 4, body(four));
  CHECK(stable_sum(one) == stable_sum(four));
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}
