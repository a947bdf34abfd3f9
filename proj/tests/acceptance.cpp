// Acceptance suite: one line per criterion, exit status 0 iff all pass.
// Usage: acceptance [criterion numbers...]

#include <quadmath.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "resonance/arith/primes.hpp"
#include "resonance/convolution/convolution.hpp"
#include "resonance/kernel_lab/kernel_lab.hpp"
#include "resonance/numerics/summation.hpp"
#include "resonance/resonator/resonator.hpp"
#include "resonance/search/search.hpp"
#include "resonance/zeta/ledger.hpp"
#include "resonance/zeta/z_table.hpp"
#include "resonance/zeta/zeta.hpp"

using namespace resonance;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const zeta::CriticalLine& critical_line() {
  static const auto line = std::make_unique<zeta::CriticalLine>(
      zeta::CriticalLine::build(4500, numerics::make_context(64, 1e-11)));
  return *line;
}

// 1. S against N(t) minus the main term.
Outcome s_oracle() {
  const auto ctx = numerics::make_context(64, 1e-10);
  const auto ledger = zeta::count_zeros(5000, ctx);
  std::mt19937_64 rng(1729);
  std::uniform_real_distribution<double> ut(10, 5000);
  int bad = 0;
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const double t = ut(rng);
    const double gap = std::fabs(zeta::s_of_t(t, ctx).s_val - (ledger.n_of_t(t) - zeta::rvm_main_term(t)));
    const double bound = 10 / t + 1e-8;
    worst = std::max(worst, gap / bound);
    bad += gap > bound;
  }
  return {bad == 0, fmt("50 seeded t in [10, 5000], %d over bound, worst gap/bound %.3g", bad, worst)};
}

// 2. Unit jumps at the first 30 ordinates and the midpoint convention.
Outcome zero_jumps() {
  const auto ctx = numerics::make_context(64, 1e-10);
  const auto ledger = zeta::count_zeros(110, ctx);
  if (ledger.count() < 30) return {false, "fewer than 30 zeros below 110"};
  double worst_jump = 0, worst_mid = 0;
  for (int k = 0; k < 30; ++k) {
    const double g = ledger.ordinates()[k];
    const double jump = zeta::s_of_t(g + 1e-4, ctx).s_val - zeta::s_of_t(g - 1e-4, ctx).s_val;
    const double lim = 0.5 * (zeta::s_of_t(g - 1e-6, ctx).s_val + zeta::s_of_t(g + 1e-6, ctx).s_val);
    worst_jump = std::max(worst_jump, std::fabs(jump - 1));
    worst_mid = std::max(worst_mid, std::fabs(zeta::s_of_t(g, ctx).s_val - lim));
  }
  return {worst_jump <= 1e-3 && worst_mid <= 1e-6,
          fmt("max |jump - 1| = %.3g, max |midpoint - mean of limits| = %.3g", worst_jump, worst_mid)};
}

// 3. Contour integral against the tent weight on a seeded corpus.
Outcome tent_identity() {
  const auto ctx = numerics::make_context(64, 1e-2);
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<std::uint64_t> un(2, 100);
  std::uniform_real_distribution<double> ua(0.1, 2.0), uh(-5, 5), ui(-1.5, 1.5);
  int bad = 0;
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const auto n = un(rng);
    const double a = ua(rng);
    // Half the corpus inside the tent support, half anywhere.
    const double H = i % 2 ? uh(rng) : std::clamp(std::log(double(n)) + a * ui(rng), -5.0, 5.0);
    const auto r = kernel_lab::contour_tent_check(n, a, H, 1e6, ctx);
    worst = std::max(worst, r.residual / (r.envelope + r.quad_err));
    bad += !r.pass;
  }
  return {bad == 0, fmt("20 triples at U = 1e6, %d failures, worst residual/envelope %.3g", bad, worst)};
}

// 4. Lemma residual envelope at e^10 and its decay across e^8, e^10, e^12.
Outcome lemma_regression() {
  const auto ctx = numerics::make_context(64, 1e-9);
  const auto& line = critical_line();
  std::vector<double> lx, ly;
  int bad = 0, checked = 0;
  double worst = 0;
  for (double lt : {8.0, 10.0, 12.0}) {
    const double T = std::exp(lt), L = std::log(lt);
    std::vector<double> res;
    for (double lam : {0.25, 0.3, 0.45}) {
      for (double h : {0.0, 1.0, -1.0}) {
        for (double t10 : {200.0, 500.0, 1000.0}) {
          // Same positions relative to T^{1/2} on every rung.
          const double t = t10 * std::exp(lt / 2 - 5);
          const auto r = convolution::lemma_residual(t, lam * L, h * L, T, line, ctx);
          res.push_back(r.residual);
          if (lt == 10.0) {
            ++checked;
            bad += !(r.pass && r.envelope_applicable);
            worst = std::max(worst, r.residual / (r.envelope + r.quad_err));
          }
        }
      }
    }
    std::nth_element(res.begin(), res.begin() + res.size() / 2, res.end());
    lx.push_back(std::log(lt));
    ly.push_back(std::log(res[res.size() / 2]));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  return {bad == 0 && slope <= -2.5,
          fmt("%d/%d within C_cal envelope at e^10 (worst %.3g), medians %.3g %.3g %.3g, fitted exponent %.2f",
              checked - bad, checked, worst, std::exp(ly[0]), std::exp(ly[1]), std::exp(ly[2]), slope)};
}

// 5. Signed kernel integral as 3 sign lhs(0) + i (lhs(L) - lhs(-L)).
Outcome signed_combination() {
  const auto ctx = numerics::make_context(64, 1e-9);
  const auto& line = critical_line();
  const double T = std::exp(10.0);
  const std::tuple<double, double, int> points[] = {
      {300, 0.25, 1}, {400, 0.3, -1}, {500, 0.45, 1}, {700, 0.35, -1}, {1000, 0.45, -1}};
  int bad = 0;
  double worst = 0;
  for (auto [t, lam, sign] : points) {
    const auto p = kernel_lab::make_kernel_params(lam, T, sign);
    const auto s = convolution::signed_lhs(t, p, line, ctx);
    const auto l0 = convolution::lhs_lemma_integral(t, p.alpha(), 0.0, T, line, ctx);
    const auto lp = convolution::lhs_lemma_integral(t, p.alpha(), p.L(), T, line, ctx);
    const auto lm = convolution::lhs_lemma_integral(t, p.alpha(), -p.L(), T, line, ctx);
    const std::complex<double> combo = 3.0 * sign * l0.value + std::complex<double>(0, 1) * (lp.value - lm.value);
    const double gap = std::abs(s.value - combo);
    const double errs = s.err_estimate + 3 * l0.err_estimate + lp.err_estimate + lm.err_estimate;
    worst = std::max(worst, gap / std::abs(combo));
    bad += !(gap <= errs + 1e-12 * std::abs(combo) && gap <= 1e-8 * std::abs(combo));
  }
  return {bad == 0, fmt("5 points at e^10, %d failures, worst relative gap %.3g", bad, worst)};
}

// 6. Sign-definiteness of the kernel over [-(log T)^3, (log T)^3].
Outcome kernel_sign() {
  long bad = 0, points = 0;
  for (double lt : {8.0, 10.0, 12.0}) {
    for (double lam : {0.25, 0.3, 0.45}) {
      const auto plus = kernel_lab::make_kernel_params(lam, std::exp(lt), 1);
      const auto minus = kernel_lab::make_kernel_params(lam, std::exp(lt), -1);
      const double U = convolution::truncation(plus.T);
      for (int i = 0; i < 100000; ++i) {
        const double u = -U + 2 * U * i / 99999.0;
        bad += kernel_lab::sign_kernel(u, plus) < 0;
        bad += kernel_lab::sign_kernel(u, minus) > 0;
        points += 2;
      }
    }
  }
  return {bad == 0, fmt("%ld kernel values over 9 (T, lambda) pairs, %ld with the wrong sign", points, bad)};
}

// 7. The T = 1e12 construction against a brute force, |R|^2 <= R(0)^2, and
// the Gaussian moment against the trapezoid rule.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Trapezoid rule with step h on the Gaussian-weighted |R|^2, phases in
// binary128. By Poisson summation its error is the Gaussian transform at
// 2 pi k / h - omega, k != 0, so h is chosen to keep every such distance
// above 12 / T.
double trapezoid_moment(const resonator::ResonatorWeights& w, double T, double& alias_margin) {
  std::vector<double> omegas;
  for (double a : w.log_m) {
    for (double b : w.log_m) omegas.push_back(std::fabs(a - b));
  }
  double h = T / 4000;
  for (int attempt = 0;; ++attempt) {
    alias_margin = INFINITY;
    for (double om : omegas) {
      const double k0 = std::round(om * h / (2 * M_PI));
      for (double k = std::max(1.0, k0 - 1); k <= k0 + 1; ++k) {
        alias_margin = std::min(alias_margin, std::fabs(2 * M_PI * k / h - om) * T);
      }
    }
    if (alias_margin > 12 || attempt > 100) break;
    h *= 1 + 1e-3 * (attempt + 1);
  }
  std::vector<__float128> logs;
  for (auto m : w.m) logs.push_back(logq(static_cast<__float128>(m)));
  const __float128 two_pi = 2 * M_PIq;
  const long K = static_cast<long>(std::ceil(12 * T / h));
  numerics::CompensatedSum<double> acc;
  for (long k = -K; k <= K; ++k) {
    const __float128 t = static_cast<__float128>(k) * h;
    double re = 0, im = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double ph = static_cast<double>(fmodq(t * logs[i], two_pi));
      re += w.r[i] * std::cos(ph);
      im -= w.r[i] * std::sin(ph);
    }
    const double x = static_cast<double>(t) / T;
    acc.add(h * (re * re + im * im) * std::exp(-0.5 * x * x));
  }
  return acc.value();
}

Outcome resonator_fidelity() {
  const double T = 1e12;
  const auto params = resonator::make_resonator_params(T, 0.5);
  const auto w = resonator::build_resonator(params);

  // Brute force straight from the definitions.
  const double lN = std::log(1000.0), l2 = std::log(lN), l3 = std::log(l2);
  const double X = lN * l2;
  const double lo = std::exp(1.0) * X, hi = std::exp(std::pow(l2, 0.125)) * X;
  std::vector<std::uint64_t> P;
  for (std::uint64_t p = static_cast<std::uint64_t>(lo) + 1; p <= hi; ++p) {
    if (is_prime(p)) P.push_back(p);
  }
  std::map<std::uint64_t, double> M;
  for (unsigned mask = 0; mask < (1u << P.size()); ++mask) {
    std::uint64_t n = 1;
    double f = 1;
    for (std::size_t i = 0; i < P.size(); ++i) {
      if (mask >> i & 1) {
        const double p = static_cast<double>(P[i]);
        n *= P[i];
        f *= std::sqrt(lN * l2 / l3) / (std::sqrt(p) * (std::log(p) - l2 - l3));
      }
    }
    M[n] = f;
  }
  const long double ell = std::log1p(1.0L / T);
  std::map<long, std::uint64_t> reps;
  for (auto [n, f] : M) reps.emplace(static_cast<long>(std::floor(std::log(static_cast<long double>(n)) / ell)), n);
  std::vector<std::uint64_t> m_ref;
  std::vector<double> r_ref;
  for (auto [j, m] : reps) {
    double s = 0;
    for (auto [n, f] : M) {
      const long double ln = std::log(static_cast<long double>(n));
      if (ln >= (j - 1) * ell && ln <= (j + 2) * ell) s += f * f;
    }
    m_ref.push_back(m);
    r_ref.push_back(std::sqrt(s));
  }

  bool ok = params.N == 1000 && P == std::vector<std::uint64_t>{37} && w.size() == m_ref.size();
  const double f37 = 0.725938189576231620;   // mpmath
  ok = ok && std::fabs(resonator::f_prime(37, params) - f37) <= 1e-15;
  for (std::size_t i = 0; ok && i < w.size(); ++i) {
    ok = w.m[i] == m_ref[i] && std::fabs(w.r[i] - r_ref[i]) <= 1e-15 * r_ref[i];
  }
  const bool construction = ok;

  const double r0 = std::pow(resonator::resonator_eval(0, w).real(), 2);
  int over = 0;
  for (int k = 0; k < 10000; ++k) {
    for (double t : {k * 1e-2, k * T / 1e4}) over += resonator::resonator_abs_sq(t, w) > r0 * (1 + 1e-12);
  }

  const auto ctx = numerics::make_context(64, 1e-12);
  const double closed = resonator::resonator_norms(w, T, ctx).gauss_moment;
  double margin;
  const double quad = trapezoid_moment(w, T, margin);
  const double rel = std::fabs(quad - closed) / closed;
  return {construction && over == 0 && rel <= 1e-10 && margin > 12,
          fmt("P = {37}, M' = {1, 37}, brute force %s; |R|^2 over R(0)^2 at %d of 2e4 points; "
              "Gaussian moment relative gap %.3g (alias margin %.3g)",
              construction ? "matches" : "differs", over, rel, margin)};
}

// 8. I1 against I2 with the three-prime resonator at e^10.
Outcome i1_equals_i2() {
  const double T = std::exp(10.0);
  const auto ctx = numerics::make_context(64, 1e-10);
  const auto rp = resonator::make_resonator_params(1e12, 0.5, 1000, std::pair{36.0, 44.0});
  const auto w = resonator::build_M_prime(T, resonator::build_support_M(resonator::prime_window(rp), rp));
  const auto ledger = zeta::count_zeros(search::i1_ledger_height(T, 0.5), ctx);
  bool ok = w.size() == 8;
  std::string detail = fmt("|M'| = %zu", w.size());
  for (int sign : {1, -1}) {
    const auto p = kernel_lab::make_kernel_params(0.45, T, sign);
    const auto i2 = search::compute_I2_windowed(T, 0.5, p, w, ctx, true);
    const auto i1 = search::compute_I1(T, 0.5, p, w, &ledger, ctx);
    const double gap = std::fabs(i1.value - i2.value);
    const double allowed = i1.err_estimate + i2.err + i2.lemma_err;
    ok = ok && gap <= allowed && gap <= 1e-2 * std::fabs(i2.value) && i1.value <= i1.majorant;
    detail += fmt("; sign %+d: I1 %.10g I2 %.10g rel gap %.2g (allowed %.2g)", sign, i1.value, i2.value,
                  gap / std::fabs(i2.value), allowed / std::fabs(i2.value));
  }
  return {ok, detail};
}

// 9. I2 ratio and the minimum tent weight across the ladder.
Outcome moment_direction() {
  const auto ctx = numerics::make_context(64, 1e-10);
  const auto rp = resonator::make_resonator_params(1e12, 0.5);
  const auto window = resonator::prime_window(rp);
  const auto M = resonator::build_support_M(window, rp);
  double lo = INFINITY, hi = 0, c0 = INFINITY;
  bool positive = true;
  std::string ratios;
  for (double lt : {8.0, 10.0, 12.0}) {
    const double T = std::exp(lt);
    const auto w = resonator::build_M_prime(T, M);
    const auto p = kernel_lab::make_kernel_params(0.45, T, 1);
    const auto rep = search::compute_I2(T, p, w, ctx);
    const double mw = search::min_weight_over_P(p, window) / p.L();
    positive = positive && rep.ratio > 0 && rep.i2_reference > 0 && rep.kernel_mass > 0;
    lo = std::min(lo, rep.ratio);
    hi = std::max(hi, rep.ratio);
    c0 = std::min(c0, mw);
    ratios += fmt(" %.4g", rep.ratio);
  }
  return {positive && hi <= 10 * lo && c0 > 0,
          fmt("I2 ratios%s (spread %.3g), c0 = min w_p / log2 T = %.4g", ratios.c_str(), hi / lo, c0)};
}

// 10. Budgeted scan against the dense oracle; the pinned extremes are the
// dense results at step 0.01 from the first calibration.
Outcome scan_regression() {
  const auto ctx = numerics::make_context(64, 1e-10);
  const auto ledger = zeta::count_zeros(1e4 + 1, ctx);
  const search::SFunction s = [&](double t) { return ledger.s_value(t); };
  struct Fixture {
    double T, t_lo;
    int sign;
    double t_star, s_star;
  };
  const Fixture fixtures[] = {{1000, 10, 1, 822.2, 1.1702711334680771},
                              {1000, 10, -1, 527.9, 1.142912636732035},
                              {1e4, 100, 1, 8646.03, 1.4388922730813647},
                              {1e4, 100, -1, 8757.9, 1.3497200092515413}};
  bool ok = true;
  std::string detail;
  for (const auto& f : fixtures) {
    const auto w = resonator::build_resonator(resonator::make_resonator_params(f.T, 0.5, 1000));
    const auto dense = search::dense_scan(f.t_lo, f.T, f.sign, 0.01, s);
    search::ScanOptions o;
    o.t_lo = f.t_lo;
    const auto scan = search::extreme_scan(f.T, 0.5, f.sign, 0.01, dense.evaluations / 10, w, s, o);
    // One grid step moves the smooth part of S by step theta'(T) / pi.
    const double resolution = 0.01 * std::log(f.T / (2 * M_PI)) / (2 * M_PI);
    const bool pinned = std::fabs(dense.t_star - f.t_star) < 1e-6 && std::fabs(dense.s_star - f.s_star) < 1e-9;
    const bool hit = scan.found && scan.s_star >= dense.s_star - resolution;
    const bool cheap = scan.evaluations * 10 <= dense.evaluations;
    ok = ok && pinned && hit && cheap;
    detail += fmt("%s[%g, %g] %+d: %.6f vs dense %.6f, %lld/%lld evals", detail.empty() ? "" : "; ", f.t_lo, f.T,
                  f.sign, scan.s_star, dense.s_star, static_cast<long long>(scan.evaluations),
                  static_cast<long long>(dense.evaluations));
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"S(t) against N(t) - main term", s_oracle},
      {"unit jumps at zero ordinates", zero_jumps},
      {"tent identity corpus", tent_identity},
      {"lemma residual regression", lemma_regression},
      {"signed kernel linear combination", signed_combination},
      {"kernel sign-definiteness", kernel_sign},
      {"resonator construction fidelity", resonator_fidelity},
      {"I1 = I2 at finite height", i1_equals_i2},
      {"moment direction checks", moment_direction},
      {"extreme scan regression", scan_regression},
  };
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
