// AVX2 + FMA variants. Every function carries the target attribute instead of
// compiling the file with -mavx2, so no AVX2 code can leak into inline
// functions shared with the scalar translation units.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "resonance/kernels/kernels.hpp"
#include "resonance/numerics/quadrature.hpp"
#include "resonance/numerics/summation.hpp"

#define RESONANCE_AVX2 __attribute__((target("avx2,fma")))

namespace resonance::kernels::avx2 {
namespace {

// Cody-Waite split of pi/2; with FMA the reduction is accurate to a few ulps
// of the reduced argument for |x| < 2^30.
constexpr double kTwoOverPi = 0.6366197723675814;
constexpr double kP1 = 1.5707963267948966;
constexpr double kP2 = 6.123233995736766e-17;
constexpr double kP3 = -1.4973849048591698e-33;
constexpr double kReductionLimit = 1e9;

// fdlibm minimax kernels on [-pi/4, pi/4].
constexpr double S1 = -1.66666666666666324348e-01;
constexpr double S2 = 8.33333333332248946124e-03;
constexpr double S3 = -1.98412698298579493134e-04;
constexpr double S4 = 2.75573137070700676789e-06;
constexpr double S5 = -2.50507602534068634195e-08;
constexpr double S6 = 1.58969099521155010221e-10;
constexpr double C1 = 4.16666666666666019037e-02;
constexpr double C2 = -1.38888888888741095749e-03;
constexpr double C3 = 2.48015872894767294178e-05;
constexpr double C4 = -2.75573143513906633035e-07;
constexpr double C5 = 2.08757232129817482790e-09;
constexpr double C6 = -1.13596475577881948265e-11;

RESONANCE_AVX2 inline __m256d splat(double v) { return _mm256_set1_pd(v); }

// True when every lane is finite and inside the reduction range.
RESONANCE_AVX2 inline bool in_range(__m256d x) {
  const __m256d ax = _mm256_andnot_pd(splat(-0.0), x);
  const __m256d ok = _mm256_cmp_pd(ax, splat(kReductionLimit), _CMP_LT_OQ);
  return _mm256_movemask_pd(ok) == 0xF;
}

RESONANCE_AVX2 inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
  const __m256d j = _mm256_round_pd(_mm256_mul_pd(x, splat(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(j, splat(kP1), x);
  r = _mm256_fnmadd_pd(j, splat(kP2), r);
  r = _mm256_fnmadd_pd(j, splat(kP3), r);

  const __m256d z = _mm256_mul_pd(r, r);
  const __m256d v = _mm256_mul_pd(z, r);
  __m256d ps = _mm256_fmadd_pd(z, splat(S6), splat(S5));
  ps = _mm256_fmadd_pd(z, ps, splat(S4));
  ps = _mm256_fmadd_pd(z, ps, splat(S3));
  ps = _mm256_fmadd_pd(z, ps, splat(S2));
  ps = _mm256_mul_pd(z, ps);
  const __m256d sn = _mm256_add_pd(r, _mm256_mul_pd(v, _mm256_add_pd(splat(S1), ps)));

  __m256d pc = _mm256_fmadd_pd(z, splat(C6), splat(C5));
  pc = _mm256_fmadd_pd(z, pc, splat(C4));
  pc = _mm256_fmadd_pd(z, pc, splat(C3));
  pc = _mm256_fmadd_pd(z, pc, splat(C2));
  pc = _mm256_fmadd_pd(z, pc, splat(C1));
  const __m256d hz = _mm256_mul_pd(splat(0.5), z);
  const __m256d w = _mm256_sub_pd(splat(1.0), hz);
  const __m256d tail = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                       _mm256_sub_pd(_mm256_sub_pd(splat(1.0), w), hz));
  const __m256d cs = _mm256_add_pd(w, tail);

  // Quadrant q = j mod 4: swap for odd q, negate sin for q in {2,3}, cos for q in {1,2}.
  const __m128i q = _mm256_cvtpd_epi32(j);
  const __m256i q64 = _mm256_cvtepi32_epi64(q);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q64, one), one));
  const __m256i q1 = _mm256_add_epi64(q64, one);
  const __m256d neg_s = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_srli_epi64(_mm256_and_si256(q64, two), 1), 63));
  const __m256d neg_c = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_srli_epi64(_mm256_and_si256(q1, two), 1), 63));
  s = _mm256_xor_pd(_mm256_blendv_pd(sn, cs, swap), neg_s);
  c = _mm256_xor_pd(_mm256_blendv_pd(cs, sn, swap), neg_c);
}

RESONANCE_AVX2 inline void sincos4_safe(__m256d x, __m256d& s, __m256d& c) {
  if (in_range(x)) {
    sincos4(x, s, c);
    return;
  }
  alignas(32) double xs[4], ss[4], cc[4];
  _mm256_store_pd(xs, x);
  for (int i = 0; i < 4; ++i) {
    ss[i] = std::sin(xs[i]);
    cc[i] = std::cos(xs[i]);
  }
  s = _mm256_load_pd(ss);
  c = _mm256_load_pd(cc);
}

// Lane-wise Kahan-Babuska accumulation.
struct Acc4 {
  __m256d sum;
  __m256d comp;
};

RESONANCE_AVX2 inline void acc_init(Acc4& a) {
  a.sum = _mm256_setzero_pd();
  a.comp = _mm256_setzero_pd();
}

RESONANCE_AVX2 inline void acc_add(Acc4& a, __m256d x) {
  const __m256d s = _mm256_add_pd(a.sum, x);
  const __m256d bb = _mm256_sub_pd(s, a.sum);
  const __m256d e = _mm256_add_pd(_mm256_sub_pd(a.sum, _mm256_sub_pd(s, bb)), _mm256_sub_pd(x, bb));
  a.sum = s;
  a.comp = _mm256_add_pd(a.comp, e);
}

// Lanes reduced in index order through the scalar compensated accumulator.
RESONANCE_AVX2 inline double acc_value(const Acc4& a) {
  alignas(32) double s[4], e[4];
  _mm256_store_pd(s, a.sum);
  _mm256_store_pd(e, a.comp);
  numerics::CompensatedSum<double> out;
  for (int i = 0; i < 4; ++i) out.add(s[i]);
  for (int i = 0; i < 4; ++i) out.add(e[i]);
  return out.value();
}

RESONANCE_AVX2 inline double hsum(__m256d v) {
  alignas(32) double a[4];
  _mm256_store_pd(a, v);
  return (a[0] + a[1]) + (a[2] + a[3]);
}

RESONANCE_AVX2 inline __m256i tail_mask(std::size_t remaining) {
  const __m256i idx = _mm256_set_epi64x(3, 2, 1, 0);
  return _mm256_cmpgt_epi64(_mm256_set1_epi64x(static_cast<long long>(remaining)), idx);
}

}  // namespace

RESONANCE_AVX2 void sincos(std::span<const double> x, std::span<double> s, std::span<double> c) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs, vc;
    sincos4_safe(_mm256_loadu_pd(x.data() + i), vs, vc);
    _mm256_storeu_pd(s.data() + i, vs);
    _mm256_storeu_pd(c.data() + i, vc);
  }
  if (i < n) {
    const __m256i m = tail_mask(n - i);
    __m256d vs, vc;
    sincos4_safe(_mm256_maskload_pd(x.data() + i, m), vs, vc);
    _mm256_maskstore_pd(s.data() + i, m, vs);
    _mm256_maskstore_pd(c.data() + i, m, vc);
  }
}

RESONANCE_AVX2 std::complex<double> dirichlet_sum(double t, double phase0, std::span<const double> logs,
                                                  std::span<const double> coeffs) {
  const std::size_t n = logs.size();
  const __m256d vt = splat(-t);
  const __m256d vp = splat(phase0);
  Acc4 re, im;
  acc_init(re);
  acc_init(im);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_fmadd_pd(vt, _mm256_loadu_pd(logs.data() + k), vp);
    const __m256d cf = _mm256_loadu_pd(coeffs.data() + k);
    __m256d sn, cs;
    sincos4_safe(a, sn, cs);
    acc_add(re, _mm256_mul_pd(cf, cs));
    acc_add(im, _mm256_mul_pd(cf, sn));
  }
  if (k < n) {
    const __m256i m = tail_mask(n - k);
    const __m256d a = _mm256_fmadd_pd(vt, _mm256_maskload_pd(logs.data() + k, m), vp);
    const __m256d cf = _mm256_maskload_pd(coeffs.data() + k, m);
    __m256d sn, cs;
    sincos4_safe(a, sn, cs);
    acc_add(re, _mm256_mul_pd(cf, cs));
    acc_add(im, _mm256_mul_pd(cf, sn));
  }
  return {acc_value(re), acc_value(im)};
}

RESONANCE_AVX2 std::complex<double> rational_oscillatory_integral(
    std::span<const std::complex<double>> amps, std::span<const double> freqs, double lo, double hi,
    double width, int order) {
  if (!(hi > lo)) return {};
  const auto& rule = numerics::gauss_legendre(order);
  const std::size_t m = rule.nodes.size();
  if (m % 4 != 0) return scalar::rational_oscillatory_integral(amps, freqs, lo, hi, width, order);
  const double span = hi - lo;
  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(span / width)));
  const double h = span / static_cast<double>(panels);
  const __m256d half = splat(0.5 * h);
  numerics::CompensatedComplexSum<double> total;
  for (std::size_t p = 0; p < panels; ++p) {
    const __m256d mid = splat(lo + (static_cast<double>(p) + 0.5) * h);
    __m256d pr = _mm256_setzero_pd();
    __m256d pi = _mm256_setzero_pd();
    for (std::size_t i = 0; i < m; i += 4) {
      const __m256d y = _mm256_fmadd_pd(half, _mm256_loadu_pd(rule.nodes.data() + i), mid);
      const __m256d y2 = _mm256_mul_pd(y, y);
      const __m256d q = _mm256_add_pd(splat(1.0), y2);
      const __m256d inv = _mm256_div_pd(splat(1.0), _mm256_mul_pd(q, q));
      const __m256d rr = _mm256_mul_pd(_mm256_sub_pd(splat(1.0), y2), inv);
      const __m256d ri = _mm256_mul_pd(_mm256_mul_pd(splat(-2.0), y), inv);
      __m256d sr = _mm256_setzero_pd();
      __m256d si = _mm256_setzero_pd();
      for (std::size_t k = 0; k < freqs.size(); ++k) {
        __m256d sn, cs;
        sincos4_safe(_mm256_mul_pd(splat(freqs[k]), y), sn, cs);
        const __m256d ar = splat(amps[k].real());
        const __m256d ai = splat(amps[k].imag());
        sr = _mm256_add_pd(sr, _mm256_fmsub_pd(ar, cs, _mm256_mul_pd(ai, sn)));
        si = _mm256_add_pd(si, _mm256_fmadd_pd(ar, sn, _mm256_mul_pd(ai, cs)));
      }
      const __m256d w = _mm256_loadu_pd(rule.weights.data() + i);
      pr = _mm256_fmadd_pd(w, _mm256_fmsub_pd(sr, rr, _mm256_mul_pd(si, ri)), pr);
      pi = _mm256_fmadd_pd(w, _mm256_fmadd_pd(sr, ri, _mm256_mul_pd(si, rr)), pi);
    }
    total.add({0.5 * h * hsum(pr), 0.5 * h * hsum(pi)});
  }
  return total.value();
}

RESONANCE_AVX2 double hermite_table_sum(const HermiteTable& table, std::span<const double> points,
                                        double shift) {
  const std::size_t n = table.value.size();
  if (n < 2) return scalar::hermite_table_sum(table, points, shift);
  const __m256d x0 = splat(table.x0 + shift);
  const __m256d inv_h = splat(1.0 / table.h);
  const __m256d vh = splat(table.h);
  const __m256d top = splat(static_cast<double>(n - 1));
  const __m256d last = splat(static_cast<double>(n - 2));
  const double* val = table.value.data();
  const double* slo = table.slope.data();
  Acc4 acc;
  acc_init(acc);
  const std::size_t count = points.size();
  for (std::size_t j = 0; j < count; j += 4) {
    const __m256i m = tail_mask(count - j);
    const __m256d x = _mm256_maskload_pd(points.data() + j, m);
    __m256d pos = _mm256_mul_pd(_mm256_sub_pd(x, x0), inv_h);
    pos = _mm256_min_pd(_mm256_max_pd(pos, _mm256_setzero_pd()), top);
    const __m256d fi = _mm256_min_pd(_mm256_floor_pd(pos), last);
    const __m256d s = _mm256_sub_pd(pos, fi);
    const __m128i i32 = _mm256_cvttpd_epi32(fi);
    const __m128i i32n = _mm_add_epi32(i32, _mm_set1_epi32(1));
    const __m256d v0 = _mm256_i32gather_pd(val, i32, 8);
    const __m256d v1 = _mm256_i32gather_pd(val, i32n, 8);
    const __m256d d0 = _mm256_mul_pd(vh, _mm256_i32gather_pd(slo, i32, 8));
    const __m256d d1 = _mm256_mul_pd(vh, _mm256_i32gather_pd(slo, i32n, 8));
    // Hermite in Horner form: v0 + s*(d0 + s*(c2 + s*c3)).
    const __m256d dv = _mm256_sub_pd(v1, v0);
    const __m256d c2 = _mm256_sub_pd(_mm256_sub_pd(_mm256_mul_pd(splat(3.0), dv), _mm256_mul_pd(splat(2.0), d0)), d1);
    const __m256d c3 = _mm256_add_pd(_mm256_fmadd_pd(splat(-2.0), dv, d0), d1);
    __m256d r = _mm256_fmadd_pd(s, c3, c2);
    r = _mm256_fmadd_pd(s, r, d0);
    r = _mm256_fmadd_pd(s, r, v0);
    acc_add(acc, _mm256_and_pd(r, _mm256_castsi256_pd(m)));
  }
  return acc_value(acc);
}

}  // namespace resonance::kernels::avx2
