#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "resonance/kernel_lab/kernel_lab.hpp"
#include "resonance/kernels/kernels.hpp"
#include "resonance/resonator/resonator.hpp"
#include "resonance/zeta/ledger.hpp"

namespace resonance::search {

using kernel_lab::KernelParams;
using numerics::PrecisionContext;
using resonator::PrimeWindow;
using resonator::ResonatorWeights;

inline constexpr double kDefaultLambdaPrime = 0.4;

// G(t) = sum coefficient_n n^{-1/2 - it}.
struct GCoefficients {
  std::vector<std::pair<std::uint64_t, double>> terms;
};

// Lambda(n) w_n(alpha, H) / log n over the prime powers in the tent support.
GCoefficients prop22_coefficients(double alpha, double H);

// Dawson's integral exp(-x^2) int_0^x exp(s^2) ds.
double dawson(double x);

// Re of the integral of G(t) |R(t)|^2 exp(-t^2/2T^2) over R, in closed form.
double gaussian_moment_G(const GCoefficients& g, const ResonatorWeights& w, double T, const PrecisionContext& ctx);

// Im of the same integral over (0, inf): the sine transform sqrt(2) T D(omega T / sqrt 2).
double half_line_sine_moment(const GCoefficients& g, const ResonatorWeights& w, double T);

// Integral of G(t) |R(t)|^2 exp(-t^2/2T^2) over [a, b] by composite Gauss-Legendre.
std::complex<double> direct_moment(const GCoefficients& g, const ResonatorWeights& w, double T, double a, double b);

// Integral of sign_kernel over [-U, U].
double kernel_mass(const KernelParams& params, double U);

// Minimum of w_p(lambda L, L) over the window, L = log2 T. Throws
// scale_mismatch when some p lies outside (log T)^{1 -+ 2 lambda'}.
double min_weight_over_P(const KernelParams& params, const PrimeWindow& window,
                         double lambda_prime = kDefaultLambdaPrime);

struct MomentReport {
  double T = 0.0;
  double lambda = 0.0;
  int sign = 1;
  double i2_value = 0.0;
  double i2_reference = 0.0;   // T sqrt(log T log2 T log3 T) sum f^2
  double i1_value = 0.0;
  double i1_err = 0.0;
  double kernel_mass = 0.0;
  double ratio = 0.0;          // i2_value / i2_reference
  bool has_i1 = false;
};

nlohmann::json to_json(const MomentReport& r);

// Completed form (1/4) sum Lambda w_n / (log n sqrt n) int_R n^{-it} |R|^2 Phi.
MomentReport compute_I2(double T, const KernelParams& params, const ResonatorWeights& w, const PrecisionContext& ctx);

struct WindowedI2 {
  double value = 0.0;
  double err = 0.0;
  double real_part = 0.0;       // (1/2) sum ... Re over [t_lo, t_hi]
  double first_sum = 0.0;       // sign (3/2) sum ... Im over [t_lo, t_hi]
  double completed = 0.0;
  // Lemma error carried by the truncated convolution: the per-point envelope
  // over pi times the Gaussian moment. I1 matches value only up to this.
  double lemma_err = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

// The same sums restricted to [T^beta, T log T]. With full set the H = 0
// first sum enters through its imaginary part, matching the signed kernel.
WindowedI2 compute_I2_windowed(double T, double beta, const KernelParams& params, const ResonatorWeights& w,
                               const PrecisionContext& ctx, bool full = true);

// integral over [-U, U] of S(t + u) sign_kernel(u) du, exact in the step part
// of S (via the kernel antiderivative at each ordinate) and with the theta
// part tabulated by piecewise Chebyshev interpolation on [t_lo, t_hi].
class SmoothedS {
 public:
  SmoothedS(const zeta::ZeroLedger& ledger, const KernelParams& params, double t_lo, double t_hi, double U,
            double table_step = 0.005, int threads = 1);

  double operator()(double t) const;

  double kernel_mass() const { return mass_; }   // integral of sign_kernel over [-U, U]
  double U() const { return U_; }
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  // Bound on the error of one evaluation from the kernel table and the theta
  // interpolant.
  double error_bound() const { return error_bound_; }

  // Same integral by direct quadrature of the theta part; for probes.
  double theta_part_direct(double t) const;
  double theta_part(double t) const;

 private:
  struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> c;
  };

  const zeta::ZeroLedger* ledger_;
  KernelParams params_;
  double t_lo_, t_hi_, U_;
  double mass_ = 0.0;
  double error_bound_ = 0.0;
  kernels::HermiteTable kc_;
  std::vector<double> neg_;     // -gamma ascending
  std::vector<double> nodes_;   // quadrature in u for the theta part
  std::vector<double> wk_;      // weight * kernel at each node
  std::vector<Panel> panels_;
};

struct I1Options {
  double t_lo = 0.0;            // 0 selects T^beta
  double t_hi = 0.0;            // 0 selects min(T log T, T sqrt(2 log(1/tail_rel)))
  double tail_rel = 1e-20;
  double table_step = 0.005;
  int threads = 1;
  std::size_t max_panels = 0;   // 0 means unlimited
  bool constant_s = false;      // test hook: S replaced by 1
};

struct I1Result {
  double value = 0.0;
  double err_estimate = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double kernel_mass = 0.0;
  double window_moment = 0.0;   // integral of |R|^2 Phi over [t_lo, t_hi]
  double gauss_moment = 0.0;    // same over R
  double max_signed_s = 0.0;    // over [T^beta/2, 2 T log T] and the reach t +- U
  double majorant = 0.0;        // max_signed_s * |kernel_mass| * gauss_moment
  std::size_t panels = 0;
  bool budget_exhausted = false;
};

// Ledger height needed by compute_I1 with these options.
double i1_ledger_height(double T, double beta, const I1Options& opts = {});

I1Result compute_I1(double T, double beta, const KernelParams& params, const ResonatorWeights& w,
                    const zeta::ZeroLedger* ledger, const PrecisionContext& ctx, const I1Options& opts = {});

// sup of sign * S over [lo, hi] from the ledger: S is monotone between
// ordinates away from |x| < 2 pi, so one-sided limits at the ordinates plus
// the endpoints and the turning points of theta suffice.
double max_signed_s(const zeta::ZeroLedger& ledger, double lo, double hi, int sign);

using SFunction = std::function<double(double)>;

struct ExtremeReport {
  int sign = 1;
  double T = 0.0;
  double beta = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double grid_step = 0.0;
  double t_star = 0.0;
  double s_star = 0.0;              // sign * S(t_star)
  double resonator_weight = 0.0;    // |R(t_star)|^2
  double theorem_reference = 0.0;   // sqrt(log T log3 T / log2 T)
  double ratio = 0.0;
  std::int64_t budget = 0;
  std::int64_t evaluations = 0;
  bool coarse_only = false;
  bool found = false;               // sign-consistent extreme located
};

nlohmann::json to_json(const ExtremeReport& r);

struct ScanOptions {
  int coarse_stride = 25;           // coarse grid = every stride-th lattice point
  double phase1_share = 0.4;        // fraction of the budget for coarse points
  int threads = 1;
  std::optional<double> t_lo;       // defaults to T^beta
};

// Budgeted two-phase scan of the lattice t_lo + k grid_step in [t_lo, T].
ExtremeReport extreme_scan(double T, double beta, int sign, double grid_step, std::int64_t budget,
                           const ResonatorWeights& w, const SFunction& s, const ScanOptions& opts = {});

// Every lattice point; the oracle for extreme_scan.
ExtremeReport dense_scan(double t_lo, double t_hi, int sign, double grid_step, const SFunction& s);

double theorem_reference(double T);

}  // namespace resonance::search
