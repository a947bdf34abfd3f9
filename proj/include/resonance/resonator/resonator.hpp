#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "resonance/numerics/precision.hpp"

namespace resonance::resonator {

using numerics::PrecisionContext;
using u128 = unsigned __int128;

inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 24;

struct ResonatorParams {
  double T = 0.0;
  double beta = 0.5;
  double kappa = 0.25;          // (1 - beta) / 2
  std::uint64_t N = 0;          // floor(T^kappa) unless overridden
  bool n_overridden = false;
  std::optional<std::pair<double, double>> window_override;

  double log_n() const;
  double log2_n() const;
  double log3_n() const;
};

// Throws scale_too_small when N <= e^e, invalid_argument for beta outside
// (0, 1) or a malformed window override.
ResonatorParams make_resonator_params(double T, double beta, std::optional<std::uint64_t> n_override = {},
                                      std::optional<std::pair<double, double>> window_override = {});

struct PrimeWindow {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> primes;
  std::vector<int> block;       // k with e^k X < p <= e^{k+1} X, X = log N log2 N
  int blocks = 0;               // K = floor((log2 N)^{1/8})
  bool overridden = false;

  bool empty() const { return primes.empty(); }
};

// Primes in (lo, hi] with lo = e X and hi = exp((log2 N)^{1/8}) X, or the
// override endpoints. An empty window is returned as is.
PrimeWindow prime_window(const ResonatorParams& params);

// sqrt(log N log2 N / log3 N) / (sqrt(p) (log p - log2 N - log3 N)).
double f_prime(std::uint64_t p, const ResonatorParams& params);

// Multiplicative, supported on square-free products of window primes.
double f_eval(std::uint64_t n, const PrimeWindow& window, const ResonatorParams& params);

struct SupportElement {
  u128 n = 1;
  long double log_n = 0;
  double f = 1.0;
  std::uint32_t mask = 0;       // bit i set when window.primes[i] divides n
};

// 3 log N / (k^2 log3 N).
double exclusion_threshold(int k, const ResonatorParams& params);

// supp(f) minus every n with at least exclusion_threshold(k) prime divisors in
// some block P_k, sorted by n. Throws support_too_large when 2^|P| > cap or a
// product does not fit in 128 bits.
std::vector<SupportElement> build_support_M(const PrimeWindow& window, const ResonatorParams& params,
                                            std::uint64_t cap = kDefaultCap);

struct ResonatorWeights {
  double T = 0.0;
  bool printed_endpoint = false;
  std::vector<std::int64_t> j;       // interval index of each representative
  std::vector<u128> m;               // m_j, ascending
  std::vector<double> log_m;
  std::vector<double> r;             // r(m_j)
  double f_sq_sum = 0.0;             // sum of f(n)^2 over M
  nlohmann::json header;             // provenance echoed into the CSV

  std::size_t size() const { return m.size(); }
};

// Interval index floor(log n / log(1 + 1/T)).
std::int64_t interval_index(long double log_n, double T);

// One representative per nonempty [(1+1/T)^j, (1+1/T)^{j+1}), weighted by
// r(m_j)^2 = sum of f(n)^2 over n in [(1+1/T)^{j-1}, (1+1/T)^{j+2}]. With
// printed_endpoint the lower end is (1-1/T)^{j-1} instead.
ResonatorWeights build_M_prime(double T, const std::vector<SupportElement>& M, bool printed_endpoint = false);

// Window, support and compression in one call, with the header filled in.
ResonatorWeights build_resonator(const ResonatorParams& params, bool printed_endpoint = false,
                                 std::uint64_t cap = kDefaultCap);

// R(t) = sum r(m) m^{-it}.
std::complex<double> resonator_eval(double t, const ResonatorWeights& w);
double resonator_abs_sq(double t, const ResonatorWeights& w);

struct ResonatorNorms {
  double r0_sq = 0.0;
  double gauss_moment = 0.0;    // integral of |R(t)|^2 exp(-t^2 / 2T^2) over R
  double f_sq_sum = 0.0;
};

ResonatorNorms resonator_norms(const ResonatorWeights& w, double T, const PrecisionContext& ctx);

// T sqrt(2 pi) exp(-T^2 omega^2 / 2): the Fourier transform of exp(-t^2/2T^2).
double gaussian_transform(double omega, double T);

std::string to_decimal(u128 n);
u128 parse_u128(const std::string& s);

// CSV: "# {json}" header, then "m,r" rows with r at %.17g.
void save_csv(const ResonatorWeights& w, const std::filesystem::path& path);
ResonatorWeights load_csv(const std::filesystem::path& path);

nlohmann::json summary(const ResonatorWeights& w);

}  // namespace resonance::resonator
