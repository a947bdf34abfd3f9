#include "resonance/resonator/resonator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "resonance/arith/primes.hpp"
#include "resonance/error.hpp"
#include "resonance/kernels/kernels.hpp"
#include "resonance/numerics/summation.hpp"

namespace resonance::resonator {
namespace {

long double log_u128(u128 n) { return std::log(static_cast<long double>(n)); }

bool mul_overflows(u128 a, u128 b, u128& out) { return __builtin_mul_overflow(a, b, &out); }

}  // namespace

double ResonatorParams::log_n() const { return std::log(static_cast<double>(N)); }
double ResonatorParams::log2_n() const { return std::log(log_n()); }
double ResonatorParams::log3_n() const { return std::log(log2_n()); }

ResonatorParams make_resonator_params(double T, double beta, std::optional<std::uint64_t> n_override,
                                      std::optional<std::pair<double, double>> window_override) {
  if (!(T > 1) || !std::isfinite(T)) throw Error(Errc::invalid_argument, "T must be finite and > 1");
  if (!(beta > 0 && beta < 1)) throw Error(Errc::invalid_argument, "beta must lie in (0, 1)");
  ResonatorParams p;
  p.T = T;
  p.beta = beta;
  p.kappa = (1 - beta) / 2;
  if (n_override) {
    p.N = *n_override;
    p.n_overridden = true;
  } else {
    // T^kappa is often an exact integer (T = 10^12, kappa = 1/4); a few ulps
    // of slack keep the floor from landing one below it.
    const long double x = std::pow(static_cast<long double>(T), static_cast<long double>(p.kappa));
    const double n = static_cast<double>(std::floor(x * (1 + 1e-15L)));
    if (!(n < 1.8e19)) throw Error(Errc::invalid_argument, "N = T^kappa does not fit in 64 bits");
    p.N = static_cast<std::uint64_t>(n);
  }
  if (!(static_cast<double>(p.N) > std::exp(M_E))) {
    throw Error(Errc::scale_too_small, "N = " + std::to_string(p.N) + " is not above e^e, log3 N undefined");
  }
  if (window_override) {
    const auto [lo, hi] = *window_override;
    if (!(lo >= 1 && lo < hi && hi < 1.8e19)) throw Error(Errc::invalid_argument, "window override needs 1 <= lo < hi");
    p.window_override = window_override;
  }
  return p;
}

PrimeWindow prime_window(const ResonatorParams& params) {
  PrimeWindow w;
  const double X = params.log_n() * params.log2_n();
  if (params.window_override) {
    w.lo = params.window_override->first;
    w.hi = params.window_override->second;
    w.overridden = true;
  } else {
    w.lo = M_E * X;
    w.hi = std::exp(std::pow(params.log2_n(), 0.125)) * X;
  }
  w.blocks = static_cast<int>(std::floor(std::pow(params.log2_n(), 0.125)));
  w.primes = arith::primes_in(static_cast<std::uint64_t>(std::floor(w.lo)), static_cast<std::uint64_t>(std::floor(w.hi)));
  for (std::uint64_t p : w.primes) {
    w.block.push_back(static_cast<int>(std::ceil(std::log(static_cast<double>(p) / X))) - 1);
  }
  return w;
}

double f_prime(std::uint64_t p, const ResonatorParams& params) {
  const double l1 = params.log_n(), l2 = params.log2_n(), l3 = params.log3_n();
  const double den = std::log(static_cast<double>(p)) - l2 - l3;
  if (!(den > 0)) throw Error(Errc::invalid_argument, "f(p) undefined: log p <= log2 N + log3 N");
  return std::sqrt(l1 * l2 / l3) / (std::sqrt(static_cast<double>(p)) * den);
}

double f_eval(std::uint64_t n, const PrimeWindow& window, const ResonatorParams& params) {
  if (n == 0) throw Error(Errc::invalid_argument, "f_eval needs n >= 1");
  double f = 1.0;
  for (std::uint64_t p : window.primes) {
    if (n == 1) break;
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0.0;
    f *= f_prime(p, params);
  }
  return n == 1 ? f : 0.0;
}

double exclusion_threshold(int k, const ResonatorParams& params) {
  return 3 * params.log_n() / (static_cast<double>(k) * k * params.log3_n());
}

std::vector<SupportElement> build_support_M(const PrimeWindow& window, const ResonatorParams& params,
                                            std::uint64_t cap) {
  const std::size_t np = window.primes.size();
  if (np >= 32 || (std::uint64_t{1} << np) > cap) {
    throw Error(Errc::support_too_large, "2^" + std::to_string(np) + " square-free products exceed the cap");
  }
  std::vector<double> fp(np);
  for (std::size_t i = 0; i < np; ++i) fp[i] = f_prime(window.primes[i], params);

  std::vector<std::uint32_t> block_mask(window.blocks + 1, 0);
  for (std::size_t i = 0; i < np; ++i) {
    const int k = window.block[i];
    if (k >= 1 && k <= window.blocks) block_mask[k] |= std::uint32_t{1} << i;
  }
  std::vector<double> thresholds(window.blocks + 1);
  for (int k = 1; k <= window.blocks; ++k) thresholds[k] = exclusion_threshold(k, params);

  std::vector<SupportElement> out;
  const std::uint64_t total = std::uint64_t{1} << np;
  out.reserve(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    bool excluded = false;
    for (int k = 1; k <= window.blocks && !excluded; ++k) {
      excluded = std::popcount(static_cast<std::uint32_t>(mask) & block_mask[k]) >= thresholds[k];
    }
    if (excluded) continue;
    SupportElement e;
    e.mask = static_cast<std::uint32_t>(mask);
    for (std::size_t i = 0; i < np; ++i) {
      if (!(mask >> i & 1)) continue;
      if (mul_overflows(e.n, window.primes[i], e.n)) {
        throw Error(Errc::support_too_large, "square-free product exceeds 128 bits");
      }
      e.f *= fp[i];
    }
    e.log_n = log_u128(e.n);
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const SupportElement& a, const SupportElement& b) { return a.n < b.n; });
  return out;
}

std::int64_t interval_index(long double log_n, double T) {
  return static_cast<std::int64_t>(std::floor(log_n / std::log1p(1.0L / T)));
}

ResonatorWeights build_M_prime(double T, const std::vector<SupportElement>& M, bool printed_endpoint) {
  if (M.empty()) throw Error(Errc::invalid_argument, "build_M_prime needs a nonempty support");
  if (!(T > 0)) throw Error(Errc::invalid_argument, "T must be positive");
  ResonatorWeights w;
  w.T = T;
  w.printed_endpoint = printed_endpoint;
  const long double step = std::log1p(1.0L / T);
  const long double step_printed = std::log1p(-1.0L / T);

  std::vector<long double> logs(M.size());
  std::vector<double> fsq(M.size());
  numerics::CompensatedSum<long double> total;
  for (std::size_t i = 0; i < M.size(); ++i) {
    logs[i] = M[i].log_n;
    fsq[i] = M[i].f * M[i].f;
    total.add(fsq[i]);
  }
  w.f_sq_sum = static_cast<double>(total.value());

  std::int64_t last = 0;
  for (std::size_t i = 0; i < M.size(); ++i) {
    const std::int64_t j = interval_index(logs[i], T);
    if (i > 0 && j == last) continue;
    last = j;
    const long double lower = printed_endpoint ? (j - 1) * step_printed : (j - 1) * step;
    const long double upper = (j + 2) * step;
    const auto a = std::lower_bound(logs.begin(), logs.end(), lower) - logs.begin();
    const auto b = std::upper_bound(logs.begin(), logs.end(), upper) - logs.begin();
    numerics::CompensatedSum<long double> acc;
    for (auto k = a; k < b; ++k) acc.add(fsq[k]);
    w.j.push_back(j);
    w.m.push_back(M[i].n);
    w.log_m.push_back(static_cast<double>(log_u128(M[i].n)));
    w.r.push_back(std::sqrt(static_cast<double>(acc.value())));
  }
  w.header = {{"T", T}, {"printed_endpoint", printed_endpoint}, {"f_sq_sum", w.f_sq_sum}, {"support_size", M.size()}};
  return w;
}

ResonatorWeights build_resonator(const ResonatorParams& params, bool printed_endpoint, std::uint64_t cap) {
  const PrimeWindow window = prime_window(params);
  const auto M = build_support_M(window, params, cap);
  ResonatorWeights w = build_M_prime(params.T, M, printed_endpoint);
  w.header["beta"] = params.beta;
  w.header["N"] = params.N;
  w.header["n_overridden"] = params.n_overridden;
  w.header["window"] = {window.lo, window.hi};
  w.header["window_overridden"] = window.overridden;
  w.header["primes"] = window.primes;
  return w;
}

std::complex<double> resonator_eval(double t, const ResonatorWeights& w) {
  return kernels::dirichlet_sum(t, 0.0, w.log_m, w.r);
}

double resonator_abs_sq(double t, const ResonatorWeights& w) { return std::norm(resonator_eval(t, w)); }

double gaussian_transform(double omega, double T) {
  const double x = T * omega;
  return T * std::sqrt(2 * M_PI) * std::exp(-0.5 * x * x);
}

ResonatorNorms resonator_norms(const ResonatorWeights& w, double T, const PrecisionContext& ctx) {
  ResonatorNorms out;
  out.f_sq_sum = w.f_sq_sum;
  numerics::CompensatedSum<double> r0;
  for (double r : w.r) r0.add(r);
  out.r0_sq = r0.value() * r0.value();
  // Pairs further apart than this contribute below ctx tolerance relative to
  // the diagonal.
  const double floor_rel = std::min(1e-30, ctx.target_abs_err * 1e-10);
  const double cutoff = std::sqrt(-2 * std::log(floor_rel)) / T;
  numerics::CompensatedSum<double> acc;
  for (std::size_t a = 0; a < w.size(); ++a) {
    acc.add(w.r[a] * w.r[a] * gaussian_transform(0.0, T));
    for (std::size_t b = a + 1; b < w.size() && w.log_m[b] - w.log_m[a] <= cutoff; ++b) {
      acc.add(2 * w.r[a] * w.r[b] * gaussian_transform(w.log_m[b] - w.log_m[a], T));
    }
  }
  out.gauss_moment = acc.value();
  return out;
}

std::string to_decimal(u128 n) {
  if (n == 0) return "0";
  std::string s;
  while (n) {
    s.push_back(static_cast<char>('0' + static_cast<int>(n % 10)));
    n /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

u128 parse_u128(const std::string& s) {
  if (s.empty()) throw Error(Errc::io, "empty integer field");
  u128 n = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw Error(Errc::io, "bad integer field '" + s + "'");
    if (mul_overflows(n, 10, n) || __builtin_add_overflow(n, static_cast<u128>(c - '0'), &n)) {
      throw Error(Errc::io, "integer field exceeds 128 bits");
    }
  }
  return n;
}

void save_csv(const ResonatorWeights& w, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << "# " << w.header.dump() << "\n";
  char buf[64];
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", w.r[i]);
    out << to_decimal(w.m[i]) << ',' << buf << '\n';
  }
  if (!out) throw Error(Errc::io, "write failed for " + path.string());
}

ResonatorWeights load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw Error(Errc::io, "missing header in " + path.string());
  ResonatorWeights w;
  try {
    w.header = nlohmann::json::parse(line.substr(2));
    w.T = w.header.at("T").get<double>();
    w.printed_endpoint = w.header.at("printed_endpoint").get<bool>();
    w.f_sq_sum = w.header.at("f_sq_sum").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io, std::string("bad header: ") + e.what());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(Errc::io, "bad row '" + line + "'");
    const u128 m = parse_u128(line.substr(0, comma));
    double r = 0;
    std::istringstream rs(line.substr(comma + 1));
    if (!(rs >> r)) throw Error(Errc::io, "bad weight in '" + line + "'");
    if (!w.m.empty() && m <= w.m.back()) throw Error(Errc::io, "rows must be strictly ascending in m");
    w.m.push_back(m);
    w.r.push_back(r);
    w.log_m.push_back(static_cast<double>(log_u128(m)));
    w.j.push_back(interval_index(log_u128(m), w.T));
  }
  if (w.m.empty()) throw Error(Errc::io, "no rows in " + path.string());
  return w;
}

nlohmann::json summary(const ResonatorWeights& w) {
  nlohmann::json j = w.header;
  std::vector<std::string> ms;
  for (u128 m : w.m) ms.push_back(to_decimal(m));
  j["m_prime_size"] = w.size();
  if (w.size() <= 64) {
    j["m_prime"] = ms;
    j["r"] = w.r;
  }
  numerics::CompensatedSum<double> r0;
  for (double r : w.r) r0.add(r);
  j["R0"] = r0.value();
  return j;
}

}  // namespace resonance::resonator
