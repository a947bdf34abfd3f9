#include "resonance/zeta/ledger.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "resonance/error.hpp"

namespace resonance::zeta {
namespace {

constexpr double kEulerMaclaurinScanLimit = 1000.0;
constexpr double kZerosPerBlock = 2000.0;
constexpr int kRescans = 4;

// Z for zero hunting: only signs and shapes matter, so Riemann-Siegel is used
// without the tolerance gate above kEulerMaclaurinScanLimit.
double z_scan(double t) {
  static const PrecisionContext ctx = numerics::make_context(64, 1e-13);
  if (t <= kEulerMaclaurinScanLimit) return hardy_z(t, ctx);
  return riemann_siegel_z(t).value.real();
}

double mean_gap(double t) {
  const double x = std::max(t, 2 * M_PI * M_E) / (2 * M_PI);
  return 2 * M_PI / std::log(x);
}

double root_tolerance(double t) { return std::max(1e-12, 8 * std::nextafter(t, INFINITY) - 8 * t); }

double refine_root(double a, double za, double b, double zb) {
  if (za == 0) return a;
  if (zb == 0) return b;
  const double xtol = root_tolerance(b);
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(
      z_scan, a, b, za, zb, [xtol](double lo, double hi) { return std::fabs(hi - lo) <= xtol; }, iters);
  return 0.5 * (r.first + r.second);
}

bool sign_of(double z) { return !std::signbit(z) || z == 0; }

// Zeros of Z on (a, b] given Z(a) = za, scanning at `factor` times a quarter
// of the mean zero spacing.
std::vector<double> scan(double a, double za, double b, double factor) {
  std::vector<double> zeros;
  double t_prev = a, z_prev = za;
  double t_prev2 = NAN, z_prev2 = NAN;
  while (t_prev < b) {
    const double h = std::min(1.0, 0.25 * factor * mean_gap(t_prev));
    const double t = std::min(b, t_prev + h);
    const double z = z_scan(t);
    if (sign_of(z) != sign_of(z_prev)) {
      zeros.push_back(refine_root(t_prev, z_prev, t, z));
    } else if (!std::isnan(z_prev2) && sign_of(z_prev2) == sign_of(z_prev) &&
               std::fabs(z_prev) < std::fabs(z_prev2) && std::fabs(z_prev) < std::fabs(z)) {
      // |Z| dips between two same-signed neighbours: look for a pair of
      // close zeros hiding below the grid.
      const double sgn = sign_of(z_prev) ? 1.0 : -1.0;
      auto g = [sgn](double x) { return sgn * z_scan(x); };
      std::uintmax_t iters = 100;
      const auto m = boost::math::tools::brent_find_minima(g, t_prev2, t, 40, iters);
      if (m.second < 0) {
        const double zm = sgn * m.second;
        std::vector<double> pair = {refine_root(t_prev2, z_prev2, m.first, zm),
                                    refine_root(m.first, zm, t, z)};
        // Keep ascending order: both lie left of t.
        for (double p : pair) zeros.push_back(p);
      }
    }
    t_prev2 = t_prev;
    z_prev2 = z_prev;
    t_prev = t;
    z_prev = z;
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

// N(b) from the path value of S and the exact theta.
long count_by_argument(double b, const PrecisionContext& ctx) {
  const double s = log_zeta_path(0.5, b, ctx).imag() / M_PI;
  const double n = theta(b) / M_PI + 1 + s;
  const double r = std::round(n);
  if (std::fabs(n - r) > 1e-3) {
    throw Error(Errc::precision_exhausted, "argument count not integral at t = " + std::to_string(b));
  }
  return static_cast<long>(r);
}

bool near_any(const std::vector<double>& zeros, double t, double d) {
  auto it = std::lower_bound(zeros.begin(), zeros.end(), t - d);
  return it != zeros.end() && *it <= t + d;
}

std::vector<double> scan_verified(double from, double upper, std::vector<double> zeros,
                                  const PrecisionContext& ctx) {
  const PrecisionContext path_ctx = numerics::make_context(64, std::max(ctx.target_abs_err, 1e-10));
  double a = from;
  double za = z_scan(std::max(a, 0.0));
  while (a < upper) {
    double b = std::min(upper, a + kZerosPerBlock * mean_gap(a));
    double factor = 1.0;
    std::vector<double> block;
    long expected = -1;
    for (int attempt = 0;;) {
      block = scan(a, za, b, factor);
      if (b < upper && near_any(block, b, 1e-6)) {
        b += 1e-4;  // keep the checkpoint off a zero ordinate
        continue;
      }
      ++attempt;
      if (b == upper && near_any(block, b, kOrdinateResolution)) {
        throw Error(Errc::invalid_argument, "upper_t is a zero ordinate");
      }
      expected = count_by_argument(b, path_ctx);
      if (static_cast<long>(zeros.size() + block.size()) == expected) break;
      if (attempt > kRescans) {
        throw Error(Errc::unresolved_pair, "found " + std::to_string(zeros.size() + block.size()) +
                                               " zeros below " + std::to_string(b) + ", argument gives " +
                                               std::to_string(expected));
      }
      factor *= 0.5;
    }
    zeros.insert(zeros.end(), block.begin(), block.end());
    a = b;
    za = z_scan(b);
  }
  for (std::size_t i = 1; i < zeros.size(); ++i) {
    if (!(zeros[i] > zeros[i - 1])) throw Error(Errc::unresolved_pair, "zero ordinates not separated");
  }
  return zeros;
}

}  // namespace

ZeroLedger::ZeroLedger(double upper_t, std::vector<double> ordinates, bool verified)
    : upper_t_(upper_t), ordinates_(std::move(ordinates)), verified_(verified) {}

double ZeroLedger::n_of_t(double x) const {
  if (x < 0 || x > upper_t_) throw Error(Errc::invalid_argument, "N(t) requested outside the ledger range");
  const auto lo = std::lower_bound(ordinates_.begin(), ordinates_.end(), x);
  const auto hi = std::upper_bound(lo, ordinates_.end(), x);
  return static_cast<double>(lo - ordinates_.begin()) + 0.5 * static_cast<double>(hi - lo);
}

double ZeroLedger::s_value(double x) const {
  if (x == 0) return 0.0;
  if (x < 0) return -s_value(-x);
  return n_of_t(x) - theta(x) / M_PI - 1.0;
}

std::complex<double> ZeroLedger::log_zeta(double x, const PrecisionContext& ctx) const {
  const double z = x == 0 ? zeta_em(0.5, 0.0, ctx).value.real() : hardy_z(std::fabs(x), ctx);
  return {std::log(std::fabs(z)), M_PI * s_value(x)};
}

std::vector<double> ZeroLedger::singularities(double a, double b) const {
  if (std::max(std::fabs(a), std::fabs(b)) > upper_t_) {
    throw Error(Errc::invalid_argument, "singularities requested outside the ledger range");
  }
  std::vector<double> out;
  for (auto it = ordinates_.rbegin(); it != ordinates_.rend(); ++it) {
    if (-*it > a && -*it < b) out.push_back(-*it);
  }
  if (a < 0 && b > 0) out.push_back(0.0);
  for (double g : ordinates_) {
    if (g > a && g < b) out.push_back(g);
  }
  return out;
}

ZeroLedger ZeroLedger::extended(double new_upper, const PrecisionContext& ctx) const {
  if (new_upper <= upper_t_) return *this;
  auto zeros = scan_verified(upper_t_, new_upper, ordinates_, ctx);
  return ZeroLedger(new_upper, std::move(zeros), verified_);
}

void ZeroLedger::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  nlohmann::json header = {{"upper_t", upper_t_}, {"count", count()}, {"verified", verified_}};
  out << "# " << header.dump() << "\n";
  out << "ordinate,index\n";
  char buf[64];
  for (std::size_t i = 0; i < ordinates_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%zu\n", ordinates_[i], i + 1);
    out << buf;
  }
}

ZeroLedger ZeroLedger::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot read " + path.string());
  std::string line;
  double upper = 0;
  bool verified = false;
  std::vector<double> zeros;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      try {
        auto header = nlohmann::json::parse(line.substr(1));
        upper = header.at("upper_t").get<double>();
        verified = header.value("verified", false);
      } catch (const std::exception& e) {
        throw Error(Errc::io, std::string("bad ledger header: ") + e.what());
      }
      continue;
    }
    if (line.rfind("ordinate", 0) == 0) continue;
    std::istringstream row(line);
    double g;
    char comma;
    long index;
    if (!(row >> g >> comma >> index) || comma != ',' || index != static_cast<long>(zeros.size()) + 1) {
      throw Error(Errc::io, "bad ledger row: " + line);
    }
    zeros.push_back(g);
  }
  if (!zeros.empty() && zeros.back() > upper) throw Error(Errc::io, "ledger ordinate above upper_t");
  return ZeroLedger(upper, std::move(zeros), verified);
}

ZeroLedger count_zeros(double upper_t, const PrecisionContext& ctx) {
  if (!(upper_t >= 0)) throw Error(Errc::invalid_argument, "count_zeros requires upper_t >= 0");
  if (upper_t == 0) return ZeroLedger(0.0, {}, true);
  return ZeroLedger(upper_t, scan_verified(0.0, upper_t, {}, ctx), true);
}

}  // namespace resonance::zeta
