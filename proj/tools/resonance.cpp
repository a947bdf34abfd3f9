#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resonance/arith/primes.hpp"
#include "resonance/convolution/convolution.hpp"
#include "resonance/error.hpp"
#include "resonance/kernel_lab/kernel_lab.hpp"
#include "resonance/resonator/resonator.hpp"
#include "resonance/search/search.hpp"
#include "resonance/zeta/ledger.hpp"
#include "resonance/zeta/z_table.hpp"
#include "resonance/zeta/zeta.hpp"

using namespace resonance;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kBadConfig = 2, kNumeric = 3 };

struct Common {
  int precision_bits = 64;
  double tol = 1e-10;
  int threads = 1;
  std::string out;
};

struct Construction {
  double beta = 0.5;
  std::uint64_t N = 0;
  std::string window;
  bool printed_endpoint = false;
  std::string weights;
};

numerics::PrecisionContext context(const Common& c) { return numerics::make_context(c.precision_bits, c.tol); }

json common_json(const Common& c) { return {{"precision_bits", c.precision_bits}, {"tol", c.tol}}; }

std::optional<std::pair<double, double>> parse_window(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(Errc::invalid_argument, "window must be lo:hi, got " + s);
  try {
    return std::pair{std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, "window must be lo:hi, got " + s);
  }
}

json construction_json(const Construction& c) {
  json j = {{"beta", c.beta}, {"printed_endpoint", c.printed_endpoint}};
  j["N"] = c.N ? json(c.N) : json(nullptr);
  j["override_window"] = c.window.empty() ? json(nullptr) : json(c.window);
  if (!c.weights.empty()) j["weights"] = c.weights;
  return j;
}

// Weights from a file when one is given, otherwise built for this T.
resonator::ResonatorWeights resonator_for(double T, const Construction& c) {
  if (!c.weights.empty()) return resonator::load_csv(c.weights);
  auto params = resonator::make_resonator_params(T, c.beta, c.N ? std::optional(c.N) : std::nullopt,
                                                 parse_window(c.window));
  return resonator::build_resonator(params, c.printed_endpoint);
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  Sink(const std::string& path, bool append = false) {
    if (!path.empty()) {
      file_.open(path, append ? std::ios::app : std::ios::trunc);
      if (!file_) throw Error(Errc::io, "cannot open " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int exit_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::scale_too_small:
    case Errc::support_too_large:
    case Errc::scale_mismatch:
    case Errc::io:
      return kBadConfig;
    default:
      return kNumeric;
  }
}

// ---- s-of-t

struct SOfT {
  double from = 10, to = 20, step = 1;
};

int run_s_of_t(const Common& c, const SOfT& o) {
  if (!(o.step > 0) || !(o.from <= o.to)) throw Error(Errc::invalid_argument, "need from <= to and step > 0");
  const auto ctx = context(c);
  Sink sink(c.out);
  json header = common_json(c);
  header.update({{"command", "s-of-t"}, {"from", o.from}, {"to", o.to}, {"step", o.step}});
  auto& os = sink.os();
  os << "# " << header.dump() << "\n" << "t,S,N_main,Z,status\n";
  const auto n = static_cast<long>(std::floor((o.to - o.from) / o.step + 1e-9)) + 1;
  for (long k = 0; k < n; ++k) {
    const double t = o.from + static_cast<double>(k) * o.step;
    try {
      const auto s = zeta::s_of_t(t, ctx);
      os << fmt(t) << ',' << fmt(s.s_val) << ',' << fmt(zeta::rvm_main_term(t)) << ',' << fmt(zeta::hardy_z(t, ctx))
         << (s.at_zero_ordinate ? ",zero" : ",ok") << "\n";
    } catch (const Error& e) {
      os << fmt(t) << ",nan,nan,nan,error:" << errc_name(e.code()) << "\n";
    }
  }
  return kOk;
}

// ---- verify-convolution

struct Verify {
  double log_T = 10;
  std::vector<double> lambdas{0.25, 0.3, 0.45};
  std::vector<std::string> hs{"0", "L", "-L"};
  std::vector<double> ts{200, 500, 1000};
  bool corrupt_lambda = false;
  bool signed_kernel = false;
};

double parse_h(const std::string& s, double L) {
  if (s == "L" || s == "+L") return L;
  if (s == "-L") return -L;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw Error(Errc::invalid_argument, "H must be a number, L or -L, got " + s);
  }
}

int run_verify(const Common& c, const Verify& o) {
  const auto ctx = context(c);
  const double T = std::exp(o.log_T);
  Sink sink(c.out);
  if (o.lambdas.empty() || o.ts.empty() || (!o.signed_kernel && o.hs.empty())) return kOk;
  const double reach = *std::max_element(o.ts.begin(), o.ts.end()) + convolution::truncation(T) + 1;
  const auto line = zeta::CriticalLine::build(reach, ctx);
  convolution::VonMangoldt lambda;
  if (o.corrupt_lambda) {
    lambda = [](std::uint64_t n) { return n == 2 ? 2 * std::log(2.0) : arith::von_mangoldt(n); };
  }
  bool all = true;
  for (double lam : o.lambdas) {
    auto p = kernel_lab::make_kernel_params(lam, T, 1);
    for (double t : o.ts) {
      std::vector<ResidualReport> reps;
      if (o.signed_kernel) {
        for (int sign : {1, -1}) {
          p.sign = sign;
          reps.push_back(convolution::signed_residual(t, p, line, ctx));
        }
      } else {
        for (const auto& h : o.hs) {
          reps.push_back(convolution::lemma_residual(t, p.alpha(), parse_h(h, p.L()), T, line, ctx, lambda));
        }
      }
      for (const auto& r : reps) {
        json j = to_json(r);
        j["lambda"] = lam;
        sink.os() << j.dump() << "\n";
        all = all && r.pass;
      }
    }
  }
  return all ? kOk : kVerifyFailed;
}

// ---- tent-identity

struct Tent {
  std::vector<std::uint64_t> n{2, 3, 10};
  std::vector<double> alpha{0.5, 1.0};
  std::vector<double> H{0.0, 1.0};
  double U = 1e6;
  double tolerance = 1e-2;   // the envelope at U = 1e6 is about 1e-6
};

int run_tent(const Common& c, const Tent& o) {
  const auto ctx = numerics::make_context(c.precision_bits, o.tolerance);
  Sink sink(c.out);
  bool all = true;
  for (auto n : o.n) {
    for (double a : o.alpha) {
      for (double h : o.H) {
        const auto r = kernel_lab::contour_tent_check(n, a, h, o.U, ctx);
        json j = to_json(r);
        j["n"] = n;
        sink.os() << j.dump() << "\n";
        all = all && r.pass;
      }
    }
  }
  return all ? kOk : kVerifyFailed;
}

// ---- build-resonator

struct Build {
  double T = 1e12;
};

int run_build(const Common& c, const Construction& k, const Build& o) {
  Construction built = k;
  built.weights.clear();
  const auto w = resonator_for(o.T, built);
  json s = resonator::summary(w);
  if (!c.out.empty()) {
    resonator::save_csv(w, c.out);
    const auto back = resonator::load_csv(c.out);
    double sum = 0;
    for (double r : back.r) sum += r;
    s["weights_file"] = c.out;
    s["reload_R0"] = resonator::resonator_eval(0.0, back).real();
    s["reload_sum_r"] = sum;
  }
  std::cout << s.dump() << "\n";
  return kOk;
}

// ---- moments

struct Moments {
  double T = 0;
  double log_T = 10;
  double lambda = 0.45;
  int sign = 1;
  bool with_i1 = false;
};

int run_moments(const Common& c, const Construction& k, const Moments& o) {
  const auto ctx = context(c);
  const double T = o.T > 0 ? o.T : std::exp(o.log_T);
  const auto p = kernel_lab::make_kernel_params(o.lambda, T, o.sign);
  const auto w = resonator_for(T, k);
  auto rep = search::compute_I2(T, p, w, ctx);
  json j = search::to_json(rep);
  bool ok = true;
  if (o.with_i1) {
    const auto win = search::compute_I2_windowed(T, k.beta, p, w, ctx, true);
    search::I1Options io;
    io.threads = c.threads;
    const auto ledger = zeta::count_zeros(search::i1_ledger_height(T, k.beta, io), ctx);
    const auto i1 = search::compute_I1(T, k.beta, p, w, &ledger, ctx, io);
    rep.has_i1 = true;
    rep.i1_value = i1.value;
    rep.i1_err = i1.err_estimate;
    j = search::to_json(rep);
    const double gap = std::fabs(i1.value - win.value);
    ok = gap <= i1.err_estimate + win.err + win.lemma_err;
    j["i2_windowed"] = win.value;
    j["i2_windowed_err"] = win.err;
    j["lemma_err"] = win.lemma_err;
    j["relative_gap"] = gap / std::fabs(win.value);
    j["majorant"] = i1.majorant;
    j["identity_pass"] = ok;
  }
  j["config"] = common_json(c);
  j["config"].update({{"command", "moments"}, {"T", T}, {"lambda", o.lambda}, {"sign", o.sign}});
  j["config"]["construction"] = construction_json(k);
  Sink sink(c.out);
  sink.os() << j.dump() << "\n";
  return ok ? kOk : kVerifyFailed;
}

// ---- search

struct SearchOpts {
  double T = 1e4;
  int sign = 1;
  long long budget = -1;   // -1: a tenth of the dense lattice
  double grid_step = 0.01;
  double t_lo = 0;         // 0: T^beta
  std::string plot;
};

// S from a zero ledger, metered and optionally recorded for plotting.
struct MeteredS {
  const zeta::ZeroLedger* ledger;
  bool record = false;
  std::mutex mu;
  std::vector<std::pair<double, double>> seen;

  double operator()(double t) {
    const double s = ledger->s_value(t);
    if (record) {
      std::lock_guard lock(mu);
      seen.emplace_back(t, s);
    }
    return s;
  }
};

long long dense_size(double lo, double hi, double step) {
  return static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

search::ExtremeReport scan_one(double T, const Construction& k, const SearchOpts& o, int sign, int threads,
                               const resonator::ResonatorWeights& w, MeteredS& s) {
  search::ScanOptions so;
  so.threads = threads;
  if (o.t_lo > 0) so.t_lo = o.t_lo;
  const double lo = o.t_lo > 0 ? o.t_lo : std::pow(T, k.beta);
  const long long budget = o.budget >= 0 ? o.budget : dense_size(lo, T, o.grid_step) / 10;
  return search::extreme_scan(T, k.beta, sign, o.grid_step, budget, w, [&](double t) { return s(t); }, so);
}

int run_search(const Common& c, const Construction& k, const SearchOpts& o) {
  const auto ctx = context(c);
  const auto w = resonator_for(o.T, k);
  const auto ledger = zeta::count_zeros(o.T + 1, ctx);
  MeteredS s{&ledger, !o.plot.empty(), {}, {}};
  const auto rep = scan_one(o.T, k, o, o.sign, c.threads, w, s);
  json j = search::to_json(rep);
  j["config"] = common_json(c);
  j["config"].update({{"command", "search"}, {"T", o.T}, {"sign", o.sign}, {"grid_step", o.grid_step},
                      {"budget", rep.budget}});
  j["config"]["construction"] = construction_json(k);
  Sink sink(c.out, true);
  sink.os() << j.dump() << "\n";
  if (!o.plot.empty()) {
    std::sort(s.seen.begin(), s.seen.end());
    std::ofstream f(o.plot);
    if (!f) throw Error(Errc::io, "cannot open " + o.plot);
    f << "# " << j["config"].dump() << "\n" << "t,S,R_abs_sq\n";
    for (auto [t, v] : s.seen) f << fmt(t) << ',' << fmt(v) << ',' << fmt(resonator::resonator_abs_sq(t, w)) << "\n";
  }
  return kOk;
}

// ---- ladder

struct Ladder {
  std::vector<double> log_T{8, 10, 12};
  double lambda = 0.45;
  SearchOpts scan;
};

int run_ladder(const Common& c, const Construction& k, const Ladder& o) {
  if (o.log_T.empty()) return kOk;
  const auto ctx = context(c);
  const double top = std::exp(*std::max_element(o.log_T.begin(), o.log_T.end()));
  const auto ledger = zeta::count_zeros(top + 1, ctx);
  Sink sink(c.out, true);
  std::printf("%8s %5s %12s %12s %10s %10s %10s\n", "log T", "sign", "I2 ratio", "min w/L", "s_star", "ratio",
              "evals");
  for (double lt : o.log_T) {
    const double T = std::exp(lt);
    const auto w = resonator_for(T, k);
    for (int sign : {1, -1}) {
      const auto p = kernel_lab::make_kernel_params(o.lambda, T, sign);
      const auto m = search::compute_I2(T, p, w, ctx);
      json j;
      j["key"] = common_json(c);
      j["key"].update({{"T", T}, {"beta", k.beta}, {"lambda", o.lambda}, {"sign", sign},
                       {"grid_step", o.scan.grid_step}});
      j["key"]["construction"] = construction_json(k);
      j["moments"] = search::to_json(m);
      double mw = NAN;
      if (!k.weights.empty()) {
        j["min_weight_over_L"] = nullptr;
      } else {
        auto params = resonator::make_resonator_params(T, k.beta, k.N ? std::optional(k.N) : std::nullopt,
                                                       parse_window(k.window));
        try {
          mw = search::min_weight_over_P(p, resonator::prime_window(params)) / p.L();
          j["min_weight_over_L"] = mw;
        } catch (const Error& e) {
          if (e.code() != Errc::scale_mismatch) throw;
          j["min_weight_over_L"] = nullptr;
          j["scale_mismatch"] = e.what();
        }
      }
      MeteredS s{&ledger, false, {}, {}};
      const auto rep = scan_one(T, k, o.scan, sign, c.threads, w, s);
      j["key"]["budget"] = rep.budget;
      j["extreme"] = search::to_json(rep);
      j["ratio"] = std::isfinite(rep.ratio) ? json(rep.ratio) : json(nullptr);
      sink.os() << j.dump() << "\n";
      std::printf("%8g %5d %12.6g %12.6g %10.6g %10.6g %10lld\n", lt, sign, m.ratio, mw, rep.s_star, rep.ratio,
                  static_cast<long long>(rep.evaluations));
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance-method experiments for the argument of the zeta function on the critical line"};
  app.set_config("--config", "", "TOML config; flags override file keys");
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--precision-bits", common.precision_bits, "working precision: 64, 113 or 256")->capture_default_str();
  app.add_option("--tol", common.tol, "target absolute error")->capture_default_str();
  app.add_option("--threads", common.threads, "worker threads inside library calls")->capture_default_str();
  app.add_option("--out", common.out, "output file (stdout when empty)");

  Construction cons;
  auto add_construction = [&](CLI::App* sub) {
    sub->add_option("--beta", cons.beta, "window exponent, N = T^{(1-beta)/2}")->capture_default_str();
    sub->add_option("--N", cons.N, "override the resonator length N");
    sub->add_option("--override-window", cons.window, "prime window lo:hi");
    sub->add_flag("--printed-endpoint", cons.printed_endpoint, "use the (1 - 1/T)^{j-1} lower endpoint");
  };

  SOfT sot;
  auto* s_of_t = app.add_subcommand("s-of-t", "S(t), main term and Z(t) on a grid, as CSV");
  s_of_t->add_option("--from", sot.from)->capture_default_str();
  s_of_t->add_option("--to", sot.to)->capture_default_str();
  s_of_t->add_option("--step", sot.step)->capture_default_str();

  Verify ver;
  auto* verify = app.add_subcommand("verify-convolution", "smoothed log zeta against the prime sum, JSONL");
  verify->add_option("--log-T", ver.log_T, "log T")->capture_default_str();
  verify->add_option("--lambda", ver.lambdas, "lambda values")->expected(0, -1);
  verify->add_option("--H", ver.hs, "H values: numbers, L or -L")->expected(0, -1);
  verify->add_option("--t", ver.ts, "t values")->expected(0, -1);
  verify->add_flag("--signed", ver.signed_kernel, "check the sign-definite kernel for both signs instead");
  verify->add_flag("--corrupt-lambda", ver.corrupt_lambda, "double Lambda(2) (fault injection)");

  Tent tent;
  auto* tent_cmd = app.add_subcommand("tent-identity", "contour integral against the tent weight, JSONL");
  tent_cmd->add_option("--n", tent.n)->expected(0, -1);
  tent_cmd->add_option("--alpha", tent.alpha)->expected(0, -1);
  tent_cmd->add_option("--H", tent.H)->expected(0, -1);
  tent_cmd->add_option("--U", tent.U, "truncation height")->capture_default_str();
  tent_cmd->add_option("--envelope-tol", tent.tolerance, "largest truncation envelope accepted")->capture_default_str();

  Build build;
  auto* build_cmd = app.add_subcommand("build-resonator", "resonator weights to --out, summary to stdout");
  build_cmd->add_option("--T", build.T)->capture_default_str();
  add_construction(build_cmd);

  Moments mom;
  auto* moments = app.add_subcommand("moments", "I2 (and optionally I1) for one T, JSONL");
  moments->add_option("--T", mom.T, "height (overrides --log-T)");
  moments->add_option("--log-T", mom.log_T)->capture_default_str();
  moments->add_option("--lambda", mom.lambda)->capture_default_str();
  moments->add_option("--sign", mom.sign)->check(CLI::IsMember({1, -1}))->capture_default_str();
  moments->add_option("--weights", cons.weights, "resonator CSV from build-resonator");
  moments->add_flag("--with-i1", mom.with_i1, "also compute I1 against the zero ledger");
  add_construction(moments);

  SearchOpts so;
  auto* search_cmd = app.add_subcommand("search", "budgeted extreme scan of sign * S on [T^beta, T], JSONL");
  search_cmd->add_option("--T", so.T)->capture_default_str();
  search_cmd->add_option("--sign", so.sign)->check(CLI::IsMember({1, -1}))->capture_default_str();
  search_cmd->add_option("--budget", so.budget, "S evaluations (default a tenth of the lattice)");
  search_cmd->add_option("--grid-step", so.grid_step)->capture_default_str();
  search_cmd->add_option("--t-lo", so.t_lo, "window start (default T^beta)");
  search_cmd->add_option("--weights", cons.weights, "resonator CSV from build-resonator");
  search_cmd->add_option("--plot", so.plot, "CSV of evaluated (t, S, |R|^2)");
  add_construction(search_cmd);

  Ladder lad;
  auto* ladder = app.add_subcommand("ladder", "moments and both-sign scans over a T ladder, appended JSONL");
  ladder->add_option("--log-T", lad.log_T, "rungs as log T")->capture_default_str();
  ladder->add_option("--lambda", lad.lambda)->capture_default_str();
  ladder->add_option("--budget", lad.scan.budget, "S evaluations per scan (default a tenth of the lattice)");
  ladder->add_option("--grid-step", lad.scan.grid_step)->capture_default_str();
  add_construction(ladder);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  // A list option given with no values means an empty grid.
  auto clear_if_bare = [](CLI::App* sub, const std::string& name, auto& values) {
    const auto* opt = sub->get_option(name);
    if (opt->count() > 0 && std::all_of(opt->results().begin(), opt->results().end(),
                                        [](const std::string& r) { return r.empty(); })) {
      values.clear();
    }
  };
  clear_if_bare(verify, "--lambda", ver.lambdas);
  clear_if_bare(verify, "--H", ver.hs);
  clear_if_bare(verify, "--t", ver.ts);
  clear_if_bare(tent_cmd, "--n", tent.n);
  clear_if_bare(tent_cmd, "--alpha", tent.alpha);
  clear_if_bare(tent_cmd, "--H", tent.H);

  try {
    if (*s_of_t) return run_s_of_t(common, sot);
    if (*verify) return run_verify(common, ver);
    if (*tent_cmd) return run_tent(common, tent);
    if (*build_cmd) return run_build(common, cons, build);
    if (*moments) return run_moments(common, cons, mom);
    if (*search_cmd) return run_search(common, cons, so);
    if (*ladder) return run_ladder(common, cons, lad);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kBadConfig;
}
