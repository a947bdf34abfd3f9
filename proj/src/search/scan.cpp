#include <algorithm>
#include <cmath>
#include <numeric>

#include "resonance/error.hpp"
#include "resonance/numerics/parallel.hpp"
#include "resonance/search/search.hpp"

namespace resonance::search {
namespace {

std::int64_t lattice_size(double lo, double hi, double step) {
  return static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

struct Best {
  std::int64_t k = -1;
  double value = -INFINITY;

  void offer(std::int64_t idx, double v) {
    if (v > value || (v == value && idx < k)) {
      k = idx;
      value = v;
    }
  }
};

void finish(ExtremeReport& r, const ResonatorWeights* w) {
  r.theorem_reference = theorem_reference(r.T);
  if (w) r.resonator_weight = resonator::resonator_abs_sq(r.t_star, *w);
  r.ratio = r.s_star / r.theorem_reference;
  r.found = std::isfinite(r.s_star) && r.s_star >= 0;
}

}  // namespace

nlohmann::json to_json(const ExtremeReport& r) {
  nlohmann::json j = {{"sign", r.sign},
                      {"T", r.T},
                      {"beta", r.beta},
                      {"t_lo", r.t_lo},
                      {"t_hi", r.t_hi},
                      {"grid_step", r.grid_step},
                      {"t_star", r.t_star},
                      {"resonator_weight", r.resonator_weight},
                      {"theorem_reference", r.theorem_reference},
                      {"budget", r.budget},
                      {"evaluations", r.evaluations},
                      {"coarse_only", r.coarse_only},
                      {"found", r.found}};
  j["s_star"] = std::isfinite(r.s_star) ? nlohmann::json(r.s_star) : nlohmann::json(nullptr);
  j["ratio"] = std::isfinite(r.ratio) ? nlohmann::json(r.ratio) : nlohmann::json(nullptr);
  if (!r.found) j["note"] = "no sign-consistent extreme found";
  return j;
}

ExtremeReport dense_scan(double t_lo, double t_hi, int sign, double grid_step, const SFunction& s) {
  if (!(t_lo < t_hi) || !(grid_step > 0)) throw Error(Errc::invalid_argument, "dense_scan needs t_lo < t_hi, step > 0");
  ExtremeReport r;
  r.sign = sign;
  r.T = t_hi;
  r.t_lo = t_lo;
  r.t_hi = t_hi;
  r.grid_step = grid_step;
  const std::int64_t n = lattice_size(t_lo, t_hi, grid_step);
  Best best;
  for (std::int64_t k = 0; k < n; ++k) best.offer(k, sign * s(t_lo + static_cast<double>(k) * grid_step));
  r.evaluations = r.budget = n;
  r.t_star = t_lo + static_cast<double>(best.k) * grid_step;
  r.s_star = best.value;
  finish(r, nullptr);
  return r;
}

ExtremeReport extreme_scan(double T, double beta, int sign, double grid_step, std::int64_t budget,
                           const ResonatorWeights& w, const SFunction& s, const ScanOptions& opts) {
  if (sign != 1 && sign != -1) throw Error(Errc::invalid_argument, "sign must be +1 or -1");
  if (!(grid_step > 0) || opts.coarse_stride < 1) throw Error(Errc::invalid_argument, "bad grid");
  ExtremeReport r;
  r.sign = sign;
  r.T = T;
  r.beta = beta;
  r.t_lo = opts.t_lo ? *opts.t_lo : std::pow(T, beta);
  r.t_hi = T;
  r.grid_step = grid_step;
  r.budget = std::max<std::int64_t>(budget, 0);
  if (!(r.t_lo < r.t_hi)) throw Error(Errc::invalid_argument, "scan window is empty");

  const std::int64_t n = lattice_size(r.t_lo, r.t_hi, grid_step);
  auto t_of = [&](std::int64_t k) { return r.t_lo + static_cast<double>(k) * grid_step; };
  const std::int64_t stride = opts.coarse_stride;

  // Phase 1: rank the coarse lattice by |R(t)|^2.
  std::vector<std::int64_t> coarse;
  for (std::int64_t k = 0; k < n; k += stride) coarse.push_back(k);
  std::vector<double> weight(coarse.size());
  numerics::parallel_for(coarse.size(), opts.threads,
                         [&](std::size_t i) { weight[i] = resonator::resonator_abs_sq(t_of(coarse[i]), w); });
  std::vector<std::size_t> rank(coarse.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });

  if (r.budget == 0) {
    r.coarse_only = true;
    r.t_star = t_of(coarse[rank[0]]);
    r.s_star = NAN;
    finish(r, &w);
    return r;
  }

  std::vector<double> value(static_cast<std::size_t>(n), NAN);
  std::int64_t used = 0;
  auto evaluate = [&](const std::vector<std::int64_t>& ks) {
    numerics::parallel_for(ks.size(), opts.threads,
                           [&](std::size_t i) { value[static_cast<std::size_t>(ks[i])] = sign * s(t_of(ks[i])); });
    used += static_cast<std::int64_t>(ks.size());
  };

  const auto phase1 = static_cast<std::size_t>(std::clamp<double>(
      std::floor(static_cast<double>(r.budget) * opts.phase1_share), 1.0, static_cast<double>(coarse.size())));
  std::vector<std::int64_t> first;
  for (std::size_t i = 0; i < phase1 && static_cast<std::int64_t>(first.size()) < r.budget; ++i) {
    first.push_back(coarse[rank[i]]);
  }
  evaluate(first);

  // Phase 2: walk the evaluated coarse points from the largest sign * S down,
  // scanning the fine lattice between neighbouring coarse points.
  std::vector<std::size_t> order(first.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return value[static_cast<std::size_t>(first[a])] > value[static_cast<std::size_t>(first[b])];
  });
  for (std::size_t i : order) {
    if (used >= r.budget) break;
    const std::int64_t c = first[i];
    std::vector<std::int64_t> todo;
    for (std::int64_t k = std::max<std::int64_t>(0, c - stride + 1); k <= std::min(n - 1, c + stride - 1); ++k) {
      if (std::isnan(value[static_cast<std::size_t>(k)])) todo.push_back(k);
    }
    if (static_cast<std::int64_t>(todo.size()) > r.budget - used) todo.resize(static_cast<std::size_t>(r.budget - used));
    evaluate(todo);
  }

  Best best;
  for (std::int64_t k = 0; k < n; ++k) {
    const double v = value[static_cast<std::size_t>(k)];
    if (!std::isnan(v)) best.offer(k, v);
  }
  r.evaluations = used;
  r.t_star = t_of(best.k);
  r.s_star = best.value;
  finish(r, &w);
  return r;
}

}  // namespace resonance::search
