#include "resonance/arith/primes.hpp"

#include <algorithm>
#include <cmath>

namespace resonance::arith {
namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi <= lo || hi < 2) return out;
  const std::uint64_t start = std::max<std::uint64_t>(lo + 1, 2);
  const auto base = primes_up_to(isqrt(hi));
  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<char> mark;
  for (std::uint64_t seg = start; seg <= hi; seg += kSegment) {
    const std::uint64_t end = std::min(hi, seg + kSegment - 1);
    mark.assign(end - seg + 1, 1);
    for (std::uint64_t p : base) {
      if (p * p > end) break;
      std::uint64_t first = std::max(p * p, (seg + p - 1) / p * p);
      for (std::uint64_t j = first; j <= end; j += p) mark[j - seg] = 0;
    }
    for (std::uint64_t i = seg; i <= end; ++i) {
      if (mark[i - seg]) out.push_back(i);
    }
    if (end == hi) break;
  }
  return out;
}

std::vector<PrimePower> prime_powers_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<PrimePower> out;
  if (hi < 2 || hi < lo) return out;
  for (std::uint64_t p : primes_up_to(isqrt(hi))) {
    std::uint64_t q = p;
    for (int k = 1;; ++k) {
      if (q >= lo && k >= 2) out.push_back({q, p, k, std::log(static_cast<double>(p))});
      if (q > hi / p) break;
      q *= p;
    }
  }
  for (std::uint64_t p : primes_in(lo == 0 ? 0 : lo - 1, hi)) {
    out.push_back({p, p, 1, std::log(static_cast<double>(p))});
  }
  std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.n < b.n; });
  out.erase(std::remove_if(out.begin(), out.end(), [&](const PrimePower& x) { return x.n > hi; }), out.end());
  return out;
}

std::uint64_t smallest_prime_factor(std::uint64_t n) {
  if (n < 4) return n;
  if (n % 2 == 0) return 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return d;
  }
  return n;
}

double von_mangoldt(std::uint64_t n) {
  if (n < 2) return 0.0;
  const std::uint64_t p = smallest_prime_factor(n);
  while (n % p == 0) n /= p;
  return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

}  // namespace resonance::arith
