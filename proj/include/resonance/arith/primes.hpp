#pragma once

#include <cstdint>
#include <vector>

namespace resonance::arith {

// Primes p <= n, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// Primes in the half-open range (lo, hi], by a segmented sieve.
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

struct PrimePower {
  std::uint64_t n;   // p^k
  std::uint64_t p;
  int k;
  double log_p;      // Lambda(n)
};

// All prime powers p^k (k >= 1) in the closed range [lo, hi], ascending in n.
std::vector<PrimePower> prime_powers_in(std::uint64_t lo, std::uint64_t hi);

// von Mangoldt function: log p when n = p^k, otherwise 0.
double von_mangoldt(std::uint64_t n);

// Smallest prime factor, or n itself for n < 2.
std::uint64_t smallest_prime_factor(std::uint64_t n);

}  // namespace resonance::arith
