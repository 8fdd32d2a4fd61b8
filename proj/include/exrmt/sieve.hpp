#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace exrmt {

inline std::vector<std::uint32_t> simple_primes(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t q = p * p; q <= n; q += p) composite[q] = true;
  }
  return out;
}

// Segmented sieve of Eratosthenes: all primes <= limit, ascending.
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, std::uint64_t segment = 1u << 18) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  if (limit > 100'000'000'000ull) throw std::invalid_argument("primes_up_to: limit too large");
  const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(limit))) + 1;
  const auto base = simple_primes(root);
  std::vector<char> mark(segment);
  for (std::uint64_t lo = 2; lo <= limit; lo += segment) {
    const std::uint64_t hi = std::min(limit, lo + segment - 1);
    std::fill(mark.begin(), mark.end(), 1);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t q = start; q <= hi; q += p) mark[q - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (mark[n - lo]) out.push_back(n);
  }
  return out;
}

// squarefree[n] for 0 <= n <= limit (0 is marked non-squarefree).
inline std::vector<char> squarefree_table(std::uint64_t limit) {
  std::vector<char> sf(limit + 1, 1);
  sf[0] = 0;
  for (std::uint64_t p : primes_up_to(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1)) {
    const std::uint64_t q = p * p;
    for (std::uint64_t n = q; n <= limit; n += q) sf[n] = 0;
  }
  return sf;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

}  // namespace exrmt
