#pragma once

// Shared arithmetic substrate: exact integer/rational types, prime and
// totient sieves, factorization, decimal rendering and a small helper for
// deterministic parallel reductions.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace eigencoprime {

using Integer = mpz_class;
using Rational = mpq_class;

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Largest argument accepted by the sieves (memory cap).
inline constexpr std::uint64_t kSieveCap = 4'000'000'000ULL;

/// All primes p <= x in increasing order (segmented sieve of Eratosthenes).
std::vector<std::uint32_t> sieve_primes(std::uint64_t x);

/// phi[n] for 0 <= n <= x, with phi[0] = 0.
std::vector<std::uint32_t> totient_sieve(std::uint64_t x);

/// Number of primes <= x in a sorted prime list.
std::size_t prime_count(std::span<const std::uint32_t> primes, std::uint64_t x);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Smallest-prime-factor table up to `limit`, trial division beyond it.
class Factorizer {
 public:
  explicit Factorizer(std::uint64_t limit);

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t smallest_prime_factor(std::uint64_t n) const;
  std::vector<PrimePower> factor(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

/// Factorization of an arbitrary integer (sign ignored, |n| >= 1) using
/// trial division, Miller-Rabin and Pollard-Brent rho.
std::vector<PrimePower> factor_integer(const Integer& n);

/// Number of distinct prime divisors of |n|; omega(0) and omega(1) are 0.
unsigned omega(const Integer& n);

/// Distinct prime divisors of |n| that are <= u.
unsigned omega_upto(const Integer& n, std::uint64_t u);

/// Smallest prime factor of |n| (n != 0, |n| > 1).
Integer smallest_prime_factor(const Integer& n);

/// Mobius function via the factorizer.
int mobius(std::uint64_t n, const Factorizer& f);

/// gcd(|a|, |b|) with gcd(0, a) = |a| and gcd(0, 0) = 0.
inline Integer gcd_abs(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer ipow(const Integer& base, unsigned exponent);
Integer ipow(std::uint64_t base, unsigned exponent);

/// Round-half-up decimal with a fixed number of fractional digits.
std::string to_decimal(const Rational& value, int places = 5);

/// Parse "a/b", "a" or a plain decimal "0.123" into an exact rational.
Rational parse_rational(const std::string& text);

/// Sum of f(begin, end) over `workers` contiguous blocks of [0, n), combined
/// in block order so the result never depends on the worker count.
template <class T, class F>
T parallel_reduce(std::size_t n, unsigned workers, F f) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2 * workers) return f(std::size_t{0}, n);
  std::vector<T> partial(workers);
  std::vector<std::thread> pool;
  const std::size_t step = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * step);
    const std::size_t hi = std::min(n, lo + step);
    pool.emplace_back([&, w, lo, hi] { partial[w] = f(lo, hi); });
  }
  for (auto& t : pool) t.join();
  T total = partial[0];
  for (unsigned w = 1; w < workers; ++w) total += partial[w];
  return total;
}

}  // namespace eigencoprime
