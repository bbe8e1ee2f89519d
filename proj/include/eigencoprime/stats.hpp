#pragma once

// Counting statistics over a pair of eigenforms f1, f2 with prime
// coefficients a1(p), a2(p): coprimality counts, divisibility counts
// pi(x, m), empirical and model densities, the Euler-product and Mobius-sum
// constants, the v(l, n) machinery, omega sums and the baseline counts.
//
// Conventions: g(p) = gcd(|a1(p)|, |a2(p)|) with gcd(0, a) = |a| and
// gcd(0, 0) = 0; "coprime" means g(p) == 1. Every count is an exact integer
// and is independent of the worker count.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eigencoprime/coeffs.hpp"
#include "eigencoprime/numeric.hpp"

namespace eigencoprime {

using DensityOverrides = std::map<std::uint64_t, Rational>;

class FormPairDataset {
 public:
  /// Both tables are cut to the smaller bound.
  FormPairDataset(PrimeCoefficientTable first, PrimeCoefficientTable second);

  const PrimeCoefficientTable& first() const noexcept { return first_; }
  const PrimeCoefficientTable& second() const noexcept { return second_; }
  std::uint64_t bound() const noexcept { return first_.bound(); }
  /// lcm(N1, N2)
  std::uint64_t level() const noexcept { return level_; }

  std::span<const std::uint32_t> primes() const noexcept { return first_.primes(); }
  const Integer& a1(std::size_t i) const { return first_.values()[i]; }
  const Integer& a2(std::size_t i) const { return second_.values()[i]; }
  const Integer& gcd(std::size_t i) const { return gcds_[i]; }

  /// Number of stored primes <= x; throws InsufficientDataError if x > bound.
  std::size_t prime_index_limit(std::uint64_t x) const;

 private:
  PrimeCoefficientTable first_;
  PrimeCoefficientTable second_;
  std::uint64_t level_;
  std::vector<Integer> gcds_;
};

struct DensityEstimate {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  Rational value() const;
  std::string decimal(int places = 5) const { return to_decimal(value(), places); }
};

struct ExperimentConfig {
  std::uint64_t x = 100000;
  std::uint64_t y = 50000;
  std::uint64_t L = 100;
  std::uint64_t d = 2;
  std::optional<std::uint64_t> u;
  DensityOverrides overrides;

  /// Throws UsageError unless L <= y <= x.
  void check() const;
};

/// delta used by the model: override if present, else (l^2+1)/(l^2-1)^2.
Rational delta_model(std::uint64_t ell, const DensityOverrides& overrides);

struct CoprimeCount {
  std::uint64_t count;
  DensityEstimate ratio;  // count / pi(x)
};

CoprimeCount coprime_prime_count(const FormPairDataset& ds, std::uint64_t x, unsigned workers = 1);

/// #{p <= x : (p, mN) = 1, m | a1(p), m | a2(p)}. With include_ramified the
/// side condition (p, mN) = 1 is dropped.
std::uint64_t pi_m(const FormPairDataset& ds, std::uint64_t x, std::uint64_t m,
                   bool include_ramified = false, unsigned workers = 1);

/// pi_m restricted to a1(p) a2(p) != 0. Primes p | mN are excluded unless
/// include_ramified is set.
std::uint64_t pi_star(const FormPairDataset& ds, std::uint64_t x, std::uint64_t m,
                      bool include_ramified = false, unsigned workers = 1);

/// pi_m(y, l) / pi(y)
DensityEstimate delta_empirical(const FormPairDataset& ds, std::uint64_t y, std::uint64_t ell,
                                bool include_ramified = false);

/// prod_{l <= L} (1 - delta_empirical(y, l)), exact.
Rational alpha_empirical(const FormPairDataset& ds, std::uint64_t L, std::uint64_t y,
                         bool include_ramified = false);

struct AlphaProduct {
  Rational value;           // prod_{l <= L} (1 - delta_model(l))
  long double tail_bound;   // sum_{l > L} 3 / l^2
};

AlphaProduct alpha_exact_product(std::uint64_t L, const DensityOverrides& overrides = {});

struct AlphaPrime {
  long double value;         // sum_{n <= B} mu(n) delta(n)
  long double lower;         // bracket for the full series
  long double upper;
  long double euler_product; // prod_l (1 - delta(l)) to the same precision
};

/// Mobius sum with delta multiplicative from delta_model. The bracket bounds
/// the omitted tail by sum_{n > B squarefree} delta(n) = prod(1 + delta) - partial.
AlphaPrime alpha_prime_truncated(std::uint64_t B, const DensityOverrides& overrides = {});

/// Exact partial sum for small B, for cross-checks.
Rational alpha_prime_exact(std::uint64_t B, const DensityOverrides& overrides = {});

struct ExceptionalReport {
  std::uint64_t ell;
  DensityEstimate empirical;
  Rational model;
  long double deviation;
  long double threshold;
  bool flagged;
};

/// Flags l when |delta_y(l) - delta_exact(l)| > max(3 sqrt(delta_exact(l) / pi(y)), 1e-3).
/// This is a binomial-fluctuation heuristic, not a proof of exceptionality.
ExceptionalReport detect_exceptional(const FormPairDataset& ds, std::uint64_t ell, std::uint64_t y);

/// v(l, n) = #{p^a || n : l | a1(p^a) and l | a2(p^a)}
std::uint64_t v_of(const FormPairDataset& ds, std::uint64_t ell, std::uint64_t n);

struct VSums {
  std::uint64_t sum_v = 0;
  std::uint64_t sum_v_sq = 0;
  std::uint64_t zero_count = 0;  // #{n <= x : v(l, n) = 0}
  long double main_term_v = 0;     // delta(l) x L2(x)
  long double main_term_v_sq = 0;  // delta(l)^2 x L2(x)^2
};

VSums v_sums(const FormPairDataset& ds, std::uint64_t x, std::uint64_t ell);
inline std::uint64_t sum_v(const FormPairDataset& ds, std::uint64_t x, std::uint64_t ell) {
  return v_sums(ds, x, ell).sum_v;
}
inline std::uint64_t sum_v_sq(const FormPairDataset& ds, std::uint64_t x, std::uint64_t ell) {
  return v_sums(ds, x, ell).sum_v_sq;
}
inline std::uint64_t v_zero_count(const FormPairDataset& ds, std::uint64_t x, std::uint64_t ell) {
  return v_sums(ds, x, ell).zero_count;
}

struct ReciprocalSum {
  Rational value;         // sum of 1/p over p <= x, l | g(p), (p, lN) = 1
  long double main_term;  // delta_exact(l) L2(x)
};

ReciprocalSum reciprocal_prime_sum(const FormPairDataset& ds, std::uint64_t x, std::uint64_t ell);

struct IntegerGcdCounts {
  std::uint64_t count_a = 0;        // (n, (a1(n), a2(n))) = 1
  std::uint64_t count_b = 0;        // (d, (a1(n), a2(n))) = 1
  std::uint64_t count_cor = 0;      // (a1(n), a2(n)) = 1
  std::uint64_t count_single1 = 0;  // (n, a1(n)) = 1
  std::uint64_t count_single2 = 0;  // (n, a2(n)) = 1
  long double envelope_l3 = 0;      // x / L3(x)
  long double envelope_l3_l2 = 0;   // x L3(x) / L2(x)
};

IntegerGcdCounts integer_gcd_counts(const FormPairDataset& ds, std::uint64_t x, std::uint64_t d,
                               unsigned workers = 1);

struct OmegaSums {
  std::uint64_t S1 = 0;  // sum' omega(g(p))
  std::uint64_t S2 = 0;  // sum' omega(g(p))^2
  std::uint64_t S1_u = 0;
  std::uint64_t S2_u = 0;
  std::uint64_t terms = 0;  // primes with a1(p) a2(p) != 0
  long double c1_model = 0;
  long double c2_model = 0;
  long double c_tail_bound = 0;  // sum_{l > L} 3 / l^2
};

/// Primed sums skip p with a1(p) a2(p) = 0. Model constants truncate at L:
/// c1 = sum delta(l), c2 = sum_{l1 != l2} delta(l1) delta(l2) + sum delta(l).
OmegaSums omega_sums(const FormPairDataset& ds, std::uint64_t x, std::optional<std::uint64_t> u,
                     std::uint64_t L = 100, const DensityOverrides& overrides = {}, unsigned workers = 1);

/// Distinct primes dividing at least one g(p), p <= x, a1(p) a2(p) != 0.
std::vector<std::uint64_t> gcd_prime_support(const FormPairDataset& ds, std::uint64_t x);

/// #{p <= x : a(p) = 0}
std::uint64_t zero_coeff_count(const PrimeCoefficientTable& table, std::uint64_t x);

/// #{p <= x : gcd(g(p), P(y)) = 1}, P(y) = prod_{l < y} l.
std::uint64_t sieve_upper_count(const FormPairDataset& ds, std::uint64_t x, std::uint64_t y,
                                unsigned workers = 1);

/// #{1 <= n <= x : every prime factor of n exceeds y}
std::uint64_t rough_count(std::uint64_t x, std::uint64_t y);

/// #{n <= x : gcd(n, phi(n)) = 1}
std::uint64_t erdos_phi_count(std::uint64_t x);

/// e^{-gamma} x / L3(x)
long double erdos_main_term(std::uint64_t x);

/// L1 = log x, L_i = log L_{i-1}; throws UsageError unless L_i(x) > 0.
long double iterated_log(long double x, int i);

/// sum_{L < l <= 10^6} 3/l^2 + 3/10^6
long double prime_tail_bound(std::uint64_t L);

}  // namespace eigencoprime
