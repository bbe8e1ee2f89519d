#include "eigencoprime/stats.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "eigencoprime/errors.hpp"
#include "eigencoprime/galois.hpp"

namespace eigencoprime {

namespace {

bool divides(std::uint64_t m, const Integer& a) {
  return mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(m)) != 0;
}

bool coprime_to(std::uint64_t p, std::uint64_t n) { return n % p != 0; }

void require_positive(std::uint64_t m, const char* what) {
  if (m == 0) throw UsageError(std::string(what) + " must be positive");
}

// Counts primes p <= x (by dataset index) satisfying pred(i, p).
template <class Pred>
std::uint64_t count_primes(const FormPairDataset& ds, std::uint64_t x, unsigned workers, Pred pred) {
  const std::size_t n = ds.prime_index_limit(x);
  return parallel_reduce<std::uint64_t>(n, workers, [&](std::size_t lo, std::size_t hi) {
    std::uint64_t c = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      if (pred(i, static_cast<std::uint64_t>(ds.primes()[i]))) ++c;
    }
    return c;
  });
}

}  // namespace

FormPairDataset::FormPairDataset(PrimeCoefficientTable first, PrimeCoefficientTable second) {
  const std::uint64_t b = std::min(first.bound(), second.bound());
  first_ = first.restricted(b);
  second_ = second.restricted(b);
  level_ = std::lcm(first_.descriptor().level, second_.descriptor().level);
  gcds_.resize(first_.size());
  for (std::size_t i = 0; i < gcds_.size(); ++i) gcds_[i] = gcd_abs(first_.values()[i], second_.values()[i]);
}

std::size_t FormPairDataset::prime_index_limit(std::uint64_t x) const {
  if (x > bound()) {
    throw InsufficientDataError("x = " + std::to_string(x) + " exceeds dataset bound " + std::to_string(bound()));
  }
  return prime_count(primes(), x);
}

Rational DensityEstimate::value() const {
  if (denominator == 0) throw DataError("density with zero denominator");
  Rational r(Integer(static_cast<unsigned long>(numerator)), Integer(static_cast<unsigned long>(denominator)));
  r.canonicalize();
  return r;
}

void ExperimentConfig::check() const {
  if (y > x) throw UsageError("require y <= x");
  if (L > y) throw UsageError("require L <= y");
}

Rational delta_model(std::uint64_t ell, const DensityOverrides& overrides) {
  if (auto it = overrides.find(ell); it != overrides.end()) return it->second;
  return delta_exact(ell);
}

CoprimeCount coprime_prime_count(const FormPairDataset& ds, std::uint64_t x, unsigned workers) {
  const std::uint64_t c = count_primes(ds, x, workers, [&](std::size_t i, std::uint64_t) { return ds.gcd(i) == 1; });
  const std::uint64_t pi = ds.prime_index_limit(x);
  if (pi == 0) throw InsufficientDataError("no primes up to x = " + std::to_string(x));
  return {c, {c, pi}};
}

std::uint64_t pi_m(const FormPairDataset& ds, std::uint64_t x, std::uint64_t m, bool include_ramified,
                   unsigned workers) {
  require_positive(m, "m");
  const std::uint64_t N = ds.level();
  return count_primes(ds, x, workers, [&](std::size_t i, std::uint64_t p) {
    if (!include_ramified && (!coprime_to(p, m) || !coprime_to(p, N))) return false;
    return divides(m, ds.gcd(i));
  });
}

std::uint64_t pi_star(const FormPairDataset& ds, std::uint64_t x, std::uint64_t m, bool include_ramified,
                      unsigned workers) {
  require_positive(m, "m");
  const std::uint64_t N = ds.level();
  return count_primes(ds, x, workers, [&](std::size_t i, std::uint64_t p) {
    if (ds.a1(i) == 0 || ds.a2(i) == 0) return false;
    if (!include_ramified && (!coprime_to(p, m) || !coprime_to(p, N))) return false;
    return divides(m, ds.gcd(i));
  });
}

DensityEstimate delta_empirical(const FormPairDataset& ds, std::uint64_t y, std::uint64_t ell,
                                bool include_ramified) {
  const std::uint64_t pi = ds.prime_index_limit(y);
  if (pi == 0) return {0, 1};
  return {pi_m(ds, y, ell, include_ramified), pi};
}

Rational alpha_empirical(const FormPairDataset& ds, std::uint64_t L, std::uint64_t y, bool include_ramified) {
  Rational alpha = 1;
  if (L < 2) return alpha;
  for (std::uint64_t ell : sieve_primes(L)) {
    alpha *= Rational(1) - delta_empirical(ds, y, ell, include_ramified).value();
  }
  alpha.canonicalize();
  return alpha;
}

long double prime_tail_bound(std::uint64_t L) {
  constexpr std::uint64_t kHorizon = 1'000'000;
  long double tail = 3.0L / kHorizon;
  if (L >= kHorizon) return 3.0L / static_cast<long double>(L);
  for (std::uint64_t ell : sieve_primes(kHorizon)) {
    if (ell > L) tail += 3.0L / (static_cast<long double>(ell) * ell);
  }
  return tail;
}

AlphaProduct alpha_exact_product(std::uint64_t L, const DensityOverrides& overrides) {
  Rational value = 1;
  if (L >= 2) {
    for (std::uint64_t ell : sieve_primes(L)) value *= Rational(1) - delta_model(ell, overrides);
  }
  value.canonicalize();
  return {value, prime_tail_bound(L)};
}

AlphaPrime alpha_prime_truncated(std::uint64_t B, const DensityOverrides& overrides) {
  require_positive(B, "B");
  constexpr std::uint64_t kHorizon = 1'000'000;
  const auto primes = sieve_primes(std::max(B, kHorizon));
  std::vector<long double> delta(B + 1, 0.0L);
  for (auto p : primes) {
    if (p > B) break;
    delta[p] = delta_model(p, overrides).get_d();
  }
  const Factorizer f(B);
  long double value = 0, partial_abs = 0;
  for (std::uint64_t n = 1; n <= B; ++n) {
    long double dn = 1;
    int mu = 1;
    bool squarefree = true;
    for (const auto& pp : f.factor(n)) {
      if (pp.exponent > 1) {
        squarefree = false;
        break;
      }
      mu = -mu;
      dn *= delta[pp.prime];
    }
    if (!squarefree) continue;
    value += mu * dn;
    partial_abs += dn;
  }
  // prod (1 + delta(l)) over l <= horizon times exp of the 3/l^2 tail.
  long double total = 1, euler = 1;
  for (auto p : primes) {
    if (p > kHorizon) break;
    const long double dl = p <= B ? delta[p] : static_cast<long double>(delta_model(p, overrides).get_d());
    total *= 1 + dl;
    euler *= 1 - dl;
  }
  const long double horizon_tail = prime_tail_bound(kHorizon);
  total *= std::exp(horizon_tail);
  const long double omitted = std::max(0.0L, total - partial_abs);
  return {value, value - omitted, value + omitted, euler};
}

Rational alpha_prime_exact(std::uint64_t B, const DensityOverrides& overrides) {
  require_positive(B, "B");
  const Factorizer f(B);
  Rational sum = 0;
  for (std::uint64_t n = 1; n <= B; ++n) {
    Rational dn = 1;
    int mu = 1;
    bool squarefree = true;
    for (const auto& pp : f.factor(n)) {
      if (pp.exponent > 1) {
        squarefree = false;
        break;
      }
      mu = -mu;
      dn *= delta_model(pp.prime, overrides);
    }
    if (squarefree) sum += mu * dn;
  }
  sum.canonicalize();
  return sum;
}

ExceptionalReport detect_exceptional(const FormPairDataset& ds, std::uint64_t ell, std::uint64_t y) {
  const std::uint64_t pi = ds.prime_index_limit(y);
  if (pi == 0) throw DataError("detect_exceptional: pi(y) = 0");
  ExceptionalReport r;
  r.ell = ell;
  r.empirical = delta_empirical(ds, y, ell);
  r.model = delta_exact(ell);
  const long double model = r.model.get_d();
  r.deviation = std::fabs(static_cast<long double>(r.empirical.value().get_d()) - model);
  r.threshold = std::max(3.0L * std::sqrt(model / static_cast<long double>(pi)), 1e-3L);
  r.flagged = r.deviation > r.threshold;
  return r;
}

std::uint64_t v_of(const FormPairDataset& ds, std::uint64_t ell, std::uint64_t n) {
  require_positive(n, "n");
  std::uint64_t v = 0;
  for (const auto& pp : Factorizer(0).factor(n)) {
    const auto& t1 = ds.first();
    const auto& t2 = ds.second();
    if (pp.prime > ds.bound()) {
      throw InsufficientDataError("prime factor " + std::to_string(pp.prime) + " exceeds dataset bound");
    }
    const Integer b1 = hecke_prime_power(t1.at(pp.prime), pp.prime, pp.exponent, t1.descriptor().weight,
                                         t1.descriptor().level);
    const Integer b2 = hecke_prime_power(t2.at(pp.prime), pp.prime, pp.exponent, t2.descriptor().weight,
                                         t2.descriptor().level);
    if (divides(ell, b1) && divides(ell, b2)) ++v;
  }
  return v;
}

VSums v_sums(const FormPairDataset& ds, std::uint64_t x, std::uint64_t ell) {
  require_positive(x, "x");
  const std::size_t np = ds.prime_index_limit(x);
  const auto& t1 = ds.first();
  const auto& t2 = ds.second();
  std::vector<std::uint8_t> v(x + 1, 0);
  for (std::size_t i = 0; i < np; ++i) {
    const std::uint64_t p = ds.primes()[i];
    std::uint64_t q = p;
    for (unsigned alpha = 1;; ++alpha) {
      const Integer b1 = hecke_prime_power(ds.a1(i), p, alpha, t1.descriptor().weight, t1.descriptor().level);
      const Integer b2 = hecke_prime_power(ds.a2(i), p, alpha, t2.descriptor().weight, t2.descriptor().level);
      if (divides(ell, b1) && divides(ell, b2)) {
        // n = q * r with p not dividing r
        for (std::uint64_t n = q, r = 1; n <= x; n += q, ++r) {
          if (r % p != 0) ++v[n];
        }
      }
      if (q > x / p) break;
      q *= p;
    }
  }
  VSums s;
  for (std::uint64_t n = 1; n <= x; ++n) {
    s.sum_v += v[n];
    s.sum_v_sq += static_cast<std::uint64_t>(v[n]) * v[n];
    if (v[n] == 0) ++s.zero_count;
  }
  const long double delta = delta_exact(ell).get_d();
  if (x >= 16) {
    const long double l2 = iterated_log(static_cast<long double>(x), 2);
    s.main_term_v = delta * x * l2;
    s.main_term_v_sq = delta * delta * x * l2 * l2;
  }
  return s;
}

ReciprocalSum reciprocal_prime_sum(const FormPairDataset& ds, std::uint64_t x, std::uint64_t ell) {
  const std::size_t np = ds.prime_index_limit(x);
  const std::uint64_t N = ds.level();
  std::vector<std::uint64_t> chosen;
  for (std::size_t i = 0; i < np; ++i) {
    const std::uint64_t p = ds.primes()[i];
    if (p == ell || N % p == 0) continue;
    if (divides(ell, ds.gcd(i))) chosen.push_back(p);
  }
  // Distinct primes: sum 1/p = (sum P/p) / P with P their product, already reduced.
  Integer P = 1;
  for (auto p : chosen) P *= static_cast<unsigned long>(p);
  Integer num = 0;
  for (auto p : chosen) {
    Integer t;
    mpz_divexact_ui(t.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(p));
    num += t;
  }
  ReciprocalSum r{Rational(num, P), 0};
  r.value.canonicalize();
  if (x >= 16) r.main_term = delta_exact(ell).get_d() * iterated_log(static_cast<long double>(x), 2);
  return r;
}

IntegerGcdCounts integer_gcd_counts(const FormPairDataset& ds, std::uint64_t x, std::uint64_t d, unsigned workers) {
  require_positive(x, "x");
  if (d <= 1) throw UsageError("integer_gcd_counts: d must be > 1");
  const Factorizer f(x);
  const auto a1 = all_coefficients(ds.first(), x, f);
  const auto a2 = all_coefficients(ds.second(), x, f);
  const Integer dd(static_cast<unsigned long>(d));

  struct Partial {
    std::uint64_t a = 0, b = 0, cor = 0, s1 = 0, s2 = 0;
    Partial& operator+=(const Partial& o) {
      a += o.a; b += o.b; cor += o.cor; s1 += o.s1; s2 += o.s2;
      return *this;
    }
  };
  const Partial total = parallel_reduce<Partial>(x, workers, [&](std::size_t lo, std::size_t hi) {
    Partial part;
    for (std::size_t k = lo; k < hi; ++k) {
      const std::uint64_t n = k + 1;
      const Integer nn(static_cast<unsigned long>(n));
      const Integer g = gcd_abs(a1[n], a2[n]);
      if (gcd_abs(nn, g) == 1) ++part.a;
      if (gcd_abs(dd, g) == 1) ++part.b;
      if (g == 1) ++part.cor;
      if (gcd_abs(nn, a1[n]) == 1) ++part.s1;
      if (gcd_abs(nn, a2[n]) == 1) ++part.s2;
    }
    return part;
  });
  IntegerGcdCounts out;
  out.count_a = total.a;
  out.count_b = total.b;
  out.count_cor = total.cor;
  out.count_single1 = total.s1;
  out.count_single2 = total.s2;
  if (x >= 16) {
    const long double xd = static_cast<long double>(x);
    const long double l3 = iterated_log(xd, 3);
    out.envelope_l3 = xd / l3;
    out.envelope_l3_l2 = xd * l3 / iterated_log(xd, 2);
  }
  return out;
}

OmegaSums omega_sums(const FormPairDataset& ds, std::uint64_t x, std::optional<std::uint64_t> u, std::uint64_t L,
                     const DensityOverrides& overrides, unsigned workers) {
  const std::size_t np = ds.prime_index_limit(x);
  struct Partial {
    std::uint64_t s1 = 0, s2 = 0, s1u = 0, s2u = 0, terms = 0;
    Partial& operator+=(const Partial& o) {
      s1 += o.s1; s2 += o.s2; s1u += o.s1u; s2u += o.s2u; terms += o.terms;
      return *this;
    }
  };
  const Partial total = parallel_reduce<Partial>(np, workers, [&](std::size_t lo, std::size_t hi) {
    Partial part;
    for (std::size_t i = lo; i < hi; ++i) {
      if (ds.a1(i) == 0 || ds.a2(i) == 0) continue;
      ++part.terms;
      const Integer& g = ds.gcd(i);
      if (g == 1) continue;
      std::uint64_t w = 0, wu = 0;
      for (const auto& pp : factor_integer(g)) {
        ++w;
        if (!u || pp.prime <= *u) ++wu;
      }
      part.s1 += w;
      part.s2 += w * w;
      part.s1u += wu;
      part.s2u += wu * wu;
    }
    return part;
  });
  OmegaSums out;
  out.S1 = total.s1;
  out.S2 = total.s2;
  out.S1_u = total.s1u;
  out.S2_u = total.s2u;
  out.terms = total.terms;
  long double sum = 0, sum_sq = 0;
  if (L >= 2) {
    for (std::uint64_t ell : sieve_primes(L)) {
      const long double dl = delta_model(ell, overrides).get_d();
      sum += dl;
      sum_sq += dl * dl;
    }
  }
  out.c1_model = sum;
  out.c2_model = sum * sum - sum_sq + sum;
  out.c_tail_bound = prime_tail_bound(L);
  return out;
}

std::vector<std::uint64_t> gcd_prime_support(const FormPairDataset& ds, std::uint64_t x) {
  const std::size_t np = ds.prime_index_limit(x);
  std::set<std::uint64_t> support;
  for (std::size_t i = 0; i < np; ++i) {
    if (ds.a1(i) == 0 || ds.a2(i) == 0 || ds.gcd(i) == 1) continue;
    for (const auto& pp : factor_integer(ds.gcd(i))) support.insert(pp.prime);
  }
  return {support.begin(), support.end()};
}

std::uint64_t zero_coeff_count(const PrimeCoefficientTable& table, std::uint64_t x) {
  if (x > table.bound()) {
    throw InsufficientDataError("x = " + std::to_string(x) + " exceeds table bound " + std::to_string(table.bound()));
  }
  const std::size_t n = prime_count(table.primes(), x);
  return static_cast<std::uint64_t>(
      std::count_if(table.values().begin(), table.values().begin() + static_cast<std::ptrdiff_t>(n),
                    [](const Integer& a) { return a == 0; }));
}

std::uint64_t sieve_upper_count(const FormPairDataset& ds, std::uint64_t x, std::uint64_t y, unsigned workers) {
  std::vector<std::uint32_t> small;
  if (y > 2) small = sieve_primes(y - 1);  // primes l < y
  return count_primes(ds, x, workers, [&](std::size_t i, std::uint64_t) {
    const Integer& g = ds.gcd(i);
    if (g == 0) return small.empty();  // gcd(0, P) = P
    for (auto ell : small) {
      if (divides(ell, g)) return false;
    }
    return true;
  });
}

std::uint64_t rough_count(std::uint64_t x, std::uint64_t y) {
  if (x == 0) return 0;
  std::vector<char> rough(x + 1, 1);
  if (y >= 2) {
    for (auto p : sieve_primes(std::min(x, y))) {
      for (std::uint64_t n = p; n <= x; n += p) rough[n] = 0;
    }
  }
  return static_cast<std::uint64_t>(std::count(rough.begin() + 1, rough.end(), 1));
}

std::uint64_t erdos_phi_count(std::uint64_t x) {
  if (x == 0) return 0;
  const auto phi = totient_sieve(x);
  std::uint64_t c = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    if (std::gcd(n, static_cast<std::uint64_t>(phi[n])) == 1) ++c;
  }
  return c;
}

long double erdos_main_term(std::uint64_t x) {
  const long double xd = static_cast<long double>(x);
  return std::exp(-std::numbers::egamma_v<long double>) * xd / iterated_log(xd, 3);
}

long double iterated_log(long double x, int i) {
  if (i < 1) throw UsageError("iterated_log: i must be >= 1");
  long double v = x;
  for (int k = 0; k < i; ++k) {
    if (!(v > 0)) throw UsageError("iterated_log: L_" + std::to_string(k + 1) + " undefined at this x");
    v = std::log(v);
  }
  if (!(v > 0)) throw UsageError("iterated_log: L_" + std::to_string(i) + "(x) <= 0");
  return v;
}

}  // namespace eigencoprime
