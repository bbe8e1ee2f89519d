#include "eigencoprime/numeric.hpp"

#include <cmath>
#include <numeric>

#include "eigencoprime/errors.hpp"

namespace eigencoprime {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

void check_cap(std::uint64_t x) {
  if (x > kSieveCap) throw DataError("sieve bound " + std::to_string(x) + " exceeds memory cap");
}

// Pollard-Brent; n odd composite.
std::uint64_t rho(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min<std::uint64_t>(128, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += 128;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_u64(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = rho(n);
  factor_u64(d, out);
  factor_u64(n / d, out);
}

// Fallback for values beyond 64 bits; slow but only hit for huge gcds.
void factor_big(Integer n, std::vector<Integer>& out) {
  if (n == 1) return;
  if (n.fits_ulong_p()) {
    std::vector<std::uint64_t> small;
    factor_u64(n.get_ui(), small);
    for (auto p : small) out.emplace_back(static_cast<unsigned long>(p));
    return;
  }
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
    out.push_back(n);
    return;
  }
  for (unsigned long c = 1;; ++c) {
    Integer x = 2, y = 2, g = 1;
    while (g == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      Integer diff = abs(x - y);
      g = gcd_abs(diff, n);
    }
    if (g != n) {
      factor_big(g, out);
      factor_big(n / g, out);
      return;
    }
  }
}

std::vector<PrimePower> collapse(std::vector<std::uint64_t> ps) {
  std::sort(ps.begin(), ps.end());
  std::vector<PrimePower> out;
  for (auto p : ps) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().exponent;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint32_t> sieve_primes(std::uint64_t x) {
  check_cap(x);
  std::vector<std::uint32_t> primes;
  if (x < 2) return primes;
  const std::uint64_t root = isqrt(x);
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint32_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<char> seg(kSegment);
  for (std::uint64_t lo = 2; lo <= x; lo += kSegment) {
    const std::uint64_t hi = std::min(x, lo + kSegment - 1);
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), 1);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (seg[n - lo]) primes.push_back(static_cast<std::uint32_t>(n));
    }
  }
  return primes;
}

std::vector<std::uint32_t> totient_sieve(std::uint64_t x) {
  check_cap(x);
  std::vector<std::uint32_t> phi(x + 1);
  std::iota(phi.begin(), phi.end(), 0u);
  for (std::uint64_t p = 2; p <= x; ++p) {
    if (phi[p] != p) continue;
    for (std::uint64_t j = p; j <= x; j += p) phi[j] -= phi[j] / static_cast<std::uint32_t>(p);
  }
  return phi;
}

std::size_t prime_count(std::span<const std::uint32_t> primes, std::uint64_t x) {
  return static_cast<std::size_t>(
      std::upper_bound(primes.begin(), primes.end(), x,
                       [](std::uint64_t v, std::uint32_t p) { return v < p; }) -
      primes.begin());
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Factorizer::Factorizer(std::uint64_t limit) : limit_(std::max<std::uint64_t>(limit, 1)) {
  check_cap(limit_);
  spf_.assign(limit_ + 1, 0);
  for (std::uint64_t i = 2; i <= limit_; ++i) {
    if (spf_[i]) continue;
    for (std::uint64_t j = i; j <= limit_; j += i) {
      if (!spf_[j]) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

std::uint64_t Factorizer::smallest_prime_factor(std::uint64_t n) const {
  if (n < 2) return n;
  if (n <= limit_) return spf_[n];
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) return d;
  }
  return n;
}

std::vector<PrimePower> Factorizer::factor(std::uint64_t n) const {
  std::vector<PrimePower> out;
  while (n > 1) {
    const std::uint64_t p = smallest_prime_factor(n);
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

std::vector<PrimePower> factor_integer(const Integer& n) {
  Integer m = abs(n);
  if (m == 0) throw DataError("cannot factor zero");
  std::vector<std::uint64_t> small;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      m /= p;
      small.push_back(p);
    }
  }
  std::vector<Integer> big;
  factor_big(m, big);
  for (const auto& b : big) {
    if (!b.fits_ulong_p()) throw DataError("prime factor exceeds 64 bits");
    small.push_back(b.get_ui());
  }
  return collapse(std::move(small));
}

unsigned omega(const Integer& n) {
  if (n == 0 || abs(n) == 1) return 0;
  return static_cast<unsigned>(factor_integer(n).size());
}

unsigned omega_upto(const Integer& n, std::uint64_t u) {
  if (n == 0 || abs(n) == 1) return 0;
  unsigned count = 0;
  for (const auto& pp : factor_integer(n)) {
    if (pp.prime <= u) ++count;
  }
  return count;
}

Integer smallest_prime_factor(const Integer& n) {
  const auto fs = factor_integer(n);
  if (fs.empty()) throw DataError("no prime factor");
  return Integer(static_cast<unsigned long>(fs.front().prime));
}

int mobius(std::uint64_t n, const Factorizer& f) {
  int mu = 1;
  for (const auto& pp : f.factor(n)) {
    if (pp.exponent > 1) return 0;
    mu = -mu;
  }
  return mu;
}

Integer ipow(const Integer& base, unsigned exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Integer ipow(std::uint64_t base, unsigned exponent) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
  return r;
}

std::string to_decimal(const Rational& value, int places) {
  const Integer scale = ipow(std::uint64_t{10}, static_cast<unsigned>(places));
  const Integer num = value.get_num();
  const Integer den = value.get_den();
  Integer scaled = abs(num) * scale * 2 + den;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), Integer(den * 2).get_mpz_t());
  std::string digits = q.get_str();
  if (digits.size() <= static_cast<std::size_t>(places)) {
    digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  }
  std::string out = digits.substr(0, digits.size() - static_cast<std::size_t>(places));
  if (places > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(places));
  if (num < 0 && q != 0) out.insert(0, "-");
  return out;
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](std::string digits, bool allow_sign) {
    bool negative = false;
    if (allow_sign && !digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
      negative = digits[0] == '-';
      digits.erase(0, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw DataError("malformed rational '" + text + "'");
    }
    Integer v;
    v.set_str(digits, 10);
    return negative ? Integer(-v) : v;
  };
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const Integer num = parse_int(text.substr(0, slash), true);
    const Integer den = parse_int(text.substr(slash + 1), false);
    if (den == 0) throw DataError("zero denominator in '" + text + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_int(text, true));
  std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  const bool negative = !whole.empty() && whole[0] == '-';
  if (negative || (!whole.empty() && whole[0] == '+')) whole.erase(0, 1);
  if (whole.empty() && frac.empty()) throw DataError("malformed rational '" + text + "'");
  const Integer num = parse_int((whole.empty() ? "0" : whole) + frac, false);
  Rational r(num, ipow(std::uint64_t{10}, static_cast<unsigned>(frac.size())));
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace eigencoprime
