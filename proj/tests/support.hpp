#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "eigencoprime/coeffs.hpp"
#include "eigencoprime/qseries.hpp"
#include "eigencoprime/stats.hpp"

namespace testsupport {

using namespace eigencoprime;

inline std::filesystem::path fixture_path(const std::string& label) {
  return std::filesystem::path(EIGENCOPRIME_DATA_DIR) / (label + ".ap.txt");
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// f1 = 11.6.a.a, f2 = 13.4.a.a, f3 = 13.8.a.a
inline const PrimeCoefficientTable& fixture(const std::string& label) {
  static std::map<std::string, PrimeCoefficientTable> cache;
  auto it = cache.find(label);
  if (it == cache.end()) {
    it = cache.emplace(label, to_prime_table(parse_coefficient_file(slurp(fixture_path(label))))).first;
  }
  return it->second;
}

inline const PrimeCoefficientTable& f1() { return fixture("11.6.a.a"); }
inline const PrimeCoefficientTable& f2() { return fixture("13.4.a.a"); }
inline const PrimeCoefficientTable& f3() { return fixture("13.8.a.a"); }

inline const Level1Form& level1(int weight, std::size_t prec) {
  static std::map<std::pair<int, std::size_t>, Level1Form> cache;
  auto key = std::make_pair(weight, prec);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, level1_eigenform(weight, prec)).first;
  return it->second;
}

// (Delta, Delta * E4) with prime coefficients up to `bound`.
inline FormPairDataset generated_pair(std::uint64_t bound) {
  return FormPairDataset(prime_table_from_form(level1(12, bound + 1), "gen:12"),
                         prime_table_from_form(level1(16, bound + 1), "gen:16"));
}

// Synthetic prime table with arbitrary values (bypasses validation).
inline PrimeCoefficientTable synthetic(std::uint64_t bound, std::uint64_t level, int weight,
                                       const std::map<std::uint64_t, long>& values, long fallback = 1) {
  std::vector<std::uint32_t> primes = sieve_primes(bound);
  std::vector<Integer> v;
  for (auto p : primes) {
    auto it = values.find(p);
    v.emplace_back(it == values.end() ? fallback : it->second);
  }
  return PrimeCoefficientTable(FormDescriptor{"synthetic", level, weight, FormSource::local}, bound, primes, v);
}

// Canonical a/b (mpq_class does not reduce on construction).
inline Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// Independent trial-division helpers used as oracles.
inline bool naive_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint64_t naive_gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

inline std::uint64_t naive_phi(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += naive_gcd(k, n) == 1;
  return c;
}

}  // namespace testsupport
