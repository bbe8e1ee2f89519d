#include <doctest.h>

#include "eigencoprime/coeffs.hpp"
#include "eigencoprime/errors.hpp"
#include "eigencoprime/qseries.hpp"
#include "support.hpp"

using namespace eigencoprime;
using namespace testsupport;

namespace {

QSeries series(std::initializer_list<long> v) {
  std::vector<Integer> c;
  for (long x : v) c.emplace_back(x);
  return QSeries(c);
}

// Divisor sum by direct enumeration.
Integer naive_sigma(std::uint64_t n, unsigned r) {
  Integer s = 0;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d == 0) s += ipow(d, r);
  }
  return s;
}

}  // namespace

TEST_CASE("sigma_power_sum") {
  CHECK(sigma_power_sum(1, 3) == 1);
  CHECK(sigma_power_sum(2, 3) == 9);
  CHECK(sigma_power_sum(2, 5) == 33);
  for (std::uint64_t n = 1; n <= 60; ++n) CHECK(sigma_power_sum(n, 5) == naive_sigma(n, 5));
  CHECK_THROWS_AS(sigma_power_sum(0, 3), UsageError);
}

TEST_CASE("eisenstein series") {
  CHECK(eisenstein(EisensteinKind::E4, 1) == series({1}));
  CHECK(eisenstein(EisensteinKind::E4, 3) == series({1, 240, 2160}));
  CHECK(eisenstein(EisensteinKind::E6, 2) == series({1, -504}));
  const QSeries e6 = eisenstein(EisensteinKind::E6, 40);
  for (std::uint64_t n = 1; n < 40; ++n) CHECK(e6[n] == -504 * naive_sigma(n, 5));
}

TEST_CASE("mul truncation and identity") {
  const QSeries one = QSeries::constant(1, 8);
  const QSeries f = eisenstein(EisensteinKind::E4, 8);
  CHECK(mul(one, f) == f);
  CHECK(mul(f, f)[1] == 480);
  CHECK(mul(series({1, 2, 3, 4, 5}), series({1, 1, 1})).prec() == 3);
  CHECK(mul(series({1, 2, 3, 4, 5}), series({1, 1, 1})) == series({1, 3, 6}));
}

TEST_CASE("mul is bit-identical across worker counts") {
  const QSeries e4 = eisenstein(EisensteinKind::E4, 600);
  const QSeries e6 = eisenstein(EisensteinKind::E6, 600);
  const QSeries ref = mul(e4, e6, 1);
  for (unsigned w : {2u, 5u, 8u}) CHECK(mul(e4, e6, w) == ref);
}

TEST_CASE("add, sub and divide_exact") {
  CHECK(add(series({1, 2, 3}), series({1, 1})) == series({2, 3}));
  CHECK(sub(series({1, 2, 3}), series({1, 1, 1})) == series({0, 1, 2}));
  CHECK(divide_exact(series({6, 12, -18}), 6) == series({1, 2, -3}));
  CHECK_THROWS_AS(divide_exact(series({6, 13}), 6), InternalError);
}

TEST_CASE("E4^3 - E6^2 is divisible by 1728 coefficientwise") {
  const std::size_t prec = 500;
  const QSeries e4 = eisenstein(EisensteinKind::E4, prec);
  const QSeries e6 = eisenstein(EisensteinKind::E6, prec);
  const QSeries diff = sub(mul(mul(e4, e4), e4), mul(e6, e6));
  for (std::size_t n = 0; n < prec; ++n) CHECK(diff[n] % 1728 == 0);
}

TEST_CASE("Delta coefficients") {
  const QSeries& d = level1(12, 50).series;
  CHECK(d[0] == 0);
  CHECK(d[1] == 1);
  const long tau[] = {1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920};
  for (int n = 1; n <= 10; ++n) CHECK(d[n] == tau[n - 1]);
  CHECK(d[6] == d[2] * d[3]);
}

TEST_CASE("level-1 eigenforms of every supported weight") {
  for (int k : {12, 16, 18, 20, 22, 26}) {
    CAPTURE(k);
    REQUIRE(is_supported_level1_weight(k));
    const Level1Form& f = level1(k, 200);
    CHECK(f.weight == k);
    CHECK(f.series.prec() == 200);
    CHECK(f.series[0] == 0);
    CHECK(f.series[1] == 1);
    CHECK(f.series[6] == f.series[2] * f.series[3]);
    CHECK(f.series[4] == f.series[2] * f.series[2] - ipow(std::uint64_t{2}, k - 1));
    CHECK(f.series[4] == hecke_prime_power(f.series[2], 2, 2, k, 1));
    CHECK(f.series[27] == hecke_prime_power(f.series[3], 3, 3, k, 1));
  }
  CHECK(level1(16, 10).series[2] == 216);
}

TEST_CASE("unsupported weights are rejected") {
  for (int k : {2, 4, 10, 14, 24, 28, 13}) {
    CHECK_FALSE(is_supported_level1_weight(k));
    CHECK_THROWS_AS(level1_eigenform(k, 10), UsageError);
  }
}

TEST_CASE("generation is deterministic across workers") {
  const Level1Form a = level1_eigenform(22, 400, 1);
  const Level1Form b = level1_eigenform(22, 400, 4);
  CHECK(a.series == b.series);
}
