#include <doctest.h>

#include <set>

#include "eigencoprime/errors.hpp"
#include "eigencoprime/galois.hpp"
#include "support.hpp"

using namespace eigencoprime;
using namespace testsupport;

namespace {

// Matrices over Z/l with trace 0 and det t, by the (a, b, c) loop with d = -a.
std::uint64_t naive_trace_zero_count(std::uint64_t l, std::uint64_t t) {
  std::uint64_t n = 0;
  for (std::uint64_t a = 0; a < l; ++a) {
    for (std::uint64_t b = 0; b < l; ++b) {
      for (std::uint64_t c = 0; c < l; ++c) {
        // det = a * (-a) - b * c
        const std::uint64_t det = (l * l * 2 - a * a % l - b * c % l) % l;
        n += det == t % l;
      }
    }
  }
  return n;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

TEST_CASE("WeightPair requires even weights >= 2") {
  CHECK_NOTHROW(WeightPair(2, 4));
  CHECK_THROWS_AS(WeightPair(3, 4), UsageError);
  CHECK_THROWS_AS(WeightPair(0, 4), UsageError);
  CHECK_THROWS_AS(WeightPair(4, -2), UsageError);
}

TEST_CASE("d_of and lambda_size") {
  CHECK(d_of(5, {6, 4}) == 1);
  CHECK(d_of(23, {12, 12}) == 11);
  CHECK(d_of(3, {6, 8}) == 1);
  CHECK(lambda_size(5, {6, 4}) == 4);
  CHECK(lambda_size(23, {12, 12}) == 2);
  CHECK(lambda_size(7, {12, 16}) == 6);
  CHECK_THROWS_AS(d_of(9, {6, 4}), UsageError);
  // Direct enumeration of the pair set agrees.
  for (std::uint64_t l : {3, 5, 7, 11, 13, 23, 31}) {
    for (auto w : {WeightPair(6, 4), WeightPair(12, 12), WeightPair(12, 16)}) {
      std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
      for (std::uint64_t v = 1; v < l; ++v) pairs.emplace(powmod(v, w.k1 - 1, l), powmod(v, w.k2 - 1, l));
      CHECK(pairs.size() == lambda_size(l, w));
    }
  }
}

TEST_CASE("maximal_image_counts closed forms") {
  auto c5 = maximal_image_counts(5, {6, 4});
  CHECK(c5.A == 57600);
  CHECK(c5.C == 2600);
  CHECK(c5.delta == frac(13, 288));
  CHECK(c5.source == CountSource::formula);
  CHECK_FALSE(c5.special);
  auto c3 = maximal_image_counts(3, {6, 4});
  CHECK(c3.A == 1152);
  CHECK(c3.C == 180);
  CHECK(c3.delta == frac(5, 32));
  CHECK(maximal_image_counts(5, {12, 16}).delta == c5.delta);
  CHECK(maximal_image_counts(2, {12, 16}).special);
  CHECK_THROWS_AS(maximal_image_counts(15, {6, 4}), UsageError);
}

TEST_CASE("delta_exact") {
  CHECK(delta_exact(3) == frac(10, 64));
  CHECK(delta_exact(5) == frac(26, 576));
  CHECK(delta_exact(2) == frac(5, 9));
  for (auto l : sieve_primes(97)) {
    for (auto w : {WeightPair(6, 4), WeightPair(12, 12), WeightPair(2, 26)}) {
      CHECK(maximal_image_counts(l, w).delta == delta_exact(l));
    }
  }
  CHECK_THROWS_AS(delta_exact(4), UsageError);
}

TEST_CASE("delta envelope") {
  for (auto l : sieve_primes(997)) {
    if (l == 2) continue;
    const Rational s = delta_exact(l) * l * l;
    CHECK(s > 1);
    CHECK(s <= frac(141, 100));
    if (l >= 29) CHECK(s <= frac(102, 100));
    CHECK(delta_exact(l) <= Rational(3, l * l));
  }
}

TEST_CASE("trace_det_class_count") {
  CHECK(trace_det_class_count(5, 1) == 30);
  CHECK(trace_det_class_count(5, 2) == 20);
  CHECK(trace_det_class_count(3, 1) == 6);
  CHECK_THROWS_AS(trace_det_class_count(2, 1), UsageError);
  CHECK_THROWS_AS(trace_det_class_count(5, 0), UsageError);
  CHECK_THROWS_AS(trace_det_class_count(5, 10), UsageError);
  for (std::uint64_t l : {3, 5, 7, 11, 13}) {
    for (std::uint64_t t = 1; t < l; ++t) CHECK(trace_det_class_count(l, t) == naive_trace_zero_count(l, t));
  }
}

TEST_CASE("trace_det_histogram small cases") {
  const auto h2 = trace_det_histogram(2);
  CHECK(h2.total() == 6);
  const auto h3 = trace_det_histogram(3);
  CHECK(h3.total() == 48);
  CHECK(h3.det_total(1) == 24);
  CHECK(trace_det_histogram(5).count(0, 1) == 30);
  CHECK_THROWS_AS(trace_det_histogram(1), UsageError);
  CHECK_THROWS_AS(trace_det_histogram(101), UsageError);
  CHECK_NOTHROW(trace_det_histogram(101, 101));
}

TEST_CASE("histogram equals the naive four-fold loop") {
  for (std::uint64_t m = 2; m <= 16; ++m) {
    CAPTURE(m);
    CHECK(trace_det_histogram(m) == trace_det_histogram_naive(m));
  }
}

TEST_CASE("histogram invariants") {
  for (std::uint64_t m = 2; m <= 60; ++m) {
    CAPTURE(m);
    const auto h = trace_det_histogram(m);
    CHECK(Integer(static_cast<unsigned long>(h.total())) == gl2_order(m));
    // Row sums over a unit u are all equal to m^3 prod (1 - p^-2).
    Integer expected = ipow(m, 3);
    for (auto [p, e] : Factorizer(m).factor(m)) expected = expected * (p * p - 1) / (p * p);
    for (std::uint64_t u = 0; u < m; ++u) {
      if (naive_gcd(u, m) != 1) {
        for (std::uint64_t t = 0; t < m; ++t) REQUIRE(h.count(t, u) == 0);
        continue;
      }
      REQUIRE(Integer(static_cast<unsigned long>(h.det_total(u))) == expected);
    }
  }
}

TEST_CASE("histogram is identical across worker counts") {
  const auto ref = trace_det_histogram(45, 100, 1);
  for (unsigned w : {2u, 3u, 8u}) CHECK(trace_det_histogram(45, 100, w) == ref);
}

TEST_CASE("gl2_order") {
  CHECK(gl2_order(2) == 6);
  CHECK(gl2_order(3) == 48);
  CHECK(gl2_order(4) == 96);
  CHECK(gl2_order(6) == 288);
}

TEST_CASE("pair_counts_enumerated") {
  const auto c5 = pair_counts_enumerated(5, {6, 4});
  CHECK(c5.A == 57600);
  CHECK(c5.C == 2600);
  CHECK(c5.source == CountSource::enumeration);
  const auto c15 = pair_counts_enumerated(15, {6, 4});
  CHECK(c15.C == 468000);
  CHECK(c15.C == pair_counts_enumerated(3, {6, 4}).C * c5.C);
  CHECK(c15.A == pair_counts_enumerated(3, {6, 4}).A * c5.A);
  CHECK(c15.d == 1);
  const auto c9 = pair_counts_enumerated(9, {6, 4});
  CHECK(c9.A <= ipow(std::uint64_t{9}, 7));
  CHECK(c9.C <= ipow(std::uint64_t{9}, 6));
  const auto c2 = pair_counts_enumerated(2, {6, 4});
  CHECK(c2.special);
  CHECK(c2.A == 36);
  CHECK(c2.C == 16);  // the closed form would give 20: the prime 2 is special
  CHECK(maximal_image_counts(2, {6, 4}).C == 20);
  CHECK_THROWS_AS(pair_counts_enumerated(1, {6, 4}), UsageError);
}

TEST_CASE("delta lies strictly between 0 and 1 when m has an odd prime factor") {
  for (std::uint64_t m = 3; m <= 40; ++m) {
    if ((m & (m - 1)) == 0) continue;
    const auto c = pair_counts_enumerated(m, {12, 16});
    CHECK(c.delta > 0);
    CHECK(c.delta < 1);
  }
}

TEST_CASE("to_string") {
  CHECK(to_string(CountSource::formula) == "formula");
  CHECK(to_string(CountSource::enumeration) == "enumeration");
}
