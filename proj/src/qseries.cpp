#include "eigencoprime/qseries.hpp"

#include <thread>

#include "eigencoprime/errors.hpp"

namespace eigencoprime {

QSeries QSeries::constant(const Integer& c, std::size_t prec) {
  std::vector<Integer> v(prec);
  if (prec > 0) v[0] = c;
  return QSeries(std::move(v));
}

QSeries QSeries::truncated(std::size_t prec) const {
  prec = std::min(prec, coeffs_.size());
  return QSeries(std::vector<Integer>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(prec)));
}

QSeries add(const QSeries& a, const QSeries& b) {
  const std::size_t prec = std::min(a.prec(), b.prec());
  std::vector<Integer> out(prec);
  for (std::size_t n = 0; n < prec; ++n) out[n] = a[n] + b[n];
  return QSeries(std::move(out));
}

QSeries sub(const QSeries& a, const QSeries& b) {
  const std::size_t prec = std::min(a.prec(), b.prec());
  std::vector<Integer> out(prec);
  for (std::size_t n = 0; n < prec; ++n) out[n] = a[n] - b[n];
  return QSeries(std::move(out));
}

QSeries mul(const QSeries& a, const QSeries& b, unsigned workers) {
  if (a.empty() || b.empty()) throw UsageError("mul: empty operand");
  const std::size_t prec = std::min(a.prec(), b.prec());
  std::vector<Integer> out(prec);
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  // Strided assignment balances the triangular workload.
  auto work = [&](unsigned w, unsigned stride) {
    for (std::size_t n = w; n < prec; n += stride) {
      mpz_ptr acc = out[n].get_mpz_t();
      for (std::size_t i = 0; i <= n; ++i) {
        if (mpz_sgn(ac[i].get_mpz_t()) == 0) continue;
        mpz_addmul(acc, ac[i].get_mpz_t(), bc[n - i].get_mpz_t());
      }
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1 || prec < 64) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  return QSeries(std::move(out));
}

QSeries divide_exact(const QSeries& a, const Integer& divisor) {
  std::vector<Integer> out(a.prec());
  for (std::size_t n = 0; n < a.prec(); ++n) {
    if (!mpz_divisible_p(a[n].get_mpz_t(), divisor.get_mpz_t())) {
      throw InternalError("coefficient " + std::to_string(n) + " not divisible by " + divisor.get_str());
    }
    mpz_divexact(out[n].get_mpz_t(), a[n].get_mpz_t(), divisor.get_mpz_t());
  }
  return QSeries(std::move(out));
}

Integer sigma_power_sum(std::uint64_t n, unsigned r) {
  if (n == 0) throw UsageError("sigma_power_sum: n must be positive");
  Integer total = 0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    total += ipow(d, r);
    if (d != n / d) total += ipow(n / d, r);
  }
  return total;
}

QSeries eisenstein(EisensteinKind kind, std::size_t prec) {
  if (prec == 0) throw UsageError("eisenstein: prec must be positive");
  const unsigned r = kind == EisensteinKind::E4 ? 3 : 5;
  const long scale = kind == EisensteinKind::E4 ? 240 : -504;
  // sigma_r via a divisor sieve: O(prec log prec) instead of per-n trial division.
  std::vector<Integer> c(prec);
  for (std::uint64_t d = 1; d < prec; ++d) {
    const Integer dr = ipow(d, r);
    for (std::uint64_t m = d; m < prec; m += d) c[m] += dr;
  }
  c[0] = 1;
  for (std::size_t n = 1; n < prec; ++n) c[n] *= scale;
  return QSeries(std::move(c));
}

bool is_supported_level1_weight(int weight) {
  switch (weight) {
    case 12: case 16: case 18: case 20: case 22: case 26:
      return true;
    default:
      return false;
  }
}

Level1Form level1_eigenform(int weight, std::size_t prec, unsigned workers) {
  if (!is_supported_level1_weight(weight)) {
    throw UsageError("weight " + std::to_string(weight) + " has dim S_k(1) != 1; supported: 12,16,18,20,22,26");
  }
  if (prec == 0) throw UsageError("level1_eigenform: prec must be positive");
  const QSeries e4 = eisenstein(EisensteinKind::E4, prec);
  const QSeries e6 = eisenstein(EisensteinKind::E6, prec);
  const QSeries e4sq = mul(e4, e4, workers);
  const QSeries delta =
      divide_exact(sub(mul(e4sq, e4, workers), mul(e6, e6, workers)), Integer(1728));

  QSeries series;
  switch (weight) {
    case 12: series = delta; break;
    case 16: series = mul(delta, e4, workers); break;
    case 18: series = mul(delta, e6, workers); break;
    case 20: series = mul(delta, e4sq, workers); break;
    case 22: series = mul(delta, mul(e4, e6, workers), workers); break;
    case 26: series = mul(delta, mul(e4sq, e6, workers), workers); break;
  }
  if (prec > 1 && (series[0] != 0 || series[1] != 1)) {
    throw InternalError("generated form is not normalized");
  }
  return Level1Form{weight, std::move(series)};
}

}  // namespace eigencoprime
