#pragma once

// Truncated q-expansions with exact integer coefficients, enough to build
// the level-1 eigenforms of weights 12, 16, 18, 20, 22 and 26.

#include <cstdint>
#include <span>
#include <vector>

#include "eigencoprime/numeric.hpp"

namespace eigencoprime {

/// Coefficient of q^n is known for 0 <= n < prec().
class QSeries {
 public:
  QSeries() = default;
  explicit QSeries(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {}

  static QSeries constant(const Integer& c, std::size_t prec);

  std::size_t prec() const noexcept { return coeffs_.size(); }
  bool empty() const noexcept { return coeffs_.empty(); }
  const Integer& operator[](std::size_t n) const { return coeffs_.at(n); }
  std::span<const Integer> coeffs() const noexcept { return coeffs_; }

  /// Same series cut to min(prec, prec()).
  QSeries truncated(std::size_t prec) const;

  friend bool operator==(const QSeries&, const QSeries&) = default;

 private:
  std::vector<Integer> coeffs_;
};

QSeries add(const QSeries& a, const QSeries& b);
QSeries sub(const QSeries& a, const QSeries& b);

/// Truncated Cauchy product; prec = min(a.prec(), b.prec()). Output indices
/// are split across workers, each coefficient is summed in a fixed order.
QSeries mul(const QSeries& a, const QSeries& b, unsigned workers = 1);

/// Exact division of every coefficient; throws InternalError on remainder.
QSeries divide_exact(const QSeries& a, const Integer& divisor);

/// sigma_r(n) = sum of d^r over divisors d of n.
Integer sigma_power_sum(std::uint64_t n, unsigned r);

enum class EisensteinKind { E4, E6 };

/// E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n.
QSeries eisenstein(EisensteinKind kind, std::size_t prec);

struct Level1Form {
  int weight;
  QSeries series;
};

/// Weights whose cusp space at level 1 is one-dimensional.
bool is_supported_level1_weight(int weight);

/// Delta * E_{k-12} with Delta = (E4^3 - E6^2) / 1728.
Level1Form level1_eigenform(int weight, std::size_t prec, unsigned workers = 1);

}  // namespace eigencoprime
