#pragma once

// Maximal-image model for a pair of mod-m Galois representations attached
// to two eigenforms of even weights k1, k2: the image is the set of pairs
// (A, B) in GL2(Z/m)^2 with (det A, det B) = (v^{k1-1}, v^{k2-1}) for a unit
// v, and C_m is the subset with tr A = tr B = 0.
//
// Closed forms at a prime l (d = gcd(l-1, k1-1, k2-1)):
//   |A_l| = (l-1)^3 (l^2+l)^2 / d,   |C_l| = l^2 (l-1)(l^2+1) / d,
//   delta(l) = |C_l| / |A_l| = (l^2+1) / (l^2-1)^2.
// The enumeration routines below recount everything over Z/m directly and
// serve as the oracle for those formulas.

#include <cstdint>
#include <string>
#include <vector>

#include "eigencoprime/numeric.hpp"

namespace eigencoprime {

inline constexpr std::uint64_t kDefaultEnumerationCap = 100;

struct WeightPair {
  int k1;
  int k2;

  WeightPair(int k1_, int k2_);
};

enum class CountSource { formula, enumeration };

struct ImageCounts {
  std::uint64_t m = 0;
  std::uint64_t d = 1;  // only meaningful for prime m; 1 for composite m
  std::uint64_t lambda_size = 0;
  Integer A;
  Integer C;
  Rational delta;
  CountSource source = CountSource::formula;
  bool special = false;  // m == 2: model value only, real forms may differ

  friend bool operator==(const ImageCounts&, const ImageCounts&) = default;
};

std::uint64_t d_of(std::uint64_t ell, const WeightPair& w);

/// |{(v^{k1-1}, v^{k2-1}) : v in F_l^x}| = (l-1)/d.
std::uint64_t lambda_size(std::uint64_t ell, const WeightPair& w);

ImageCounts maximal_image_counts(std::uint64_t ell, const WeightPair& w);

/// (l^2+1)/(l^2-1)^2; weight-independent. delta_exact(2) = 5/9 is the model
/// value and is not meaningful for actual forms.
Rational delta_exact(std::uint64_t ell);

/// #{A in GL2(F_l) : det A = t, tr A = 0}: l^2+l if -t is a square mod l,
/// else l^2-l. Odd l only.
std::uint64_t trace_det_class_count(std::uint64_t ell, std::uint64_t t);

/// N(t, u): invertible 2x2 matrices over Z/m with trace t and determinant u.
class TraceDetHistogram {
 public:
  TraceDetHistogram(std::uint64_t m, std::vector<std::uint64_t> counts);

  std::uint64_t modulus() const noexcept { return m_; }
  std::uint64_t count(std::uint64_t trace, std::uint64_t det) const { return counts_.at(trace * m_ + det); }
  /// sum_t N(t, u)
  std::uint64_t det_total(std::uint64_t det) const;
  std::uint64_t total() const;

  friend bool operator==(const TraceDetHistogram&, const TraceDetHistogram&) = default;

 private:
  std::uint64_t m_;
  std::vector<std::uint64_t> counts_;  // row-major [trace][det]
};

/// Census of GL2(Z/m) by (trace, det). Every matrix is accounted for: for
/// each diagonal (a, d) the number of off-diagonal pairs (b, c) with a given
/// product bc is read from an exact table of all m^2 products. Work is split
/// across workers by the first-row entry a and merged in order.
TraceDetHistogram trace_det_histogram(std::uint64_t m, std::uint64_t cap = kDefaultEnumerationCap,
                                      unsigned workers = 1);

/// Plain four-fold loop over (a, b, c, d); for cross-checking small m.
TraceDetHistogram trace_det_histogram_naive(std::uint64_t m);

/// |A_m| and |C_m| counted from the histogram and the determinant set
/// Lambda_m = {(v^{k1-1}, v^{k2-1}) mod m : v unit}. Works for any m.
ImageCounts pair_counts_enumerated(std::uint64_t m, const WeightPair& w,
                                   std::uint64_t cap = kDefaultEnumerationCap, unsigned workers = 1);
ImageCounts pair_counts_from_histogram(const TraceDetHistogram& h, const WeightPair& w);

/// |GL2(Z/m)| = m^4 prod_{p|m} (1 - 1/p)(1 - 1/p^2).
Integer gl2_order(std::uint64_t m);

std::string to_string(CountSource s);

}  // namespace eigencoprime
