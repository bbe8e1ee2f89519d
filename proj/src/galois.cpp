#include "eigencoprime/galois.hpp"

#include <numeric>
#include <set>
#include <thread>

#include "eigencoprime/errors.hpp"

namespace eigencoprime {

namespace {

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

void require_prime(std::uint64_t ell) {
  if (!is_prime(ell)) throw UsageError(std::to_string(ell) + " is not prime");
}

void require_cap(std::uint64_t m, std::uint64_t cap) {
  if (m < 2) throw UsageError("modulus must be >= 2");
  if (m > cap) {
    throw UsageError("modulus " + std::to_string(m) + " exceeds enumeration cap " + std::to_string(cap));
  }
}

}  // namespace

WeightPair::WeightPair(int k1_, int k2_) : k1(k1_), k2(k2_) {
  if (k1 < 2 || k2 < 2 || k1 % 2 || k2 % 2) {
    throw UsageError("weights must be even and >= 2");
  }
}

std::uint64_t d_of(std::uint64_t ell, const WeightPair& w) {
  require_prime(ell);
  return std::gcd(std::gcd(ell - 1, static_cast<std::uint64_t>(w.k1 - 1)), static_cast<std::uint64_t>(w.k2 - 1));
}

std::uint64_t lambda_size(std::uint64_t ell, const WeightPair& w) { return (ell - 1) / d_of(ell, w); }

ImageCounts maximal_image_counts(std::uint64_t ell, const WeightPair& w) {
  ImageCounts out;
  out.m = ell;
  out.d = d_of(ell, w);
  out.lambda_size = (ell - 1) / out.d;
  const Integer l(static_cast<unsigned long>(ell));
  const Integer l2 = l * l;
  const Integer a_num = (l - 1) * (l - 1) * (l - 1) * (l2 + l) * (l2 + l);
  const Integer c_num = l2 * (l - 1) * (l2 + 1);
  out.A = a_num / out.d;
  out.C = c_num / out.d;
  if (out.A * out.d != a_num || out.C * out.d != c_num) throw InternalError("d does not divide closed form");
  out.delta = Rational(out.C, out.A);
  out.delta.canonicalize();
  out.source = CountSource::formula;
  out.special = ell == 2;
  return out;
}

Rational delta_exact(std::uint64_t ell) {
  require_prime(ell);
  const Integer l2 = Integer(static_cast<unsigned long>(ell)) * static_cast<unsigned long>(ell);
  Rational r(l2 + 1, (l2 - 1) * (l2 - 1));
  r.canonicalize();
  return r;
}

std::uint64_t trace_det_class_count(std::uint64_t ell, std::uint64_t t) {
  require_prime(ell);
  if (ell == 2) throw UsageError("trace_det_class_count: l = 2 has no residue dichotomy");
  t %= ell;
  if (t == 0) throw UsageError("trace_det_class_count: t must be a unit");
  const std::uint64_t minus_t = ell - t;
  const bool residue = powmod(minus_t, (ell - 1) / 2, ell) == 1;
  return residue ? ell * ell + ell : ell * ell - ell;
}

TraceDetHistogram::TraceDetHistogram(std::uint64_t m, std::vector<std::uint64_t> counts)
    : m_(m), counts_(std::move(counts)) {
  if (counts_.size() != m_ * m_) throw InternalError("histogram shape mismatch");
}

std::uint64_t TraceDetHistogram::det_total(std::uint64_t det) const {
  std::uint64_t s = 0;
  for (std::uint64_t t = 0; t < m_; ++t) s += count(t, det);
  return s;
}

std::uint64_t TraceDetHistogram::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

TraceDetHistogram trace_det_histogram(std::uint64_t m, std::uint64_t cap, unsigned workers) {
  require_cap(m, cap);
  // products[r] = #{(b, c) in (Z/m)^2 : bc = r}
  std::vector<std::uint64_t> products(m, 0);
  for (std::uint64_t b = 0; b < m; ++b) {
    for (std::uint64_t c = 0; c < m; ++c) ++products[b * c % m];
  }
  std::vector<std::uint64_t> units;
  for (std::uint64_t u = 1; u < m; ++u) {
    if (std::gcd(u, m) == 1) units.push_back(u);
  }

  auto block = [&](std::uint64_t a_lo, std::uint64_t a_hi) {
    std::vector<std::uint64_t> local(m * m, 0);
    for (std::uint64_t a = a_lo; a < a_hi; ++a) {
      for (std::uint64_t d = 0; d < m; ++d) {
        const std::uint64_t tr = (a + d) % m;
        const std::uint64_t ad = a * d % m;
        for (std::uint64_t u : units) {
          // det = ad - bc = u  <=>  bc = ad - u
          local[tr * m + u] += products[(ad + m - u) % m];
        }
      }
    }
    return local;
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(m)));
  std::vector<std::vector<std::uint64_t>> parts(workers);
  const std::uint64_t step = (m + workers - 1) / workers;
  if (workers == 1) {
    parts[0] = block(0, m);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = std::min(m, w * step), hi = std::min(m, lo + step);
      pool.emplace_back([&, w, lo, hi] { parts[w] = block(lo, hi); });
    }
    for (auto& t : pool) t.join();
  }
  std::vector<std::uint64_t> counts(m * m, 0);
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < part.size(); ++i) counts[i] += part[i];
  }
  return TraceDetHistogram(m, std::move(counts));
}

TraceDetHistogram trace_det_histogram_naive(std::uint64_t m) {
  require_cap(m, kDefaultEnumerationCap);
  std::vector<std::uint64_t> counts(m * m, 0);
  for (std::uint64_t a = 0; a < m; ++a)
    for (std::uint64_t b = 0; b < m; ++b)
      for (std::uint64_t c = 0; c < m; ++c)
        for (std::uint64_t d = 0; d < m; ++d) {
          const std::uint64_t det = (a * d + m * m - b * c) % m;
          if (std::gcd(det, m) != 1) continue;
          ++counts[((a + d) % m) * m + det];
        }
  return TraceDetHistogram(m, std::move(counts));
}

ImageCounts pair_counts_from_histogram(const TraceDetHistogram& h, const WeightPair& w) {
  const std::uint64_t m = h.modulus();
  std::set<std::pair<std::uint64_t, std::uint64_t>> lambda;
  for (std::uint64_t v = 1; v < m; ++v) {
    if (std::gcd(v, m) != 1) continue;
    lambda.emplace(powmod(v, static_cast<std::uint64_t>(w.k1 - 1), m),
                   powmod(v, static_cast<std::uint64_t>(w.k2 - 1), m));
  }

  ImageCounts out;
  out.m = m;
  out.d = is_prime(m) ? d_of(m, w) : 1;
  out.lambda_size = lambda.size();
  out.A = 0;
  out.C = 0;
  for (const auto& [t1, t2] : lambda) {
    out.A += Integer(static_cast<unsigned long>(h.det_total(t1))) * static_cast<unsigned long>(h.det_total(t2));
    out.C += Integer(static_cast<unsigned long>(h.count(0, t1))) * static_cast<unsigned long>(h.count(0, t2));
  }
  out.delta = Rational(out.C, out.A);
  out.delta.canonicalize();
  out.source = CountSource::enumeration;
  out.special = m % 2 == 0;
  return out;
}

ImageCounts pair_counts_enumerated(std::uint64_t m, const WeightPair& w, std::uint64_t cap, unsigned workers) {
  return pair_counts_from_histogram(trace_det_histogram(m, cap, workers), w);
}

Integer gl2_order(std::uint64_t m) {
  Rational r(Integer(static_cast<unsigned long>(m)) * m * m * m);
  for (const auto& pp : Factorizer(0).factor(m)) {
    const Integer p(static_cast<unsigned long>(pp.prime));
    r *= Rational(p - 1, p) * Rational(p * p - 1, p * p);
  }
  r.canonicalize();
  return r.get_num();
}

std::string to_string(CountSource s) { return s == CountSource::formula ? "formula" : "enumeration"; }

}  // namespace eigencoprime
