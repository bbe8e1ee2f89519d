#pragma once

// Eigenform Fourier coefficient tables: the on-disk text format, Hecke
// prime-power recursion, multiplicative assembly of a(n) and validation.
//
// File format (UTF-8):
//   # label=11.6.a.a
//   # level=11
//   # weight=6
//   # kind=ap            (ap: primes only, an: every n)
//   # bound=100000
//   2 -4
//   3 -15
//   ...
// Header keys beyond the required five are kept verbatim in `extra`.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eigencoprime/numeric.hpp"
#include "eigencoprime/qseries.hpp"

namespace eigencoprime {

enum class FormSource { local, remote, generated };

struct FormDescriptor {
  std::string label;
  std::uint64_t level = 1;
  int weight = 2;
  FormSource source = FormSource::local;

  friend bool operator==(const FormDescriptor&, const FormDescriptor&) = default;
};

/// Throws UsageError unless k is even, k >= 2 and N >= 1.
void check_descriptor(const FormDescriptor& d);

/// a(p) for every prime p <= bound.
class PrimeCoefficientTable {
 public:
  PrimeCoefficientTable() = default;
  /// `primes` must be exactly the primes <= bound, in order.
  PrimeCoefficientTable(FormDescriptor descriptor, std::uint64_t bound,
                        std::vector<std::uint32_t> primes, std::vector<Integer> values);

  const FormDescriptor& descriptor() const noexcept { return descriptor_; }
  std::uint64_t bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return primes_.size(); }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }
  std::span<const Integer> values() const noexcept { return values_; }

  bool contains(std::uint64_t p) const;
  /// a(p); throws InsufficientDataError when p is not a stored prime.
  const Integer& at(std::uint64_t p) const;

  /// Same form restricted to primes <= bound (bound <= this->bound()).
  PrimeCoefficientTable restricted(std::uint64_t bound) const;

  friend bool operator==(const PrimeCoefficientTable&, const PrimeCoefficientTable&) = default;

 private:
  FormDescriptor descriptor_;
  std::uint64_t bound_ = 0;
  std::vector<std::uint32_t> primes_;
  std::vector<Integer> values_;
};

/// a(n) for 1 <= n <= bound; index 0 is unused and holds 0.
class FullCoefficientTable {
 public:
  FullCoefficientTable() = default;
  FullCoefficientTable(FormDescriptor descriptor, std::vector<Integer> values_from_one);

  const FormDescriptor& descriptor() const noexcept { return descriptor_; }
  std::uint64_t bound() const noexcept { return values_.size() - 1; }
  const Integer& at(std::uint64_t n) const;

  PrimeCoefficientTable prime_table() const;

  friend bool operator==(const FullCoefficientTable&, const FullCoefficientTable&) = default;

 private:
  FormDescriptor descriptor_;
  std::vector<Integer> values_{Integer(0)};
};

using CoefficientTable = std::variant<PrimeCoefficientTable, FullCoefficientTable>;

const FormDescriptor& descriptor_of(const CoefficientTable& t);
std::uint64_t bound_of(const CoefficientTable& t);
PrimeCoefficientTable to_prime_table(const CoefficientTable& t);

struct ParsedFile {
  CoefficientTable table;
  std::map<std::string, std::string> extra;  // header keys beyond the required ones
};

/// Parse without the semantic checks (normalization, Deligne); structural
/// errors (header, ordering, coverage) still throw ParseError.
ParsedFile parse_coefficient_file_unchecked(std::string_view content);

/// Parse and fully validate; throws ValidationError on any failure.
CoefficientTable parse_coefficient_file(std::string_view content);

std::string serialize(const CoefficientTable& table,
                      const std::map<std::string, std::string>& extra = {});

/// Body records only ("<index> <value>\n" lines), as used for checksums.
std::string serialize_records(const CoefficientTable& table);

/// |a| <= 2 p^{(k-1)/2}, checked exactly as a^2 <= 4 p^{k-1}.
bool within_deligne_bound(const Integer& a, std::uint64_t p, int weight);

/// a(p^alpha): Hecke recursion for p not dividing N, a(p)^alpha otherwise.
Integer hecke_prime_power(const Integer& a_p, std::uint64_t p, unsigned alpha, int weight,
                          std::uint64_t level);

/// a(n) from a(p) by multiplicativity; throws InsufficientDataError if a
/// prime factor of n exceeds the table bound.
Integer coefficient_at(const PrimeCoefficientTable& table, std::uint64_t n);
Integer coefficient_at(const PrimeCoefficientTable& table, std::uint64_t n, const Factorizer& f);

/// a(n) for every 1 <= n <= x, assembled multiplicatively. Entry 0 is 0.
std::vector<Integer> all_coefficients(const PrimeCoefficientTable& table, std::uint64_t x,
                                      const Factorizer& f);

struct ValidationIssue {
  std::uint64_t index;
  std::string message;
};

struct ValidationReport {
  std::size_t primes_checked = 0;
  std::vector<ValidationIssue> failures;
  std::vector<ValidationIssue> warnings;
  bool ok() const noexcept { return failures.empty(); }
};

ValidationReport validate(const CoefficientTable& table);

/// Tables straight from a generated level-1 form (descriptor.source = generated).
FullCoefficientTable full_table_from_form(const Level1Form& form, std::string label = {});
PrimeCoefficientTable prime_table_from_form(const Level1Form& form, std::string label = {});

}  // namespace eigencoprime
