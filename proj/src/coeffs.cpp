#include "eigencoprime/coeffs.hpp"

#include <charconv>
#include <sstream>

#include "eigencoprime/errors.hpp"

namespace eigencoprime {

namespace {

const char* kind_name(const CoefficientTable& t) {
  return std::holds_alternative<PrimeCoefficientTable>(t) ? "ap" : "an";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

Integer parse_value(std::string_view s, std::size_t line) {
  bool negative = false;
  // Accept the Unicode minus sign U+2212 as well as ASCII '-'.
  if (s.starts_with("\xE2\x88\x92")) {
    negative = true;
    s.remove_prefix(3);
  } else if (s.starts_with('-')) {
    negative = true;
    s.remove_prefix(1);
  } else if (s.starts_with('+')) {
    s.remove_prefix(1);
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
    throw ParseError(line, "malformed coefficient value");
  }
  Integer v(std::string(s), 10);
  return negative ? Integer(-v) : v;
}

}  // namespace

void check_descriptor(const FormDescriptor& d) {
  if (d.weight < 2 || d.weight % 2 != 0) {
    throw UsageError("weight must be even and >= 2, got " + std::to_string(d.weight));
  }
  if (d.level < 1) throw UsageError("level must be >= 1");
}

PrimeCoefficientTable::PrimeCoefficientTable(FormDescriptor descriptor, std::uint64_t bound,
                                             std::vector<std::uint32_t> primes,
                                             std::vector<Integer> values)
    : descriptor_(std::move(descriptor)),
      bound_(bound),
      primes_(std::move(primes)),
      values_(std::move(values)) {
  check_descriptor(descriptor_);
  if (primes_.size() != values_.size()) throw InternalError("prime/value length mismatch");
}

bool PrimeCoefficientTable::contains(std::uint64_t p) const {
  return std::binary_search(primes_.begin(), primes_.end(), p,
                            [](auto a, auto b) { return static_cast<std::uint64_t>(a) < static_cast<std::uint64_t>(b); });
}

const Integer& PrimeCoefficientTable::at(std::uint64_t p) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), p,
                             [](std::uint32_t a, std::uint64_t b) { return a < b; });
  if (it == primes_.end() || *it != p) {
    throw InsufficientDataError("a(" + std::to_string(p) + ") not available for " + descriptor_.label +
                                " (bound " + std::to_string(bound_) + ")");
  }
  return values_[static_cast<std::size_t>(it - primes_.begin())];
}

PrimeCoefficientTable PrimeCoefficientTable::restricted(std::uint64_t bound) const {
  if (bound > bound_) {
    throw InsufficientDataError("cannot extend " + descriptor_.label + " from bound " +
                                std::to_string(bound_) + " to " + std::to_string(bound));
  }
  const std::size_t n = prime_count(primes_, bound);
  return PrimeCoefficientTable(descriptor_, bound, {primes_.begin(), primes_.begin() + static_cast<std::ptrdiff_t>(n)},
                               {values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)});
}

FullCoefficientTable::FullCoefficientTable(FormDescriptor descriptor, std::vector<Integer> values_from_one)
    : descriptor_(std::move(descriptor)) {
  check_descriptor(descriptor_);
  values_.reserve(values_from_one.size() + 1);
  for (auto& v : values_from_one) values_.push_back(std::move(v));
}

const Integer& FullCoefficientTable::at(std::uint64_t n) const {
  if (n == 0 || n > bound()) {
    throw InsufficientDataError("a(" + std::to_string(n) + ") not available for " + descriptor_.label);
  }
  return values_[n];
}

PrimeCoefficientTable FullCoefficientTable::prime_table() const {
  auto primes = sieve_primes(bound());
  std::vector<Integer> vals;
  vals.reserve(primes.size());
  for (auto p : primes) vals.push_back(values_[p]);
  return PrimeCoefficientTable(descriptor_, bound(), std::move(primes), std::move(vals));
}

const FormDescriptor& descriptor_of(const CoefficientTable& t) {
  return std::visit([](const auto& x) -> const FormDescriptor& { return x.descriptor(); }, t);
}

std::uint64_t bound_of(const CoefficientTable& t) {
  return std::visit([](const auto& x) { return x.bound(); }, t);
}

PrimeCoefficientTable to_prime_table(const CoefficientTable& t) {
  if (const auto* p = std::get_if<PrimeCoefficientTable>(&t)) return *p;
  return std::get<FullCoefficientTable>(t).prime_table();
}

ParsedFile parse_coefficient_file_unchecked(std::string_view content) {
  std::map<std::string, std::string> header;
  std::vector<std::pair<std::uint64_t, Integer>> records;
  std::size_t line_no = 0;
  bool body_started = false;

  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = trim(content.substr(0, nl));
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (body_started) throw ParseError(line_no, "header line after records");
      std::istringstream fields{std::string(line.substr(1))};
      std::string kv;
      while (fields >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError(line_no, "malformed header field '" + kv + "'");
        header[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      continue;
    }
    body_started = true;
    const auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) throw ParseError(line_no, "expected '<index> <value>'");
    const auto index = parse_u64(trim(line.substr(0, sp)), line_no, "index");
    Integer value = parse_value(trim(line.substr(sp + 1)), line_no);
    if (!records.empty() && index <= records.back().first) {
      throw ParseError(line_no, "indices must be strictly increasing");
    }
    records.emplace_back(index, std::move(value));
  }

  for (const char* key : {"label", "level", "weight", "kind", "bound"}) {
    if (!header.count(key)) throw ParseError(0, std::string("missing header key '") + key + "'");
  }
  FormDescriptor desc;
  desc.label = header["label"];
  desc.level = parse_u64(header["level"], 0, "level");
  const auto weight = parse_u64(header["weight"], 0, "weight");
  desc.weight = static_cast<int>(weight);
  desc.source = FormSource::local;
  const auto bound = parse_u64(header["bound"], 0, "bound");
  const std::string kind = header["kind"];
  if (desc.level < 1 || weight < 2 || weight % 2 != 0 || weight > 1000) {
    throw ParseError(0, "level must be >= 1 and weight even >= 2");
  }
  if (bound < 1) throw ParseError(0, "bound must be positive");

  ParsedFile out;
  for (auto& [k, v] : header) {
    if (k != "label" && k != "level" && k != "weight" && k != "kind" && k != "bound") out.extra[k] = v;
  }

  if (kind == "ap") {
    auto primes = sieve_primes(bound);
    if (records.size() > primes.size() && records[primes.size()].first > bound) {
      throw ParseError(0, "index " + std::to_string(records[primes.size()].first) + " exceeds bound");
    }
    std::vector<Integer> values;
    values.reserve(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (i >= records.size() || records[i].first != primes[i]) {
        const std::uint64_t got = i < records.size() ? records[i].first : 0;
        if (got != 0 && got <= bound && !is_prime(got)) {
          throw ParseError(0, "index " + std::to_string(got) + " is not prime in kind=ap file");
        }
        throw ParseError(0, "gap in prime coverage: a(" + std::to_string(primes[i]) + ") missing");
      }
      values.push_back(std::move(records[i].second));
    }
    if (records.size() > primes.size()) {
      throw ParseError(0, "index " + std::to_string(records[primes.size()].first) + " exceeds bound");
    }
    out.table = PrimeCoefficientTable(desc, bound, std::move(primes), std::move(values));
  } else if (kind == "an") {
    std::vector<Integer> values;
    values.reserve(bound);
    for (std::uint64_t n = 1; n <= bound; ++n) {
      if (n - 1 >= records.size() || records[n - 1].first != n) {
        throw ParseError(0, "gap in integer coverage: a(" + std::to_string(n) + ") missing");
      }
      values.push_back(std::move(records[n - 1].second));
    }
    if (records.size() > bound) {
      throw ParseError(0, "index " + std::to_string(records[bound].first) + " exceeds bound");
    }
    out.table = FullCoefficientTable(desc, std::move(values));
  } else {
    throw ParseError(0, "kind must be 'ap' or 'an', got '" + kind + "'");
  }
  return out;
}

CoefficientTable parse_coefficient_file(std::string_view content) {
  ParsedFile parsed = parse_coefficient_file_unchecked(content);
  const ValidationReport report = validate(parsed.table);
  if (!report.ok()) {
    const auto& first = report.failures.front();
    throw ValidationError(descriptor_of(parsed.table).label + ": " + first.message +
                          (report.failures.size() > 1
                               ? " (+" + std::to_string(report.failures.size() - 1) + " more)"
                               : ""));
  }
  return std::move(parsed.table);
}

std::string serialize_records(const CoefficientTable& table) {
  std::string out;
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, PrimeCoefficientTable>) {
          for (std::size_t i = 0; i < t.size(); ++i) {
            out += std::to_string(t.primes()[i]);
            out += ' ';
            out += t.values()[i].get_str();
            out += '\n';
          }
        } else {
          for (std::uint64_t n = 1; n <= t.bound(); ++n) {
            out += std::to_string(n);
            out += ' ';
            out += t.at(n).get_str();
            out += '\n';
          }
        }
      },
      table);
  return out;
}

std::string serialize(const CoefficientTable& table, const std::map<std::string, std::string>& extra) {
  const auto& d = descriptor_of(table);
  std::string out;
  out += "# label=" + d.label + "\n";
  out += "# level=" + std::to_string(d.level) + "\n";
  out += "# weight=" + std::to_string(d.weight) + "\n";
  out += std::string("# kind=") + kind_name(table) + "\n";
  out += "# bound=" + std::to_string(bound_of(table)) + "\n";
  for (const auto& [k, v] : extra) out += "# " + k + "=" + v + "\n";
  out += serialize_records(table);
  return out;
}

bool within_deligne_bound(const Integer& a, std::uint64_t p, int weight) {
  return a * a <= 4 * ipow(p, static_cast<unsigned>(weight - 1));
}

Integer hecke_prime_power(const Integer& a_p, std::uint64_t p, unsigned alpha, int weight,
                          std::uint64_t level) {
  if (alpha == 0) return Integer(1);
  if (level % p == 0) return ipow(a_p, alpha);
  const Integer pk1 = ipow(p, static_cast<unsigned>(weight - 1));
  Integer prev = 1;  // a(p^0)
  Integer cur = a_p; // a(p^1)
  for (unsigned e = 1; e < alpha; ++e) {
    Integer next = a_p * cur - pk1 * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Integer coefficient_at(const PrimeCoefficientTable& table, std::uint64_t n, const Factorizer& f) {
  if (n == 0) throw UsageError("coefficient_at: n must be positive");
  Integer result = 1;
  const auto& d = table.descriptor();
  for (const auto& pp : f.factor(n)) {
    if (pp.prime > table.bound()) {
      throw InsufficientDataError("prime factor " + std::to_string(pp.prime) + " of " + std::to_string(n) +
                                  " exceeds table bound " + std::to_string(table.bound()));
    }
    result *= hecke_prime_power(table.at(pp.prime), pp.prime, pp.exponent, d.weight, d.level);
  }
  return result;
}

Integer coefficient_at(const PrimeCoefficientTable& table, std::uint64_t n) {
  return coefficient_at(table, n, Factorizer(0));
}

std::vector<Integer> all_coefficients(const PrimeCoefficientTable& table, std::uint64_t x,
                                      const Factorizer& f) {
  if (x > f.limit()) throw UsageError("factorizer limit below requested range");
  const auto& d = table.descriptor();
  std::vector<Integer> a(x + 1);
  if (x >= 1) a[1] = 1;
  for (std::uint64_t n = 2; n <= x; ++n) {
    const std::uint64_t p = f.smallest_prime_factor(n);
    if (p > table.bound()) {
      throw InsufficientDataError("prime " + std::to_string(p) + " exceeds table bound " +
                                  std::to_string(table.bound()));
    }
    std::uint64_t q = 1;
    unsigned e = 0;
    std::uint64_t rest = n;
    while (rest % p == 0) {
      rest /= p;
      q *= p;
      ++e;
    }
    if (rest == 1) {
      a[n] = hecke_prime_power(table.at(p), p, e, d.weight, d.level);
    } else {
      a[n] = a[q] * a[rest];
    }
  }
  return a;
}

ValidationReport validate(const CoefficientTable& table) {
  ValidationReport report;
  const auto& d = descriptor_of(table);
  const PrimeCoefficientTable primes = to_prime_table(table);

  for (std::size_t i = 0; i < primes.size(); ++i) {
    const std::uint64_t p = primes.primes()[i];
    const Integer& a = primes.values()[i];
    ++report.primes_checked;
    if (d.level % p != 0) {
      if (!within_deligne_bound(a, p, d.weight)) {
        report.failures.push_back({p, "Deligne bound violated: |a(" + std::to_string(p) + ")| = " +
                                          Integer(abs(a)).get_str() + " > 2*" + std::to_string(p) + "^" +
                                          std::to_string(d.weight - 1) + "/2"});
      }
    } else if ((d.level / p) % p != 0) {
      const Integer expected = ipow(p, static_cast<unsigned>((d.weight - 2) / 2));
      if (abs(a) != expected) {
        report.warnings.push_back({p, "|a(" + std::to_string(p) + ")| = " + Integer(abs(a)).get_str() +
                                          ", expected " + expected.get_str() + " at p || N"});
      }
    }
  }

  if (const auto* full = std::get_if<FullCoefficientTable>(&table)) {
    const std::uint64_t b = full->bound();
    if (b == 0) {
      report.failures.push_back({1, "empty kind=an table"});
      return report;
    }
    if (full->at(1) != 1) report.failures.push_back({1, "not normalized: a(1) = " + full->at(1).get_str()});
    const auto& ps = primes.primes();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::uint64_t p = ps[i];
      if (p * p <= b) {
        const Integer expected = hecke_prime_power(full->at(p), p, 2, d.weight, d.level);
        if (full->at(p * p) != expected) {
          report.failures.push_back({p * p, "a(" + std::to_string(p * p) + ") = " + full->at(p * p).get_str() +
                                                " disagrees with recursion value " + expected.get_str()});
        }
      }
      for (std::size_t j = i + 1; j < ps.size() && p * ps[j] <= b; ++j) {
        const std::uint64_t n = p * ps[j];
        if (full->at(n) != full->at(p) * full->at(ps[j])) {
          report.failures.push_back({n, "a(" + std::to_string(n) + ") != a(" + std::to_string(p) + ")a(" +
                                            std::to_string(ps[j]) + ")"});
        }
      }
    }
  }
  return report;
}

FullCoefficientTable full_table_from_form(const Level1Form& form, std::string label) {
  if (label.empty()) label = "gen:" + std::to_string(form.weight);
  std::vector<Integer> values(form.series.coeffs().begin() + 1, form.series.coeffs().end());
  return FullCoefficientTable(FormDescriptor{std::move(label), 1, form.weight, FormSource::generated},
                              std::move(values));
}

PrimeCoefficientTable prime_table_from_form(const Level1Form& form, std::string label) {
  return full_table_from_form(form, std::move(label)).prime_table();
}

}  // namespace eigencoprime
