#pragma once

// Tabular reports and their CSV / JSON / markdown renderings.
//
// A rational cell renders as two columns: `<name>` with the 5-place decimal
// and `<name>_exact` with "num/den". Integer and text cells render as one
// column; float cells (report-only ratios) as a fixed 5-place decimal.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "eigencoprime/numeric.hpp"

namespace eigencoprime {

inline constexpr int kDecimalPlaces = 5;

struct Cell {
  std::string name;
  std::variant<std::string, Integer, Rational, long double, bool> value;
};

struct ReportRow {
  std::vector<Cell> cells;

  ReportRow& text(std::string name, std::string v);
  ReportRow& integer(std::string name, const Integer& v);
  ReportRow& integer(std::string name, std::uint64_t v);
  ReportRow& rational(std::string name, const Rational& v);
  ReportRow& real(std::string name, long double v);
  ReportRow& flag(std::string name, bool v);
};

struct Report {
  std::string title;
  /// Column layout used when `rows` is empty (header-only output).
  std::vector<Cell> schema;
  std::vector<ReportRow> rows;

  /// Flattened column names in output order.
  std::vector<std::string> columns() const;
};

enum class OutputFormat { csv, json, markdown };

OutputFormat parse_output_format(const std::string& s);

std::string render(const Report& report, OutputFormat format);
std::string render_csv(const Report& report);
std::string render_json(const Report& report);
std::string render_markdown(const Report& report);

/// Flattened (column, rendered value) pairs for a row.
std::vector<std::pair<std::string, std::string>> flatten(const ReportRow& row);

std::string format_real(long double v, int places = kDecimalPlaces);

}  // namespace eigencoprime
