#include "eigencoprime/report.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "eigencoprime/errors.hpp"

namespace eigencoprime {

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::pair<std::string, std::string>> flatten_cells(const std::vector<Cell>& cells) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : cells) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string>) {
            out.emplace_back(c.name, v);
          } else if constexpr (std::is_same_v<T, Integer>) {
            out.emplace_back(c.name, v.get_str());
          } else if constexpr (std::is_same_v<T, Rational>) {
            out.emplace_back(c.name, to_decimal(v, kDecimalPlaces));
            out.emplace_back(c.name + "_exact", v.get_str());
          } else if constexpr (std::is_same_v<T, long double>) {
            out.emplace_back(c.name, format_real(v));
          } else {
            out.emplace_back(c.name, v ? "true" : "false");
          }
        },
        c.value);
  }
  return out;
}

}  // namespace

ReportRow& ReportRow::text(std::string name, std::string v) {
  cells.push_back({std::move(name), std::move(v)});
  return *this;
}
ReportRow& ReportRow::integer(std::string name, const Integer& v) {
  cells.push_back({std::move(name), v});
  return *this;
}
ReportRow& ReportRow::integer(std::string name, std::uint64_t v) {
  cells.push_back({std::move(name), Integer(static_cast<unsigned long>(v))});
  return *this;
}
ReportRow& ReportRow::rational(std::string name, const Rational& v) {
  cells.push_back({std::move(name), v});
  return *this;
}
ReportRow& ReportRow::real(std::string name, long double v) {
  cells.push_back({std::move(name), v});
  return *this;
}
ReportRow& ReportRow::flag(std::string name, bool v) {
  cells.push_back({std::move(name), v});
  return *this;
}

std::vector<std::string> Report::columns() const {
  const auto& cells = rows.empty() ? schema : rows.front().cells;
  std::vector<std::string> out;
  for (auto& [k, v] : flatten_cells(cells)) out.push_back(k);
  return out;
}

std::vector<std::pair<std::string, std::string>> flatten(const ReportRow& row) { return flatten_cells(row.cells); }

std::string format_real(long double v, int places) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*Lf", places, v);
  std::string s = buf;
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "markdown" || s == "md") return OutputFormat::markdown;
  throw UsageError("unknown output format '" + s + "' (csv, json, markdown)");
}

std::string render_csv(const Report& report) {
  std::string out;
  const auto cols = report.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + csv_quote(cols[i]);
  out += "\n";
  for (const auto& row : report.rows) {
    const auto cells = flatten(row);
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_quote(cells[i].second);
    out += "\n";
  }
  return out;
}

std::string render_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["report"] = report.title;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& c : row.cells) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              obj[c.name] = v;
            } else if constexpr (std::is_same_v<T, Integer>) {
              // Exact integers beyond 64 bits stay strings to avoid precision loss.
              if (v.fits_slong_p()) {
                obj[c.name] = v.get_si();
              } else {
                obj[c.name] = v.get_str();
              }
            } else if constexpr (std::is_same_v<T, Rational>) {
              obj[c.name] = to_decimal(v, kDecimalPlaces);
              obj[c.name + "_exact"] = v.get_str();
            } else if constexpr (std::is_same_v<T, long double>) {
              obj[c.name] = format_real(v);
            } else {
              obj[c.name] = v;
            }
          },
          c.value);
    }
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

std::string render_markdown(const Report& report) {
  std::string out;
  const auto cols = report.columns();
  out += "|";
  for (const auto& c : cols) out += " " + c + " |";
  out += "\n|";
  for (std::size_t i = 0; i < cols.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& row : report.rows) {
    out += "|";
    for (const auto& [k, v] : flatten(row)) out += " " + v + " |";
    out += "\n";
  }
  return out;
}

std::string render(const Report& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return render_csv(report);
    case OutputFormat::json: return render_json(report);
    case OutputFormat::markdown: return render_markdown(report);
  }
  return {};
}

}  // namespace eigencoprime
