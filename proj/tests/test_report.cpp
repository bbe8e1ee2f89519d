#include <doctest.h>

#include <json.hpp>

#include "eigencoprime/errors.hpp"
#include "eigencoprime/report.hpp"
#include "support.hpp"

using namespace eigencoprime;
using namespace testsupport;

namespace {

Report sample() {
  Report r{"sample", {}, {}};
  r.rows.push_back(ReportRow()
                       .text("name", "a,b \"quoted\"")
                       .integer("count", std::uint64_t{3910})
                       .rational("R", Rational(1955, 4796))
                       .real("ratio", 1.234567L)
                       .flag("flagged", true));
  r.rows.push_back(ReportRow()
                       .text("name", "plain")
                       .integer("count", Integer("123456789012345678901234567890"))
                       .rational("R", Rational(1, 3))
                       .real("ratio", -0.000001L)
                       .flag("flagged", false));
  return r;
}

}  // namespace

TEST_CASE("empty report renders a header-only CSV") {
  Report r{"empty", ReportRow().text("a", "").rational("b", Rational(0)).cells, {}};
  CHECK(render_csv(r) == "a,b,b_exact\n");
  CHECK(render_csv(Report{"nothing", {}, {}}) == "\n");
  CHECK(render_json(r) == "{\n  \"report\": \"empty\",\n  \"rows\": []\n}\n");
}

TEST_CASE("CSV quoting and layout") {
  const std::string csv = render_csv(sample());
  CHECK(csv ==
        "name,count,R,R_exact,ratio,flagged\n"
        "\"a,b \"\"quoted\"\"\",3910,0.40763,1955/4796,1.23457,true\n"
        "plain,123456789012345678901234567890,0.33333,1/3,0.00000,false\n");
}

TEST_CASE("JSON keeps key order and agrees with CSV") {
  const auto doc = nlohmann::ordered_json::parse(render_json(sample()));
  CHECK(doc["report"] == "sample");
  const auto& row = doc["rows"][0];
  std::vector<std::string> keys;
  for (auto it = row.begin(); it != row.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"name", "count", "R", "R_exact", "ratio", "flagged"});
  CHECK(row["count"] == 3910);
  CHECK(row["R"] == "0.40763");
  CHECK(row["R_exact"] == "1955/4796");
  CHECK(row["flagged"] == true);
  CHECK(doc["rows"][1]["count"] == "123456789012345678901234567890");

  // Every CSV cell matches the JSON value.
  const Report r = sample();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    for (const auto& [k, v] : flatten(r.rows[i])) {
      const auto& j = doc["rows"][i][k];
      const std::string js = j.is_string() ? j.get<std::string>() : j.dump();
      CHECK(js == v);
    }
  }
}

TEST_CASE("markdown table") {
  const std::string md = render_markdown(sample());
  const auto first = md.substr(0, md.find('\n'));
  CHECK(first == "| name | count | R | R_exact | ratio | flagged |");
  CHECK(md.find("|---|---|---|---|---|---|\n") != std::string::npos);
  CHECK(std::count(md.begin(), md.end(), '\n') == 4);
}

TEST_CASE("rendered rationals round-trip to the rounded exact value") {
  for (long n = 0; n <= 1000; n += 7) {
    const Rational v = frac(n, 997);
    Report r{"x", {}, {}};
    r.rows.push_back(ReportRow().rational("v", v));
    const auto cells = flatten(r.rows[0]);
    CHECK(parse_rational(cells[1].second) == v);
    CHECK(to_decimal(parse_rational(cells[0].second)) == to_decimal(v));
  }
}

TEST_CASE("format_real") {
  CHECK(format_real(0.5L) == "0.50000");
  CHECK(format_real(-0.000001L) == "0.00000");
  CHECK(format_real(-1.5L, 1) == "-1.5");
  CHECK(format_real(std::numeric_limits<long double>::quiet_NaN()) == "nan");
}

TEST_CASE("parse_output_format") {
  CHECK(parse_output_format("csv") == OutputFormat::csv);
  CHECK(parse_output_format("json") == OutputFormat::json);
  CHECK(parse_output_format("markdown") == OutputFormat::markdown);
  CHECK(parse_output_format("md") == OutputFormat::markdown);
  CHECK_THROWS_AS(parse_output_format("xml"), UsageError);
}

TEST_CASE("render dispatches on the format") {
  const Report r = sample();
  CHECK(render(r, OutputFormat::csv) == render_csv(r));
  CHECK(render(r, OutputFormat::json) == render_json(r));
  CHECK(render(r, OutputFormat::markdown) == render_markdown(r));
}
