#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "eigencoprime/cli.hpp"
#include "eigencoprime/errors.hpp"
#include "support.hpp"

using namespace eigencoprime;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  const cli::EnvLookup lookup = [env](const std::string& k) -> std::optional<std::string> {
    auto it = env.find(k);
    if (it == env.end()) return std::nullopt;
    return it->second;
  };
  const int code = cli::dispatch(args, out, err, lookup);
  return {code, out.str(), err.str()};
}

fs::path temp(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("eigencoprime-cli-" + name);
  fs::remove_all(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string path_spec(const std::string& label) { return "path:" + fixture_path(label).string(); }

}  // namespace

TEST_CASE("oracle subcommand") {
  const auto r = run({"oracle", "--ell", "5", "--k1", "6", "--k2", "4"});
  CHECK(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["A"] == 57600);
  CHECK(j["C"] == 2600);
  CHECK(j["delta_num"] == 13);
  CHECK(j["delta_den"] == 288);
  CHECK(j["source"] == "formula");
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"m", "k1", "k2", "d", "lambda", "A", "C", "delta_num", "delta_den", "source"});

  const auto e = run({"oracle", "--ell", "5", "--k1", "6", "--k2", "4", "--enumerate"});
  CHECK(nlohmann::json::parse(e.out)["source"] == "enumeration");
  CHECK(nlohmann::json::parse(e.out)["A"] == 57600);
  const auto m = run({"oracle", "--ell", "3", "--k1", "6", "--k2", "4", "--mod", "15"});
  CHECK(nlohmann::json::parse(m.out)["C"] == 468000);

  CHECK(run({"oracle", "--ell", "4", "--k1", "6", "--k2", "4"}).code == 1);
  CHECK(run({"oracle", "--ell", "5", "--k1", "5", "--k2", "4"}).code == 1);
  CHECK(run({"oracle", "--ell", "5", "--k1", "6", "--k2", "4", "--mod", "200"}).code == 1);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({"oracle", "--ell", "5", "--k1", "6", "--k2", "4", "--bogus"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"erdos"}).code == 1);
  CHECK(run({"erdos", "-x", "ten"}).code == 1);
  CHECK(run({"table1", "-x", "1000", "-y", "2000"}).code == 1);
  CHECK(run({"table1", "--format", "xml"}).code == 1);
  CHECK(run({"table1", "--workers", "0"}).code == 1);
  CHECK(run({"table1", "--form1", "gen:12"}).code == 1);
  CHECK(run({"table1", "--form1", "gen:13", "--form2", "gen:12", "-x", "100", "-y", "100", "-L", "10"}).code == 1);
  CHECK(run({"table1", "--form1", "what:12", "--form2", "gen:12", "-x", "100", "-y", "100", "-L", "10"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("offline with an empty cache is a data error") {
  const auto cache = temp("empty-cache");
  const auto r = run({"table1", "--offline", "--cache-dir", cache.string(), "--form1", "label:11.6.a.a", "--form2",
                      "label:13.4.a.a"});
  CHECK(r.code == 2);
  CHECK(r.err.find("offline") != std::string::npos);
}

TEST_CASE("unreachable API is a network error") {
  const auto cache = temp("net-cache");
  const auto r = run({"fetch", "--label", "11.6.a.a", "--bound", "100", "--cache-dir", cache.string(),
                      "--api-base", "http://127.0.0.1:1/{label}/{bound}"});
  CHECK(r.code == 3);
}

TEST_CASE("table1 on the bundled fixtures") {
  const auto r = run({"table1", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["rows"].size() == 3);
  CHECK(j["rows"][0]["form1"] == "11.6.a.a");
  CHECK(j["rows"][0]["form2"] == "13.4.a.a");
  CHECK(j["rows"][0]["R"] == "0.40763");
  CHECK(j["rows"][1]["R"] == "0.42212");
  CHECK(j["rows"][2]["R"] == "0.13178");
  CHECK(j["rows"][0]["pi_x"] == 9592);
  const auto ram = nlohmann::json::parse(run({"table1", "--format", "json", "--include-ramified"}).out);
  CHECK(ram["rows"][0]["alpha"] == "0.40757");
  CHECK(ram["rows"][1]["alpha"] == "0.42414");
  CHECK(ram["rows"][2]["alpha"] == "0.13265");
}

TEST_CASE("table1 on the generated pair") {
  const auto r = run({"table1", "--form1", "gen:12", "--form2", "gen:16", "-x", "1000", "-y", "1000", "-L", "100",
                      "--format", "json"});
  REQUIRE(r.code == 0);
  const auto row = nlohmann::json::parse(r.out)["rows"][0];
  CHECK(row["R"] == "0.00000");
  CHECK(row["C_x"] == 0);
  const std::string flagged = row["flagged"];
  CHECK(flagged.substr(0, 1) == "2");
}

TEST_CASE("table1 markdown header") {
  const auto r = run({"table1", "--format", "markdown"});
  CHECK(r.out.substr(0, r.out.find('\n')) ==
        "| form1 | form2 | x | y | L | pi_x | C_x | R | R_exact | alpha | alpha_exact | flagged |");
}

TEST_CASE("reports are byte-identical across runs and worker counts") {
  const std::vector<std::vector<std::string>> cmds = {
      {"table1"},
      {"counts", "--form1", path_spec("11.6.a.a"), "--form2", path_spec("13.8.a.a"), "-x", "20000", "--ell", "3"},
      {"omega", "--form1", path_spec("13.4.a.a"), "--form2", path_spec("13.8.a.a"), "-x", "100000", "-u", "7"},
      {"oracle", "--ell", "7", "--k1", "12", "--k2", "16", "--mod", "35"},
  };
  for (const auto& cmd : cmds) {
    auto w1 = cmd, w8 = cmd;
    w1.insert(w1.end(), {"--workers", "1"});
    w8.insert(w8.end(), {"--workers", "8"});
    const auto a = run(w1), b = run(w8), c = run(w1);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }
}

TEST_CASE("config precedence: flags > environment > config file > defaults") {
  const auto conf = temp("config.txt");
  write(conf, "# experiment\ncache-dir = /from/config\nx=5000\ny = 4000\n--L=50\n");
  const std::vector<std::string> base = {"table1", "--offline", "--form1", "label:11.6.a.a", "--form2",
                                         "label:13.4.a.a"};
  auto with = [&](std::vector<std::string> extra) {
    auto v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  const std::map<std::string, std::string> env = {{"EIGENCOPRIME_CACHE", "/from/env"}};

  CHECK(run(with({"--config", conf.string(), "--cache-dir", "/from/flag"}), env).err.find("/from/flag") !=
        std::string::npos);
  CHECK(run(with({"--config", conf.string()}), env).err.find("/from/env") != std::string::npos);
  CHECK(run(with({"--config", conf.string()})).err.find("/from/config") != std::string::npos);
  CHECK(run(with({})).err.find(" in cache") != std::string::npos);

  // Numeric keys: the config file supplies x, y, L; a flag overrides one of them.
  const auto a = run({"table1", "--config", conf.string(), "--format", "json"});
  REQUIRE(a.code == 0);
  const auto ja = nlohmann::json::parse(a.out)["rows"][0];
  CHECK(ja["x"] == 5000);
  CHECK(ja["y"] == 4000);
  CHECK(ja["L"] == 50);
  const auto b = run({"table1", "--config", conf.string(), "--format", "json", "-x", "6000"});
  CHECK(nlohmann::json::parse(b.out)["rows"][0]["x"] == 6000);

  write(conf, "this line is not key value\n");
  CHECK(run({"table1", "--config", conf.string()}).code == 1);
  CHECK(run({"table1", "--config", "/nonexistent/conf"}).code == 2);
}

TEST_CASE("parse_config_file and parse_overrides") {
  const auto c = cli::parse_config_file("a=1\n  # comment\n\nb = two words # trailing\n");
  CHECK(c.at("a") == "1");
  CHECK(c.at("b") == "two words");
  const auto o = cli::parse_overrides("# l density\n2 1/2\n3=0.25\n");
  CHECK(o.at(2) == Rational(1, 2));
  CHECK(o.at(3) == Rational(1, 4));
  CHECK_THROWS_AS(cli::parse_overrides("4 1/2\n"), UsageError);
  CHECK_THROWS_AS(cli::parse_overrides("5 3/2\n"), UsageError);
  CHECK_THROWS_AS(cli::parse_overrides("5\n"), UsageError);
}

TEST_CASE("level1 writes a parseable coefficient file") {
  const auto out = temp("delta.txt");
  CHECK(run({"level1", "--weight", "12", "--prec", "50", "--out", out.string()}).code == 0);
  const auto t = parse_coefficient_file(slurp(out));
  const auto& ft = std::get<FullCoefficientTable>(t);
  CHECK(ft.at(2) == -24);
  CHECK(ft.bound() == 49);
  const auto ap = run({"level1", "--weight", "16", "--prec", "30", "--kind", "ap"});
  CHECK(std::get<PrimeCoefficientTable>(parse_coefficient_file(ap.out)).at(2) == 216);
  CHECK(run({"level1", "--weight", "14", "--prec", "30"}).code == 1);
  CHECK(run({"level1", "--weight", "12", "--prec", "30", "--kind", "bn"}).code == 1);
}

TEST_CASE("validate subcommand") {
  CHECK(run({"validate", "--form", path_spec("13.8.a.a")}).code == 0);
  CHECK(run({"validate", "--form", "gen:12", "--bound", "500"}).code == 0);
  const auto bad = temp("bad.txt");
  write(bad, "# label=t\n# level=11\n# weight=6\n# kind=ap\n# bound=3\n2 -4\n3 100\n");
  const auto r = run({"validate", "--form", "path:" + bad.string()});
  CHECK(r.code == 2);
  CHECK(r.out.find("failure") != std::string::npos);
  CHECK(run({"validate", "--form", "path:/nonexistent"}).code == 2);
}

TEST_CASE("fetch subcommand uses the cache offline") {
  const auto cache = temp("fetch-cache");
  fs::create_directories(cache);
  store_cached(cache, f2().restricted(1000));
  const auto r = run({"fetch", "--label", "13.4.a.a", "--bound", "500", "--offline", "--cache-dir", cache.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("13.4.a.a,13,4,500,95") != std::string::npos);
  // EIGENCOPRIME_CACHE supplies the directory.
  CHECK(run({"fetch", "--label", "13.4.a.a", "--bound", "500", "--offline"}, {{"EIGENCOPRIME_CACHE", cache.string()}})
            .code == 0);
}

TEST_CASE("delta, alpha, counts, omega and erdos subcommands") {
  const auto d = run({"delta", "--form1", path_spec("11.6.a.a"), "--form2", path_spec("13.4.a.a"), "--primes", "2..13",
                      "-y", "50000"});
  CHECK(d.code == 0);
  CHECK(std::count(d.out.begin(), d.out.end(), '\n') == 7);

  const auto a = run({"alpha", "--mode", "exact", "-L", "7"});
  CHECK(a.code == 0);
  CHECK(a.out.find("0.35030") != std::string::npos);
  const auto ov = temp("overrides.txt");
  write(ov, "2 1/2\n");
  CHECK(run({"alpha", "--mode", "exact", "-L", "2", "--overrides", ov.string()}).out.find("1/2") != std::string::npos);
  CHECK(run({"alpha", "--mode", "prime", "-B", "6"}).out.find("0.32986") != std::string::npos);
  CHECK(run({"alpha", "--mode", "empirical", "--form1", path_spec("11.6.a.a"), "--form2", path_spec("13.4.a.a"),
             "--include-ramified"})
            .out.find("0.40757") != std::string::npos);
  CHECK(run({"alpha", "--mode", "bogus"}).code == 1);

  const auto c = run({"counts", "--form1", "gen:12", "--form2", "gen:16", "-x", "100", "--x-grid", "30,100",
                      "--format", "json"});
  REQUIRE(c.code == 0);
  const auto jc = nlohmann::json::parse(c.out);
  CHECK(jc["rows"].size() == 2);
  CHECK(jc["rows"][0]["x"] == 30);
  CHECK(run({"counts", "--form1", "gen:12", "--form2", "gen:16", "-x", "100", "--d", "1"}).code == 1);

  const auto o = run({"omega", "--form1", path_spec("13.4.a.a"), "--form2", path_spec("13.8.a.a"), "-x", "1000",
                      "--format", "json"});
  REQUIRE(o.code == 0);
  const auto jo = nlohmann::json::parse(o.out)["rows"][0];
  CHECK(jo["S1"] == jo["sum_pi_star"]);

  const auto e = run({"erdos", "-x", "30", "--format", "json"});
  CHECK(nlohmann::json::parse(e.out)["rows"][0]["count"] == 12);
  CHECK(run({"erdos", "-x", "10", "--rough-y", "2"}).out.find(",5,") != std::string::npos);
}

TEST_CASE("insufficient data exits 2") {
  CHECK(run({"table1", "-x", "200000", "-y", "1000", "-L", "10"}).code == 2);
  CHECK(run({"counts", "--form1", path_spec("11.6.a.a"), "--form2", path_spec("13.4.a.a"), "-x", "1000000"}).code ==
        2);
}
