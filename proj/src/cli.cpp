#include "eigencoprime/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "eigencoprime/errors.hpp"
#include "eigencoprime/galois.hpp"
#include "eigencoprime/qseries.hpp"

namespace eigencoprime::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kEnvApiBase = "EIGENCOPRIME_API_BASE";
constexpr const char* kEnvCache = "EIGENCOPRIME_CACHE";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError("invalid value for " + what + ": '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& s, const std::string& what) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw UsageError("invalid boolean for " + what + ": '" + s + "'");
}

// Options bound by key so that command-line values can be layered over
// environment and config-file values after parsing.
class FlagSet {
 public:
  CLI::Option* option(CLI::App* app, const std::string& names, const std::string& key, const std::string& help) {
    auto& e = entries_.emplace_back(std::make_unique<Entry>());
    e->key = key;
    e->opt = app->add_option(names, e->value, help);
    return e->opt;
  }
  CLI::Option* flag(CLI::App* app, const std::string& names, const std::string& key, const std::string& help) {
    auto& e = entries_.emplace_back(std::make_unique<Entry>());
    e->key = key;
    e->is_flag = true;
    e->opt = app->add_flag(names, e->flag, help);
    return e->opt;
  }
  std::optional<std::string> given(const std::string& key) const {
    for (const auto& e : entries_) {
      if (e->key != key || e->opt->count() == 0) continue;
      return e->is_flag ? std::string(e->flag ? "true" : "false") : e->value;
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* opt = nullptr;
    std::string value;
    bool flag = false;
    bool is_flag = false;
  };
  std::vector<std::unique_ptr<Entry>> entries_;
};

struct Settings {
  const FlagSet& flags;
  const EnvLookup& env;
  std::map<std::string, std::string> config;

  std::optional<std::string> get(const std::string& key, const char* env_name = nullptr) const {
    if (auto v = flags.given(key)) return v;
    if (env_name) {
      if (auto v = env(env_name)) return v;
    }
    if (auto it = config.find(key); it != config.end()) return it->second;
    return std::nullopt;
  }
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const {
    auto v = get(key);
    return v ? to_u64(*v, key) : fallback;
  }
  std::optional<std::uint64_t> u64_opt(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return to_u64(*v, key);
  }
  bool boolean(const std::string& key) const {
    auto v = get(key);
    return v ? to_bool(*v, key) : false;
  }
  std::string str(const std::string& key, const std::string& fallback = {}) const {
    return get(key).value_or(fallback);
  }
  std::string required(const std::string& key) const {
    auto v = get(key);
    if (!v || v->empty()) throw UsageError("--" + key + " is required");
    return *v;
  }
};

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.out) {
    if (config.out->has_parent_path()) fs::create_directories(config.out->parent_path());
    std::ofstream f(*config.out, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + config.out->string());
    f << text;
  } else {
    out << text;
  }
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const auto v = to_u64(s, "--primes");
    return {v, v};
  }
  return {to_u64(s.substr(0, dots), "--primes"), to_u64(s.substr(dots + 2), "--primes")};
}

std::vector<std::uint64_t> parse_list(const std::string& s, const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_u64(item, what));
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

std::string pair_name(const PrimeCoefficientTable& t) { return t.descriptor().label; }

nlohmann::ordered_json json_integer(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

// ---- subcommands ----------------------------------------------------------

std::string cmd_level1(const Settings& s, const RunConfig& config) {
  const auto weight = static_cast<int>(s.u64("weight", 0));
  const auto prec = s.u64("prec", 0);
  if (prec < 2) throw UsageError("--prec must be >= 2");
  const std::string kind = s.str("kind", "an");
  const Level1Form form = level1_eigenform(weight, prec, config.workers);
  const std::string label = s.str("label", "gen:" + std::to_string(weight));
  const FullCoefficientTable full = full_table_from_form(form, label);
  if (kind == "an") return serialize(full);
  if (kind == "ap") return serialize(full.prime_table());
  throw UsageError("--kind must be an or ap");
}

std::string cmd_fetch(const Settings& s, const RunConfig& config) {
  RemoteConfig rc = config.remote();
  if (auto lvl = s.u64_opt("level")) rc.level = *lvl;
  if (auto w = s.u64_opt("weight")) rc.weight = static_cast<int>(*w);
  const std::string label = s.required("label");
  const auto bound = s.u64("bound", 0);
  const PrimeCoefficientTable t = fetch_remote(label, bound, rc);
  Report r{"fetch", {}, {}};
  ReportRow row;
  row.text("label", label)
      .integer("level", t.descriptor().level)
      .integer("weight", static_cast<std::uint64_t>(t.descriptor().weight))
      .integer("bound", t.bound())
      .integer("primes", static_cast<std::uint64_t>(t.size()))
      .text("cache", cache_path(rc.cache_dir, label).string());
  r.rows.push_back(std::move(row));
  return render(r, config.format);
}

std::pair<std::string, bool> cmd_validate(const Settings& s, const RunConfig& config) {
  const std::string spec = s.required("form");
  CoefficientTable table;
  if (spec.starts_with("path:")) {
    ParsedFile parsed = parse_coefficient_file_unchecked(read_file(spec.substr(5)));
    table = std::move(parsed.table);
  } else {
    table = resolve_form(spec, s.u64("bound", 1000), config);
  }
  const ValidationReport v = validate(table);
  Report r{"validate", {}, {}};
  auto schema = ReportRow().text("label", "").text("severity", "").integer("index", std::uint64_t{0}).text("message", "");
  r.schema = schema.cells;
  const std::string label = descriptor_of(table).label;
  for (const auto& f : v.failures) {
    r.rows.push_back(ReportRow().text("label", label).text("severity", "failure").integer("index", f.index).text("message", f.message));
  }
  for (const auto& w : v.warnings) {
    r.rows.push_back(ReportRow().text("label", label).text("severity", "warning").integer("index", w.index).text("message", w.message));
  }
  r.rows.push_back(ReportRow()
                       .text("label", label)
                       .text("severity", v.ok() ? "ok" : "failed")
                       .integer("index", static_cast<std::uint64_t>(v.primes_checked))
                       .text("message", "primes checked"));
  return {render(r, config.format), v.ok()};
}

std::string cmd_oracle(const Settings& s) {
  const auto ell = s.u64("ell", 0);
  const WeightPair w(static_cast<int>(s.u64("k1", 0)), static_cast<int>(s.u64("k2", 0)));
  const auto mod = s.u64_opt("mod");
  const auto cap = s.u64("cap", kDefaultEnumerationCap);
  const unsigned workers = static_cast<unsigned>(s.u64("workers", 1));
  ImageCounts c;
  if (mod) {
    c = pair_counts_enumerated(*mod, w, cap, workers);
  } else if (s.boolean("enumerate")) {
    if (!is_prime(ell)) throw UsageError("--ell must be prime");
    c = pair_counts_enumerated(ell, w, cap, workers);
  } else {
    if (!is_prime(ell)) throw UsageError("--ell must be prime");
    c = maximal_image_counts(ell, w);
  }
  nlohmann::ordered_json j;
  j["m"] = c.m;
  j["k1"] = w.k1;
  j["k2"] = w.k2;
  j["d"] = c.d;
  j["lambda"] = c.lambda_size;
  j["A"] = json_integer(c.A);
  j["C"] = json_integer(c.C);
  j["delta_num"] = json_integer(c.delta.get_num());
  j["delta_den"] = json_integer(c.delta.get_den());
  j["source"] = to_string(c.source);
  if (c.special) j["special"] = true;
  return j.dump() + "\n";
}

std::vector<std::pair<PrimeCoefficientTable, PrimeCoefficientTable>> resolve_pairs(const RunConfig& config,
                                                                                    std::uint64_t bound) {
  std::vector<std::pair<PrimeCoefficientTable, PrimeCoefficientTable>> pairs;
  if (config.forms.size() == 2) {
    pairs.emplace_back(resolve_form(config.forms[0], bound, config), resolve_form(config.forms[1], bound, config));
    return pairs;
  }
  if (!config.forms.empty()) throw UsageError("give both --form1 and --form2");
  throw UsageError("--form1 and --form2 are required");
}

std::string cmd_delta(const Settings& s, const RunConfig& config) {
  const auto [lo, hi] = parse_range(s.required("primes"));
  const auto y = config.experiment.y;
  auto pairs = resolve_pairs(config, y);
  const FormPairDataset ds(pairs[0].first, pairs[0].second);
  Report r{"delta", {}, {}};
  const std::uint64_t pi = ds.prime_index_limit(y);
  for (std::uint64_t ell : sieve_primes(hi)) {
    if (ell < lo) continue;
    const DensityEstimate e = delta_empirical(ds, y, ell, config.include_ramified);
    const ExceptionalReport x = detect_exceptional(ds, ell, y);
    r.rows.push_back(ReportRow()
                         .integer("ell", ell)
                         .integer("y", y)
                         .integer("pi_y", pi)
                         .integer("pi_m", e.numerator)
                         .rational("delta_empirical", e.value())
                         .rational("delta_model", delta_model(ell, config.experiment.overrides))
                         .real("deviation", x.deviation)
                         .real("threshold", x.threshold)
                         .flag("flagged", x.flagged));
  }
  return render(r, config.format);
}

std::string cmd_alpha(const Settings& s, const RunConfig& config) {
  const std::string mode = s.required("mode");
  const auto& ex = config.experiment;
  Report r{"alpha", {}, {}};
  if (mode == "empirical") {
    auto pairs = resolve_pairs(config, ex.y);
    const FormPairDataset ds(pairs[0].first, pairs[0].second);
    r.rows.push_back(ReportRow()
                         .text("mode", mode)
                         .integer("L", ex.L)
                         .integer("y", ex.y)
                         .rational("alpha", alpha_empirical(ds, ex.L, ex.y, config.include_ramified)));
  } else if (mode == "exact") {
    const AlphaProduct a = alpha_exact_product(ex.L, ex.overrides);
    r.rows.push_back(ReportRow().text("mode", mode).integer("L", ex.L).rational("alpha", a.value).real("tail_bound", a.tail_bound));
  } else if (mode == "prime") {
    const auto B = s.u64("B", 10000);
    const AlphaPrime a = alpha_prime_truncated(B, ex.overrides);
    r.rows.push_back(ReportRow()
                         .text("mode", mode)
                         .integer("B", B)
                         .real("alpha_prime", a.value)
                         .real("lower", a.lower)
                         .real("upper", a.upper)
                         .real("euler_product", a.euler_product));
  } else {
    throw UsageError("--mode must be empirical, exact or prime");
  }
  return render(r, config.format);
}

std::string cmd_counts(const Settings& s, const RunConfig& config) {
  std::vector<std::uint64_t> grid;
  if (auto g = s.get("x-grid")) {
    grid = parse_list(*g, "--x-grid");
  } else {
    grid = {config.experiment.x};
  }
  const std::uint64_t xmax = *std::max_element(grid.begin(), grid.end());
  auto pairs = resolve_pairs(config, xmax);
  const FormPairDataset ds(pairs[0].first, pairs[0].second);
  const auto ell = s.u64_opt("ell");
  Report r{"counts", {}, {}};
  for (std::uint64_t x : grid) {
    const IntegerGcdCounts c = integer_gcd_counts(ds, x, config.experiment.d, config.workers);
    ReportRow row;
    row.integer("x", x)
        .integer("d", config.experiment.d)
        .integer("count_a", c.count_a)
        .integer("count_b", c.count_b)
        .integer("count_cor", c.count_cor)
        .integer("count_single1", c.count_single1)
        .integer("count_single2", c.count_single2)
        .real("ratio_a", c.envelope_l3 > 0 ? c.count_a / c.envelope_l3 : NAN)
        .real("ratio_b", c.envelope_l3_l2 > 0 ? c.count_b / c.envelope_l3_l2 : NAN)
        .real("ratio_cor", c.envelope_l3_l2 > 0 ? c.count_cor / c.envelope_l3_l2 : NAN);
    if (ell) {
      const VSums v = v_sums(ds, x, *ell);
      const ReciprocalSum rs = reciprocal_prime_sum(ds, x, *ell);
      row.integer("ell", *ell)
          .integer("sum_v", v.sum_v)
          .integer("sum_v_sq", v.sum_v_sq)
          .integer("v_zero_count", v.zero_count)
          .real("sum_v_main_term", v.main_term_v)
          .real("sum_v_sq_main_term", v.main_term_v_sq)
          .real("reciprocal_sum", static_cast<long double>(rs.value.get_d()))
          .real("reciprocal_main_term", rs.main_term);
    }
    r.rows.push_back(std::move(row));
  }
  return render(r, config.format);
}

std::string cmd_omega(const Settings& s, const RunConfig& config) {
  const auto x = config.experiment.x;
  auto pairs = resolve_pairs(config, x);
  const FormPairDataset ds(pairs[0].first, pairs[0].second);
  const OmegaSums o = omega_sums(ds, x, config.experiment.u, config.experiment.L, config.experiment.overrides,
                                 config.workers);
  const std::uint64_t pi = ds.prime_index_limit(x);
  const std::uint64_t identity_rhs = [&] {
    std::uint64_t total = 0;
    for (auto ell : gcd_prime_support(ds, x)) total += pi_star(ds, x, ell, true);
    return total;
  }();
  (void)s;
  const long double x_over_log = static_cast<long double>(x) / std::log(static_cast<long double>(x));
  Report r{"omega", {}, {}};
  r.rows.push_back(ReportRow()
                       .integer("x", x)
                       .text("u", config.experiment.u ? std::to_string(*config.experiment.u) : "")
                       .integer("pi_x", pi)
                       .integer("terms", o.terms)
                       .integer("S1", o.S1)
                       .integer("S2", o.S2)
                       .integer("S1_u", o.S1_u)
                       .integer("S2_u", o.S2_u)
                       .integer("sum_pi_star", identity_rhs)
                       .real("c1_model", o.c1_model)
                       .real("c2_model", o.c2_model)
                       .real("c_tail_bound", o.c_tail_bound)
                       .real("S1_u_ratio", o.S1_u / x_over_log)
                       .real("S2_u_ratio", o.S2_u / x_over_log));
  return render(r, config.format);
}

std::string cmd_erdos(const Settings& s, const RunConfig& config) {
  const auto x = config.experiment.x;
  const std::uint64_t count = erdos_phi_count(x);
  ReportRow row;
  row.integer("x", x).integer("count", count);
  if (x >= 16) {
    const long double main = erdos_main_term(x);
    row.real("main_term", main).real("ratio", count / main);
  }
  if (auto y = s.u64_opt("rough-y")) {
    const std::uint64_t rough = rough_count(x, *y);
    long double mertens = static_cast<long double>(x);
    if (*y >= 2) {
      for (auto p : sieve_primes(*y)) mertens *= 1.0L - 1.0L / p;
    }
    row.integer("rough_y", *y).integer("rough_count", rough).real("rough_main_term", mertens);
  }
  Report r{"erdos", {}, {}};
  r.rows.push_back(std::move(row));
  return render(r, config.format);
}

}  // namespace

EnvLookup process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  };
}

void RunConfig::check() const {
  experiment.check();
  if (workers < 1) throw UsageError("--workers must be >= 1");
}

RemoteConfig RunConfig::remote() const {
  RemoteConfig rc;
  rc.url_template = api_base;
  rc.cache_dir = cache_dir;
  rc.offline = offline;
  return rc;
}

std::map<std::string, std::string> parse_config_file(const std::string& content) {
  std::map<std::string, std::string> out;
  std::istringstream in(content);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(n) + ": expected key=value");
    auto strip = [](std::string v) {
      const auto a = v.find_first_not_of(" \t\r");
      const auto b = v.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string{} : v.substr(a, b - a + 1);
    };
    std::string key = strip(line.substr(0, eq));
    while (key.starts_with("-")) key.erase(0, 1);
    out[key] = strip(line.substr(eq + 1));
  }
  return out;
}

DensityOverrides parse_overrides(const std::string& content) {
  DensityOverrides out;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == '=' || c == ',' || c == '\t') c = ' ';
    }
    std::istringstream fields(line);
    std::string ell_s, value_s;
    if (!(fields >> ell_s)) continue;
    if (!(fields >> value_s)) throw UsageError("override line needs '<ell> <density>'");
    const auto ell = to_u64(ell_s, "override prime");
    if (!is_prime(ell)) throw UsageError("override key " + ell_s + " is not prime");
    const Rational v = parse_rational(value_s);
    if (v < 0 || v > 1) throw UsageError("override density for " + ell_s + " outside [0, 1]");
    out[ell] = v;
  }
  return out;
}

PrimeCoefficientTable resolve_form(const std::string& spec, std::uint64_t bound, const RunConfig& config) {
  if (spec.starts_with("label:")) return fetch_remote(spec.substr(6), bound, config.remote());
  if (spec.starts_with("path:")) {
    const CoefficientTable t = parse_coefficient_file(read_file(spec.substr(5)));
    return to_prime_table(t).restricted(bound);
  }
  if (spec.starts_with("gen:")) {
    const int weight = static_cast<int>(to_u64(spec.substr(4), "gen weight"));
    return prime_table_from_form(level1_eigenform(weight, bound + 1, config.workers), spec);
  }
  throw UsageError("form spec must be label:<name>, path:<file> or gen:<weight>, got '" + spec + "'");
}

Report run_table1(const RunConfig& config,
                  const std::vector<std::pair<PrimeCoefficientTable, PrimeCoefficientTable>>& pairs) {
  const auto& ex = config.experiment;
  ex.check();
  Report r{"table1", {}, {}};
  r.schema = ReportRow()
                 .text("form1", "")
                 .text("form2", "")
                 .integer("x", std::uint64_t{0})
                 .integer("y", std::uint64_t{0})
                 .integer("L", std::uint64_t{0})
                 .integer("pi_x", std::uint64_t{0})
                 .integer("C_x", std::uint64_t{0})
                 .rational("R", Rational(0))
                 .rational("alpha", Rational(0))
                 .text("flagged", "")
                 .cells;
  for (const auto& [t1, t2] : pairs) {
    const FormPairDataset ds(t1, t2);
    const CoprimeCount c = coprime_prime_count(ds, ex.x, config.workers);
    const Rational alpha = alpha_empirical(ds, ex.L, ex.y, config.include_ramified);
    std::string flagged;
    if (ex.L >= 2) {
      for (auto ell : sieve_primes(ex.L)) {
        if (detect_exceptional(ds, ell, ex.y).flagged) flagged += (flagged.empty() ? "" : " ") + std::to_string(ell);
      }
    }
    r.rows.push_back(ReportRow()
                         .text("form1", pair_name(t1))
                         .text("form2", pair_name(t2))
                         .integer("x", ex.x)
                         .integer("y", ex.y)
                         .integer("L", ex.L)
                         .integer("pi_x", c.ratio.denominator)
                         .integer("C_x", c.count)
                         .rational("R", c.ratio.value())
                         .rational("alpha", alpha)
                         .text("flagged", flagged));
  }
  return r;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Coprimality statistics for Fourier coefficients of pairs of eigenforms", "eigencoprime"};
  app.require_subcommand(1);
  app.fallthrough();
  FlagSet flags;
  std::string config_path;
  app.add_option("--config", config_path, "key=value config file (flags > env > config > defaults)");
  flags.option(&app, "--api-base", "api-base", "URL template with {label} and {bound} (env EIGENCOPRIME_API_BASE)");
  flags.option(&app, "--cache-dir", "cache-dir", "coefficient cache directory (env EIGENCOPRIME_CACHE, default ./cache)");
  flags.flag(&app, "--offline", "offline", "never touch the network; cache only");
  flags.option(&app, "--format", "format", "csv, json or markdown");
  flags.option(&app, "--out", "out", "write the report to this path instead of stdout");
  flags.option(&app, "--workers", "workers", "worker threads (results do not depend on it)");
  flags.option(&app, "--data-dir", "data-dir", "directory with the bundled coefficient fixtures");

  auto* level1 = app.add_subcommand("level1", "generate a level-1 eigenform as a coefficient file");
  flags.option(level1, "--weight", "weight", "12, 16, 18, 20, 22 or 26")->required();
  flags.option(level1, "--prec", "prec", "number of q-expansion coefficients")->required();
  flags.option(level1, "--kind", "kind", "an (default) or ap");
  flags.option(level1, "--label", "label", "label written to the header");

  auto* fetch = app.add_subcommand("fetch", "fetch a(p) from the remote service into the cache");
  flags.option(fetch, "--label", "label", "form label")->required();
  flags.option(fetch, "--bound", "bound", "largest prime needed")->required();
  flags.option(fetch, "--level", "level", "level, when the label does not encode it");
  flags.option(fetch, "--weight", "weight", "weight, when the label does not encode it");

  auto* validate_cmd = app.add_subcommand("validate", "check a coefficient table");
  flags.option(validate_cmd, "--form", "form", "label:<name>, path:<file> or gen:<weight>")->required();
  flags.option(validate_cmd, "--bound", "bound", "bound for label:/gen: forms (default 1000)");

  auto* oracle = app.add_subcommand("oracle", "maximal-image counts |A|, |C|, delta as JSON");
  flags.option(oracle, "--ell", "ell", "prime modulus")->required();
  flags.option(oracle, "--k1", "k1", "weight of the first form")->required();
  flags.option(oracle, "--k2", "k2", "weight of the second form")->required();
  flags.option(oracle, "--mod", "mod", "enumerate over Z/m instead of using the closed form");
  flags.flag(oracle, "--enumerate", "enumerate", "enumerate at m = ell");
  flags.option(oracle, "--cap", "cap", "enumeration cap (default 100)");

  auto add_pair = [&](CLI::App* sub) {
    flags.option(sub, "--form1", "form1", "first form SPEC");
    flags.option(sub, "--form2", "form2", "second form SPEC");
    flags.flag(sub, "--include-ramified", "include-ramified", "count primes dividing mN as well");
  };

  auto* table1 = app.add_subcommand("table1", "R(x) and alpha_{L,y} per form pair");
  add_pair(table1);
  flags.option(table1, "-x", "x", "main bound (default 100000)");
  flags.option(table1, "-y", "y", "density bound (default 50000)");
  flags.option(table1, "-L", "L", "prime cutoff (default 100)");

  auto* delta = app.add_subcommand("delta", "empirical delta(y, l) against the model");
  add_pair(delta);
  flags.option(delta, "--primes", "primes", "prime range LO..HI")->required();
  flags.option(delta, "-y", "y", "density bound");
  flags.option(delta, "--overrides", "overrides", "file of '<l> <density>' lines");

  auto* alpha = app.add_subcommand("alpha", "alpha constants");
  add_pair(alpha);
  flags.option(alpha, "--mode", "mode", "empirical, exact or prime")->required();
  flags.option(alpha, "--overrides", "overrides", "file of '<l> <density>' lines");
  flags.option(alpha, "-L", "L", "prime cutoff");
  flags.option(alpha, "-y", "y", "density bound (empirical)");
  flags.option(alpha, "-B", "B", "Mobius sum cutoff (prime, default 10000)");

  auto* counts = app.add_subcommand("counts", "gcd counts over integers n <= x");
  add_pair(counts);
  flags.option(counts, "-x", "x", "bound")->required();
  flags.option(counts, "--d", "d", "modulus d > 1 (default 2)");
  flags.option(counts, "--x-grid", "x-grid", "comma-separated list of bounds");
  flags.option(counts, "--ell", "ell", "also report v(l, n) sums and reciprocal prime sum for this prime");

  auto* omega_cmd = app.add_subcommand("omega", "sums of omega over gcds of prime coefficients");
  add_pair(omega_cmd);
  flags.option(omega_cmd, "-x", "x", "bound")->required();
  flags.option(omega_cmd, "-u", "u", "count only prime divisors <= u");
  flags.option(omega_cmd, "-L", "L", "truncation for c1, c2 (default 100)");
  flags.option(omega_cmd, "--overrides", "overrides", "file of '<l> <density>' lines");

  auto* erdos = app.add_subcommand("erdos", "#{n <= x : gcd(n, phi(n)) = 1}");
  flags.option(erdos, "-x", "x", "bound")->required();
  flags.option(erdos, "--rough-y", "rough-y", "also count n <= x free of primes <= y");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorClass::usage);
  }

  try {
    Settings s{flags, env, {}};
    if (!config_path.empty()) s.config = parse_config_file(read_file(config_path));

    RunConfig config;
    config.subcommand = app.get_subcommands().front()->get_name();
    config.api_base = s.str("api-base");
    if (auto v = s.get("cache-dir", kEnvCache)) config.cache_dir = *v;
    if (auto v = s.get("api-base", kEnvApiBase)) config.api_base = *v;
    if (auto v = s.get("data-dir")) config.data_dir = *v;
    config.offline = s.boolean("offline");
    config.include_ramified = s.boolean("include-ramified");
    config.format = parse_output_format(s.str("format", "csv"));
    if (auto v = s.get("out")) config.out = *v;
    config.workers = static_cast<unsigned>(s.u64("workers", 1));
    auto& ex = config.experiment;
    ex.x = s.u64("x", ex.x);
    ex.y = s.u64("y", std::min(ex.y, ex.x));
    ex.L = s.u64("L", std::min(ex.L, ex.y));
    ex.d = s.u64("d", ex.d);
    ex.u = s.u64_opt("u");
    if (auto v = s.get("overrides")) ex.overrides = parse_overrides(read_file(*v));
    if (auto f1 = s.get("form1")) config.forms.push_back(*f1);
    if (auto f2 = s.get("form2")) config.forms.push_back(*f2);
    config.check();

    const std::string& cmd = config.subcommand;
    if (cmd == "level1") {
      emit(config, out, cmd_level1(s, config));
    } else if (cmd == "fetch") {
      emit(config, out, cmd_fetch(s, config));
    } else if (cmd == "validate") {
      auto [text, ok] = cmd_validate(s, config);
      emit(config, out, text);
      if (!ok) return static_cast<int>(ErrorClass::data);
    } else if (cmd == "oracle") {
      emit(config, out, cmd_oracle(s));
    } else if (cmd == "table1") {
      std::vector<std::pair<PrimeCoefficientTable, PrimeCoefficientTable>> pairs;
      if (config.forms.empty()) {
        // The three bundled fixtures, pairwise.
        std::vector<PrimeCoefficientTable> fs;
        for (const char* name : {"11.6.a.a", "13.4.a.a", "13.8.a.a"}) {
          fs.push_back(resolve_form("path:" + (config.data_dir / (std::string(name) + ".ap.txt")).string(), ex.x, config));
        }
        pairs = {{fs[0], fs[1]}, {fs[0], fs[2]}, {fs[1], fs[2]}};
      } else {
        pairs = resolve_pairs(config, ex.x);
      }
      emit(config, out, render(run_table1(config, pairs), config.format));
    } else if (cmd == "delta") {
      emit(config, out, cmd_delta(s, config));
    } else if (cmd == "alpha") {
      emit(config, out, cmd_alpha(s, config));
    } else if (cmd == "counts") {
      emit(config, out, cmd_counts(s, config));
    } else if (cmd == "omega") {
      emit(config, out, cmd_omega(s, config));
    } else if (cmd == "erdos") {
      emit(config, out, cmd_erdos(s, config));
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const auto cls = e.error_class();
    return cls == ErrorClass::internal ? static_cast<int>(ErrorClass::data) : static_cast<int>(cls);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorClass::data);
  }
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace eigencoprime::cli
