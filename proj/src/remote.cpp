#include "eigencoprime/remote.hpp"

#include <httplib.h>

#include <fstream>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "eigencoprime/errors.hpp"

namespace eigencoprime {

namespace fs = std::filesystem;

namespace {

std::mutex& entry_mutex(const fs::path& path) {
  static std::mutex registry_guard;
  static std::unordered_map<std::string, std::unique_ptr<std::mutex>> registry;
  std::lock_guard lock(registry_guard);
  auto& slot = registry[path.string()];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
}

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string target;  // /path?query
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const std::string scheme = scheme_end == std::string::npos ? std::string{} : url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw UsageError("API URL must start with http:// or https://: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string http_get(const std::string& url, const RemoteConfig& config) {
  const SplitUrl parts = split_url(url);
  std::string last_error;
  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    httplib::Client client(parts.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_follow_location(true);
    auto res = client.Get(parts.target);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    if (res->status == 404) {
      throw InsufficientDataError("remote has no coefficients for " + url + " (HTTP 404)");
    }
    last_error = "HTTP " + std::to_string(res->status);
  }
  throw NetworkError("GET " + url + " failed: " + last_error);
}

}  // namespace

std::string expand_url(const std::string& url_template, const std::string& label, std::uint64_t bound) {
  std::string url = url_template;
  if (url.find("{label}") == std::string::npos && url.find("{bound}") == std::string::npos) {
    if (!url.empty() && url.back() == '/') url.pop_back();
    url += "/{label}/{bound}";
  }
  replace_all(url, "{label}", label);
  replace_all(url, "{bound}", std::to_string(bound));
  return url;
}

std::optional<std::pair<std::uint64_t, int>> level_weight_from_label(const std::string& label) {
  std::istringstream in(label);
  std::string level_s, weight_s;
  if (!std::getline(in, level_s, '.') || !std::getline(in, weight_s, '.')) return std::nullopt;
  if (level_s.empty() || weight_s.empty() ||
      level_s.find_first_not_of("0123456789") != std::string::npos ||
      weight_s.find_first_not_of("0123456789") != std::string::npos || weight_s.size() > 4 ||
      level_s.size() > 18) {
    return std::nullopt;
  }
  return std::make_pair(std::stoull(level_s), std::stoi(weight_s));
}

FullCoefficientTable decode_response(const std::string& body, const FormDescriptor& descriptor) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("remote response is not JSON: " + std::string(e.what()));
  }
  if (!doc.is_array()) throw DataError("remote response must be a JSON array of coefficients");
  std::vector<Integer> values;
  values.reserve(doc.size());
  for (const auto& item : doc) {
    std::string text;
    if (item.is_string()) {
      text = item.get<std::string>();
    } else if (item.is_number_integer()) {
      text = item.dump();
    } else {
      throw DataError("remote coefficient is neither a decimal string nor an integer");
    }
    Integer v;
    if (text.empty() || v.set_str(text, 10) != 0) throw DataError("malformed remote coefficient '" + text + "'");
    values.push_back(std::move(v));
  }
  if (values.empty()) throw InsufficientDataError("remote returned no coefficients for " + descriptor.label);
  return FullCoefficientTable(descriptor, std::move(values));
}

std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

fs::path cache_path(const fs::path& cache_dir, const std::string& label) {
  std::string name = label;
  for (char& c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '_';
  }
  return cache_dir / (name + ".ap.txt");
}

std::optional<PrimeCoefficientTable> load_cached(const fs::path& cache_dir, const std::string& label,
                                                 std::uint64_t bound) {
  const fs::path path = cache_path(cache_dir, label);
  std::string content;
  {
    std::lock_guard lock(entry_mutex(path));
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    content = ss.str();
  }
  ParsedFile parsed;
  try {
    parsed = parse_coefficient_file_unchecked(content);
  } catch (const ParseError& e) {
    throw CacheCorruptionError("cache entry " + path.string() + " unreadable: " + e.what());
  }
  const auto it = parsed.extra.find("checksum");
  const std::string actual = "fnv1a64:" + fnv1a64_hex(serialize_records(parsed.table));
  if (it == parsed.extra.end() || it->second != actual) {
    throw CacheCorruptionError("checksum mismatch in cache entry " + path.string());
  }
  auto table = to_prime_table(parsed.table);
  if (table.descriptor().label != label) {
    throw CacheCorruptionError("cache entry " + path.string() + " holds label " + table.descriptor().label);
  }
  if (table.bound() < bound) return std::nullopt;
  FormDescriptor d = table.descriptor();
  d.source = FormSource::remote;
  PrimeCoefficientTable tagged(d, table.bound(), {table.primes().begin(), table.primes().end()},
                               {table.values().begin(), table.values().end()});
  return tagged.restricted(bound);
}

void store_cached(const fs::path& cache_dir, const PrimeCoefficientTable& table) {
  fs::create_directories(cache_dir);
  const fs::path path = cache_path(cache_dir, table.descriptor().label);
  const CoefficientTable wrapped = table;
  const std::string text =
      serialize(wrapped, {{"checksum", "fnv1a64:" + fnv1a64_hex(serialize_records(wrapped))}});
  std::lock_guard lock(entry_mutex(path));
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write cache file " + tmp.string());
    out << text;
    if (!out.flush()) throw DataError("cannot write cache file " + tmp.string());
  }
  fs::rename(tmp, path);
}

PrimeCoefficientTable fetch_remote(const std::string& label, std::uint64_t bound, const RemoteConfig& config) {
  if (bound < 2) throw UsageError("fetch bound must be >= 2");
  if (auto cached = load_cached(config.cache_dir, label, bound)) return *cached;
  if (config.offline) {
    throw InsufficientDataError("offline: no cache entry for " + label + " covering bound " + std::to_string(bound) +
                                " in " + config.cache_dir.string());
  }
  if (config.url_template.empty()) {
    throw InsufficientDataError("no cache entry for " + label +
                                " and no API base configured (--api-base or EIGENCOPRIME_API_BASE)");
  }

  FormDescriptor desc;
  desc.label = label;
  desc.source = FormSource::remote;
  const auto parsed = level_weight_from_label(label);
  if (config.level) {
    desc.level = *config.level;
  } else if (parsed) {
    desc.level = parsed->first;
  } else {
    throw UsageError("cannot infer level from label '" + label + "'; pass --level");
  }
  if (config.weight) {
    desc.weight = *config.weight;
  } else if (parsed) {
    desc.weight = parsed->second;
  } else {
    throw UsageError("cannot infer weight from label '" + label + "'; pass --weight");
  }
  check_descriptor(desc);

  const std::string body = http_get(expand_url(config.url_template, label, bound), config);
  const FullCoefficientTable full = decode_response(body, desc);
  if (full.bound() < bound) {
    throw InsufficientDataError("remote provided " + std::to_string(full.bound()) + " coefficients for " + label +
                                ", need " + std::to_string(bound));
  }
  const ValidationReport report = validate(full);
  if (!report.ok()) throw ValidationError(label + ": " + report.failures.front().message);

  PrimeCoefficientTable table = full.prime_table();
  store_cached(config.cache_dir, table);
  return table.restricted(bound);
}

}  // namespace eigencoprime
