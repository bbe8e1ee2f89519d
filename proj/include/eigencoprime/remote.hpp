#pragma once

// HTTP client for an LMFDB-style coefficient service with an on-disk cache.
//
// The service answers GET <url> (url from a template with {label} and
// {bound} placeholders) with a JSON array of decimal strings
// [a(1), a(2), ..., a(B)]. Responses are normalized to kind=ap coefficient
// files before they are cached, one file per label, with an FNV-1a checksum
// of the record body stored in the header.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "eigencoprime/coeffs.hpp"

namespace eigencoprime {

struct RemoteConfig {
  std::string url_template;  // empty: no remote source configured
  std::filesystem::path cache_dir = "cache";
  bool offline = false;
  std::chrono::milliseconds timeout{30'000};
  int retries = 1;
  // Needed when the label does not encode them as "N.k.<...>".
  std::optional<std::uint64_t> level;
  std::optional<int> weight;
};

/// Expand {label} and {bound}; a template with neither gets
/// "/{label}/{bound}" appended.
std::string expand_url(const std::string& url_template, const std::string& label, std::uint64_t bound);

/// Level and weight from an "N.k.x.y" label, if it has that shape.
std::optional<std::pair<std::uint64_t, int>> level_weight_from_label(const std::string& label);

/// Decode a JSON array of a(1..B) into a validated full table.
FullCoefficientTable decode_response(const std::string& body, const FormDescriptor& descriptor);

std::string fnv1a64_hex(std::string_view data);

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, const std::string& label);

/// Cached table for `label` restricted to `bound`, if a cache entry covers it.
/// Throws CacheCorruptionError on checksum mismatch.
std::optional<PrimeCoefficientTable> load_cached(const std::filesystem::path& cache_dir,
                                                 const std::string& label, std::uint64_t bound);

/// Atomic write (temp file then rename); serialized per cache entry.
void store_cached(const std::filesystem::path& cache_dir, const PrimeCoefficientTable& table);

/// Cache lookup, then (unless offline) one GET with a single retry.
/// Errors: NetworkError on transport failure, InsufficientDataError when the
/// response or cache cannot cover `bound`, CacheCorruptionError.
PrimeCoefficientTable fetch_remote(const std::string& label, std::uint64_t bound, const RemoteConfig& config);

}  // namespace eigencoprime
