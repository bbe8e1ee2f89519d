#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eigencoprime/coeffs.hpp"
#include "eigencoprime/remote.hpp"
#include "eigencoprime/report.hpp"
#include "eigencoprime/stats.hpp"

namespace eigencoprime::cli {

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// getenv-backed lookup.
EnvLookup process_environment();

/// Settings after applying flags > environment > config file > defaults.
struct RunConfig {
  std::string subcommand;
  std::vector<std::string> forms;  // SPEC strings: label:<s>, path:<file>, gen:<weight>
  ExperimentConfig experiment;
  std::string api_base;
  std::filesystem::path cache_dir = "cache";
  std::filesystem::path data_dir = EIGENCOPRIME_DATA_DIR;
  bool offline = false;
  bool include_ramified = false;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::filesystem::path> out;
  unsigned workers = 1;

  void check() const;
  RemoteConfig remote() const;
};

/// Plain "key=value" lines; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& content);

/// Resolve a form SPEC to a prime table covering `bound`.
PrimeCoefficientTable resolve_form(const std::string& spec, std::uint64_t bound, const RunConfig& config);

/// Parse "ell value" / "ell=value" lines into density overrides.
DensityOverrides parse_overrides(const std::string& content);

/// Density report: one row per form pair.
Report run_table1(const RunConfig& config,
                  const std::vector<std::pair<PrimeCoefficientTable, PrimeCoefficientTable>>& pairs);

/// Exit codes: 0 ok, 1 usage, 2 data, 3 network.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             const EnvLookup& env = process_environment());

int dispatch(int argc, char** argv);

}  // namespace eigencoprime::cli
