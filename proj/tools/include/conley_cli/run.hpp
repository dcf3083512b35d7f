#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "conley_cli/config.hpp"

namespace conley::cli {

enum class Command { Block, Index, Winding, Morse, Verify, Orbits, Scan };

/// Throws std::invalid_argument for unknown names.
Command parse_command(const std::string& name);
const char* to_string(Command c);

inline constexpr const char* kVersion = "0.1.0";

struct RunOutcome {
  /// {version, config, results, timing}
  nlohmann::json report;
  /// 0 success, 1 a verifier failed, 2 computational error.
  int exit_code = 0;
};

/// Runs one command. Toolkit errors become an `error` object in the result
/// and exit code 2. CSV exports (cells.csv, trace.csv, census.csv) are
/// written into `csv_dir` when it is given.
RunOutcome run(const RunConfig& config, Command command,
               const std::optional<std::filesystem::path>& csv_dir = std::nullopt);

/// Report envelope around an array of per-command results.
nlohmann::json make_report(const RunConfig& config, nlohmann::json results, double elapsed_seconds);

}  // namespace conley::cli
