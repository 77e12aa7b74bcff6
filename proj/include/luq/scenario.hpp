#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "luq/errors.hpp"
#include "luq/field_sweep.hpp"

namespace luq::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Invalid scenario configuration; key() names the offending entry, e.g. "diagnostic.name".
class ConfigError : public Error {
  public:
    ConfigError(std::string key, const std::string& what) : Error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

  private:
    std::string key_;
};

enum class Command { field, traj, blob, ridge };

const char* command_name(Command cmd);

struct RidgeOptions {
    ScanAxis scan_axis = ScanAxis::rows;
    RidgeMode mode = RidgeMode::min_locus;
    double threshold = 10.0;
};

struct ScenarioConfig {
    Command command = Command::field;
    std::optional<Dynamics> dynamics; // absent for `ridge`
    GridSpec grid;
    DiagnosticSpec diagnostic;
    State2 initial;                    // traj
    std::optional<RidgeOptions> ridge; // post-process the field
    std::filesystem::path input;       // ridge: FIELD-CSV to read
    unsigned workers = 1;
    std::string output_prefix;

    /// Canonical echo of the resolved configuration, written to the manifest.
    /// Excludes execution-only settings (workers, output prefix).
    nlohmann::json resolved;
};

/// Parse and validate a scenario. Relative paths inside the config resolve
/// against base_dir. Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& doc, Command cmd, const std::filesystem::path& base_dir = ".");
ScenarioConfig load_config_file(const std::filesystem::path& path, Command cmd);

struct RunResult {
    std::vector<std::filesystem::path> outputs;
    std::size_t undefined_cells = 0;
};

/// Execute the scenario and write its output files. The manifest is the last
/// entry of RunResult::outputs.
RunResult run_scenario(const ScenarioConfig& config);

} // namespace luq::cli
