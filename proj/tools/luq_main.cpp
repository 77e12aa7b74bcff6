// Command-line scenario runner: luq field|traj|blob|ridge --config <path> [--workers N] [--out <prefix>]
//
// Exit codes: 0 success, 2 validation error, 3 runtime/domain error.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "luq/scenario.hpp"

namespace {

constexpr int kValidationError = 2;
constexpr int kRuntimeError = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian uncertainty and descriptor fields over 2-D flows and maps"};
    app.set_version_flag("--version", luq::cli::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<unsigned> workers;
    std::optional<std::string> out_prefix;

    struct Entry {
        luq::cli::Command cmd;
        const char* help;
    };
    const Entry entries[] = {
        {luq::cli::Command::field, "Evaluate a diagnostic over a grid of initial conditions"},
        {luq::cli::Command::traj, "Dump a single trajectory or map orbit"},
        {luq::cli::Command::blob, "Blob-centroid error for a mesh of blob centres"},
        {luq::cli::Command::ridge, "Extract minimal ridges from a FIELD-CSV file"},
    };
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(luq::cli::command_name(e.cmd), e.help);
        sub->add_option("--config", config_path, "Scenario JSON file")->required();
        sub->add_option("--workers", workers, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_prefix, "Output path prefix (overrides config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kValidationError;
    }

    luq::cli::Command cmd = luq::cli::Command::field;
    for (const auto& e : entries)
        if (app.got_subcommand(luq::cli::command_name(e.cmd)))
            cmd = e.cmd;

    luq::cli::ScenarioConfig cfg;
    try {
        cfg = luq::cli::load_config_file(config_path, cmd);
        if (workers)
            cfg.workers = *workers;
        if (out_prefix)
            cfg.output_prefix = *out_prefix;
    } catch (const luq::cli::ConfigError& e) {
        std::cerr << "luq: invalid config: " << e.what() << '\n';
        return kValidationError;
    }

    try {
        const auto result = luq::cli::run_scenario(cfg);
        for (const auto& path : result.outputs)
            std::cout << "wrote " << path.string() << '\n';
        if (result.undefined_cells > 0)
            std::cout << result.undefined_cells << " undefined cells\n";
    } catch (const std::exception& e) {
        std::cerr << "luq: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}
