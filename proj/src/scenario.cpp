#include "luq/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <set>

#include "luq/gridded_data.hpp"
#include "luq/trajectory.hpp"

namespace luq::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
    if (!obj.is_object())
        throw ConfigError(path.empty() ? "config" : path, "expected a JSON object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError(join(path, key), "unknown key");
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key))
        throw ConfigError(join(path, key), "missing required key");
    return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number() || !std::isfinite(v.get<double>()))
        throw ConfigError(join(path, key), "expected a finite number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
    return obj.contains(key) ? number(obj, key, path) : fallback;
}

std::size_t count(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(join(path, key), "expected a non-negative integer");
    return v.get<std::size_t>();
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_string())
        throw ConfigError(join(path, key), "expected a string");
    return v.get<std::string>();
}

State2 point(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(join(path, key), "expected [x, y]");
    const State2 s{v[0].get<double>(), v[1].get<double>()};
    if (!is_finite(s))
        throw ConfigError(join(path, key), "coordinates must be finite");
    return s;
}

Dynamics parse_dynamics(const json& doc, const fs::path& base_dir, json& echo) {
    const json& flow = require(doc, "flow", "");
    if (!flow.is_object())
        throw ConfigError("flow", "expected a JSON object");
    const std::string name = text(flow, "name", "flow");
    echo = {{"name", name}};

    Dynamics dyn;
    if (name == "linear_saddle" || name == "rotated_saddle") {
        check_keys(flow, {"name", "lambda"}, "flow");
        const double lambda = number(flow, "lambda", "flow");
        echo["lambda"] = lambda;
        dyn = name == "linear_saddle" ? FlowSpec{LinearSaddle{lambda}} : FlowSpec{RotatedSaddle{lambda}};
    } else if (name == "duffing") {
        check_keys(flow, {"name", "epsilon"}, "flow");
        const double epsilon = number(flow, "epsilon", "flow");
        echo["epsilon"] = epsilon;
        dyn = FlowSpec{Duffing{epsilon}};
    } else if (name == "gridded") {
        check_keys(flow, {"name", "path"}, "flow");
        const std::string rel = text(flow, "path", "flow");
        echo["path"] = rel;
        const fs::path path = fs::path(rel).is_absolute() ? fs::path(rel) : base_dir / rel;
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("flow.path", "cannot open '" + path.string() + "'");
        try {
            dyn = FlowSpec{Gridded{std::make_shared<const GriddedField>(load_velocity_grid(in))}};
        } catch (const Error& e) {
            throw ConfigError("flow.path", e.what());
        }
    } else if (name == "saddle_map" || name == "rotated_saddle_map") {
        check_keys(flow, {"name", "lambda"}, "flow");
        const double lambda = number(flow, "lambda", "flow");
        echo["lambda"] = lambda;
        dyn = name == "saddle_map" ? MapSpec{SaddleMap{lambda}} : MapSpec{RotatedSaddleMap{lambda}};
    } else {
        throw ConfigError("flow.name", "unknown flow '" + name + "'");
    }

    try {
        if (const auto* f = std::get_if<FlowSpec>(&dyn))
            validate(*f);
        else
            validate(std::get<MapSpec>(dyn));
    } catch (const ArgumentError& e) {
        throw ConfigError(flow.contains("lambda") ? "flow.lambda" : "flow.epsilon", e.what());
    }
    return dyn;
}

GridSpec parse_grid(const json& doc, bool default_cell_centered, json& echo) {
    const json& g = require(doc, "grid", "");
    check_keys(g, {"x_min", "x_max", "y_min", "y_max", "nx", "ny", "cell_centered"}, "grid");
    GridSpec grid;
    grid.x_min = number(g, "x_min", "grid");
    grid.x_max = number(g, "x_max", "grid");
    grid.y_min = number(g, "y_min", "grid");
    grid.y_max = number(g, "y_max", "grid");
    grid.nx = count(g, "nx", "grid");
    grid.ny = count(g, "ny", "grid");
    grid.cell_centered = default_cell_centered;
    if (g.contains("cell_centered")) {
        if (!g["cell_centered"].is_boolean())
            throw ConfigError("grid.cell_centered", "expected true or false");
        grid.cell_centered = g["cell_centered"].get<bool>();
    }
    if (grid.nx < 1)
        throw ConfigError("grid.nx", "must be >= 1");
    if (grid.ny < 1)
        throw ConfigError("grid.ny", "must be >= 1");
    if (!(grid.x_min < grid.x_max))
        throw ConfigError("grid.x_max", "must exceed x_min");
    if (!(grid.y_min < grid.y_max))
        throw ConfigError("grid.y_max", "must exceed y_min");
    echo = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"y_min", grid.y_min},          {"y_max", grid.y_max},
            {"nx", grid.nx},       {"ny", grid.ny},       {"cell_centered", grid.cell_centered}};
    return grid;
}

TimeWindow parse_window(const json& doc, json& echo) {
    const json& w = require(doc, "window", "");
    check_keys(w, {"t_start", "t_end"}, "window");
    TimeWindow window{number(w, "t_start", "window"), number(w, "t_end", "window")};
    echo = {{"t_start", window.t_start}, {"t_end", window.t_end}};
    return window;
}

std::size_t parse_iterations(const json& doc) {
    const std::size_t n = count(doc, "iterations", "");
    return n;
}

void parse_luq_params(const json& d, DiagnosticSpec& spec, json& echo) {
    spec.luq.p = number(d, "p", "diagnostic");
    if (d.contains("form")) {
        const std::string form = text(d, "form", "diagnostic");
        if (form == "outer_root")
            spec.luq.form = LuqForm::outer_root;
        else if (form == "inner_sum")
            spec.luq.form = LuqForm::inner_sum;
        else
            throw ConfigError("diagnostic.form", "expected 'outer_root' or 'inner_sum'");
    } else {
        spec.luq.form = spec.luq.p > 1.0 ? LuqForm::outer_root : LuqForm::inner_sum;
    }
    try {
        validate(spec.luq);
    } catch (const ArgumentError& e) {
        throw ConfigError("diagnostic.p", e.what());
    }
    echo["p"] = spec.luq.p;
    echo["form"] = spec.luq.form == LuqForm::outer_root ? "outer_root" : "inner_sum";
}

RidgeOptions parse_ridge(const json& r, json& echo) {
    check_keys(r, {"scan_axis", "mode", "threshold"}, "ridge");
    RidgeOptions opt;
    if (r.contains("scan_axis")) {
        const std::string axis = text(r, "scan_axis", "ridge");
        if (axis == "rows")
            opt.scan_axis = ScanAxis::rows;
        else if (axis == "columns")
            opt.scan_axis = ScanAxis::columns;
        else
            throw ConfigError("ridge.scan_axis", "expected 'rows' or 'columns'");
    }
    if (r.contains("mode")) {
        const std::string mode = text(r, "mode", "ridge");
        if (mode == "min_locus")
            opt.mode = RidgeMode::min_locus;
        else if (mode == "gradient_jump")
            opt.mode = RidgeMode::gradient_jump;
        else
            throw ConfigError("ridge.mode", "expected 'min_locus' or 'gradient_jump'");
    }
    opt.threshold = number_or(r, "threshold", "ridge", opt.threshold);
    if (!(opt.threshold >= 0.0))
        throw ConfigError("ridge.threshold", "must be >= 0");
    echo = {{"scan_axis", opt.scan_axis == ScanAxis::rows ? "rows" : "columns"},
            {"mode", opt.mode == RidgeMode::min_locus ? "min_locus" : "gradient_jump"},
            {"threshold", opt.threshold}};
    return opt;
}

void parse_diagnostic(const json& doc, Command cmd, const Dynamics& dyn, ScenarioConfig& cfg) {
    json echo;
    json d = json::object();
    if (cmd == Command::blob) {
        if (doc.contains("diagnostic"))
            d = doc.at("diagnostic");
        if (!d.is_object())
            throw ConfigError("diagnostic", "expected a JSON object");
        if (d.contains("name") && text(d, "name", "diagnostic") != "blob_error")
            throw ConfigError("diagnostic.name", "the blob command only evaluates blob_error");
        cfg.diagnostic.kind = DiagnosticKind::blob_error;
    } else {
        d = require(doc, "diagnostic", "");
        if (!d.is_object())
            throw ConfigError("diagnostic", "expected a JSON object");
        const std::string name = text(d, "name", "diagnostic");
        try {
            cfg.diagnostic.kind = parse_diagnostic_name(name);
        } catch (const ArgumentError& e) {
            throw ConfigError("diagnostic.name", e.what());
        }
    }
    DiagnosticSpec& spec = cfg.diagnostic;
    echo["name"] = diagnostic_name(spec.kind);
    const bool is_map = std::holds_alternative<MapSpec>(dyn);

    switch (spec.kind) {
    case DiagnosticKind::luq:
    case DiagnosticKind::luq_map:
        check_keys(d, {"name", "p", "form", "target"}, "diagnostic");
        parse_luq_params(d, spec, echo);
        spec.target = {point(d, "target", "diagnostic").x, point(d, "target", "diagnostic").y};
        break;
    case DiagnosticKind::blob_error:
        check_keys(d, {"name", "target", "radius", "n_points"}, "diagnostic");
        spec.target = {point(d, "target", "diagnostic").x, point(d, "target", "diagnostic").y};
        spec.radius = number(d, "radius", "diagnostic");
        spec.n_points = d.contains("n_points") ? count(d, "n_points", "diagnostic") : 64;
        if (!(spec.radius > 0.0))
            throw ConfigError("diagnostic.radius", "must be > 0");
        if (spec.n_points < 3)
            throw ConfigError("diagnostic.n_points", "must be >= 3");
        echo["radius"] = spec.radius;
        echo["n_points"] = spec.n_points;
        break;
    case DiagnosticKind::m_forward:
    case DiagnosticKind::m_backward:
    case DiagnosticKind::m_both:
    case DiagnosticKind::m_average:
        check_keys(d, {"name", "t0", "tau"}, "diagnostic");
        spec.t0 = number_or(d, "t0", "diagnostic", 0.0);
        spec.tau = number(d, "tau", "diagnostic");
        if (!(spec.tau > 0.0))
            throw ConfigError("diagnostic.tau", "must be > 0");
        echo["t0"] = spec.t0;
        echo["tau"] = spec.tau;
        break;
    case DiagnosticKind::displacement:
        check_keys(d, {"name"}, "diagnostic");
        break;
    }
    if (spec.target.x_star != 0.0 || spec.target.y_star != 0.0 || d.contains("target"))
        echo["target"] = {spec.target.x_star, spec.target.y_star};

    if (spec.kind == DiagnosticKind::luq_map && !is_map)
        throw ConfigError("diagnostic.name", "luq_map needs a discrete map flow");
    if (spec.kind != DiagnosticKind::luq_map && is_map)
        throw ConfigError("diagnostic.name", std::string(diagnostic_name(spec.kind)) + " needs a continuous flow");

    if (spec.kind == DiagnosticKind::luq_map) {
        spec.iterations = parse_iterations(doc);
        if (spec.iterations < 1)
            throw ConfigError("iterations", "must be >= 1");
        cfg.resolved["iterations"] = spec.iterations;
    } else if (spec.kind == DiagnosticKind::luq || spec.kind == DiagnosticKind::blob_error ||
               spec.kind == DiagnosticKind::displacement) {
        json wecho;
        spec.window = parse_window(doc, wecho);
        if (!spec.window.forward())
            throw ConfigError("window.t_end", "must exceed t_start");
        cfg.resolved["window"] = wecho;
    }
    cfg.resolved["diagnostic"] = echo;
}

} // namespace

const char* command_name(Command cmd) {
    switch (cmd) {
    case Command::field:
        return "field";
    case Command::traj:
        return "traj";
    case Command::blob:
        return "blob";
    case Command::ridge:
        return "ridge";
    }
    return "?";
}

ScenarioConfig parse_config(const json& doc, Command cmd, const fs::path& base_dir) {
    if (!doc.is_object())
        throw ConfigError("config", "expected a JSON object at top level");

    ScenarioConfig cfg;
    cfg.command = cmd;
    cfg.resolved = {{"command", command_name(cmd)}, {"version", kVersion}};

    switch (cmd) {
    case Command::field:
    case Command::blob:
        check_keys(doc, {"flow", "grid", "diagnostic", "window", "iterations", "step", "workers", "output", "ridge"},
                   "");
        break;
    case Command::traj:
        check_keys(doc, {"flow", "initial", "window", "iterations", "step", "workers", "output"}, "");
        break;
    case Command::ridge:
        check_keys(doc, {"input", "ridge", "workers", "output"}, "");
        break;
    }

    if (doc.contains("workers")) {
        const std::size_t w = count(doc, "workers", "");
        if (w < 1)
            throw ConfigError("workers", "must be >= 1");
        cfg.workers = static_cast<unsigned>(w);
    }
    cfg.output_prefix = doc.contains("output") ? text(doc, "output", "") : command_name(cmd);
    if (cfg.output_prefix.empty())
        throw ConfigError("output", "must not be empty");
    if (doc.contains("output") && fs::path(cfg.output_prefix).is_relative())
        cfg.output_prefix = (base_dir / cfg.output_prefix).lexically_normal().string();

    if (cmd == Command::ridge) {
        const std::string input = text(doc, "input", "");
        cfg.input = fs::path(input).is_absolute() ? fs::path(input) : base_dir / input;
        cfg.resolved["input"] = input;
        json recho;
        cfg.ridge = parse_ridge(doc.contains("ridge") ? doc.at("ridge") : json::object(), recho);
        cfg.resolved["ridge"] = recho;
        return cfg;
    }

    json flow_echo;
    cfg.dynamics = parse_dynamics(doc, base_dir, flow_echo);
    cfg.resolved["flow"] = flow_echo;
    const bool is_map = std::holds_alternative<MapSpec>(*cfg.dynamics);

    if (doc.contains("step")) {
        cfg.diagnostic.h = number(doc, "step", "");
        if (!(cfg.diagnostic.h > 0.0))
            throw ConfigError("step", "must be > 0");
    }

    if (cmd == Command::traj) {
        cfg.initial = point(doc, "initial", "");
        cfg.resolved["initial"] = {cfg.initial.x, cfg.initial.y};
        if (is_map) {
            cfg.diagnostic.iterations = parse_iterations(doc);
            cfg.resolved["iterations"] = cfg.diagnostic.iterations;
        } else {
            json wecho;
            cfg.diagnostic.window = parse_window(doc, wecho);
            if (cfg.diagnostic.window.t_start == cfg.diagnostic.window.t_end)
                throw ConfigError("window.t_end", "must differ from t_start");
            if (cfg.diagnostic.h == 0.0)
                cfg.diagnostic.h = default_step(cfg.diagnostic.window);
            if (cfg.diagnostic.h > cfg.diagnostic.window.length())
                throw ConfigError("step", "exceeds the integration window");
            cfg.resolved["window"] = wecho;
            cfg.resolved["step"] = cfg.diagnostic.h;
        }
        return cfg;
    }

    json grid_echo;
    cfg.grid = parse_grid(doc, cmd == Command::blob, grid_echo);
    cfg.resolved["grid"] = grid_echo;
    parse_diagnostic(doc, cmd, *cfg.dynamics, cfg);

    if (!is_map) {
        if (cfg.diagnostic.h == 0.0) {
            const bool descriptor = cfg.diagnostic.kind == DiagnosticKind::m_forward ||
                                    cfg.diagnostic.kind == DiagnosticKind::m_backward ||
                                    cfg.diagnostic.kind == DiagnosticKind::m_both ||
                                    cfg.diagnostic.kind == DiagnosticKind::m_average;
            cfg.diagnostic.h = descriptor ? default_step({cfg.diagnostic.t0, cfg.diagnostic.t0 + cfg.diagnostic.tau})
                                          : default_step(cfg.diagnostic.window);
        }
        cfg.resolved["step"] = cfg.diagnostic.h;
    }

    if (doc.contains("ridge")) {
        json recho;
        cfg.ridge = parse_ridge(doc.at("ridge"), recho);
        cfg.resolved["ridge"] = recho;
    }

    try {
        validate(*cfg.dynamics, cfg.diagnostic);
    } catch (const ArgumentError& e) {
        throw ConfigError("diagnostic", e.what());
    }
    return cfg;
}

ScenarioConfig load_config_file(const fs::path& path, Command cmd) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("config", "cannot open '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc, cmd, path.parent_path());
}

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open output file '" + path.string() + "'");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "t,x,y\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        out << g17(traj.times[k]) << ',' << g17(traj.states[k].x) << ',' << g17(traj.states[k].y) << '\n';
}

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    const fs::path prefix(cfg.output_prefix);
    if (prefix.has_parent_path())
        fs::create_directories(prefix.parent_path());
    auto output_path = [&](const char* suffix) { return fs::path(cfg.output_prefix + suffix); };

    RunResult result;
    json manifest = {{"tool", "luq"}, {"version", kVersion}, {"config", cfg.resolved}};

    auto emit_ridge = [&](const ScalarField2D& field) {
        const RidgeResult ridge = extract_minimal_ridge(field, cfg.ridge->scan_axis, cfg.ridge->mode,
                                                        cfg.ridge->threshold);
        const fs::path path = output_path(".ridge.csv");
        auto out = open_output(path);
        write_ridge_csv(field, ridge, out);
        finish(out, path);
        result.outputs.push_back(path);
        manifest["ridge_features"] = ridge.features.size();
    };

    switch (cfg.command) {
    case Command::field:
    case Command::blob: {
        const ScalarField2D field = sweep(cfg.grid, *cfg.dynamics, cfg.diagnostic, cfg.workers);
        const fs::path path = output_path(".field.csv");
        auto out = open_output(path);
        export_scalar_field(field, out);
        finish(out, path);
        result.outputs.push_back(path);
        result.undefined_cells = field.undefined_count();
        manifest["cells"] = field.values.size();
        manifest["undefined_cells"] = result.undefined_cells;
        if (cfg.ridge)
            emit_ridge(field);
        break;
    }
    case Command::traj: {
        Trajectory traj;
        if (const auto* map = std::get_if<MapSpec>(&*cfg.dynamics))
            traj = iterate_map(*map, cfg.initial, cfg.diagnostic.iterations);
        else
            traj = integrate(std::get<FlowSpec>(*cfg.dynamics), cfg.initial, cfg.diagnostic.window, cfg.diagnostic.h);
        const fs::path path = output_path(".traj.csv");
        auto out = open_output(path);
        write_trajectory_csv(traj, out);
        finish(out, path);
        result.outputs.push_back(path);
        manifest["samples"] = traj.states.size();
        manifest["arc_length"] = traj.arc_length;
        manifest["truncated"] = traj.truncated;
        break;
    }
    case Command::ridge: {
        std::ifstream in(cfg.input, std::ios::binary);
        if (!in)
            throw Error("cannot open input field '" + cfg.input.string() + "'");
        const ScalarField2D field = load_scalar_field(in);
        result.undefined_cells = field.undefined_count();
        manifest["undefined_cells"] = result.undefined_cells;
        emit_ridge(field);
        break;
    }
    }

    json names = json::array();
    for (const auto& p : result.outputs)
        names.push_back(p.filename().string());
    manifest["outputs"] = names;
    manifest["created_utc"] = utc_now();

    const fs::path path = output_path(".manifest.json");
    auto out = open_output(path);
    out << manifest.dump(2) << '\n';
    finish(out, path);
    result.outputs.push_back(path);
    return result;
}

} // namespace luq::cli
