#include "qkm/config.hpp"

#include "qkm/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qkm {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
    }
    if (used != value.size()) {
        throw ConfigError("'" + key + "' expects an integer, got '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a nonnegative integer, got '" + value + "'");
    }
    if (used != value.size() || value.front() == '-') {
        throw ConfigError("'" + key + "' expects a nonnegative integer, got '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw ConfigError("'" + key + "' expects true|false, got '" + value + "'");
}

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> c{"profile", "mqspec", "regress", "classify", "gram"};
    return c;
}

} // namespace

std::string to_string(Units u)
{
    return u == Units::degrees ? "degrees" : "radians";
}

Units parse_units(const std::string& name)
{
    if (name == "degrees" || name == "deg") {
        return Units::degrees;
    }
    if (name == "radians" || name == "rad") {
        return Units::radians;
    }
    throw ConfigError("unknown units '" + name + "' (expected degrees|radians)");
}

std::vector<double> parse_float_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(parse_float(item));
        }
    }
    return out;
}

std::string format_float_list(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_float(values[i]);
    }
    return out;
}

std::vector<double> ExperimentConfig::resolved_taus() const
{
    if (!taus.empty()) {
        return taus;
    }
    if (command == "classify") {
        return {0.03, 0.06, 0.09};
    }
    if (command == "gram") {
        return {0.06};
    }
    return {0.02, 0.04, 0.06, 0.08, 0.10, 0.12};
}

Units ExperimentConfig::resolved_units() const
{
    if (units) {
        return *units;
    }
    return command == "regress" ? Units::degrees : Units::radians;
}

std::string ExperimentConfig::resolved_task() const
{
    if (!task.empty()) {
        return task;
    }
    if (command == "classify") {
        return "circles";
    }
    return "sin";
}

int ExperimentConfig::resolved_count() const
{
    if (count > 0) {
        return count;
    }
    return command == "classify" ? 100 : 40;
}

std::vector<double> ExperimentConfig::resolved_lambda_grid() const
{
    return lambda_grid.empty() ? default_lambda_grid() : lambda_grid;
}

void ExperimentConfig::validate() const
{
    if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    if (spins < 1 || spins > 24) {
        throw ConfigError("spins must be in [1, 24]");
    }
    if (!(dt > 0.0)) {
        throw ConfigError("dt must be positive");
    }
    for (double t : resolved_taus()) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw ConfigError("every tau must be finite and >= 0");
        }
    }
    if (resolved_units() == Units::degrees && command != "regress") {
        throw ConfigError("degree units are only accepted for 1D regression");
    }
    const std::string t = resolved_task();
    if (command == "regress") {
        parse_regression_task(t);
        if (!(range_hi > range_lo)) {
            throw ConfigError("regression range is empty");
        }
        if (eval_count < 1) {
            throw ConfigError("eval_count must be >= 1");
        }
        for (double l : resolved_lambda_grid()) {
            if (!(l >= 0.0)) {
                throw ConfigError("lambda grid values must be >= 0");
            }
        }
    }
    if (command == "classify") {
        if (t != "circles" && t != "moons") {
            throw ConfigError("classification task must be circles|moons");
        }
        if (!(factor > 0.0 && factor < 1.0)) {
            throw ConfigError("factor must lie in (0, 1)");
        }
        if (!(noise >= 0.0)) {
            throw ConfigError("noise must be >= 0");
        }
        if (!(halfwidth > 0.0)) {
            throw ConfigError("halfwidth must be positive");
        }
        if (grid_res < 0 || grid_res == 1) {
            throw ConfigError("grid_res must be 0 (off) or >= 2");
        }
        if (!(c_cap > 0.0) || !(svm_tol > 0.0) || svm_max_iterations < 1) {
            throw ConfigError("c_cap, svm_tol and svm_max_iterations must be positive");
        }
    }
    if (command == "profile" && profile_points < 2) {
        throw ConfigError("profile_points must be >= 2");
    }
    if (command == "mqspec" && mq_samples < 2 * spins + 1) {
        throw ConfigError("mq_samples must be at least 2*spins+1");
    }
    if (command == "gram" && input.empty()) {
        throw ConfigError("gram needs an input dataset (input=...)");
    }
    if (kernel == KernelKind::trace && spins > kDefaultTraceKernelMaxSpins) {
        throw ConfigError("trace kernel supports at most 12 spins");
    }
}

Metadata ExperimentConfig::to_metadata() const
{
    Metadata m;
    auto add = [&](const std::string& k, const std::string& v) { m.emplace_back("config." + k, v); };
    add("command", command);
    add("spins", std::to_string(spins));
    add("tau", format_float_list(resolved_taus()));
    add("dt", format_float(dt));
    add("seed", std::to_string(seed));
    add("kernel", to_string(kernel));
    add("units", to_string(resolved_units()));
    if (command == "regress") {
        add("data_seed", std::to_string(resolved_data_seed()));
        add("task", resolved_task());
        add("count", std::to_string(resolved_count()));
        add("range_lo", format_float(range_lo));
        add("range_hi", format_float(range_hi));
        add("eval_count", std::to_string(eval_count));
        add("eval_mode", eval_mode == EvalMode::grid ? "grid" : "union");
        add("lambda_grid", format_float_list(resolved_lambda_grid()));
    } else if (command == "classify") {
        add("data_seed", std::to_string(resolved_data_seed()));
        add("task", resolved_task());
        add("count", std::to_string(resolved_count()));
        add("noise", format_float(noise));
        add("factor", format_float(factor));
        add("halfwidth", format_float(halfwidth));
        add("c_cap", format_float(c_cap));
        add("svm_tol", format_float(svm_tol));
        add("svm_max_iterations", std::to_string(svm_max_iterations));
        add("grid_res", std::to_string(grid_res));
    } else if (command == "profile") {
        add("profile_points", std::to_string(profile_points));
        add("profile_halfwidth", format_float(profile_halfwidth));
    } else if (command == "mqspec") {
        add("mq_samples", std::to_string(mq_samples));
    } else if (command == "gram") {
        add("input", input);
        add("fast_path", fast_path ? "true" : "false");
    }
    return m;
}

void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "command") {
        cfg.command = value;
    } else if (key == "spins") {
        cfg.spins = parse_int(key, value);
    } else if (key == "tau") {
        cfg.taus = parse_float_list(value);
    } else if (key == "dt") {
        cfg.dt = parse_float(value);
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "data_seed") {
        cfg.data_seed = parse_u64(key, value);
    } else if (key == "task") {
        cfg.task = value;
    } else if (key == "kernel") {
        cfg.kernel = parse_kernel_kind(value);
    } else if (key == "units") {
        cfg.units = parse_units(value);
    } else if (key == "count") {
        cfg.count = parse_int(key, value);
    } else if (key == "range_lo") {
        cfg.range_lo = parse_float(value);
    } else if (key == "range_hi") {
        cfg.range_hi = parse_float(value);
    } else if (key == "eval_count") {
        cfg.eval_count = parse_int(key, value);
    } else if (key == "eval_mode") {
        if (value == "grid") {
            cfg.eval_mode = EvalMode::grid;
        } else if (value == "union") {
            cfg.eval_mode = EvalMode::union_train;
        } else {
            throw ConfigError("eval_mode must be grid|union");
        }
    } else if (key == "lambda_grid") {
        cfg.lambda_grid = parse_float_list(value);
    } else if (key == "noise") {
        cfg.noise = parse_float(value);
    } else if (key == "factor") {
        cfg.factor = parse_float(value);
    } else if (key == "halfwidth") {
        cfg.halfwidth = parse_float(value);
    } else if (key == "c_cap") {
        cfg.c_cap = parse_float(value);
    } else if (key == "svm_tol") {
        cfg.svm_tol = parse_float(value);
    } else if (key == "svm_max_iterations") {
        cfg.svm_max_iterations = parse_int(key, value);
    } else if (key == "grid_res") {
        cfg.grid_res = parse_int(key, value);
    } else if (key == "profile_points") {
        cfg.profile_points = parse_int(key, value);
    } else if (key == "profile_halfwidth") {
        cfg.profile_halfwidth = parse_float(value);
    } else if (key == "mq_samples") {
        cfg.mq_samples = parse_int(key, value);
    } else if (key == "input") {
        cfg.input = value;
    } else if (key == "fast_path") {
        cfg.fast_path = parse_bool(key, value);
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "parallel") {
        cfg.parallel = parse_bool(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void load_config_text(ExperimentConfig& cfg, const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        if (body.front() == '#') {
            body = trim(body.substr(1));
            if (body.rfind("config.", 0) != 0) {
                continue;
            }
            body = body.substr(7);
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            continue;
        }
        apply_setting(cfg, body.substr(0, eq), body.substr(eq + 1));
    }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    load_config_text(cfg, ss.str());
}

} // namespace qkm
