// config.hpp
// Flat key=value experiment configuration. Every artifact the CLI writes
// carries the resolved configuration as "# config.<key>=<value>" lines, and
// load_config accepts such an artifact in place of a config file.

#pragma once

#include "qkm/io.hpp"

#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace qkm {

enum class Units { degrees, radians };

std::string to_string(Units u);
Units parse_units(const std::string& name);

enum class EvalMode { grid, union_train };

struct ExperimentConfig {
    std::string command = "profile";  // profile | mqspec | regress | classify | gram

    int spins = 12;
    std::vector<double> taus;  // empty: command default
    double dt = kDefaultTrotterDt;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> data_seed;  // defaults to seed
    std::string task;                        // sin | sinc | circles | moons
    KernelKind kernel = KernelKind::pure;
    std::optional<Units> units;              // degrees only for regress

    // regression
    int count = 0;  // 0: 40 for regress, 100 for classify
    double range_lo = -45.0;
    double range_hi = 45.0;
    int eval_count = 64;
    EvalMode eval_mode = EvalMode::grid;
    std::vector<double> lambda_grid;  // empty: default_lambda_grid()

    // classification
    double noise = 0.08;
    double factor = 0.5;
    double halfwidth = kDefaultHalfwidth;
    double c_cap = 1e6;
    double svm_tol = 1e-6;
    long svm_max_iterations = 10'000'000;
    int grid_res = 50;

    // profiles / spectra
    int profile_points = 181;
    double profile_halfwidth = std::numbers::pi / 2;
    int mq_samples = kDefaultMqSamples;

    // gram
    std::string input;
    bool fast_path = false;

    // execution (not part of the serialized header)
    std::string out = ".";
    bool parallel = false;

    // Resolved accessors apply the per-command defaults.
    std::vector<double> resolved_taus() const;
    std::uint64_t resolved_data_seed() const { return data_seed.value_or(seed); }
    Units resolved_units() const;
    std::string resolved_task() const;
    int resolved_count() const;
    std::vector<double> resolved_lambda_grid() const;
    Exec exec() const { return parallel ? Exec::parallel : Exec::serial; }

    // Throws ConfigError on any inconsistency.
    void validate() const;

    // Resolved, output-affecting keys in a fixed order, prefixed "config.".
    Metadata to_metadata() const;
};

// Applies one key=value setting (key without the "config." prefix).
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Parses "key=value" lines and "# config.key=value" header lines; blank lines,
// other comments and lines without '=' are skipped.
void load_config_text(ExperimentConfig& cfg, const std::string& text);
void load_config_file(ExperimentConfig& cfg, const std::string& path);

std::vector<double> parse_float_list(const std::string& text);
std::string format_float_list(const std::vector<double>& values);

} // namespace qkm
