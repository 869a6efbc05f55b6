// qkm: command-line runner for the spin-encoding kernel experiments.
//
//   qkm profile   kernel profile k(delta) per tau
//   qkm mqspec    multiple-quantum spectrum per tau
//   qkm regress   1D kernel ridge regression (sin | sinc)
//   qkm classify  2D hard-margin SVM (circles | moons)
//   qkm gram      Gram matrix of a dataset CSV

#include "qkm/config.hpp"
#include "qkm/error.hpp"
#include "qkm/experiments.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

struct Flags {
    std::string config;
    std::optional<int> spins;
    std::vector<double> taus;
    std::optional<double> dt;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> task;
    std::optional<std::string> kernel;
    std::optional<std::string> units;
    std::optional<std::string> out;
    std::optional<std::string> input;
    std::vector<std::string> settings;
    bool parallel = false;
    bool quiet = false;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "key=value config file, or any CSV artifact written by qkm");
    sub->add_option("--spins", f.spins, "number of spins n");
    sub->add_option("--tau", f.taus, "evolution time per input coordinate (repeatable)");
    sub->add_option("--dt", f.dt, "Trotter step tau/M");
    sub->add_option("--seed", f.seed, "coupling RNG seed");
    sub->add_option("--task", f.task, "sin|sinc (regress), circles|moons (classify)");
    sub->add_option("--kernel", f.kernel, "pure|trace");
    sub->add_option("--units", f.units, "degrees|radians for input coordinates");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--set", f.settings, "extra key=value setting (repeatable)");
    sub->add_flag("--parallel", f.parallel, "use OpenMP across points and amplitudes");
    sub->add_flag("-q,--quiet", f.quiet, "suppress the summary on stdout");
}

qkm::ExperimentConfig build_config(const std::string& command, const Flags& f)
{
    qkm::ExperimentConfig cfg;
    if (!f.config.empty()) {
        qkm::load_config_file(cfg, f.config);
    }
    cfg.command = command;
    for (const auto& s : f.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw qkm::ConfigError("--set expects key=value, got '" + s + "'");
        }
        qkm::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (f.spins) {
        cfg.spins = *f.spins;
    }
    if (!f.taus.empty()) {
        cfg.taus = f.taus;
    }
    if (f.dt) {
        cfg.dt = *f.dt;
    }
    if (f.seed) {
        cfg.seed = *f.seed;
    }
    if (f.task) {
        cfg.task = *f.task;
    }
    if (f.kernel) {
        cfg.kernel = qkm::parse_kernel_kind(*f.kernel);
    }
    if (f.units) {
        cfg.units = qkm::parse_units(*f.units);
    }
    if (f.out) {
        cfg.out = *f.out;
    }
    if (f.input) {
        cfg.input = *f.input;
    }
    if (f.parallel) {
        cfg.parallel = true;
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spin-encoding quantum kernel experiments"};
    app.require_subcommand(1);

    Flags flags;
    std::vector<CLI::App*> subs;
    subs.push_back(app.add_subcommand("profile", "kernel profile k(delta) for one-dimensional inputs"));
    subs.push_back(app.add_subcommand("mqspec", "multiple-quantum spectrum of the kernel profile"));
    subs.push_back(app.add_subcommand("regress", "kernel ridge regression on sin/sinc targets"));
    subs.push_back(app.add_subcommand("classify", "hard-margin SVM on circles/moons"));
    subs.push_back(app.add_subcommand("gram", "Gram matrix of a dataset CSV"));
    for (auto* s : subs) {
        add_common(s, flags);
    }
    subs.back()->add_option("input", flags.input, "dataset CSV (columns x1[,x2],y)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(qkm::ExitCode::config);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const auto cfg = build_config(command, flags);
        const auto artifacts = qkm::run_experiment(cfg);
        qkm::write_artifacts(cfg.out, artifacts);
        if (!flags.quiet) {
            for (const auto& a : artifacts) {
                std::cout << "wrote " << cfg.out << '/' << a.filename << '\n';
            }
        }
    } catch (const qkm::ConfigError& e) {
        std::cerr << "qkm: configuration error: " << e.what() << '\n';
        return static_cast<int>(qkm::ExitCode::config);
    } catch (const qkm::SingularSystemError& e) {
        std::cerr << "qkm: singular system: " << e.what() << '\n';
        return static_cast<int>(qkm::ExitCode::singular);
    } catch (const qkm::NonConvergenceError& e) {
        std::cerr << "qkm: no convergence: " << e.what() << '\n';
        return static_cast<int>(qkm::ExitCode::nonconvergence);
    } catch (const std::exception& e) {
        std::cerr << "qkm: " << e.what() << '\n';
        return static_cast<int>(qkm::ExitCode::failure);
    }
    return 0;
}
