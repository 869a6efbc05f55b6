#include "qkm/experiments.hpp"

#include "qkm/error.hpp"
#include "qkm/io.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qkm {

namespace {

EncodingParams params_for(const ExperimentConfig& cfg, double tau, int feature_dim)
{
    return EncodingParams::from_dt(tau, cfg.dt, feature_dim);
}

std::string tau_label(double tau)
{
    return "k_tau" + format_float(tau);
}

std::string header_block(const ExperimentConfig& cfg, const std::string& title, const Metadata& extra = {})
{
    std::ostringstream os;
    os << "# qkm " << title << '\n';
    write_metadata(os, cfg.to_metadata());
    write_metadata(os, extra);
    return os.str();
}

nlohmann::json config_json(const ExperimentConfig& cfg)
{
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : cfg.to_metadata()) {
        j[k.substr(7)] = v;
    }
    return j;
}

int numerical_rank(const Eigen::MatrixXd& k)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    int rank = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) > 1e-10 * std::max(top, 1e-300)) {
            ++rank;
        }
    }
    return rank;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

} // namespace

// ---------------------------------------------------------------------------

ProfileRun run_profile(const ExperimentConfig& cfg)
{
    cfg.validate();
    const SpinSystem system = draw_couplings(cfg.spins, cfg.seed);
    ProfileRun run;
    run.taus = cfg.resolved_taus();
    run.deltas = linspace(-cfg.profile_halfwidth, cfg.profile_halfwidth, cfg.profile_points);
    for (double tau : run.taus) {
        const auto params = params_for(cfg, tau, 1);
        std::vector<ProfilePoint> profile;
        if (cfg.kernel == KernelKind::trace) {
            for (double d : run.deltas) {
                profile.push_back({d, trace_kernel(system, params, DataPoint{d}, DataPoint{0.0})});
            }
        } else {
            profile = kernel_profile_1d(system, params, run.deltas, cfg.exec());
        }
        std::vector<double> col;
        for (const auto& p : profile) {
            col.push_back(p.k);
        }
        run.values.push_back(std::move(col));
        run.fwhm.push_back(profile_fwhm(profile));
    }
    return run;
}

std::vector<Artifact> render_profile(const ExperimentConfig& cfg, const ProfileRun& run)
{
    Metadata extra;
    for (std::size_t t = 0; t < run.taus.size(); ++t) {
        extra.emplace_back("fwhm." + format_float(run.taus[t]), format_float(run.fwhm[t]));
    }
    std::ostringstream os;
    os << header_block(cfg, "kernel profile", extra);
    os << "delta";
    for (double tau : run.taus) {
        os << ',' << tau_label(tau);
    }
    os << '\n';
    for (std::size_t i = 0; i < run.deltas.size(); ++i) {
        os << format_float(run.deltas[i]);
        for (const auto& col : run.values) {
            os << ',' << format_float(col[i]);
        }
        os << '\n';
    }
    return {{"profile.csv", os.str()}};
}

// ---------------------------------------------------------------------------

MqRun run_mqspec(const ExperimentConfig& cfg)
{
    cfg.validate();
    const SpinSystem system = draw_couplings(cfg.spins, cfg.seed);
    MqRun run;
    run.taus = cfg.resolved_taus();
    const auto deltas = periodic_grid(cfg.mq_samples);
    for (double tau : run.taus) {
        const auto params = params_for(cfg, tau, 1);
        std::vector<double> values;
        if (cfg.kernel == KernelKind::trace) {
            for (double d : deltas) {
                values.push_back(trace_kernel(system, params, DataPoint{d}, DataPoint{0.0}));
            }
        } else {
            for (const auto& p : kernel_profile_1d(system, params, deltas, cfg.exec())) {
                values.push_back(p.k);
            }
        }
        run.spectra.push_back(mq_spectrum(deltas, values, cfg.spins));
    }
    return run;
}

int max_populated_order(const MqSpectrum& spectrum, double threshold)
{
    int best = 0;
    for (std::size_t i = 0; i < spectrum.orders.size(); ++i) {
        if (spectrum.intensities[i] > threshold) {
            best = std::max(best, std::abs(spectrum.orders[i]));
        }
    }
    return best;
}

std::vector<Artifact> render_mqspec(const ExperimentConfig& cfg, const MqRun& run)
{
    Metadata extra;
    for (std::size_t t = 0; t < run.taus.size(); ++t) {
        extra.emplace_back("imag_residue." + format_float(run.taus[t]),
                           format_float(run.spectra[t].max_imag_residue));
    }
    std::ostringstream os;
    os << header_block(cfg, "multiple-quantum spectrum", extra);
    os << "m";
    for (double tau : run.taus) {
        os << ",I_tau" << format_float(tau);
    }
    os << '\n';
    const auto& orders = run.spectra.front().orders;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        os << orders[i];
        for (const auto& s : run.spectra) {
            os << ',' << format_float(s.intensities[i]);
        }
        os << '\n';
    }
    return {{"mqspec.csv", os.str()}};
}

// ---------------------------------------------------------------------------

RegressRun run_regress(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto task = parse_regression_task(cfg.resolved_task());
    const SpinSystem system = draw_couplings(cfg.spins, cfg.seed);
    const double to_rad = cfg.resolved_units() == Units::degrees ? std::numbers::pi / 180.0 : 1.0;

    RegressRun run;
    run.train = regression_1d(task, cfg.resolved_count(), cfg.range_lo, cfg.range_hi, cfg.resolved_data_seed());
    for (const auto& p : eval_grid_1d(cfg.eval_count, cfg.range_lo, cfg.range_hi)) {
        run.eval_x.push_back(p[0]);
    }
    if (cfg.eval_mode == EvalMode::union_train) {
        for (const auto& p : run.train.points) {
            run.eval_x.push_back(p[0]);
        }
    }
    std::vector<double> truth;
    std::vector<DataPoint> eval_points;
    for (double x : run.eval_x) {
        truth.push_back(regression_target(task, x));
        eval_points.push_back(DataPoint{x * to_rad});
    }
    run.eval_truth = to_eigen(truth);
    std::vector<DataPoint> train_points;
    for (const auto& p : run.train.points) {
        train_points.push_back(DataPoint{p[0] * to_rad});
    }
    const Eigen::VectorXd y = to_eigen(run.train.targets);
    const auto grid = cfg.resolved_lambda_grid();

    for (double tau : cfg.resolved_taus()) {
        const auto params = params_for(cfg, tau, 1);
        GramOptions opts;
        opts.kind = cfg.kernel;
        opts.exec = cfg.exec();
        const GramMatrix k = gram(system, params, train_points, opts);
        const Eigen::MatrixXd rows = cross_kernel(system, params, eval_points, train_points, cfg.kernel, cfg.exec());

        RegressTauResult r;
        r.tau = tau;
        r.substeps = params.substeps;
        r.scan = select_lambda(k.entries, y, rows, run.eval_truth, grid);
        r.model = krr_fit(k, y, r.scan.best_lambda);
        r.predictions = krr_predict(r.model, rows);
        r.eval_mse = mse(r.predictions, run.eval_truth);
        r.gram_rank = numerical_rank(k.entries);
        r.degenerate = r.gram_rank <= 1;
        run.per_tau.push_back(std::move(r));
    }
    return run;
}

std::vector<Artifact> render_regress(const ExperimentConfig& cfg, const RegressRun& run)
{
    std::ostringstream csv;
    csv << header_block(cfg, "regression");
    csv << "tau,x,y_true,y_pred\n";
    for (const auto& r : run.per_tau) {
        for (std::size_t i = 0; i < run.eval_x.size(); ++i) {
            csv << format_float(r.tau) << ',' << format_float(run.eval_x[i]) << ','
                << format_float(run.eval_truth(static_cast<Eigen::Index>(i))) << ','
                << format_float(r.predictions(static_cast<Eigen::Index>(i))) << '\n';
        }
    }

    std::ostringstream train;
    write_dataset_csv(train, run.train, cfg.to_metadata());

    nlohmann::json report;
    report["command"] = "regress";
    report["config"] = config_json(cfg);
    auto results = nlohmann::json::array();
    for (const auto& r : run.per_tau) {
        auto table = nlohmann::json::array();
        for (const auto& row : r.scan.table) {
            nlohmann::json e = {{"lambda", row.lambda}, {"ok", row.ok}};
            e["mse"] = row.ok ? nlohmann::json(row.mse) : nlohmann::json(nullptr);
            if (!row.ok) {
                e["error"] = row.error;
            }
            table.push_back(std::move(e));
        }
        results.push_back({{"tau", r.tau},
                           {"substeps", r.substeps},
                           {"best_lambda", r.scan.best_lambda},
                           {"eval_mse", r.eval_mse},
                           {"residual", r.model.residual},
                           {"gram_rank", r.gram_rank},
                           {"degenerate", r.degenerate},
                           {"lambda_table", table}});
    }
    report["results"] = results;
    return {{"regress.csv", csv.str()}, {"regress_train.csv", train.str()}, {"regress_report.json", report.dump(2) + "\n"}};
}

// ---------------------------------------------------------------------------

ClassifyRun run_classify(const ExperimentConfig& cfg)
{
    cfg.validate();
    const SpinSystem system = draw_couplings(cfg.spins, cfg.seed);
    ClassifyRun run;
    const std::string task = cfg.resolved_task();
    run.raw = task == "circles" ? make_circles(cfg.resolved_count(), cfg.noise, cfg.factor, cfg.resolved_data_seed())
                                : make_moons(cfg.resolved_count(), cfg.noise, cfg.resolved_data_seed());
    run.scaled = scale_features(run.raw, cfg.halfwidth);
    if (cfg.grid_res > 0) {
        const auto axis = linspace(-cfg.halfwidth, cfg.halfwidth, cfg.grid_res);
        for (double x2 : axis) {
            for (double x1 : axis) {
                run.grid.push_back(DataPoint{x1, x2});
            }
        }
    }
    const Eigen::VectorXd labels = to_eigen(run.scaled.targets);
    SvmOptions svm;
    svm.c_cap = cfg.c_cap;
    svm.tolerance = cfg.svm_tol;
    svm.max_iterations = cfg.svm_max_iterations;

    for (double tau : cfg.resolved_taus()) {
        const auto params = params_for(cfg, tau, 2);
        GramOptions opts;
        opts.kind = cfg.kernel;
        opts.exec = cfg.exec();
        const GramMatrix k = gram(system, params, run.scaled.points, opts);

        ClassifyTauResult r;
        r.tau = tau;
        r.substeps = params.substeps;
        r.model = svm_fit(k.entries, labels, svm);
        r.train_decisions = svm_decision(r.model, k.entries);
        r.hinge = hinge_loss(r.train_decisions, labels);
        int correct = 0;
        for (Eigen::Index i = 0; i < labels.size(); ++i) {
            correct += classify(r.train_decisions(i)) == static_cast<int>(labels(i)) ? 1 : 0;
        }
        r.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
        if (!run.grid.empty()) {
            const Eigen::MatrixXd rows =
                cross_kernel(system, params, run.grid, run.scaled.points, cfg.kernel, cfg.exec());
            r.grid_decisions = svm_decision(r.model, rows);
        }
        run.per_tau.push_back(std::move(r));
    }
    return run;
}

std::vector<Artifact> render_classify(const ExperimentConfig& cfg, const ClassifyRun& run)
{
    std::ostringstream train;
    train << header_block(cfg, "classification training set");
    train << "tau,x1,x2,label,decision\n";
    for (const auto& r : run.per_tau) {
        for (std::size_t i = 0; i < run.scaled.size(); ++i) {
            train << format_float(r.tau) << ',' << format_float(run.scaled.points[i][0]) << ','
                  << format_float(run.scaled.points[i][1]) << ',' << format_float(run.scaled.targets[i]) << ','
                  << format_float(r.train_decisions(static_cast<Eigen::Index>(i))) << '\n';
        }
    }

    std::vector<Artifact> out{{"classify_train.csv", train.str()}};

    if (!run.grid.empty()) {
        std::ostringstream grid;
        grid << header_block(cfg, "classification decision grid");
        grid << "tau,x1,x2,decision\n";
        for (const auto& r : run.per_tau) {
            for (std::size_t i = 0; i < run.grid.size(); ++i) {
                grid << format_float(r.tau) << ',' << format_float(run.grid[i][0]) << ','
                     << format_float(run.grid[i][1]) << ','
                     << format_float(r.grid_decisions(static_cast<Eigen::Index>(i))) << '\n';
            }
        }
        out.push_back({"classify_grid.csv", grid.str()});
    }

    nlohmann::json report;
    report["command"] = "classify";
    report["config"] = config_json(cfg);
    auto results = nlohmann::json::array();
    for (const auto& r : run.per_tau) {
        nlohmann::json e = {{"tau", r.tau},
                            {"substeps", r.substeps},
                            {"hinge_loss", r.hinge},
                            {"train_accuracy", r.accuracy},
                            {"support_vectors", r.model.support_indices.size()},
                            {"bias", r.model.bias},
                            {"max_kkt_violation", r.model.max_violation},
                            {"iterations", r.model.iterations},
                            {"gram_min_eigenvalue", r.model.min_eigenvalue},
                            {"gram_max_eigenvalue", r.model.max_eigenvalue}};
        e["warning"] = r.model.warning ? nlohmann::json(*r.model.warning) : nlohmann::json(nullptr);
        results.push_back(std::move(e));
    }
    report["results"] = results;
    out.push_back({"classify_report.json", report.dump(2) + "\n"});
    return out;
}

// ---------------------------------------------------------------------------

GramMatrix run_gram(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto taus = cfg.resolved_taus();
    if (taus.size() != 1) {
        throw ConfigError("gram takes exactly one tau");
    }
    std::ifstream in(cfg.input);
    if (!in) {
        throw ConfigError("cannot open dataset '" + cfg.input + "'");
    }
    const LabeledSet set = read_dataset_csv(in);
    if (set.size() == 0) {
        throw ConfigError("dataset '" + cfg.input + "' has no rows");
    }
    const SpinSystem system = draw_couplings(cfg.spins, cfg.seed);
    const auto params = params_for(cfg, taus.front(), static_cast<int>(set.dim()));
    GramOptions opts;
    opts.kind = cfg.kernel;
    opts.exec = cfg.exec();
    opts.shift_fast_path = cfg.fast_path;
    return gram(system, params, set.points, opts);
}

std::vector<Artifact> render_gram(const ExperimentConfig& cfg, const GramMatrix& g)
{
    std::ostringstream csv;
    csv << "# qkm gram\n";
    write_gram_csv(csv, g, cfg.to_metadata());
    return {{"gram.csv", csv.str()}, {"gram.json", gram_to_json(g, cfg.to_metadata()).dump(2) + "\n"}};
}

// ---------------------------------------------------------------------------

std::vector<Artifact> run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    if (cfg.command == "profile") {
        return render_profile(cfg, run_profile(cfg));
    }
    if (cfg.command == "mqspec") {
        return render_mqspec(cfg, run_mqspec(cfg));
    }
    if (cfg.command == "regress") {
        return render_regress(cfg, run_regress(cfg));
    }
    if (cfg.command == "classify") {
        return render_classify(cfg, run_classify(cfg));
    }
    return render_gram(cfg, run_gram(cfg));
}

void write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts)
{
    std::filesystem::create_directories(dir);
    for (const auto& a : artifacts) {
        write_text_file((std::filesystem::path(dir) / a.filename).string(), a.contents);
    }
}

} // namespace qkm
