#include "doctest.h"

#include "qkm/error.hpp"
#include "qkm/experiments.hpp"
#include "qkm/io.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace qkm;

namespace {

std::map<std::string, std::string> by_name(const std::vector<Artifact>& arts)
{
    std::map<std::string, std::string> m;
    for (const auto& a : arts) {
        m[a.filename] = a.contents;
    }
    return m;
}

CsvTable parse(const std::string& text)
{
    std::istringstream in(text);
    return read_csv(in);
}

std::string slurp(const std::string& path)
{
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bool close(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

} // namespace

TEST_CASE("profile: unit peak, flat for an uncoupled system")
{
    ExperimentConfig c;
    c.command = "profile";
    c.spins = 4;
    c.taus = {0.05, 0.1};
    c.profile_points = 21;
    const ProfileRun run = run_profile(c);
    REQUIRE(run.values.size() == 2);
    for (const auto& col : run.values) {
        CHECK(col[10] == doctest::Approx(1.0).epsilon(1e-12));
    }
    const CsvTable t = parse(by_name(render_profile(c, run)).at("profile.csv"));
    CHECK(t.header.size() == 3);
    CHECK(t.rows.size() == 21);

    c.spins = 1;
    for (const auto& col : run_profile(c).values) {
        for (double v : col) {
            CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("mqspec: uncoupled system has only order zero")
{
    ExperimentConfig c;
    c.command = "mqspec";
    c.spins = 1;
    c.taus = {0.5};
    const MqRun run = run_mqspec(c);
    CHECK(run.spectra[0].at(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(run.spectra[0].at(1)) < 1e-12);
    CHECK(max_populated_order(run.spectra[0]) == 0);
}

TEST_CASE("regress: tau = 0 gives a flagged constant predictor")
{
    ExperimentConfig c;
    c.command = "regress";
    c.spins = 3;
    c.taus = {0.0};
    const RegressRun run = run_regress(c);
    const auto& r = run.per_tau[0];
    CHECK(r.degenerate);
    CHECK(r.gram_rank == 1);
    CHECK((r.predictions.array() - r.predictions(0)).abs().maxCoeff() < 1e-12);
    CHECK(r.model.residual <= kKrrResidualTolerance * r.model.targets.norm());
}

TEST_CASE("regress: lambda = 0 on a rank-deficient Gram is a singular error")
{
    ExperimentConfig c;
    c.command = "regress";
    c.spins = 3;
    c.taus = {0.0};
    c.lambda_grid = {0.0};
    CHECK_THROWS_AS(run_regress(c), SingularSystemError);
}

TEST_CASE("regress golden: n = 12, sin, tau = 0.10")
{
    ExperimentConfig c;
    c.command = "regress";
    c.spins = 12;
    c.taus = {0.10};
    c.task = "sin";
    const RegressRun run = run_regress(c);
    const auto& r = run.per_tau[0];
    const auto golden = nlohmann::json::parse(slurp(std::string(QKM_GOLDEN_DIR) + "/regress_sin_n12_tau010_report.json"));
    const auto& g = golden.at("results").at(0);
    CHECK(r.scan.best_lambda == g.at("best_lambda").get<double>());
    CHECK(close(r.eval_mse, g.at("eval_mse").get<double>(), 1e-8));
    REQUIRE(r.scan.table.size() == g.at("lambda_table").size());
    for (std::size_t i = 0; i < r.scan.table.size(); ++i) {
        const auto& row = g.at("lambda_table").at(i);
        CHECK(r.scan.table[i].ok == row.at("ok").get<bool>());
        if (r.scan.table[i].ok) {
            CHECK(close(r.scan.table[i].mse, row.at("mse").get<double>(), 1e-8));
        }
    }

    // the training fit at the selected lambda beats the selection score
    const SpinSystem sys = draw_couplings(12, 1);
    const EncodingParams p = EncodingParams::from_dt(0.10, kDefaultTrotterDt, 1);
    const GramMatrix k = gram(sys, p, r.model.train_points);
    CHECK(mse(krr_predict(r.model, k.entries), r.model.targets) < r.eval_mse);

    // argmin is stable when the grid is refined to quarter decades
    std::vector<double> fine;
    for (int i = 0; i <= 32; ++i) {
        fine.push_back(std::pow(10.0, -8.0 + 0.25 * i));
    }
    ExperimentConfig f = c;
    f.lambda_grid = fine;
    const double refined = run_regress(f).per_tau[0].scan.best_lambda;
    CHECK(std::abs(std::log10(refined) - std::log10(r.scan.best_lambda)) <= 0.5 + 1e-12);
}

TEST_CASE("classify golden decision grid and self-consistent hinge loss")
{
    ExperimentConfig c;
    c.command = "classify";
    c.spins = 4;
    c.taus = {0.06};
    c.count = 12;
    c.grid_res = 5;
    const ClassifyRun run = run_classify(c);
    const auto arts = by_name(render_classify(c, run));

    const CsvTable grid = parse(arts.at("classify_grid.csv"));
    const CsvTable golden = parse(slurp(std::string(QKM_GOLDEN_DIR) + "/classify_circles_n4_grid.csv"));
    REQUIRE(grid.rows.size() == 25);
    REQUIRE(golden.rows.size() == 25);
    CHECK(grid.header == golden.header);
    for (std::size_t i = 0; i < 25; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(grid.rows[i][j] == golden.rows[i][j]);
        }
        CHECK(close(grid.rows[i][3], golden.rows[i][3], 1e-7));
    }

    const CsvTable train = parse(arts.at("classify_train.csv"));
    std::vector<double> dec, lab;
    for (const auto& row : train.rows) {
        lab.push_back(row[3]);
        dec.push_back(row[4]);
    }
    const auto report = nlohmann::json::parse(arts.at("classify_report.json"));
    const double hinge = report.at("results").at(0).at("hinge_loss").get<double>();
    CHECK(std::abs(hinge_loss(dec, lab) - hinge) <= 1e-12);
    CHECK(run.per_tau[0].accuracy == 1.0);
}

TEST_CASE("gram: one point, symmetry, byte-identical rerun from header")
{
    const std::string dir = (std::filesystem::temp_directory_path() / "qkm_test_gram").string();
    LabeledSet one;
    one.points = {DataPoint{0.4}};
    one.targets = {1.0};
    one.generator = "manual";
    std::ostringstream ds;
    write_dataset_csv(ds, one);
    write_artifacts(dir, {Artifact{"one.csv", ds.str()}});

    ExperimentConfig c;
    c.command = "gram";
    c.spins = 4;
    c.input = dir + "/one.csv";
    const GramMatrix g = run_gram(c);
    CHECK(g.size() == 1);
    CHECK(g(0, 0) == 1.0);

    const LabeledSet moons = make_moons(6, 0.05, 3);
    std::ostringstream ms;
    write_dataset_csv(ms, moons);
    write_artifacts(dir, {Artifact{"moons.csv", ms.str()}});
    c.input = dir + "/moons.csv";
    const auto first = by_name(render_gram(c, run_gram(c)));
    const GramMatrix m = run_gram(c);
    CHECK((m.entries - m.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);

    ExperimentConfig again;
    load_config_text(again, first.at("gram.csv"));
    CHECK(by_name(render_gram(again, run_gram(again))).at("gram.csv") == first.at("gram.csv"));
}

TEST_CASE("every artifact carries a config header that reproduces it")
{
    ExperimentConfig c;
    c.command = "classify";
    c.spins = 3;
    c.taus = {0.06};
    c.count = 8;
    c.grid_res = 3;
    c.task = "moons";
    const auto first = run_experiment(c);
    for (const auto& a : first) {
        if (a.filename.ends_with(".csv")) {
            ExperimentConfig again;
            load_config_text(again, a.contents);
            const auto rerun = by_name(run_experiment(again));
            CHECK(rerun.at(a.filename) == a.contents);
        }
    }
    // same config, same bytes
    const auto second = run_experiment(c);
    REQUIRE(second.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(second[i].contents == first[i].contents);
    }
}

TEST_CASE("invalid configs are rejected before any work")
{
    ExperimentConfig c;
    c.command = "mqspec";
    c.spins = 12;
    c.mq_samples = 10;
    CHECK_THROWS_AS(run_experiment(c), ConfigError);
    ExperimentConfig t;
    t.command = "profile";
    t.kernel = KernelKind::trace;
    t.spins = 13;
    CHECK_THROWS_AS(run_experiment(t), ConfigError);
}
