#include "doctest.h"

#include "qkm/config.hpp"
#include "qkm/error.hpp"
#include "qkm/io.hpp"

#include <cmath>
#include <sstream>

using namespace qkm;

TEST_CASE("float text round-trips exactly")
{
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0}) {
        CHECK(parse_float(format_float(v)) == v);
    }
    CHECK_THROWS_AS(parse_float("1.5x"), ConfigError);
}

TEST_CASE("csv reader")
{
    std::istringstream in("# a=1\n# b=two\nx,y\n1,2\n3,4.5\n");
    const CsvTable t = read_csv(in);
    CHECK(t.get("a") == "1");
    CHECK(t.get("b") == "two");
    CHECK(t.header == std::vector<std::string>{"x", "y"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][1] == 4.5);
    CHECK_THROWS(t.get("missing"));
}

TEST_CASE("gram csv and json round trip")
{
    GramMatrix g;
    g.entries = Eigen::MatrixXd::Identity(2, 2);
    g.entries(0, 1) = g.entries(1, 0) = 1.0 / 3.0;
    g.points = {DataPoint{0.1}, DataPoint{-0.2}};
    g.meta = GramMeta{4, 0.06, 60, 1, 9, KernelKind::pure};

    std::ostringstream out;
    write_gram_csv(out, g);
    std::istringstream in(out.str());
    const GramMatrix back = read_gram_csv(in);
    CHECK(back.entries == g.entries);
    CHECK(back.meta.spins == 4);
    CHECK(back.meta.seed == 9);
    CHECK(back.meta.tau == 0.06);

    const GramMatrix j = gram_from_json(gram_to_json(g));
    CHECK(j.entries == g.entries);
    CHECK(j.points == g.points);
    CHECK(j.meta.substeps == 60);
}

TEST_CASE("dataset csv round trip")
{
    const LabeledSet s = make_moons(10, 0.1, 4);
    std::ostringstream out;
    write_dataset_csv(out, s);
    CHECK(out.str().rfind('#', 0) == 0);
    std::istringstream in(out.str());
    const LabeledSet back = read_dataset_csv(in);
    CHECK(back.points == s.points);
    CHECK(back.targets == s.targets);
    CHECK(back.seed == s.seed);
    CHECK(back.generator == s.generator);
}

TEST_CASE("model json round trip")
{
    RegressionModel r;
    r.alphas = Eigen::Vector2d(0.5, -1.0 / 7.0);
    r.lambda = 1e-3;
    r.train_points = {DataPoint{0.1}, DataPoint{0.2}};
    r.targets = Eigen::Vector2d(1.0, 2.0);
    const RegressionModel r2 = regression_model_from_json(model_to_json(r));
    CHECK(r2.alphas == r.alphas);
    CHECK(r2.lambda == r.lambda);
    CHECK(r2.train_points == r.train_points);

    const SvmModel s = svm_fit(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1.0, -1.0));
    const SvmModel s2 = svm_model_from_json(model_to_json(s));
    CHECK(s2.alphas == s.alphas);
    CHECK(s2.bias == s.bias);
    CHECK(s2.support_indices == s.support_indices);
}

TEST_CASE("config parsing, defaults, validation")
{
    ExperimentConfig c;
    load_config_text(c, "command=regress\n# a comment\nspins = 5\ntau=0.02,0.1\n# config.seed=7\nnot a setting\n");
    CHECK(c.command == "regress");
    CHECK(c.spins == 5);
    CHECK(c.resolved_taus() == std::vector<double>{0.02, 0.1});
    CHECK(c.seed == 7);
    CHECK(c.resolved_units() == Units::degrees);
    CHECK(c.resolved_task() == "sin");
    CHECK(c.resolved_count() == 40);
    CHECK_NOTHROW(c.validate());

    CHECK_THROWS_AS(apply_setting(c, "bogus", "1"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "spins", "five"), ConfigError);

    ExperimentConfig k;
    k.command = "classify";
    CHECK(k.resolved_task() == "circles");
    CHECK(k.resolved_count() == 100);
    CHECK(k.resolved_units() == Units::radians);
    CHECK(k.resolved_taus() == std::vector<double>{0.03, 0.06, 0.09});
    k.units = Units::degrees;
    CHECK_THROWS_AS(k.validate(), ConfigError);

    ExperimentConfig bad;
    bad.spins = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.spins = 3;
    bad.command = "plot";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("config survives its own metadata header")
{
    ExperimentConfig c;
    c.command = "classify";
    c.spins = 7;
    c.taus = {0.05};
    c.task = "moons";
    c.noise = 0.1234567890123;
    c.out = "/tmp/elsewhere";
    c.parallel = true;
    std::ostringstream os;
    write_metadata(os, c.to_metadata());
    for (const auto& [k, v] : c.to_metadata()) {
        CHECK(k.rfind("config.", 0) == 0);
        CHECK(k != "config.out");
        CHECK(k != "config.parallel");
    }
    ExperimentConfig r;
    load_config_text(r, os.str());
    CHECK(r.to_metadata() == c.to_metadata());
    CHECK(r.noise == c.noise);
}
