#include "doctest.h"

#include "qkm/datasets.hpp"
#include "qkm/error.hpp"

#include <cmath>
#include <numbers>

using namespace qkm;
using std::numbers::pi;

TEST_CASE("regression targets")
{
    CHECK(regression_target(RegressionTask::sin, 12.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(regression_target(RegressionTask::sin, 25.0)) < 1e-15);
    CHECK(regression_target(RegressionTask::sinc, 0.0) == 1.0);
    CHECK(regression_target(RegressionTask::sinc, 12.5) == doctest::Approx(2.0 / pi).epsilon(1e-15));
    CHECK(parse_regression_task("sinc") == RegressionTask::sinc);
    CHECK_THROWS_AS(parse_regression_task("cos"), ConfigError);
}

TEST_CASE("regression_1d")
{
    const LabeledSet s = regression_1d(RegressionTask::sin, 40, -45.0, 45.0, 3);
    CHECK(s.size() == 40);
    CHECK(s.dim() == 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.points[i][0] >= -45.0);
        CHECK(s.points[i][0] <= 45.0);
        CHECK(s.targets[i] == regression_target(RegressionTask::sin, s.points[i][0]));
    }
    CHECK(s == regression_1d(RegressionTask::sin, 40, -45.0, 45.0, 3));
    CHECK(s.points != regression_1d(RegressionTask::sin, 40, -45.0, 45.0, 4).points);
    CHECK_THROWS_AS(regression_1d(RegressionTask::sin, 0, -45.0, 45.0, 3), ConfigError);
    CHECK_THROWS_AS(regression_1d(RegressionTask::sin, 5, 1.0, 1.0, 3), ConfigError);
}

TEST_CASE("eval_grid_1d")
{
    const auto g = eval_grid_1d(64, -45.0, 45.0);
    REQUIRE(g.size() == 64);
    CHECK(g.front()[0] == -45.0);
    CHECK(g.back()[0] == 45.0);
    CHECK(g[1][0] - g[0][0] == doctest::Approx(90.0 / 63.0));
    const auto two = eval_grid_1d(2, -45.0, 45.0);
    CHECK(two.size() == 2);
    CHECK(two[0][0] == -45.0);
    CHECK(two[1][0] == 45.0);
}

TEST_CASE("circles")
{
    const LabeledSet four = make_circles(4, 0.0, 0.5, 1);
    REQUIRE(four.size() == 4);
    // outer at angles 0 and pi, then inner
    CHECK(four.points[0][0] == doctest::Approx(1.0));
    CHECK(std::abs(four.points[0][1]) < 1e-15);
    CHECK(four.points[1][0] == doctest::Approx(-1.0));
    CHECK(std::abs(four.points[1][1]) < 1e-15);
    CHECK(four.points[2][0] == doctest::Approx(0.5));
    CHECK(four.points[3][0] == doctest::Approx(-0.5));
    CHECK(four.targets == std::vector<double>{-1.0, -1.0, 1.0, 1.0});

    const LabeledSet clean = make_circles(100, 0.0, 0.3, 2);
    for (std::size_t i = 0; i < clean.size(); ++i) {
        const double r = std::hypot(clean.points[i][0], clean.points[i][1]);
        CHECK(r == doctest::Approx(clean.targets[i] > 0 ? 0.3 : 1.0).epsilon(1e-14));
    }
    CHECK(make_circles(100, 0.08, 0.5, 9) == make_circles(100, 0.08, 0.5, 9));
    CHECK_THROWS_AS(make_circles(10, 0.0, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(make_circles(10, 0.0, 0.0, 1), ConfigError);
}

TEST_CASE("moons")
{
    const LabeledSet m = make_moons(100, 0.0, 1);
    REQUIRE(m.size() == 100);
    int pos = 0;
    for (double t : m.targets) {
        pos += t > 0 ? 1 : 0;
    }
    CHECK(std::abs(2 * pos - 100) <= 1);
    CHECK(m.points[0][0] == doctest::Approx(1.0));
    CHECK(std::abs(m.points[0][1]) < 1e-15);
    CHECK(m.points[49][0] == doctest::Approx(-1.0));
    CHECK(std::abs(m.points[49][1]) < 1e-15);
    CHECK(std::abs(m.points[50][0]) < 1e-15);
    CHECK(m.points[50][1] == doctest::Approx(0.5));
    CHECK(m.points[99][0] == doctest::Approx(2.0));
    CHECK(m.points[99][1] == doctest::Approx(0.5));
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(std::hypot(m.points[i][0], m.points[i][1]) == doctest::Approx(1.0));
        CHECK(std::hypot(1.0 - m.points[50 + i][0], 0.5 - m.points[50 + i][1]) == doctest::Approx(1.0));
    }
    const LabeledSet odd = make_moons(7, 0.1, 3);
    int odd_pos = 0;
    for (double t : odd.targets) {
        odd_pos += t > 0 ? 1 : 0;
    }
    CHECK(std::abs(2 * odd_pos - 7) <= 1);
    CHECK(make_moons(50, 0.1, 5) == make_moons(50, 0.1, 5));
}

TEST_CASE("feature scaling")
{
    LabeledSet s;
    s.points = {DataPoint{0.0, 3.0}, DataPoint{2.0, 3.0}, DataPoint{1.0, 3.0}};
    s.targets = {1, -1, 1};
    const LabeledSet t = scale_features(s, 1.0);
    CHECK(t.points[0][0] == -1.0);
    CHECK(t.points[1][0] == 1.0);
    CHECK(t.points[2][0] == 0.0);
    for (const auto& p : t.points) {
        CHECK(p[1] == 0.0);
    }
    const LabeledSet again = scale_features(t, 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(again.points[i][0] == doctest::Approx(t.points[i][0]));
    }
    const FeatureScaler f = FeatureScaler::fit(s.points, 0.7);
    const DataPoint back = f.invert(f.apply(DataPoint{1.5, 3.0}));
    CHECK(back[0] == doctest::Approx(1.5));
    CHECK(f.apply(DataPoint{0.5, 3.0})[0] < f.apply(DataPoint{0.6, 3.0})[0]);
    CHECK(scale_features(make_moons(20, 0.0, 1)).points[0].dim() == 2);
}
