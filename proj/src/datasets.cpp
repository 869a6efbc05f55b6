#include "qkm/datasets.hpp"

#include "qkm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace qkm {

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void add_noise(std::vector<DataPoint>& points, double noise_sd, std::uint64_t seed)
{
    if (noise_sd < 0.0 || !std::isfinite(noise_sd)) {
        throw ConfigError("noise standard deviation must be finite and >= 0");
    }
    if (noise_sd == 0.0) {
        return;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, noise_sd);
    for (auto& p : points) {
        for (auto& c : p.coords) {
            c += gauss(rng);
        }
    }
}

} // namespace

std::string to_string(RegressionTask task)
{
    return task == RegressionTask::sin ? "sin" : "sinc";
}

RegressionTask parse_regression_task(const std::string& name)
{
    if (name == "sin") {
        return RegressionTask::sin;
    }
    if (name == "sinc") {
        return RegressionTask::sinc;
    }
    throw ConfigError("unknown regression task '" + name + "' (expected sin|sinc)");
}

double regression_target(RegressionTask task, double x)
{
    const double u = 2.0 * std::numbers::pi * x / 50.0;
    if (task == RegressionTask::sin) {
        return std::sin(u);
    }
    return u == 0.0 ? 1.0 : std::sin(u) / u;
}

LabeledSet regression_1d(RegressionTask task, int count, double lo, double hi, std::uint64_t seed)
{
    if (count < 1) {
        throw ConfigError("regression set needs at least one sample");
    }
    if (!(hi > lo)) {
        throw ConfigError("regression range is empty");
    }
    LabeledSet set;
    set.seed = seed;
    set.generator = "regression_1d";
    set.params = {{"task", to_string(task)}, {"count", std::to_string(count)}, {"lo", num(lo)}, {"hi", num(hi)}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(lo, hi);
    for (int i = 0; i < count; ++i) {
        const double x = uniform(rng);
        set.points.push_back(DataPoint{x});
        set.targets.push_back(regression_target(task, x));
    }
    return set;
}

std::vector<DataPoint> eval_grid_1d(int count, double lo, double hi)
{
    if (count < 1) {
        throw ConfigError("evaluation grid needs at least one point");
    }
    if (hi < lo) {
        throw ConfigError("evaluation range is empty");
    }
    std::vector<DataPoint> out;
    const double step = count > 1 ? (hi - lo) / (count - 1) : 0.0;
    for (int i = 0; i < count; ++i) {
        out.push_back(DataPoint{i == count - 1 && count > 1 ? hi : lo + step * i});
    }
    return out;
}

LabeledSet make_circles(int count, double noise_sd, double factor, std::uint64_t seed)
{
    if (count < 2) {
        throw ConfigError("circles needs at least two points");
    }
    if (!(factor > 0.0 && factor < 1.0)) {
        throw ConfigError("circles factor must lie in (0, 1)");
    }
    LabeledSet set;
    set.seed = seed;
    set.generator = "circles";
    set.params = {{"count", std::to_string(count)}, {"noise", num(noise_sd)}, {"factor", num(factor)}};
    const int outer = count / 2;
    const int inner = count - outer;
    for (int i = 0; i < outer; ++i) {
        const double t = 2.0 * std::numbers::pi * i / outer;
        set.points.push_back(DataPoint{std::cos(t), std::sin(t)});
        set.targets.push_back(-1.0);
    }
    for (int i = 0; i < inner; ++i) {
        const double t = 2.0 * std::numbers::pi * i / inner;
        set.points.push_back(DataPoint{factor * std::cos(t), factor * std::sin(t)});
        set.targets.push_back(1.0);
    }
    add_noise(set.points, noise_sd, seed);
    return set;
}

LabeledSet make_moons(int count, double noise_sd, std::uint64_t seed)
{
    if (count < 4) {
        throw ConfigError("moons needs at least four points");
    }
    LabeledSet set;
    set.seed = seed;
    set.generator = "moons";
    set.params = {{"count", std::to_string(count)}, {"noise", num(noise_sd)}};
    const int upper = count / 2;
    const int lower = count - upper;
    for (int i = 0; i < upper; ++i) {
        const double t = std::numbers::pi * i / (upper - 1);
        set.points.push_back(DataPoint{std::cos(t), std::sin(t)});
        set.targets.push_back(-1.0);
    }
    for (int i = 0; i < lower; ++i) {
        const double t = std::numbers::pi * i / (lower - 1);
        set.points.push_back(DataPoint{1.0 - std::cos(t), 0.5 - std::sin(t)});
        set.targets.push_back(1.0);
    }
    add_noise(set.points, noise_sd, seed);
    return set;
}

FeatureScaler FeatureScaler::fit(const std::vector<DataPoint>& points, double halfwidth)
{
    if (points.empty()) {
        throw ConfigError("cannot fit a scaler to an empty set");
    }
    if (!(halfwidth > 0.0)) {
        throw ConfigError("scaling halfwidth must be positive");
    }
    const std::size_t dim = points.front().dim();
    FeatureScaler s;
    s.centers_.assign(dim, 0.0);
    s.scales_.assign(dim, 0.0);
    for (std::size_t c = 0; c < dim; ++c) {
        double lo = points.front()[c];
        double hi = lo;
        for (const auto& p : points) {
            if (p.dim() != dim) {
                throw ConfigError("points have inconsistent dimensions");
            }
            lo = std::min(lo, p[c]);
            hi = std::max(hi, p[c]);
        }
        s.centers_[c] = 0.5 * (lo + hi);
        s.scales_[c] = hi > lo ? 2.0 * halfwidth / (hi - lo) : 0.0;
    }
    return s;
}

DataPoint FeatureScaler::apply(const DataPoint& p) const
{
    if (p.dim() != centers_.size()) {
        throw ConfigError("point dimension does not match the scaler");
    }
    DataPoint out = p;
    for (std::size_t c = 0; c < centers_.size(); ++c) {
        out.coords[c] = (p[c] - centers_[c]) * scales_[c];
    }
    return out;
}

DataPoint FeatureScaler::invert(const DataPoint& p) const
{
    if (p.dim() != centers_.size()) {
        throw ConfigError("point dimension does not match the scaler");
    }
    DataPoint out = p;
    for (std::size_t c = 0; c < centers_.size(); ++c) {
        out.coords[c] = scales_[c] != 0.0 ? p[c] / scales_[c] + centers_[c] : centers_[c];
    }
    return out;
}

std::vector<DataPoint> FeatureScaler::apply(const std::vector<DataPoint>& points) const
{
    std::vector<DataPoint> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(apply(p));
    }
    return out;
}

LabeledSet scale_features(const LabeledSet& set, double halfwidth)
{
    const auto scaler = FeatureScaler::fit(set.points, halfwidth);
    LabeledSet out = set;
    out.points = scaler.apply(set.points);
    out.params["halfwidth"] = num(halfwidth);
    return out;
}

} // namespace qkm
