#pragma once

#include "qkm/spinsim.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qkm {

struct LabeledSet {
    std::vector<DataPoint> points;
    std::vector<double> targets;  // regression values or +-1 labels
    std::uint64_t seed = 0;
    std::string generator;
    std::map<std::string, std::string> params;

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().dim(); }

    friend bool operator==(const LabeledSet&, const LabeledSet&) = default;
};

enum class RegressionTask { sin, sinc };

std::string to_string(RegressionTask task);
RegressionTask parse_regression_task(const std::string& name);

// Target functions with x in the same units as the sampling range (degrees by
// default): sin(2 pi x / 50) and its sinc, sinc(0) = 1.
double regression_target(RegressionTask task, double x);

// `count` x values uniform on [lo, hi], coordinates left in the range's units.
LabeledSet regression_1d(RegressionTask task, int count, double lo, double hi, std::uint64_t seed);

// `count` evenly spaced points on [lo, hi], endpoints included.
std::vector<DataPoint> eval_grid_1d(int count, double lo, double hi);

// Outer circle (radius 1, label -1) holds count/2 points, the inner circle
// (radius `factor`, label +1) the rest; angles evenly spaced from 0, then
// isotropic Gaussian noise.
LabeledSet make_circles(int count, double noise_sd, double factor, std::uint64_t seed);

// Upper moon (cos t, sin t), label -1, count/2 points; lower moon
// (1 - cos t, 0.5 - sin t), label +1; t evenly spaced on [0, pi].
LabeledSet make_moons(int count, double noise_sd, std::uint64_t seed);

// Per-coordinate affine map of the fitted data range onto [-halfwidth, halfwidth].
// A constant coordinate maps to 0.
class FeatureScaler {
public:
    static FeatureScaler fit(const std::vector<DataPoint>& points, double halfwidth);

    DataPoint apply(const DataPoint& p) const;
    DataPoint invert(const DataPoint& p) const;
    std::vector<DataPoint> apply(const std::vector<DataPoint>& points) const;

    const std::vector<double>& centers() const { return centers_; }
    const std::vector<double>& scales() const { return scales_; }

private:
    std::vector<double> centers_;
    std::vector<double> scales_;  // multiplies (x - center); 0 for a constant column
};

// The kernel is pi-periodic in each coordinate, so a halfwidth of pi/4 keeps
// pairwise differences inside one period, [-pi/2, pi/2].
inline constexpr double kDefaultHalfwidth = 0.78539816339744831;  // pi / 4

LabeledSet scale_features(const LabeledSet& set, double halfwidth = kDefaultHalfwidth);

} // namespace qkm
