#include "qkm/qkernel.hpp"

#include "qkm/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace qkm {

namespace {

void check_same_dim(const DataPoint& a, const DataPoint& b)
{
    if (a.dim() != b.dim()) {
        throw ConfigError("kernel arguments have different dimensions");
    }
}

} // namespace

std::string to_string(KernelKind kind)
{
    return kind == KernelKind::pure ? "pure" : "trace";
}

KernelKind parse_kernel_kind(const std::string& name)
{
    if (name == "pure") {
        return KernelKind::pure;
    }
    if (name == "trace") {
        return KernelKind::trace;
    }
    throw ConfigError("unknown kernel '" + name + "' (expected pure|trace)");
}

double state_kernel(const StateVector& a, const StateVector& b, Exec exec)
{
    return std::norm(inner_product(a, b, exec));
}

double kernel(const SpinSystem& system, const EncodingParams& params, const DataPoint& xi, const DataPoint& xj,
              KernelForm form, Exec exec)
{
    check_same_dim(xi, xj);
    if (form == KernelForm::uncompute) {
        StateVector state = encode(system, xi, params, exec);
        apply_encoding_adjoint(state, system, xj, params, exec);
        return std::norm(state[0]);
    }
    const StateVector a = encode(system, xi, params, exec);
    const StateVector b = encode(system, xj, params, exec);
    return state_kernel(b, a, exec);
}

double trace_kernel(const SpinSystem& system, const EncodingParams& params, const DataPoint& xi,
                    const DataPoint& xj, int max_spins, Exec exec)
{
    check_same_dim(xi, xj);
    const int n = system.spins();
    if (n > max_spins) {
        throw ConfigError("trace kernel limited to " + std::to_string(max_spins) + " spins, system has " +
                          std::to_string(n));
    }
    const std::size_t dim = std::size_t{1} << n;
    double acc = 0.0;
    for (std::size_t z = 0; z < dim; ++z) {
        const double lambda_z = collective_z_eigenvalue(n, z);
        if (lambda_z == 0.0) {
            continue;
        }
        StateVector psi = basis_state(n, z);
        apply_encoding(psi, system, xj, params, exec);
        apply_encoding_adjoint(psi, system, xi, params, exec);
        double iz = 0.0;
        for (std::size_t w = 0; w < dim; ++w) {
            iz += collective_z_eigenvalue(n, w) * std::norm(psi[w]);
        }
        acc += lambda_z * iz;
    }
    // sum_z lambda_z^2 = 2^n n / 4
    return acc / (static_cast<double>(dim) * n / 4.0);
}

std::vector<StateVector> encode_all(const SpinSystem& system, const EncodingParams& params,
                                    std::span<const DataPoint> points, Exec exec)
{
    for (const auto& p : points) {
        if (p.dim() != static_cast<std::size_t>(params.feature_dim)) {
            throw ConfigError("data point dimension does not match the encoding");
        }
    }
    std::vector<StateVector> states(points.size(), StateVector(system.spins()));
    const auto count = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel && count > 1)
    for (std::int64_t i = 0; i < count; ++i) {
        states[static_cast<std::size_t>(i)] = encode(system, points[static_cast<std::size_t>(i)], params);
    }
    return states;
}

GramMeta make_meta(const SpinSystem& system, const EncodingParams& params, KernelKind kind)
{
    return GramMeta{system.spins(), params.tau, params.substeps, params.feature_dim, system.seed(), kind};
}

GramMatrix gram(const SpinSystem& system, const EncodingParams& params, std::span<const DataPoint> points,
                const GramOptions& options)
{
    if (points.empty()) {
        throw ConfigError("Gram matrix needs at least one point");
    }
    params.validate();
    const auto n = static_cast<Eigen::Index>(points.size());
    GramMatrix g;
    g.points.assign(points.begin(), points.end());
    g.meta = make_meta(system, params, options.kind);
    g.entries = Eigen::MatrixXd::Identity(n, n);

    // flat list of upper-triangle cells, so threads get balanced chunks
    std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
    cells.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            cells.emplace_back(i, j);
        }
    }
    const auto ncells = static_cast<std::int64_t>(cells.size());
    const bool par = options.exec == Exec::parallel;

    if (options.kind == KernelKind::trace) {
#pragma omp parallel for schedule(dynamic, 1) if (par)
        for (std::int64_t c = 0; c < ncells; ++c) {
            const auto [i, j] = cells[static_cast<std::size_t>(c)];
            g.entries(i, j) = trace_kernel(system, params, points[static_cast<std::size_t>(i)],
                                           points[static_cast<std::size_t>(j)], options.trace_max_spins);
        }
    } else if (options.shift_fast_path) {
        if (params.feature_dim != 1) {
            throw ConfigError("shift fast path requires one-dimensional inputs");
        }
        for (const auto& p : points) {
            if (p.dim() != 1) {
                throw ConfigError("data point dimension does not match the encoding");
            }
        }
        const auto pops = sector_populations(system, params);
#pragma omp parallel for schedule(static) if (par)
        for (std::int64_t c = 0; c < ncells; ++c) {
            const auto [i, j] = cells[static_cast<std::size_t>(c)];
            g.entries(i, j) = kernel_from_populations(
                pops, points[static_cast<std::size_t>(i)][0] - points[static_cast<std::size_t>(j)][0]);
        }
    } else {
        const auto states = encode_all(system, params, points, options.exec);
#pragma omp parallel for schedule(static) if (par)
        for (std::int64_t c = 0; c < ncells; ++c) {
            const auto [i, j] = cells[static_cast<std::size_t>(c)];
            g.entries(i, j) = state_kernel(states[static_cast<std::size_t>(j)], states[static_cast<std::size_t>(i)]);
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            g.entries(j, i) = g.entries(i, j);
        }
    }
    return g;
}

Eigen::VectorXd kernel_vector(const SpinSystem& system, const EncodingParams& params,
                              std::span<const DataPoint> points, const DataPoint& x, KernelKind kind, Exec exec)
{
    const DataPoint single[] = {x};
    return cross_kernel(system, params, single, points, kind, exec).row(0).transpose();
}

Eigen::MatrixXd cross_kernel(const SpinSystem& system, const EncodingParams& params,
                             std::span<const DataPoint> rows, std::span<const DataPoint> cols, KernelKind kind,
                             Exec exec)
{
    const auto nr = static_cast<Eigen::Index>(rows.size());
    const auto nc = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd out(nr, nc);
    const bool par = exec == Exec::parallel;
    if (kind == KernelKind::trace) {
        const auto total = static_cast<std::int64_t>(nr * nc);
#pragma omp parallel for schedule(dynamic, 1) if (par)
        for (std::int64_t c = 0; c < total; ++c) {
            const Eigen::Index r = c / nc;
            const Eigen::Index k = c % nc;
            out(r, k) = trace_kernel(system, params, cols[static_cast<std::size_t>(k)],
                                     rows[static_cast<std::size_t>(r)]);
        }
        return out;
    }
    const auto row_states = encode_all(system, params, rows, exec);
    const auto col_states = encode_all(system, params, cols, exec);
#pragma omp parallel for schedule(static) if (par)
    for (Eigen::Index r = 0; r < nr; ++r) {
        for (Eigen::Index k = 0; k < nc; ++k) {
            out(r, k) = state_kernel(row_states[static_cast<std::size_t>(r)], col_states[static_cast<std::size_t>(k)]);
        }
    }
    return out;
}

std::vector<double> sector_populations(const SpinSystem& system, const EncodingParams& params, Exec exec)
{
    if (params.feature_dim != 1) {
        throw ConfigError("sector populations are defined for one-dimensional encodings");
    }
    const StateVector psi = encode(system, DataPoint{0.0}, params, exec);
    std::vector<double> pops(static_cast<std::size_t>(system.spins()) + 1, 0.0);
    for (std::size_t z = 0; z < psi.dim(); ++z) {
        pops[static_cast<std::size_t>(std::popcount(z))] += std::norm(psi[z]);
    }
    return pops;
}

double kernel_from_populations(std::span<const double> populations, double delta)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < populations.size(); ++k) {
        re += populations[k] * std::cos(delta * static_cast<double>(k));
        im += populations[k] * std::sin(delta * static_cast<double>(k));
    }
    return re * re + im * im;
}

std::vector<ProfilePoint> kernel_profile_1d(const SpinSystem& system, const EncodingParams& params,
                                            std::span<const double> deltas, Exec exec)
{
    if (params.feature_dim != 1) {
        throw ConfigError("kernel profile requires one-dimensional inputs");
    }
    std::vector<DataPoint> points;
    points.reserve(deltas.size());
    for (double d : deltas) {
        points.push_back(DataPoint{d});
    }
    const StateVector origin = encode(system, DataPoint{0.0}, params);
    const auto states = encode_all(system, params, points, exec);
    std::vector<ProfilePoint> out(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        out[i] = {deltas[i], state_kernel(origin, states[i])};
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int count)
{
    if (count < 1) {
        throw ConfigError("linspace needs at least one point");
    }
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = lo + step * i;
    }
    out.back() = hi;
    return out;
}

std::vector<double> periodic_grid(int samples)
{
    if (samples < 1) {
        throw ConfigError("periodic grid needs at least one sample");
    }
    std::vector<double> out(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        out[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * j / samples;
    }
    return out;
}

double MqSpectrum::at(int order) const
{
    const auto it = std::find(orders.begin(), orders.end(), order);
    if (it == orders.end()) {
        return 0.0;
    }
    return intensities[static_cast<std::size_t>(it - orders.begin())];
}

double MqSpectrum::total() const
{
    double s = 0.0;
    for (double v : intensities) {
        s += v;
    }
    return s;
}

MqSpectrum mq_spectrum(std::span<const double> deltas, std::span<const double> values, int max_order)
{
    const auto samples = static_cast<int>(deltas.size());
    if (values.size() != deltas.size()) {
        throw ConfigError("profile grid and values differ in length");
    }
    if (max_order < 0 || samples < 2 * max_order + 1) {
        throw ConfigError("need at least 2*max_order+1 samples for the multiple-quantum spectrum");
    }
    const double step = 2.0 * std::numbers::pi / samples;
    for (int j = 0; j < samples; ++j) {
        if (std::abs(deltas[static_cast<std::size_t>(j)] - step * j) > 1e-9) {
            throw ConfigError("profile must be sampled uniformly on [0, 2pi) starting at 0");
        }
    }
    MqSpectrum spec;
    for (int m = -max_order; m <= max_order; ++m) {
        double re = 0.0;
        double im = 0.0;
        for (int j = 0; j < samples; ++j) {
            // exact phase from the integer product, not from the sampled delta
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((static_cast<long long>(m) * j) % samples) /
                                 samples;
            re += values[static_cast<std::size_t>(j)] * std::cos(phase);
            im += values[static_cast<std::size_t>(j)] * std::sin(phase);
        }
        spec.orders.push_back(m);
        spec.intensities.push_back(re / samples);
        spec.max_imag_residue = std::max(spec.max_imag_residue, std::abs(im / samples));
    }
    return spec;
}

double profile_fwhm(std::span<const ProfilePoint> profile)
{
    if (profile.size() < 2) {
        throw ConfigError("FWHM needs at least two profile samples");
    }
    std::size_t peak = 0;
    double kmin = profile[0].k;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i].k > profile[peak].k) {
            peak = i;
        }
        kmin = std::min(kmin, profile[i].k);
    }
    const double level = 0.5 * (profile[peak].k + kmin);

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const auto& a = profile[inside];
        const auto& b = profile[outside];
        const double t = (a.k - level) / (a.k - b.k);
        return a.delta + t * (b.delta - a.delta);
    };

    double left = profile.front().delta;
    for (std::size_t i = peak; i > 0; --i) {
        if (profile[i - 1].k < level) {
            left = crossing(i, i - 1);
            break;
        }
    }
    double right = profile.back().delta;
    for (std::size_t i = peak; i + 1 < profile.size(); ++i) {
        if (profile[i + 1].k < level) {
            right = crossing(i, i + 1);
            break;
        }
    }
    return right - left;
}

} // namespace qkm
