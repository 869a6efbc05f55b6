#include "qkm/spinsim.hpp"

#include "qkm/error.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <string>

namespace qkm {

namespace {

constexpr int kMaxSpins = 30;

void check_spins(int spins)
{
    if (spins < 1 || spins > kMaxSpins) {
        throw ConfigError("spin count must be in [1, " + std::to_string(kMaxSpins) + "], got " +
                          std::to_string(spins));
    }
}

void check_compatible(const StateVector& state, const SpinSystem& system)
{
    if (state.spins() != system.spins()) {
        throw ConfigError("state has " + std::to_string(state.spins()) + " spins, system has " +
                          std::to_string(system.spins()));
    }
}

void check_point(const DataPoint& x, const EncodingParams& params)
{
    if (x.dim() != static_cast<std::size_t>(params.feature_dim)) {
        throw ConfigError("data point has dimension " + std::to_string(x.dim()) + ", encoding expects " +
                          std::to_string(params.feature_dim));
    }
    for (double v : x.coords) {
        if (!std::isfinite(v)) {
            throw ConfigError("data point has a non-finite coordinate");
        }
    }
}

void z_rotate(StateVector& state, double angle, Exec exec)
{
    if (exec == Exec::parallel) {
        kernels::collective_z_omp(state.amplitudes(), state.spins(), angle);
    } else {
        kernels::collective_z_serial(state.amplitudes(), state.spins(), angle);
    }
}

void dq(StateVector& state, int mu, int nu, double theta, Exec exec)
{
    if (exec == Exec::parallel) {
        kernels::dq_gate_omp(state.amplitudes(), mu, nu, theta);
    } else {
        kernels::dq_gate_serial(state.amplitudes(), mu, nu, theta);
    }
}

// The Trotterized double-quantum block [prod dq]^M, or its inverse.
void trotter_block(StateVector& state, const SpinSystem& system, const EncodingParams& params, bool inverse,
                   Exec exec)
{
    const int n = system.spins();
    const double scale = params.tau / params.substeps;
    if (!inverse) {
        for (int step = 0; step < params.substeps; ++step) {
            for (int mu = 0; mu < n; ++mu) {
                for (int nu = mu + 1; nu < n; ++nu) {
                    dq(state, mu, nu, scale * system.coupling(mu, nu), exec);
                }
            }
        }
        return;
    }
    for (int step = 0; step < params.substeps; ++step) {
        for (int mu = n - 1; mu >= 0; --mu) {
            for (int nu = n - 1; nu > mu; --nu) {
                dq(state, mu, nu, -scale * system.coupling(mu, nu), exec);
            }
        }
    }
}

} // namespace

SpinSystem::SpinSystem(int spins, std::vector<double> couplings, std::uint64_t seed)
    : spins_(spins), couplings_(std::move(couplings)), seed_(seed)
{
    check_spins(spins);
    const auto n = static_cast<std::size_t>(spins);
    if (couplings_.size() != n * n) {
        throw ConfigError("coupling matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (couplings_[i * n + i] != 0.0) {
            throw ConfigError("coupling matrix must have a zero diagonal");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            if (couplings_[i * n + j] != couplings_[j * n + i]) {
                throw ConfigError("coupling matrix must be symmetric");
            }
            if (!std::isfinite(couplings_[i * n + j])) {
                throw ConfigError("coupling matrix has a non-finite entry");
            }
        }
    }
}

SpinSystem SpinSystem::uncoupled(int spins)
{
    check_spins(spins);
    const auto n = static_cast<std::size_t>(spins);
    return SpinSystem(spins, std::vector<double>(n * n, 0.0), 0);
}

SpinSystem draw_couplings(int spins, std::uint64_t seed)
{
    check_spins(spins);
    const auto n = static_cast<std::size_t>(spins);
    std::vector<double> d(n * n, 0.0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = uniform(rng);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    return SpinSystem(spins, std::move(d), seed);
}

StateVector::StateVector(int spins) : spins_(spins)
{
    check_spins(spins);
    amps_.assign(std::size_t{1} << spins, cplx{0.0, 0.0});
}

StateVector::StateVector(int spins, std::vector<cplx> amplitudes) : spins_(spins), amps_(std::move(amplitudes))
{
    check_spins(spins);
    if (amps_.size() != (std::size_t{1} << spins)) {
        throw ConfigError("amplitude vector must have 2^n entries");
    }
}

double StateVector::norm() const
{
    double sum = 0.0;
    for (const auto& a : amps_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

StateVector ground_state(int spins)
{
    return basis_state(spins, 0);
}

StateVector basis_state(int spins, std::size_t index)
{
    StateVector s(spins);
    if (index >= s.dim()) {
        throw ConfigError("basis index out of range");
    }
    s[index] = 1.0;
    return s;
}

void EncodingParams::validate() const
{
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw ConfigError("tau must be finite and >= 0");
    }
    if (substeps < 1) {
        throw ConfigError("Trotter substep count must be >= 1");
    }
    if (feature_dim < 1) {
        throw ConfigError("feature dimension must be >= 1");
    }
}

EncodingParams EncodingParams::from_dt(double tau, double dt, int feature_dim)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("Trotter step dt must be > 0");
    }
    EncodingParams p;
    p.tau = tau;
    p.feature_dim = feature_dim;
    // tolerate tau/dt landing a hair above an integer
    const double ratio = tau / dt;
    p.substeps = std::max(1, static_cast<int>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio))));
    p.validate();
    return p;
}

double collective_z_eigenvalue(int spins, std::size_t index)
{
    return 0.5 * spins - std::popcount(index);
}

void apply_collective_z(StateVector& state, double angle, Exec exec)
{
    z_rotate(state, angle, exec);
}

void apply_dq_gate(StateVector& state, int mu, int nu, double theta, Exec exec)
{
    const int n = state.spins();
    if (mu < 0 || nu < 0 || mu >= n || nu >= n || mu == nu) {
        throw ConfigError("dq gate needs two distinct spin indices in [0, " + std::to_string(n) + ")");
    }
    dq(state, mu, nu, theta, exec);
}

void evolve_segment(StateVector& state, const SpinSystem& system, double x, const EncodingParams& params,
                    Exec exec)
{
    check_compatible(state, system);
    params.validate();
    z_rotate(state, -x, exec);  // e^{+ix I_z}
    trotter_block(state, system, params, false, exec);
    z_rotate(state, x, exec);   // e^{-ix I_z}
}

void evolve_segment_adjoint(StateVector& state, const SpinSystem& system, double x,
                            const EncodingParams& params, Exec exec)
{
    check_compatible(state, system);
    params.validate();
    z_rotate(state, -x, exec);
    trotter_block(state, system, params, true, exec);
    z_rotate(state, x, exec);
}

void apply_encoding(StateVector& state, const SpinSystem& system, const DataPoint& x, const EncodingParams& params,
                    Exec exec)
{
    check_point(x, params);
    for (std::size_t j = 0; j < x.dim(); ++j) {
        evolve_segment(state, system, x[j], params, exec);
    }
}

void apply_encoding_adjoint(StateVector& state, const SpinSystem& system, const DataPoint& x,
                            const EncodingParams& params, Exec exec)
{
    check_point(x, params);
    for (std::size_t j = x.dim(); j-- > 0;) {
        evolve_segment_adjoint(state, system, x[j], params, exec);
    }
}

StateVector encode(const SpinSystem& system, const DataPoint& x, const EncodingParams& params, Exec exec)
{
    StateVector state = ground_state(system.spins());
    apply_encoding(state, system, x, params, exec);
    return state;
}

StateVector encode_adjoint(const SpinSystem& system, const DataPoint& x, const EncodingParams& params,
                           StateVector state, Exec exec)
{
    apply_encoding_adjoint(state, system, x, params, exec);
    return state;
}

cplx inner_product(const StateVector& a, const StateVector& b, Exec exec)
{
    if (a.spins() != b.spins()) {
        throw ConfigError("inner product of states with different spin counts");
    }
    return exec == Exec::parallel ? kernels::inner_product_omp(a.amplitudes(), b.amplitudes())
                                  : kernels::inner_product_serial(a.amplitudes(), b.amplitudes());
}

} // namespace qkm
