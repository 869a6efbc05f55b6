// spinsim.hpp
// Dense state-vector simulation of n spin-1/2 particles under the
// phase-rotated double-quantum Hamiltonian used as a data encoding.
//
// Conventions:
//   * spin mu is bit mu of the basis index (spin 0 is the least significant bit);
//   * bit 0 is the +1/2 eigenstate of I_z,mu, so the all-zero index is the
//     ground state |0> of the collective I_z;
//   * I_alpha = sigma_alpha / 2, angles are radians, global phases are kept.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qkm {

using cplx = std::complex<double>;

// Execution policy for amplitude-level loops. `serial` is the reference path;
// `parallel` runs the OpenMP kernels.
enum class Exec { serial, parallel };

class SpinSystem {
public:
    // `couplings` is the n*n row-major coupling matrix; must be symmetric with
    // a zero diagonal.
    SpinSystem(int spins, std::vector<double> couplings, std::uint64_t seed = 0);

    int spins() const { return spins_; }
    std::uint64_t seed() const { return seed_; }
    double coupling(int mu, int nu) const { return couplings_[static_cast<std::size_t>(mu * spins_ + nu)]; }
    const std::vector<double>& couplings() const { return couplings_; }

    // A system with every coupling zero (H = 0).
    static SpinSystem uncoupled(int spins);

private:
    int spins_;
    std::vector<double> couplings_;
    std::uint64_t seed_;
};

// Couplings i.i.d. uniform on [-1, 1] for each pair mu < nu, mirrored.
SpinSystem draw_couplings(int spins, std::uint64_t seed);

class StateVector {
public:
    explicit StateVector(int spins);  // all amplitudes zero
    StateVector(int spins, std::vector<cplx> amplitudes);

    int spins() const { return spins_; }
    std::size_t dim() const { return amps_.size(); }

    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }

    double norm() const;

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    int spins_;
    std::vector<cplx> amps_;
};

StateVector ground_state(int spins);
StateVector basis_state(int spins, std::size_t index);

// tau: evolution time per input coordinate; substeps: Trotter count M;
// feature_dim: D, the number of coordinates per data point.
struct EncodingParams {
    double tau = 0.0;
    int substeps = 1;
    int feature_dim = 1;

    double dt() const { return tau / substeps; }
    void validate() const;

    // Smallest M with tau / M <= dt (M >= 1).
    static EncodingParams from_dt(double tau, double dt, int feature_dim);
};

inline constexpr double kDefaultTrotterDt = 1e-3;

struct DataPoint {
    std::vector<double> coords;  // radians

    DataPoint() = default;
    DataPoint(std::initializer_list<double> c) : coords(c) {}
    explicit DataPoint(std::vector<double> c) : coords(std::move(c)) {}

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }

    friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

// I_z eigenvalue (n_up - n_down) / 2 of a basis index.
double collective_z_eigenvalue(int spins, std::size_t index);

// Multiplies every amplitude a_z by exp(-i * angle * lambda_z).
void apply_collective_z(StateVector& state, double angle, Exec exec = Exec::serial);

// Exact exp(-i theta (I_y,mu I_y,nu - I_x,mu I_x,nu)); mixes |00> and |11> of
// the pair, leaves |01> and |10> alone.
void apply_dq_gate(StateVector& state, int mu, int nu, double theta, Exec exec = Exec::serial);

// One factor exp(-i H(x) tau) by the first-order Trotter product:
// e^{-ix I_z} [prod_{mu<nu} dq(mu, nu, tau d_{mu nu} / M)]^M e^{+ix I_z},
// rightmost applied first, pairs in lexicographic order.
void evolve_segment(StateVector& state, const SpinSystem& system, double x,
                    const EncodingParams& params, Exec exec = Exec::serial);

// Inverse of evolve_segment with identical arguments.
void evolve_segment_adjoint(StateVector& state, const SpinSystem& system, double x,
                            const EncodingParams& params, Exec exec = Exec::serial);

// In place: state <- U(x) state, with segments for x_1 .. x_D in that order.
void apply_encoding(StateVector& state, const SpinSystem& system, const DataPoint& x,
                    const EncodingParams& params, Exec exec = Exec::serial);

// In place: state <- U(x)^dagger state.
void apply_encoding_adjoint(StateVector& state, const SpinSystem& system, const DataPoint& x,
                            const EncodingParams& params, Exec exec = Exec::serial);

// U(x)|0>.
StateVector encode(const SpinSystem& system, const DataPoint& x, const EncodingParams& params,
                   Exec exec = Exec::serial);

// U(x)^dagger applied to a copy of `state`.
StateVector encode_adjoint(const SpinSystem& system, const DataPoint& x, const EncodingParams& params,
                           StateVector state, Exec exec = Exec::serial);

// <a|b>
cplx inner_product(const StateVector& a, const StateVector& b, Exec exec = Exec::serial);

namespace kernels {

// Raw amplitude kernels. The *_serial variants are the reference; the *_omp
// variants split the same loops across OpenMP threads. Gate kernels write
// disjoint amplitudes, so both produce identical bits; the reductions may
// differ by rounding.

void collective_z_serial(std::span<cplx> amps, int spins, double angle);
void collective_z_omp(std::span<cplx> amps, int spins, double angle);

void dq_gate_serial(std::span<cplx> amps, int mu, int nu, double theta);
void dq_gate_omp(std::span<cplx> amps, int mu, int nu, double theta);

cplx inner_product_serial(std::span<const cplx> a, std::span<const cplx> b);
cplx inner_product_omp(std::span<const cplx> a, std::span<const cplx> b);

} // namespace kernels

} // namespace qkm
