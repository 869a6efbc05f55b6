// qkernel.hpp
// Kernels induced by the spin encoding:
//
//   pure-state  k(x, y) = |<0| U(y)^dagger U(x) |0>|^2
//   trace       k(x, y) = Tr(A(x) A(y)) / Tr(I_z^2),   A(x) = U(x) I_z U(x)^dagger
//
// plus Gram matrices, 1D kernel profiles and multiple-quantum spectra.

#pragma once

#include "qkm/spinsim.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qkm {

enum class KernelKind { pure, trace };

std::string to_string(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);

// How the pure-state kernel is contracted.
//   overlap:   |<psi_y|psi_x>|^2 from two encoded states
//   uncompute: encode x, apply U(y)^dagger, read |amplitude of |0>|^2
enum class KernelForm { overlap, uncompute };

// |<a|b>|^2
double state_kernel(const StateVector& a, const StateVector& b, Exec exec = Exec::serial);

double kernel(const SpinSystem& system, const EncodingParams& params, const DataPoint& xi, const DataPoint& xj,
              KernelForm form = KernelForm::overlap, Exec exec = Exec::serial);

inline constexpr int kDefaultTraceKernelMaxSpins = 12;

// Costs 2^n pairs of encodings; refuses systems above `max_spins`.
double trace_kernel(const SpinSystem& system, const EncodingParams& params, const DataPoint& xi,
                    const DataPoint& xj, int max_spins = kDefaultTraceKernelMaxSpins, Exec exec = Exec::serial);

// U(x)|0> for every point. With Exec::parallel the points are spread across
// threads, each encoding serially into its own buffer.
std::vector<StateVector> encode_all(const SpinSystem& system, const EncodingParams& params,
                                    std::span<const DataPoint> points, Exec exec = Exec::serial);

struct GramMeta {
    int spins = 0;
    double tau = 0.0;
    int substeps = 1;
    int feature_dim = 1;
    std::uint64_t seed = 0;
    KernelKind kind = KernelKind::pure;
};

struct GramMatrix {
    Eigen::MatrixXd entries;
    std::vector<DataPoint> points;
    GramMeta meta;

    Eigen::Index size() const { return entries.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }
};

GramMeta make_meta(const SpinSystem& system, const EncodingParams& params, KernelKind kind);

struct GramOptions {
    KernelKind kind = KernelKind::pure;
    // Fill a D = 1 pure-state Gram from the I_z sector populations of a single
    // encoded state instead of pairwise overlaps. Relies on the kernel depending
    // only on x_i - x_j.
    bool shift_fast_path = false;
    Exec exec = Exec::serial;
    int trace_max_spins = kDefaultTraceKernelMaxSpins;
};

// Upper triangle evaluated, mirrored, diagonal pinned to exactly 1.
GramMatrix gram(const SpinSystem& system, const EncodingParams& params, std::span<const DataPoint> points,
                const GramOptions& options = {});

// Element i = k(points[i], x).
Eigen::VectorXd kernel_vector(const SpinSystem& system, const EncodingParams& params,
                              std::span<const DataPoint> points, const DataPoint& x,
                              KernelKind kind = KernelKind::pure, Exec exec = Exec::serial);

// Element (r, c) = k(cols[c], rows[r]); one kernel vector per row.
Eigen::MatrixXd cross_kernel(const SpinSystem& system, const EncodingParams& params,
                             std::span<const DataPoint> rows, std::span<const DataPoint> cols,
                             KernelKind kind = KernelKind::pure, Exec exec = Exec::serial);

// Probability of finding U(x)|0> (D = 1) with k spins flipped, k = 0..n.
// Independent of x.
std::vector<double> sector_populations(const SpinSystem& system, const EncodingParams& params,
                                       Exec exec = Exec::serial);

// |sum_k p_k e^{i delta k}|^2, the D = 1 pure-state kernel at difference delta.
double kernel_from_populations(std::span<const double> populations, double delta);

struct ProfilePoint {
    double delta;
    double k;
};

// k(delta) = k(delta, 0) for D = 1, each value from a direct kernel evaluation.
std::vector<ProfilePoint> kernel_profile_1d(const SpinSystem& system, const EncodingParams& params,
                                            std::span<const double> deltas, Exec exec = Exec::serial);

// `count` points evenly spaced on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, int count);

// `samples` points 2 pi j / samples, j = 0 .. samples - 1.
std::vector<double> periodic_grid(int samples);

inline constexpr int kDefaultMqSamples = 256;

struct MqSpectrum {
    std::vector<int> orders;           // -max_order .. max_order
    std::vector<double> intensities;   // same length as orders
    double max_imag_residue = 0.0;

    double at(int order) const;
    double total() const;
};

// Discrete Fourier coefficients I_m = (1/N) sum_j k(delta_j) e^{-i m delta_j}
// of a profile sampled on periodic_grid(N). Rejects non-uniform grids and
// N < 2 max_order + 1.
MqSpectrum mq_spectrum(std::span<const double> deltas, std::span<const double> values, int max_order);

// Width of the central lobe at half depth: the level is (k_max + k_min) / 2
// over the sampled profile, crossings located by linear interpolation. When a
// side never drops below the level, the domain edge bounds the lobe.
double profile_fwhm(std::span<const ProfilePoint> profile);

} // namespace qkm
