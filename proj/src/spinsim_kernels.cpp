#include "qkm/spinsim.hpp"

#include <array>
#include <bit>
#include <cmath>

#include <omp.h>

namespace qkm::kernels {

namespace {

// Below this many amplitude updates a parallel region costs more than it saves.
constexpr std::int64_t kParallelThreshold = 1 << 12;

// phases[k] = exp(-i angle lambda) for a basis state with k spins down,
// lambda = n/2 - k.
std::vector<cplx> z_phases(int spins, double angle)
{
    std::vector<cplx> phases(static_cast<std::size_t>(spins) + 1);
    for (int k = 0; k <= spins; ++k) {
        const double lambda = 0.5 * spins - k;
        phases[static_cast<std::size_t>(k)] = std::polar(1.0, -angle * lambda);
    }
    return phases;
}

// Index with zero bits inserted at positions lo < hi.
inline std::size_t spread_pair(std::size_t k, int lo, int hi)
{
    const std::size_t lo_mask = (std::size_t{1} << lo) - 1;
    k = ((k & ~lo_mask) << 1) | (k & lo_mask);
    const std::size_t hi_mask = (std::size_t{1} << hi) - 1;
    return ((k & ~hi_mask) << 1) | (k & hi_mask);
}

// a *= p without the inf/nan recovery path of std::complex multiplication
inline void mul_phase(cplx& a, const cplx& p)
{
    a = cplx(a.real() * p.real() - a.imag() * p.imag(), a.real() * p.imag() + a.imag() * p.real());
}

inline void rotate_pair(cplx& a00, cplx& a11, double c, double s)
{
    // [c, is; is, c]
    const cplx x = a00;
    const cplx y = a11;
    a00 = cplx(c * x.real() - s * y.imag(), c * x.imag() + s * y.real());
    a11 = cplx(c * y.real() - s * x.imag(), c * y.imag() + s * x.real());
}

} // namespace

void collective_z_serial(std::span<cplx> amps, int spins, double angle)
{
    const auto phases = z_phases(spins, angle);
    for (std::size_t z = 0; z < amps.size(); ++z) {
        mul_phase(amps[z], phases[static_cast<std::size_t>(std::popcount(z))]);
    }
}

void collective_z_omp(std::span<cplx> amps, int spins, double angle)
{
    const auto phases = z_phases(spins, angle);
    const auto dim = static_cast<std::int64_t>(amps.size());
    cplx* data = amps.data();
    const cplx* ph = phases.data();
#pragma omp parallel for schedule(static) if (dim >= kParallelThreshold)
    for (std::int64_t z = 0; z < dim; ++z) {
        mul_phase(data[z], ph[std::popcount(static_cast<std::uint64_t>(z))]);
    }
}

void dq_gate_serial(std::span<cplx> amps, int mu, int nu, double theta)
{
    const int lo = std::min(mu, nu);
    const int hi = std::max(mu, nu);
    const std::size_t flip = (std::size_t{1} << lo) | (std::size_t{1} << hi);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::size_t lo_stride = std::size_t{1} << lo;
    const std::size_t hi_stride = std::size_t{1} << hi;
    const std::size_t dim = amps.size();
    // runs of indices with both bits clear
    for (std::size_t outer = 0; outer < dim; outer += 2 * hi_stride) {
        for (std::size_t mid = outer; mid < outer + hi_stride; mid += 2 * lo_stride) {
            for (std::size_t i00 = mid; i00 < mid + lo_stride; ++i00) {
                rotate_pair(amps[i00], amps[i00 | flip], c, s);
            }
        }
    }
}

void dq_gate_omp(std::span<cplx> amps, int mu, int nu, double theta)
{
    const int lo = std::min(mu, nu);
    const int hi = std::max(mu, nu);
    const std::size_t flip = (std::size_t{1} << lo) | (std::size_t{1} << hi);
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const auto quarter = static_cast<std::int64_t>(amps.size() >> 2);
    cplx* data = amps.data();
#pragma omp parallel for schedule(static) if (quarter >= kParallelThreshold)
    for (std::int64_t k = 0; k < quarter; ++k) {
        const std::size_t i00 = spread_pair(static_cast<std::size_t>(k), lo, hi);
        rotate_pair(data[i00], data[i00 | flip], c, s);
    }
}

cplx inner_product_serial(std::span<const cplx> a, std::span<const cplx> b)
{
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // conj(a) * b
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

cplx inner_product_omp(std::span<const cplx> a, std::span<const cplx> b)
{
    double re = 0.0;
    double im = 0.0;
    const auto dim = static_cast<std::int64_t>(a.size());
    const cplx* pa = a.data();
    const cplx* pb = b.data();
#pragma omp parallel for schedule(static) reduction(+ : re, im) if (dim >= kParallelThreshold)
    for (std::int64_t i = 0; i < dim; ++i) {
        re += pa[i].real() * pb[i].real() + pa[i].imag() * pb[i].imag();
        im += pa[i].real() * pb[i].imag() - pa[i].imag() * pb[i].real();
    }
    return {re, im};
}

} // namespace qkm::kernels
