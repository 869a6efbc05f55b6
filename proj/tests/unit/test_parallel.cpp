#include "doctest.h"

#include "qkm/learners.hpp"
#include "qkm/qkernel.hpp"

#include <random>

using namespace qkm;

namespace {

std::vector<cplx> random_amps(int spins, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> a(std::size_t{1} << spins);
    for (auto& v : a) {
        v = {g(rng), g(rng)};
    }
    return a;
}

} // namespace

TEST_CASE("gate kernels: serial and OpenMP give identical bits")
{
    for (int n : {3, 14}) {
        auto a = random_amps(n, 1);
        auto b = a;
        kernels::dq_gate_serial(a, 0, n - 1, 0.37);
        kernels::dq_gate_omp(b, 0, n - 1, 0.37);
        CHECK(a == b);
        kernels::dq_gate_serial(a, 2, 1, -1.1);
        kernels::dq_gate_omp(b, 2, 1, -1.1);
        CHECK(a == b);
        kernels::collective_z_serial(a, n, 0.9);
        kernels::collective_z_omp(b, n, 0.9);
        CHECK(a == b);
    }
}

TEST_CASE("inner product: serial and OpenMP agree to rounding")
{
    const auto a = random_amps(14, 2);
    const auto b = random_amps(14, 3);
    const cplx s = kernels::inner_product_serial(a, b);
    const cplx p = kernels::inner_product_omp(a, b);
    CHECK(std::abs(s - p) <= 1e-12 * std::abs(s) + 1e-12);
}

TEST_CASE("encode, gram and profile agree across execution policies")
{
    const SpinSystem sys = draw_couplings(8, 4);
    const EncodingParams p = EncodingParams::from_dt(0.06, 1e-3, 2);
    const DataPoint x{0.2, -0.4};
    CHECK(encode(sys, x, p, Exec::serial) == encode(sys, x, p, Exec::parallel));

    std::vector<DataPoint> pts;
    for (int i = 0; i < 6; ++i) {
        pts.push_back(DataPoint{0.1 * i, -0.2 * i});
    }
    GramOptions par;
    par.exec = Exec::parallel;
    const GramMatrix gs = gram(sys, p, pts);
    const GramMatrix gp = gram(sys, p, pts, par);
    CHECK((gs.entries - gp.entries).cwiseAbs().maxCoeff() <= 1e-12);
}
