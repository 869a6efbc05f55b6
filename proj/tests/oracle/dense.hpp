// Dense-matrix reference for small spin systems. Builds the Hamiltonian from
// explicit spin operators and exponentiates it by eigendecomposition; shares
// no code with the state-vector simulator it checks.

#pragma once

#include "qkm/spinsim.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <bit>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// 2x2 single-spin operators in the (bit 0 = +1/2, bit 1 = -1/2) basis.
inline Eigen::Matrix2cd spin_half(char axis)
{
    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd m;
    switch (axis) {
    case 'x': m << 0.0, 0.5, 0.5, 0.0; break;
    case 'y': m << 0.0, -0.5 * i, 0.5 * i, 0.0; break;
    default: m << 0.5, 0.0, 0.0, -0.5; break;
    }
    return m;
}

// Single-spin operator on spin `mu` (bit mu of the basis index).
inline Mat on_spin(int spins, int mu, const Eigen::Matrix2cd& op)
{
    const Eigen::Index dim = Eigen::Index{1} << spins;
    Mat out = Mat::Zero(dim, dim);
    const Eigen::Index bit = Eigen::Index{1} << mu;
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = 0; b < dim; ++b) {
            if ((a & ~bit) != (b & ~bit)) {
                continue;
            }
            out(a, b) = op((a & bit) ? 1 : 0, (b & bit) ? 1 : 0);
        }
    }
    return out;
}

inline Mat collective(int spins, char axis)
{
    const Eigen::Index dim = Eigen::Index{1} << spins;
    Mat out = Mat::Zero(dim, dim);
    for (int mu = 0; mu < spins; ++mu) {
        out += on_spin(spins, mu, spin_half(axis));
    }
    return out;
}

// sum_{mu<nu} d_{mu nu} (I_y I_y - I_x I_x)
inline Mat dq_hamiltonian(const qkm::SpinSystem& system)
{
    const int n = system.spins();
    const Eigen::Index dim = Eigen::Index{1} << n;
    Mat h = Mat::Zero(dim, dim);
    for (int mu = 0; mu < n; ++mu) {
        for (int nu = mu + 1; nu < n; ++nu) {
            const Mat yy = on_spin(n, mu, spin_half('y')) * on_spin(n, nu, spin_half('y'));
            const Mat xx = on_spin(n, mu, spin_half('x')) * on_spin(n, nu, spin_half('x'));
            h += system.coupling(mu, nu) * (yy - xx);
        }
    }
    return h;
}

// exp(-i t H) for Hermitian H.
inline Mat expm_hermitian(const Mat& h, double t)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const Eigen::VectorXd& w = es.eigenvalues();
    Vec phase(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        phase(k) = std::polar(1.0, -t * w(k));
    }
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(-i angle I_z) built from the dense I_z.
inline Mat z_rotation(int spins, double angle)
{
    return expm_hermitian(collective(spins, 'z'), angle);
}

// H(x) = e^{-ix I_z} H(0) e^{ix I_z}
inline Mat hamiltonian(const qkm::SpinSystem& system, double x)
{
    const Mat rz = z_rotation(system.spins(), x);
    return rz * dq_hamiltonian(system) * rz.adjoint();
}

// Exact U(x) = exp(-iH(x_D) tau) ... exp(-iH(x_1) tau).
inline Mat exact_unitary(const qkm::SpinSystem& system, const std::vector<double>& x, double tau)
{
    const Eigen::Index dim = Eigen::Index{1} << system.spins();
    Mat u = Mat::Identity(dim, dim);
    for (double xj : x) {
        u = expm_hermitian(hamiltonian(system, xj), tau) * u;
    }
    return u;
}

inline Vec ground(int spins)
{
    Vec v = Vec::Zero(Eigen::Index{1} << spins);
    v(0) = 1.0;
    return v;
}

inline double pure_kernel(const qkm::SpinSystem& system, const std::vector<double>& xi,
                          const std::vector<double>& xj, double tau)
{
    const Vec a = exact_unitary(system, xi, tau) * ground(system.spins());
    const Vec b = exact_unitary(system, xj, tau) * ground(system.spins());
    return std::norm(b.dot(a));  // Eigen's dot conjugates the left operand
}

// Tr(A_i A_j) / Tr(I_z^2), A = U I_z U^dagger
inline double trace_kernel(const qkm::SpinSystem& system, const std::vector<double>& xi,
                           const std::vector<double>& xj, double tau)
{
    const Mat iz = collective(system.spins(), 'z');
    const Mat ui = exact_unitary(system, xi, tau);
    const Mat uj = exact_unitary(system, xj, tau);
    const Mat ai = ui * iz * ui.adjoint();
    const Mat aj = uj * iz * uj.adjoint();
    return (ai * aj).trace().real() / (iz * iz).trace().real();
}

// Full matrix of a state-vector map, column by column.
inline Mat matrix_of(int spins, const std::function<void(qkm::StateVector&)>& apply)
{
    const Eigen::Index dim = Eigen::Index{1} << spins;
    Mat out(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        qkm::StateVector s = qkm::basis_state(spins, static_cast<std::size_t>(c));
        apply(s);
        for (Eigen::Index r = 0; r < dim; ++r) {
            out(r, c) = s[static_cast<std::size_t>(r)];
        }
    }
    return out;
}

inline Vec to_eigen(const qkm::StateVector& s)
{
    Vec v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s[i];
    }
    return v;
}

// Two-spin closed form: cos^4 + sin^4 + 2 sin^2 cos^2 cos(2 delta), angles d tau / 2.
inline double two_spin_kernel(double d, double tau, double delta)
{
    const double c = std::cos(0.5 * d * tau);
    const double s = std::sin(0.5 * d * tau);
    return c * c * c * c + s * s * s * s + 2.0 * s * s * c * c * std::cos(2.0 * delta);
}

// Dual objective sum(alpha) - 1/2 (y.alpha)^T K (y.alpha) in long double. With
// alpha ~ 1e5 the quadratic terms reach 1e11 and cancel to ~1e5, so double
// evaluation alone carries errors near 1e-5.
inline double svm_objective_extended(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, const Eigen::VectorXd& alpha)
{
    const auto kl = k.cast<long double>();
    const Eigen::Matrix<long double, Eigen::Dynamic, 1> ya = y.cast<long double>().cwiseProduct(alpha.cast<long double>());
    return static_cast<double>(alpha.cast<long double>().sum() - 0.5L * ya.dot(kl * ya));
}

// Hard-margin SVM dual solved by enumerating active sets: for every support
// set S (alpha_i > 0 on S, 0 elsewhere; bounds assumed inactive), solve the
// KKT system and keep the best feasible point. Returns the dual objective.
// Works in long double so nearly singular kernels still give a usable reference.
inline double brute_force_svm_objective(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, Eigen::VectorXd* best_alpha = nullptr)
{
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const int n = static_cast<int>(y.size());
    const LMat kl = k.cast<long double>();
    const LVec yl = y.cast<long double>();
    long double best = -std::numeric_limits<long double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                s.push_back(i);
            }
        }
        const int m = static_cast<int>(s.size());
        // [Q_SS  y_S; y_S^T 0] [a; b] = [1; 0]
        LMat a = LMat::Zero(m + 1, m + 1);
        LVec rhs = LVec::Zero(m + 1);
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) {
                a(r, c) = yl(s[r]) * yl(s[c]) * kl(s[r], s[c]);
            }
            a(r, m) = yl(s[r]);
            a(m, r) = yl(s[r]);
            rhs(r) = 1.0L;
        }
        Eigen::FullPivLU<LMat> lu(a);
        if (!lu.isInvertible()) {
            continue;
        }
        LVec sol = lu.solve(rhs);
        for (int it = 0; it < 3; ++it) {
            sol += lu.solve(LVec(rhs - a * sol));
        }
        if (!sol.allFinite()) {
            continue;
        }
        const long double scale = sol.head(m).cwiseAbs().maxCoeff();
        LVec alpha = LVec::Zero(n);
        bool feasible = true;
        for (int r = 0; r < m; ++r) {
            if (sol(r) < -1e-12L * std::max(scale, 1.0L)) {
                feasible = false;
            }
            alpha(s[r]) = std::max(sol(r), 0.0L);
        }
        if (!feasible) {
            continue;
        }
        const LVec ya = yl.cwiseProduct(alpha);
        const long double obj = alpha.sum() - 0.5L * ya.dot(kl * ya);
        if (obj > best) {
            best = obj;
            if (best_alpha) {
                *best_alpha = alpha.cast<double>();
            }
        }
    }
    return static_cast<double>(best);
}

} // namespace oracle
