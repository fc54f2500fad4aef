#include "phxc/pwe.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace phxc {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

// 1D Fourier factor of the indicator of [a, b) in a period-T expansion.
cplx box_factor(double a, double b, double T, int n) {
    if (n == 0) return (b - a) / T;
    const cplx i(0.0, 1.0);
    const double w = 2.0 * pi * n / T;
    return (std::exp(-i * w * b) - std::exp(-i * w * a)) / (-i * w) / T;
}

// 2D coefficients mu_g for |g_i| <= max_n, from the disjoint rectangle
// decomposition given by the slab partition.
Eigen::MatrixXcd mu_coefficients_2d(const UnitCell& cell, int max_n) {
    const SlabPartition part = slab_partition(cell, 1);
    const double T1 = cell.period(1), T2 = cell.period(2);
    const int m = 2 * max_n + 1;
    Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(m, m);
    for (const auto& slab : part.slabs) {
        Eigen::VectorXcd f1(m);
        for (int n = -max_n; n <= max_n; ++n)
            f1(n + max_n) = box_factor(slab.lo, slab.hi, T1, n);
        for (const auto& piece : slab.profile) {
            Eigen::VectorXcd f2(m);
            for (int n = -max_n; n <= max_n; ++n)
                f2(n + max_n) = box_factor(piece.lo, piece.hi, T2, n);
            mu += piece.phase.mu * f1 * f2.transpose();
        }
    }
    return mu;
}

}  // namespace

PweSystem pwe_system(const UnitCell& cell, int G) {
    if (G < 1) throw std::invalid_argument("pwe: truncation G must be >= 1");
    const double T1 = cell.period(1), T2 = cell.period(2);
    const Eigen::MatrixXcd mu = mu_coefficients_2d(cell, 2 * G);
    auto mu_at = [&](int g1, int g2) { return mu(g1 + 2 * G, g2 + 2 * G); };

    std::vector<std::pair<int, int>> modes;
    for (int g1 = -G; g1 <= G; ++g1)
        for (int g2 = -G; g2 <= G; ++g2)
            if (g1 != 0 || g2 != 0) modes.emplace_back(g1, g2);
    const int m = static_cast<int>(modes.size());

    PweSystem sys;
    sys.G = G;
    sys.C0.resize(m, m);
    sys.b1.resize(m);
    sys.b2.resize(m);
    const cplx i(0.0, 1.0);
    for (int r = 0; r < m; ++r) {
        const auto [g1, g2] = modes[r];
        sys.b1(r) = i * (2.0 * pi * g1 / T1) * mu_at(g1, g2);
        sys.b2(r) = i * (2.0 * pi * g2 / T2) * mu_at(g1, g2);
        for (int c = 0; c < m; ++c) {
            const auto [h1, h2] = modes[c];
            const double dot = 4.0 * pi * pi *
                (double(g1) * h1 / (T1 * T1) + double(g2) * h2 / (T2 * T2));
            sys.C0(r, c) = dot * mu_at(g1 - h1, g2 - h2);
        }
    }
    return sys;
}

EffectiveTensor pwe_effective_tensor(const UnitCell& cell, int G) {
    const PweSystem sys = pwe_system(cell, G);
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(sys.C0);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("pwe: C0 factorization failed");
    const Eigen::VectorXcd x1 = ldlt.solve(sys.b1);
    const Eigen::VectorXcd x2 = ldlt.solve(sys.b2);

    const cplx m11 = sys.b1.dot(x1);  // b^H x: L2 inner product (C0^-1 b_i, b_j)
    const cplx m22 = sys.b2.dot(x2);
    const cplx m12 = sys.b2.dot(x1);
    const double scale = std::max({std::abs(m11), std::abs(m22), 1.0});
    if (std::max({std::abs(m11.imag()), std::abs(m22.imag()),
                  std::abs(m12.imag())}) > 1e-10 * scale)
        throw std::runtime_error("pwe: M_ij has a non-real component");

    EffectiveTensor t;
    t.method = "pwe";
    t.trunc = 2 * G + 1;
    std::tie(t.rho_avg, t.mu_avg) = cell_averages(cell);
    t.M11 = m11.real();
    t.M22 = m22.real();
    t.M12 = m12.real();
    return t;
}

}  // namespace phxc
