#include "phxc/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phxc {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

// Coefficient of the indicator of [a, b) within a period-T expansion,
// times the piece value v.
cplx piece_coefficient(double v, double a, double b, double T, int n) {
    if (n == 0) return v * (b - a) / T;
    const cplx i(0.0, 1.0);
    const double w = 2.0 * pi * n / T;
    return v * (std::exp(-i * w * b) - std::exp(-i * w * a)) / (-i * w) / T;
}

Eigen::VectorXcd coefficients(const std::vector<ProfilePiece>& profile,
                              double T, int max_n, bool inverse,
                              bool use_rho = false) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * max_n + 1);
    for (const auto& piece : profile) {
        double v = use_rho ? piece.phase.rho : piece.phase.mu;
        if (inverse) v = 1.0 / v;
        for (int n = -max_n; n <= max_n; ++n)
            c(n + max_n) += piece_coefficient(v, piece.lo, piece.hi, T, n);
    }
    return c;
}

}  // namespace

FourierSlab slab_fourier(const std::vector<ProfilePiece>& profile,
                         double period_across, int N, double length) {
    if (N < 0) throw std::invalid_argument("truncation half-width N must be >= 0");
    if (profile.empty())
        throw std::invalid_argument("slab profile must not be empty");
    FourierSlab out;
    out.length = length;
    out.half_width = N;
    out.mu_hat = coefficients(profile, period_across, 2 * N, false);
    out.inv_mu_hat = coefficients(profile, period_across, 2 * N, true);
    out.rho_mean = 0.0;
    for (const auto& piece : profile)
        out.rho_mean += piece.phase.rho * (piece.hi - piece.lo) / period_across;
    return out;
}

FourierSlab slab_fourier(const Slab& slab, double period_across, int N) {
    return slab_fourier(slab.profile, period_across, N, slab.length());
}

Eigen::MatrixXcd toeplitz(const Eigen::VectorXcd& coeffs, int N) {
    const int d = 2 * N + 1;
    if (coeffs.size() < 2 * (2 * N) + 1)
        throw std::invalid_argument("toeplitz: coefficients must reach index 2N");
    const int c0 = static_cast<int>(coeffs.size()) / 2;
    Eigen::MatrixXcd T(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) T(j, k) = coeffs(c0 + (j - k));
    return T;
}

Eigen::MatrixXcd real_basis(int N) {
    const int d = 2 * N + 1;
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(d, d);
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    U(N, 0) = 1.0;  // constant mode
    for (int k = 1; k <= N; ++k) {
        U(N + k, 2 * k - 1) = s;       // sqrt2 * cos
        U(N - k, 2 * k - 1) = s;
        U(N + k, 2 * k) = -i * s;      // sqrt2 * sin
        U(N - k, 2 * k) = i * s;
    }
    return U;
}

Eigen::MatrixXd to_real_basis(const Eigen::MatrixXcd& B,
                              const Eigen::MatrixXcd& U) {
    Eigen::MatrixXcd R = U.adjoint() * B * U;
    const double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
    if (R.imag().cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument(
            "to_real_basis: operator is not real in the trigonometric basis");
    return R.real();
}

Eigen::VectorXcd profile_coefficients(const std::vector<ProfilePiece>& profile,
                                      double period_across, int N,
                                      bool inverse_values) {
    return coefficients(profile, period_across, N, inverse_values);
}

}  // namespace phxc
