#ifndef PHXC_FOURIER_HPP
#define PHXC_FOURIER_HPP

#include <Eigen/Dense>
#include <complex>

#include "phxc/cell.hpp"

namespace phxc {

/// Closed-form Fourier data of one slab: coefficients of mu and 1/mu
/// along the cross axis, stored for |n| <= 2N so that (2N+1)x(2N+1)
/// Toeplitz matrices need no implicit zero padding.
struct FourierSlab {
    double length;      // slab extent along the propagation axis
    int half_width;     // N
    Eigen::VectorXcd mu_hat;      // size 4N+1, index n + 2N
    Eigen::VectorXcd inv_mu_hat;  // coefficients of 1/mu
    double rho_mean;              // cross-axis mean of rho

    std::complex<double> mu(int n) const { return mu_hat(n + 2 * half_width); }
    std::complex<double> inv_mu(int n) const {
        return inv_mu_hat(n + 2 * half_width);
    }
};

/// Analytic Fourier coefficients of a piecewise-constant profile.
FourierSlab slab_fourier(const std::vector<ProfilePiece>& profile,
                         double period_across, int N, double length);

FourierSlab slab_fourier(const Slab& slab, double period_across, int N);

/// (2N+1)x(2N+1) Toeplitz matrix (c_{n-m}) from coefficients stored to 2N.
Eigen::MatrixXcd toeplitz(const Eigen::VectorXcd& coeffs, int N);

/// Unitary change of basis from the complex exponentials e^{2*pi*i*n*x}
/// (n = -N..N) to the real trigonometric basis
/// {1, sqrt2*cos, sqrt2*sin, ...}; column 0 is the constant mode.
Eigen::MatrixXcd real_basis(int N);

/// Conjugates a Hermitian-structured operator matrix into the real
/// trigonometric basis; throws if the result is not real.
Eigen::MatrixXd to_real_basis(const Eigen::MatrixXcd& B,
                              const Eigen::MatrixXcd& U);

/// Coefficient vector (length 2N+1, n = -N..N) of a real profile.
Eigen::VectorXcd profile_coefficients(const std::vector<ProfilePiece>& profile,
                                      double period_across, int N,
                                      bool inverse_values = false);

}  // namespace phxc

#endif
