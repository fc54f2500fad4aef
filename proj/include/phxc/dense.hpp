#ifndef PHXC_DENSE_HPP
#define PHXC_DENSE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace phxc {

/// exp(t*A) by scaling-and-squaring with the order-13 Pade approximant.
/// Works for real and complex scalars.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
mat_exp(const Eigen::MatrixBase<Derived>& A_in,
        typename Eigen::NumTraits<typename Derived::Scalar>::Real t = 1) {
    using Scalar = typename Derived::Scalar;
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    if (A_in.rows() != A_in.cols())
        throw std::invalid_argument("mat_exp: matrix must be square");
    Mat A = A_in * Scalar(t);
    if (!A.allFinite())
        throw std::invalid_argument("mat_exp: non-finite input");

    // Balance by a power-of-two diagonal similarity (Osborne): entries of the
    // generators handled here span many orders of magnitude and an unbalanced
    // norm forces catastrophic over-scaling in the squaring phase.
    const Eigen::Index nb = A.rows();
    Eigen::Vector<Real, Eigen::Dynamic> dscale =
        Eigen::Vector<Real, Eigen::Dynamic>::Ones(nb);
    for (int sweep = 0; sweep < 20; ++sweep) {
        bool converged = true;
        for (Eigen::Index i = 0; i < nb; ++i) {
            Real rnorm = 0, cnorm = 0;
            for (Eigen::Index j = 0; j < nb; ++j) {
                if (j == i) continue;
                rnorm += std::abs(A(i, j));
                cnorm += std::abs(A(j, i));
            }
            if (rnorm == Real(0) || cnorm == Real(0)) continue;
            Real f = Real(1);
            while (cnorm * f < rnorm / (f * Real(2))) f *= Real(2);
            while (cnorm * f > rnorm / f * Real(2)) f /= Real(2);
            if (f != Real(1)) {
                converged = false;
                dscale(i) *= f;
                A.row(i) /= Scalar(f);
                A.col(i) *= Scalar(f);
            }
        }
        if (converged) break;
    }

    const Real norm = A.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    if (norm == Real(0)) return Mat::Identity(A.rows(), A.cols());
    // theta_13 for double precision (Higham 2005).
    const Real theta = Real(5.371920351148152L);
    int squarings = 0;
    if (norm > theta) {
        squarings = static_cast<int>(std::ceil(std::log2(double(norm / theta))));
        A *= Scalar(std::pow(Real(2), Real(-squarings)));
    }

    static const Real b[] = {
        Real(64764752532480000.0L), Real(32382376266240000.0L),
        Real(7771770303897600.0L),  Real(1187353796428800.0L),
        Real(129060195264000.0L),   Real(10559470521600.0L),
        Real(670442572800.0L),      Real(33522128640.0L),
        Real(1323241920.0L),        Real(40840800.0L),
        Real(960960.0L),            Real(16380.0L),
        Real(182.0L),               Real(1.0L)};

    const Eigen::Index n = A.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    const Mat U = A * (A6 * (Scalar(b[13]) * A6 + Scalar(b[11]) * A4 +
                             Scalar(b[9]) * A2) +
                       Scalar(b[7]) * A6 + Scalar(b[5]) * A4 +
                       Scalar(b[3]) * A2 + Scalar(b[1]) * I);
    const Mat V = A6 * (Scalar(b[12]) * A6 + Scalar(b[10]) * A4 +
                        Scalar(b[8]) * A2) +
                  Scalar(b[6]) * A6 + Scalar(b[4]) * A4 + Scalar(b[2]) * A2 +
                  Scalar(b[0]) * I;

    Mat E = (V - U).partialPivLu().solve(V + U);
    for (int s = 0; s < squarings; ++s) E = E * E;
    // Undo the balancing similarity.
    E = dscale.template cast<Scalar>().asDiagonal() * E *
        dscale.cwiseInverse().template cast<Scalar>().asDiagonal();
    if (!E.allFinite())
        throw std::overflow_error("mat_exp: overflow in exponential");
    return E;
}

/// Solve A x = b by partial-pivoting LU; reports singularity with the
/// smallest pivot magnitude.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> solve_linear(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& b) {
    if (A.rows() != A.cols())
        throw std::invalid_argument("solve_linear: matrix must be square");
    if (A.rows() != b.size())
        throw std::invalid_argument("solve_linear: dimension mismatch");
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using RVec = Eigen::Vector<Real, Eigen::Dynamic>;

    // Row/column equilibration: the systems solved here mix displacement
    // and traction scales that differ by factors of mu.
    RVec r = A.cwiseAbs().rowwise().maxCoeff();
    for (Eigen::Index i = 0; i < r.size(); ++i)
        if (!(r(i) > Real(0))) r(i) = Real(1);
    Mat As = r.cwiseInverse().asDiagonal() * A;
    RVec c = As.cwiseAbs().colwise().maxCoeff();
    for (Eigen::Index i = 0; i < c.size(); ++i)
        if (!(c(i) > Real(0))) c(i) = Real(1);
    As = As * c.cwiseInverse().asDiagonal();

    Eigen::PartialPivLU<Mat> lu(As);
    const auto diag = lu.matrixLU().diagonal();
    Real pivot_min = diag.cwiseAbs().minCoeff();
    Real pivot_max = diag.cwiseAbs().maxCoeff();
    if (!(pivot_min > pivot_max * Eigen::NumTraits<Real>::epsilon() * Real(A.rows())))
        throw std::runtime_error(
            "solve_linear: matrix singular to working precision (smallest pivot " +
            std::to_string(double(pivot_min)) + ")");
    Eigen::Vector<Scalar, Eigen::Dynamic> y =
        lu.solve((r.cwiseInverse().template cast<Scalar>().asDiagonal() * b).eval());
    return c.cwiseInverse().template cast<Scalar>().asDiagonal() * y;
}

/// Eigenvalues of a symmetric 3x3 matrix, sorted descending.
Eigen::Vector3d sym_eigen_small(const Eigen::Matrix3d& A);

}  // namespace phxc

#endif
