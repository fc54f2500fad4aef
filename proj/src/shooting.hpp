#ifndef PHXC_SHOOTING_HPP
#define PHXC_SHOOTING_HPP

// Internal: partitioned (multiple-shooting) solve of the deflated periodic
// system (M - I) X = W with M = E_{J-1} ... E_1 E_0.  The monodromy has
// spectrum split like e^{+-lambda T}, so forming the product and inverting
// loses everything beyond machine range; keeping the per-segment states as
// unknowns gives a block-bidiagonal system whose conditioning is set by the
// segment exponentials, not the full product.

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

namespace phxc {
namespace internal {

template <typename Scalar>
using DynMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Largest |Re lambda| over the spectrum: log-norm bound used to pick
// segment lengths so that ||exp(len Q)|| stays modest.
template <typename Derived>
double spectral_growth(const Eigen::MatrixBase<Derived>& Q) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(
        Q.template cast<std::complex<double>>(), false);
    return es.eigenvalues().real().cwiseAbs().maxCoeff();
}

// States xi_j at every segment start, where xi_0 solves (M - I) X = W with
// the listed components of X pinned to zero (cut_cols) and the listed rows
// of the wrap equation dropped (cut_rows); both are in-block indices.
// Unknowns are coupled by xi_{j+1} = E_j xi_j and the periodic jump
// E_{J-1} xi_{J-1} - xi_0 = W.
template <typename Scalar>
std::vector<DynMat<Scalar>> periodic_shooting_states(
    const std::vector<DynMat<Scalar>>& E, const std::vector<int>& cut_cols,
    const std::vector<int>& cut_rows, const DynMat<Scalar>& W) {
    const int n = int(W.rows());
    const int k = int(W.cols());
    const int J = int(E.size());
    const int ncut = int(cut_cols.size());
    if (J == 0) throw std::invalid_argument("shooting: no segments");
    if (int(cut_rows.size()) != ncut)
        throw std::invalid_argument("shooting: row/column cut mismatch");
    const int size = n * J - ncut;

    auto is_cut = [](const std::vector<int>& v, int x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    auto below = [](const std::vector<int>& v, int x) {
        return int(std::count_if(v.begin(), v.end(),
                                 [&](int c) { return c < x; }));
    };
    // Cut columns live in block 0, cut rows in the wrap block J-1.
    auto col_of = [&](int j, int c) {
        return j == 0 ? c - below(cut_cols, c) : (n - ncut) + (j - 1) * n + c;
    };
    auto row_of = [&](int j, int r) {
        return j < J - 1 ? j * n + r
                         : (J - 1) * n + r - below(cut_rows, r);
    };

    std::vector<Eigen::Triplet<Scalar>> trip;
    trip.reserve(std::size_t(J) * n * (n + 1));
    for (int j = 0; j < J; ++j) {
        // row block j:  -E_j xi_j + xi_{(j+1) mod J} = (j == J-1 ? -W : 0)
        const int next = (j + 1) % J;
        for (int r = 0; r < n; ++r) {
            if (j == J - 1 && is_cut(cut_rows, r)) continue;
            const int gr = row_of(j, r);
            for (int c = 0; c < n; ++c) {
                if (j == 0 && is_cut(cut_cols, c)) continue;
                const Scalar v = -E[j](r, c);
                if (v != Scalar(0)) trip.emplace_back(gr, col_of(j, c), v);
            }
            if (!(next == 0 && is_cut(cut_cols, r)))
                trip.emplace_back(gr, col_of(next, r), Scalar(1));
        }
    }
    Eigen::SparseMatrix<Scalar> S(size, size);
    S.setFromTriplets(trip.begin(), trip.end());

    DynMat<Scalar> rhs = DynMat<Scalar>::Zero(size, k);
    for (int r = 0; r < n; ++r) {
        if (is_cut(cut_rows, r)) continue;
        rhs.row(row_of(J - 1, r)) = -W.row(r);
    }

    Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> lu(S);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error(
            "monodromy solve: deflated system singular to working precision");
    const DynMat<Scalar> X = lu.solve(rhs);
    if (!X.allFinite())
        throw std::runtime_error("monodromy solve: non-finite solution");

    std::vector<DynMat<Scalar>> xi(J, DynMat<Scalar>::Zero(n, k));
    for (int j = 0; j < J; ++j)
        for (int c = 0; c < n; ++c) {
            if (j == 0 && is_cut(cut_cols, c)) continue;
            xi[j].row(c) = X.row(col_of(j, c));
        }
    return xi;
}

}  // namespace internal
}  // namespace phxc

#endif
