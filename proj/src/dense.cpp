#include "phxc/dense.hpp"

namespace phxc {

Eigen::Vector3d sym_eigen_small(const Eigen::Matrix3d& A) {
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw std::invalid_argument("sym_eigen_small: matrix is not symmetric");
    const Eigen::Matrix3d S = 0.5 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(S);
    return es.eigenvalues().reverse();
}

}  // namespace phxc
