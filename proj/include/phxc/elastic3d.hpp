#ifndef PHXC_ELASTIC3D_HPP
#define PHXC_ELASTIC3D_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace phxc {

using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Elastic constituent: density and stiffness in two-index (Voigt)
/// notation with full-tensor accessors.
struct ElasticPhase {
    double rho;
    Matrix6d C;

    static ElasticPhase isotropic(double rho, double lambda, double mu);

    /// c_ijkl with 1-based indices.
    double c(int i, int j, int k, int l) const;

    bool operator==(const ElasticPhase&) const;
};

struct Box {
    Eigen::Vector3d corner;
    Eigen::Vector3d size;
    ElasticPhase phase;
};

/// 3D periodic cell: background phase plus axis-aligned boxes,
/// painter's rule as in the 2D case.
class ElasticCell {
public:
    ElasticCell(double T1, double T2, double T3, ElasticPhase background,
                std::vector<Box> boxes = {});

    double period(int axis) const { return T_[axis - 1]; }
    const ElasticPhase& background() const { return background_; }
    const std::vector<Box>& boxes() const { return boxes_; }
    const ElasticPhase& at(double x1, double x2, double x3) const;

    double rho_mean() const;

    /// Cell with coordinates (and stiffness indices) permuted so that the
    /// requested axis becomes axis 1. perm maps new index -> old index.
    ElasticCell permuted(const std::array<int, 3>& perm) const;

private:
    std::array<double, 3> T_;
    ElasticPhase background_;
    std::vector<Box> boxes_;
};

/// Principal-direction effective speeds (m/s, sorted descending) for
/// k parallel to the given lattice axis, by the monodromy matrix of the
/// 6-block first-order system truncated to (2N2+1)(2N3+1) Fourier modes
/// in the cross coordinates.
Eigen::Vector3d principal_speeds_3d(const ElasticCell& cell, int N2, int N3,
                                    int axis = 1);

/// The 6M x 6M generator at omega = 0 for one x1-slab (exposed for tests).
/// Blocks: [[-Cinv A1, Cinv], [-A2 - A1^H Cinv A1, A1^H Cinv]].
struct ElasticGenerator {
    int N2 = 0, N3 = 0;
    int modes = 0;  // (2N2+1)(2N3+1)
    Eigen::MatrixXcd Q;
    Eigen::MatrixXcd A2;  // Hermitian part retained for audits
};

ElasticGenerator assemble_generator_3d(const ElasticCell& cell, double x1,
                                       int N2, int N3);

}  // namespace phxc

#endif
