#ifndef PHXC_MM_HPP
#define PHXC_MM_HPP

#include <Eigen/Dense>

#include "phxc/cell.hpp"
#include "phxc/effective_tensor.hpp"
#include "phxc/fourier.hpp"

namespace phxc {

/// Rule for the inverse-modulus block of the truncated generator.
/// `direct` is the Toeplitz matrix of the coefficients of 1/mu;
/// `laurent` inverts the Toeplitz matrix of the coefficients of mu.
/// The two coincide only in the untruncated limit; `laurent` is the
/// default because it converges exponentially (and is exact for
/// laminates at any N), while `direct` is algebraic in N.
enum class InverseRule { direct, laurent };

struct MmOptions {
    int N = 4;
    InverseRule inverse_rule = InverseRule::laurent;
    bool complex_path = false;  // default: real trigonometric basis
    int gauss_points = 8;       // per-slab quadrature of the M12 integral
    int rotation_slices = 0;    // 0 means 16 * (2N + 1)

    int slices_or_default() const {
        return rotation_slices > 0 ? rotation_slices : 16 * (2 * N + 1);
    }
};

/// Fourier-truncated generator of the first-order system for one slab:
/// Q0 = [[0, inv_mu], [A, 0]] with A = 4 pi^2 (n m mu_{n-m}) / T_cross^2,
/// expressed in the real trigonometric basis (constant mode at index 0).
struct TruncatedGenerator {
    int N = 0;
    int d = 0;         // 2N + 1
    Eigen::MatrixXd Q;  // 2d x 2d
};

TruncatedGenerator assemble_generator(const FourierSlab& slab,
                                      double period_across,
                                      const MmOptions& opt = {});

/// Complex-basis variant (modes n = -N..N, constant mode at index N).
Eigen::MatrixXcd assemble_generator_complex(const FourierSlab& slab,
                                            double period_across,
                                            const MmOptions& opt = {});

/// Monodromy matrix at omega = 0: ordered product of slab exponentials,
/// rightmost factor corresponding to the first slab.
struct MonodromyMatrix {
    int N = 0;
    int d = 0;
    Eigen::MatrixXd M;  // 2d x 2d, real basis
    SlabPartition partition;
};

MonodromyMatrix monodromy(const UnitCell& cell, const MmOptions& opt,
                          int axis = 1);

struct PrincipalResult {
    double c;       // effective speed along the axis, m/s
    double M_diag;  // M_aa = <mu> - c^2 <rho>
};

/// Effective speed for kappa parallel to a lattice axis.
PrincipalResult principal_speed(const UnitCell& cell, const MmOptions& opt,
                                int axis = 1);

enum class M12Method { direct, rotation };

/// Off-diagonal component of the effective quadratic form.
double offdiagonal_m12(const UnitCell& cell, const MmOptions& opt,
                       M12Method method = M12Method::direct);

/// Full 2x2 effective tensor by the monodromy-matrix method.
EffectiveTensor effective_tensor(const UnitCell& cell, const MmOptions& opt);

/// Closed-form estimate c^2 ~ (<<mu^-1>_1^-1>_2 + <<mu>_2^-1>_1^-1) / (2<rho>).
double closed_form_estimate(const UnitCell& cell);

/// Reuss-Voigt bracket for the effective speed: harmonic and arithmetic
/// mean bounds divided by <rho>, as speeds.
std::pair<double, double> speed_bounds(const UnitCell& cell);

}  // namespace phxc

#endif
