#ifndef PHXC_PWE_HPP
#define PHXC_PWE_HPP

#include <Eigen/Dense>

#include "phxc/cell.hpp"
#include "phxc/effective_tensor.hpp"

namespace phxc {

/// Plane-wave-expansion system over the reciprocal index set
/// {g : |g_i| <= G, g != 0}: Hermitian matrix C0 of the periodic
/// operator -div(mu grad) and the coefficient vectors of d_i(mu).
struct PweSystem {
    int G = 0;
    Eigen::MatrixXcd C0;
    Eigen::VectorXcd b1, b2;
};

PweSystem pwe_system(const UnitCell& cell, int G);

/// M_ij = (C0^-1 d_i mu, d_j mu) via a Hermitian solve; method tag "pwe",
/// trunc records d = 2G + 1.
EffectiveTensor pwe_effective_tensor(const UnitCell& cell, int G);

}  // namespace phxc

#endif
