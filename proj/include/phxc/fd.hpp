#ifndef PHXC_FD_HPP
#define PHXC_FD_HPP

#include "phxc/cell.hpp"
#include "phxc/effective_tensor.hpp"

namespace phxc {

/// Brute-force reference: solves the periodic cell problem
/// -div(mu grad h) = d_i(mu) on an n x n grid with staggered
/// harmonic-mean flux coefficients and unpreconditioned CG, then
/// evaluates M_ij by the discrete inner product <h_i d_j(mu)>.
/// Independent of the monodromy and PWE paths; exists to certify them.
EffectiveTensor oracle_effective_tensor(const UnitCell& cell, int n,
                                        double tol = 1e-10);

}  // namespace phxc

#endif
