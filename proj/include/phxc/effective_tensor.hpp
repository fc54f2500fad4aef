#ifndef PHXC_EFFECTIVE_TENSOR_HPP
#define PHXC_EFFECTIVE_TENSOR_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace phxc {

/// Homogenized quadratic form M_ij together with the cell means it was
/// computed from. mu_eff(kappa) = <mu> - sum M_ij kappa_i kappa_j and
/// c(kappa) = sqrt(mu_eff / <rho>).
struct EffectiveTensor {
    double M11 = 0.0, M22 = 0.0, M12 = 0.0;  // Pa
    double mu_avg = 0.0, rho_avg = 0.0;
    std::string method;  // "mm" | "pwe" | "estimate" | "oracle"
    int trunc = 0;       // N, G or grid size, method dependent

    double quadratic_form(double k1, double k2) const {
        const double n2 = k1 * k1 + k2 * k2;
        return (M11 * k1 * k1 + 2.0 * M12 * k1 * k2 + M22 * k2 * k2) / n2;
    }

    double mu_eff(double k1, double k2) const {
        return mu_avg - quadratic_form(k1, k2);
    }

    double speed(double k1, double k2) const {
        const double m = mu_eff(k1, k2);
        if (!(m > 0.0))
            throw std::runtime_error(
                "effective tensor: mu_eff(kappa) not positive (method " +
                method + ", truncation " + std::to_string(trunc) + ")");
        return std::sqrt(m / rho_avg);
    }

    double c1() const { return speed(1.0, 0.0); }
    double c2() const { return speed(0.0, 1.0); }
};

}  // namespace phxc

#endif
