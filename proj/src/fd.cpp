#include "phxc/fd.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace phxc {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

struct Grid {
    int n;
    double h1, h2;
    Eigen::ArrayXXd mu_east, mu_north;  // face coefficients, periodic
};

Grid make_grid(const UnitCell& cell, int n) {
    Grid g;
    g.n = n;
    g.h1 = cell.period(1) / n;
    g.h2 = cell.period(2) / n;
    Eigen::ArrayXXd mu(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            mu(i, j) = cell.at((i + 0.5) * g.h1, (j + 0.5) * g.h2).mu;
    g.mu_east.resize(n, n);
    g.mu_north.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            g.mu_east(i, j) = harmonic(mu(i, j), mu((i + 1) % n, j));
            g.mu_north(i, j) = harmonic(mu(i, j), mu(i, (j + 1) % n));
        }
    return g;
}

// y = -div(mu grad x) with staggered harmonic-mean fluxes.
void apply_op(const Grid& g, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const int n = g.n;
    const double s1 = 1.0 / (g.h1 * g.h1), s2 = 1.0 / (g.h2 * g.h2);
    for (int i = 0; i < n; ++i) {
        const int iw = (i + n - 1) % n, ie = (i + 1) % n;
        for (int j = 0; j < n; ++j) {
            const int js = (j + n - 1) % n, jn = (j + 1) % n;
            const double c = x(i * n + j);
            double r = g.mu_east(iw, j) * (c - x(iw * n + j)) -
                       g.mu_east(i, j) * (x(ie * n + j) - c);
            r *= s1;
            r += s2 * (g.mu_north(i, js) * (c - x(i * n + js)) -
                       g.mu_north(i, j) * (x(i * n + jn) - c));
            y(i * n + j) = r;
        }
    }
}

void remove_mean(Eigen::VectorXd& v) { v.array() -= v.mean(); }

Eigen::VectorXd solve_cg(const Grid& g, const Eigen::VectorXd& b, double tol) {
    const int n2 = g.n * g.n;
    const double bnorm = b.norm();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n2);
    if (bnorm == 0.0) return x;
    Eigen::VectorXd r = b, p = b, Ap(n2);
    remove_mean(r);
    double rr = r.squaredNorm();
    const int cap = 50 * g.n;
    for (int it = 0; it < cap; ++it) {
        if (std::sqrt(rr) <= tol * bnorm) {
            remove_mean(x);
            return x;
        }
        apply_op(g, p, Ap);
        const double alpha = rr / p.dot(Ap);
        x += alpha * p;
        r -= alpha * Ap;
        remove_mean(r);  // keep the constant kernel out
        const double rr_new = r.squaredNorm();
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }
    throw std::runtime_error(
        "fd oracle: CG did not converge within " + std::to_string(cap) +
        " iterations (relative residual " +
        std::to_string(std::sqrt(rr) / bnorm) + ")");
}

}  // namespace

EffectiveTensor oracle_effective_tensor(const UnitCell& cell, int n,
                                        double tol) {
    if (n < 64 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fd oracle: grid must be a power of two >= 64");
    const Grid g = make_grid(cell, n);
    const int n2 = n * n;

    // Conservative differencing of mu with the same face coefficients.
    Eigen::VectorXd b1(n2), b2(n2);
    for (int i = 0; i < n; ++i) {
        const int iw = (i + n - 1) % n;
        for (int j = 0; j < n; ++j) {
            const int js = (j + n - 1) % n;
            b1(i * n + j) = (g.mu_east(i, j) - g.mu_east(iw, j)) / g.h1;
            b2(i * n + j) = (g.mu_north(i, j) - g.mu_north(i, js)) / g.h2;
        }
    }

    const Eigen::VectorXd h1 = solve_cg(g, b1, tol);
    const Eigen::VectorXd h2 = solve_cg(g, b2, tol);

    EffectiveTensor t;
    t.method = "oracle";
    t.trunc = n;
    std::tie(t.rho_avg, t.mu_avg) = cell_averages(cell);
    t.M11 = h1.dot(b1) / n2;
    t.M22 = h2.dot(b2) / n2;
    t.M12 = h1.dot(b2) / n2;
    return t;
}

}  // namespace phxc
