#include "phxc/mm.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "phxc/dense.hpp"
#include "shooting.hpp"

namespace phxc {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

// Gauss-Legendre nodes and weights on [0, 1] (Golub-Welsch).
void gauss_legendre(int order, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(order);
    weights.resize(order);
    for (int k = 0; k < order; ++k) {
        nodes(k) = 0.5 * (es.eigenvalues()(k) + 1.0);
        const double v0 = es.eigenvectors()(0, k);
        weights(k) = v0 * v0;  // weights on [0,1] sum to 1
    }
}

Eigen::MatrixXcd inv_mu_block(const FourierSlab& fs, const MmOptions& opt) {
    if (opt.inverse_rule == InverseRule::direct)
        return toeplitz(fs.inv_mu_hat, fs.half_width);
    return toeplitz(fs.mu_hat, fs.half_width).inverse();
}

Eigen::MatrixXcd a_block(const FourierSlab& fs, double period_across) {
    const int N = fs.half_width;
    const int d = 2 * N + 1;
    const double s = 4.0 * pi * pi / (period_across * period_across);
    Eigen::MatrixXcd A(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            const int n = j - N, m = k - N;
            A(j, k) = s * double(n) * double(m) * fs.mu(n - m);
        }
    return A;
}

// Scalar-generic access: generator matrix, constant-mode index, and the
// coefficient vector of d_cross(mu) in the working basis.
template <typename Scalar>
struct Basis;

template <>
struct Basis<double> {
    using Mat = Eigen::MatrixXd;
    using Vec = Eigen::VectorXd;

    static Mat generator(const FourierSlab& fs, double Tc, const MmOptions& opt) {
        return assemble_generator(fs, Tc, opt).Q;
    }
    static int zero_index(int /*N*/) { return 0; }
    static Vec dmu_vector(const FourierSlab& fs, double Tc) {
        const int N = fs.half_width;
        Eigen::VectorXcd v(2 * N + 1);
        for (int n = -N; n <= N; ++n)
            v(n + N) = cplx(0.0, 2.0 * pi * n / Tc) * fs.mu(n);
        Eigen::VectorXcd vr = real_basis(N).adjoint() * v;
        return vr.real();
    }
    static double to_real(double x) { return x; }
};

template <>
struct Basis<cplx> {
    using Mat = Eigen::MatrixXcd;
    using Vec = Eigen::VectorXcd;

    static Mat generator(const FourierSlab& fs, double Tc, const MmOptions& opt) {
        return assemble_generator_complex(fs, Tc, opt);
    }
    static int zero_index(int N) { return N; }
    static Vec dmu_vector(const FourierSlab& fs, double Tc) {
        const int N = fs.half_width;
        Eigen::VectorXcd v(2 * N + 1);
        for (int n = -N; n <= N; ++n)
            v(n + N) = cplx(0.0, 2.0 * pi * n / Tc) * fs.mu(n);
        return v;
    }
    static double to_real(cplx x) {
        if (std::abs(x.imag()) > 1e-8 * std::max(1.0, std::abs(x.real())))
            throw std::runtime_error("complex path: non-real response");
        return x.real();
    }
};

template <typename Scalar>
struct SlabOperator {
    double length;
    typename Basis<Scalar>::Mat Q;
    typename Basis<Scalar>::Vec dmu;
    double rate;  // spectral growth bound |Re lambda|_max of Q
    const Slab* slab;
};

// Largest |eigenvalue| of Q = [[0,B],[A,0]]: eig(Q)^2 = eig(B A).
template <typename Mat>
double growth_rate(const Mat& Q, int d) {
    const Eigen::MatrixXcd BA =
        (Q.topRightCorner(d, d) * Q.bottomLeftCorner(d, d))
            .template cast<cplx>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(BA, false);
    return std::sqrt(es.eigenvalues().cwiseAbs().maxCoeff());
}

bool same_profile(const Slab& a, const Slab& b) {
    if (a.profile.size() != b.profile.size()) return false;
    for (std::size_t i = 0; i < a.profile.size(); ++i) {
        const auto& p = a.profile[i];
        const auto& q = b.profile[i];
        if (p.lo != q.lo || p.hi != q.hi || !(p.phase == q.phase)) return false;
    }
    return true;
}

// Per-slab generators; reused across slabs sharing a profile.
template <typename Scalar>
std::vector<SlabOperator<Scalar>> slab_operators(const SlabPartition& part,
                                                 const MmOptions& opt) {
    std::vector<SlabOperator<Scalar>> ops;
    ops.reserve(part.slabs.size());
    for (const auto& slab : part.slabs) {
        const SlabOperator<Scalar>* hit = nullptr;
        for (const auto& prev : ops)
            if (same_profile(*prev.slab, slab)) {
                hit = &prev;
                break;
            }
        if (hit) {
            ops.push_back({slab.length(), hit->Q, hit->dmu, hit->rate, &slab});
            continue;
        }
        const FourierSlab fs = slab_fourier(slab, part.period_across, opt.N);
        SlabOperator<Scalar> op;
        op.length = slab.length();
        op.Q = Basis<Scalar>::generator(fs, part.period_across, opt);
        op.dmu = Basis<Scalar>::dmu_vector(fs, part.period_across);
        op.rate = growth_rate(op.Q, 2 * opt.N + 1);
        op.slab = &slab;
        ops.push_back(std::move(op));
    }
    return ops;
}

template <typename Scalar>
typename Basis<Scalar>::Mat monodromy_product(
    const std::vector<SlabOperator<Scalar>>& ops, int d) {
    typename Basis<Scalar>::Mat M =
        Basis<Scalar>::Mat::Identity(2 * d, 2 * d);
    for (const auto& op : ops)
        M = mat_exp(op.Q, op.length) * M;  // rightmost factor = first slab
    if (!M.allFinite())
        throw std::overflow_error(
            "monodromy: overflow in slab exponential product");
    return M;
}

// Slabs cut into segments whose exponentials stay modest in norm; the
// deflated periodic system is then solved in partitioned form (see
// shooting.hpp) rather than by inverting the accumulated product.
template <typename Scalar>
struct Segment {
    int op;         // index into the slab-operator list
    double length;  // segment length along the propagation axis
    typename Basis<Scalar>::Mat E;  // exp(length * Q_op)
};

constexpr double kSegmentGrowth = 7.0;  // max log-norm per segment

template <typename Scalar>
std::vector<Segment<Scalar>> build_segments(
    const std::vector<SlabOperator<Scalar>>& ops) {
    std::vector<Segment<Scalar>> segs;
    for (int i = 0; i < int(ops.size()); ++i) {
        const auto& op = ops[i];
        const int m = std::max(
            1, int(std::ceil(op.rate * op.length / kSegmentGrowth)));
        const double h = op.length / m;
        const auto E = mat_exp(op.Q, h);
        for (int s = 0; s < m; ++s) segs.push_back({i, h, E});
    }
    return segs;
}

// States at every segment start of (M0 - I) xi = w0 with the constant
// displacement column and constant traction row deflated.
template <typename Scalar>
std::vector<typename Basis<Scalar>::Vec> shooting_solve(
    const std::vector<Segment<Scalar>>& segs, int d, int zero) {
    using Mat = typename Basis<Scalar>::Mat;
    std::vector<internal::DynMat<Scalar>> E;
    E.reserve(segs.size());
    for (const auto& s : segs) E.push_back(s.E);
    Mat W = Mat::Zero(2 * d, 1);
    W(zero, 0) = Scalar(1);
    const auto states = internal::periodic_shooting_states<Scalar>(
        E, {zero}, {d + zero}, W);
    std::vector<typename Basis<Scalar>::Vec> xi;
    xi.reserve(states.size());
    for (const auto& s : states) xi.push_back(s.col(0));
    return xi;
}

template <typename Scalar>
double principal_response(const UnitCell& cell, const MmOptions& opt, int axis) {
    const SlabPartition part = slab_partition(cell, axis);
    auto ops = slab_operators<Scalar>(part, opt);
    const int d = 2 * opt.N + 1;
    const int zero = Basis<Scalar>::zero_index(opt.N);
    const auto segs = build_segments(ops);
    const auto xi = shooting_solve<Scalar>(segs, d, zero);
    return Basis<Scalar>::to_real(xi[0](d + zero));
}

template <typename Scalar>
double m12_direct(const UnitCell& cell, const MmOptions& opt) {
    const SlabPartition part = slab_partition(cell, 1);
    auto ops = slab_operators<Scalar>(part, opt);
    const int d = 2 * opt.N + 1;
    const int zero = Basis<Scalar>::zero_index(opt.N);
    const auto segs = build_segments(ops);
    auto xi = shooting_solve<Scalar>(segs, d, zero);

    Eigen::VectorXd nodes, weights;
    gauss_legendre(opt.gauss_points, nodes, weights);

    // <h d2(mu)> accumulated segment by segment: within a segment the
    // state is xi(t) = exp(t Q) xi_j and the cross average of d2(mu) h is
    // the inner product of the d2(mu) coefficients with the first block.
    using Vec = typename Basis<Scalar>::Vec;
    Scalar acc(0);
    double mag = 0.0;  // roundoff scale of the accumulated integral
    for (std::size_t j = 0; j < segs.size(); ++j) {
        const auto& op = ops[segs[j].op];
        for (int q = 0; q < nodes.size(); ++q) {
            const Vec y =
                mat_exp(op.Q, segs[j].length * nodes(q)) * xi[j];
            const Scalar term = Scalar(weights(q) * segs[j].length) *
                                op.dmu.dot(y.head(d));  // conjugating product
            acc += term;
            mag += std::abs(term);
        }
    }
    if constexpr (std::is_same_v<Scalar, cplx>) {
        if (std::abs(acc.imag()) > 1e-8 * std::max(1.0, mag))
            throw std::runtime_error("complex path: non-real response");
        return acc.real();
    } else {
        return acc;
    }
}

double mean_inv_mu(const UnitCell& cell) {
    const SlabPartition part = slab_partition(cell, 1);
    const double area = part.period_along * part.period_across;
    double m = 0.0;
    for (const auto& slab : part.slabs)
        for (const auto& piece : slab.profile)
            m += slab.length() * (piece.hi - piece.lo) / (area * piece.phase.mu);
    return m;
}

}  // namespace

TruncatedGenerator assemble_generator(const FourierSlab& fs,
                                      double period_across,
                                      const MmOptions& opt) {
    const int N = fs.half_width;
    const int d = 2 * N + 1;
    const Eigen::MatrixXcd U = real_basis(N);
    TruncatedGenerator gen{N, d, Eigen::MatrixXd::Zero(2 * d, 2 * d)};
    gen.Q.topRightCorner(d, d) = to_real_basis(inv_mu_block(fs, opt), U);
    gen.Q.bottomLeftCorner(d, d) = to_real_basis(a_block(fs, period_across), U);
    return gen;
}

Eigen::MatrixXcd assemble_generator_complex(const FourierSlab& fs,
                                            double period_across,
                                            const MmOptions& opt) {
    const int d = 2 * fs.half_width + 1;
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    Q.topRightCorner(d, d) = inv_mu_block(fs, opt);
    Q.bottomLeftCorner(d, d) = a_block(fs, period_across);
    return Q;
}

MonodromyMatrix monodromy(const UnitCell& cell, const MmOptions& opt, int axis) {
    SlabPartition part = slab_partition(cell, axis);
    auto ops = slab_operators<double>(part, opt);
    const int d = 2 * opt.N + 1;
    MonodromyMatrix out;
    out.N = opt.N;
    out.d = d;
    out.M = monodromy_product(ops, d);
    out.partition = std::move(part);
    return out;
}

PrincipalResult principal_speed(const UnitCell& cell, const MmOptions& opt,
                                int axis) {
    if (opt.N < 0) throw std::invalid_argument("principal_speed: N must be >= 0");
    const double s = opt.complex_path
                         ? principal_response<cplx>(cell, opt, axis)
                         : principal_response<double>(cell, opt, axis);
    const auto [rho_avg, mu_avg] = cell_averages(cell);
    const double c2 = cell.period(axis) * s / rho_avg;
    if (!(c2 > 0.0) || !std::isfinite(c2))
        throw std::runtime_error(
            "principal_speed: non-positive c^2 (truncation failure at N = " +
            std::to_string(opt.N) + ")");
    return {std::sqrt(c2), mu_avg - c2 * rho_avg};
}

double offdiagonal_m12(const UnitCell& cell, const MmOptions& opt,
                       M12Method method) {
    if (method == M12Method::rotation) {
        if (!cell.square())
            throw std::invalid_argument(
                "offdiagonal_m12: rotation identity requires a square cell");
        const UnitCell rc = rotate45(cell, opt.slices_or_default());
        const double m11 = principal_speed(rc, opt, 1).M_diag;
        const double m22 = principal_speed(rc, opt, 2).M_diag;
        return 0.5 * (m11 - m22);
    }
    return opt.complex_path ? m12_direct<cplx>(cell, opt)
                            : m12_direct<double>(cell, opt);
}

EffectiveTensor effective_tensor(const UnitCell& cell, const MmOptions& opt) {
    EffectiveTensor t;
    t.method = "mm";
    t.trunc = opt.N;
    std::tie(t.rho_avg, t.mu_avg) = cell_averages(cell);
    t.M11 = principal_speed(cell, opt, 1).M_diag;
    t.M22 = principal_speed(cell, opt, 2).M_diag;
    t.M12 = offdiagonal_m12(cell, opt, M12Method::direct);
    return t;
}

double closed_form_estimate(const UnitCell& cell) {
    const auto [rho_avg, mu_avg] = cell_averages(cell);
    const double T1 = cell.period(1), T2 = cell.period(2);

    // <<mu^-1>_1^-1>_2 : harmonic mean along x1, then averaged over x2.
    const SlabPartition p2 = slab_partition(cell, 2);
    double term1 = 0.0;
    for (const auto& slab : p2.slabs) {
        double h = 0.0;
        for (const auto& piece : slab.profile)
            h += (piece.hi - piece.lo) / (T1 * piece.phase.mu);
        term1 += slab.length() / (T2 * h);
    }

    // <<mu>_2^-1>_1^-1 : arithmetic mean along x2, harmonically in x1.
    const SlabPartition p1 = slab_partition(cell, 1);
    double inv = 0.0;
    for (const auto& slab : p1.slabs) {
        double a = 0.0;
        for (const auto& piece : slab.profile)
            a += (piece.hi - piece.lo) * piece.phase.mu / T2;
        inv += slab.length() / (T1 * a);
    }
    const double term2 = 1.0 / inv;

    return std::sqrt(0.5 * (term1 + term2) / rho_avg);
}

std::pair<double, double> speed_bounds(const UnitCell& cell) {
    const auto [rho_avg, mu_avg] = cell_averages(cell);
    const double reuss = 1.0 / mean_inv_mu(cell);
    return {std::sqrt(reuss / rho_avg), std::sqrt(mu_avg / rho_avg)};
}

}  // namespace phxc
