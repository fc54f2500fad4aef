#include "phxc/elastic3d.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "phxc/dense.hpp"
#include "shooting.hpp"

namespace phxc {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;
using Matrix3cd = Eigen::Matrix3cd;

// Voigt index, 0-based tensor indices.
int voigt(int i, int j) {
    if (i == j) return i;
    const int s = i + j;  // 0+1=1 -> 5, 0+2=2 -> 4, 1+2=3 -> 3
    return s == 3 ? 3 : (s == 2 ? 4 : 5);
}

cplx box_factor(double a, double b, double T, int n) {
    if (n == 0) return (b - a) / T;
    const cplx i(0.0, 1.0);
    const double w = 2.0 * pi * n / T;
    return (std::exp(-i * w * b) - std::exp(-i * w * a)) / (-i * w) / T;
}

struct CrossRect {
    double lo2, hi2, lo3, hi3;
    const ElasticPhase* phase;
};

std::vector<double> cuts_of(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    return out;
}

// Disjoint rectangle decomposition of the (x2, x3) cross-section at x1.
std::vector<CrossRect> cross_section(const ElasticCell& cell, double x1) {
    const double T2 = cell.period(2), T3 = cell.period(3);
    const double tol = 1e-12 * std::max(T2, T3);
    std::vector<double> c2{0.0, T2}, c3{0.0, T3};
    for (const auto& b : cell.boxes()) {
        if (!(b.corner.x() <= x1 && x1 < b.corner.x() + b.size.x())) continue;
        c2.push_back(std::clamp(b.corner.y(), 0.0, T2));
        c2.push_back(std::clamp(b.corner.y() + b.size.y(), 0.0, T2));
        c3.push_back(std::clamp(b.corner.z(), 0.0, T3));
        c3.push_back(std::clamp(b.corner.z() + b.size.z(), 0.0, T3));
    }
    c2 = cuts_of(std::move(c2), tol);
    c3 = cuts_of(std::move(c3), tol);
    std::vector<CrossRect> rects;
    for (std::size_t a = 0; a + 1 < c2.size(); ++a)
        for (std::size_t b = 0; b + 1 < c3.size(); ++b) {
            const auto& p = cell.at(x1, 0.5 * (c2[a] + c2[a + 1]),
                                    0.5 * (c3[b] + c3[b + 1]));
            rects.push_back({c2[a], c2[a + 1], c3[b], c3[b + 1], &p});
        }
    return rects;
}

// Fourier table of a 3x3 matrix-valued field over mode differences
// |m2| <= 2*N2, |m3| <= 2*N3.
struct CoeffTable {
    int N2, N3;
    std::vector<Matrix3cd> data;  // (4N2+1) x (4N3+1), row-major in m2

    Matrix3cd& at(int m2, int m3) {
        return data[(m2 + 2 * N2) * (4 * N3 + 1) + (m3 + 2 * N3)];
    }
    const Matrix3cd& at(int m2, int m3) const {
        return data[(m2 + 2 * N2) * (4 * N3 + 1) + (m3 + 2 * N3)];
    }
};

CoeffTable fourier_table(const std::vector<CrossRect>& rects, double T2,
                         double T3, int N2, int N3,
                         const std::function<Matrix3cd(const ElasticPhase&)>& f) {
    CoeffTable t{N2, N3, {}};
    t.data.assign((4 * N2 + 1) * (4 * N3 + 1), Matrix3cd::Zero());
    for (const auto& r : rects) {
        const Matrix3cd v = f(*r.phase);
        for (int m2 = -2 * N2; m2 <= 2 * N2; ++m2) {
            const cplx f2 = box_factor(r.lo2, r.hi2, T2, m2);
            for (int m3 = -2 * N3; m3 <= 2 * N3; ++m3)
                t.at(m2, m3) += v * (f2 * box_factor(r.lo3, r.hi3, T3, m3));
        }
    }
    return t;
}

struct ModeSet {
    int N2, N3, M;
    double T2, T3;

    int n2(int m) const { return m / (2 * N3 + 1) - N2; }
    int n3(int m) const { return m % (2 * N3 + 1) - N3; }
    double k(int axis, int m) const {
        return axis == 2 ? 2.0 * pi * n2(m) / T2 : 2.0 * pi * n3(m) / T3;
    }
    int zero() const { return N2 * (2 * N3 + 1) + N3; }
};

// B[(i,n),(k,m)] = left(n) * That_{ik}(n - m) * right(m).
template <typename L, typename R>
Eigen::MatrixXcd mult_op(const CoeffTable& t, const ModeSet& ms, L left,
                         R right) {
    const int M = ms.M;
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(3 * M, 3 * M);
    for (int n = 0; n < M; ++n)
        for (int m = 0; m < M; ++m) {
            const cplx f = left(n) * right(m);
            if (f == cplx(0.0)) continue;
            const Matrix3cd& c =
                t.at(ms.n2(n) - ms.n2(m), ms.n3(n) - ms.n3(m));
            for (int i = 0; i < 3; ++i)
                for (int k = 0; k < 3; ++k)
                    B(i * M + n, k * M + m) = f * c(i, k);
        }
    return B;
}

Matrix3cd slice_c(const ElasticPhase& p, int j, int l) {
    // (c_{i j k l})_{ik} as a 3x3 matrix, 0-based j, l.
    Matrix3cd m;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            m(i, k) = p.c(i + 1, j + 1, k + 1, l + 1);
    return m;
}

}  // namespace

ElasticPhase ElasticPhase::isotropic(double rho, double lambda, double mu) {
    ElasticPhase p;
    p.rho = rho;
    p.C = Matrix6d::Zero();
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) p.C(a, b) = lambda;
        p.C(a, a) += 2.0 * mu;
        p.C(a + 3, a + 3) = mu;
    }
    return p;
}

double ElasticPhase::c(int i, int j, int k, int l) const {
    return C(voigt(i - 1, j - 1), voigt(k - 1, l - 1));
}

bool ElasticPhase::operator==(const ElasticPhase& o) const {
    return rho == o.rho && C == o.C;
}

ElasticCell::ElasticCell(double T1, double T2, double T3,
                         ElasticPhase background, std::vector<Box> boxes)
    : T_{T1, T2, T3}, background_(background), boxes_(std::move(boxes)) {
    if (!(T1 > 0.0) || !(T2 > 0.0) || !(T3 > 0.0))
        throw std::invalid_argument("cell periods must be positive");
    auto check = [](const ElasticPhase& p) {
        if (!(p.rho > 0.0))
            throw std::invalid_argument("elastic phase requires rho > 0");
        if ((p.C - p.C.transpose()).cwiseAbs().maxCoeff() >
            1e-10 * p.C.cwiseAbs().maxCoeff())
            throw std::invalid_argument("stiffness matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Matrix6d> es(p.C);
        if (!(es.eigenvalues().minCoeff() > 0.0))
            throw std::invalid_argument("stiffness matrix must be positive definite");
    };
    check(background_);
    for (const auto& b : boxes_) {
        check(b.phase);
        for (int a = 0; a < 3; ++a)
            if (!(b.size[a] > 0.0) || b.corner[a] < -1e-12 ||
                b.corner[a] + b.size[a] > T_[a] * (1.0 + 1e-12))
                throw std::invalid_argument("box lies outside the unit cell");
    }
}

const ElasticPhase& ElasticCell::at(double x1, double x2, double x3) const {
    for (auto it = boxes_.rbegin(); it != boxes_.rend(); ++it) {
        bool in = x1 >= it->corner.x() && x1 < it->corner.x() + it->size.x() &&
                  x2 >= it->corner.y() && x2 < it->corner.y() + it->size.y() &&
                  x3 >= it->corner.z() && x3 < it->corner.z() + it->size.z();
        if (in) return it->phase;
    }
    return background_;
}

double ElasticCell::rho_mean() const {
    std::vector<double> cuts{0.0, T_[0]};
    for (const auto& b : boxes_) {
        cuts.push_back(std::clamp(b.corner.x(), 0.0, T_[0]));
        cuts.push_back(std::clamp(b.corner.x() + b.size.x(), 0.0, T_[0]));
    }
    cuts = cuts_of(std::move(cuts), 1e-12 * T_[0]);
    double m = 0.0;
    const double vol = T_[0] * T_[1] * T_[2];
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double x1 = 0.5 * (cuts[i] + cuts[i + 1]);
        for (const auto& r : cross_section(*this, x1))
            m += (cuts[i + 1] - cuts[i]) * (r.hi2 - r.lo2) * (r.hi3 - r.lo3) *
                 r.phase->rho / vol;
    }
    return m;
}

ElasticCell ElasticCell::permuted(const std::array<int, 3>& perm) const {
    auto permute_phase = [&](const ElasticPhase& p) {
        ElasticPhase q;
        q.rho = p.rho;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        q.C(voigt(i, j), voigt(k, l)) =
                            p.C(voigt(perm[i] - 1, perm[j] - 1),
                                voigt(perm[k] - 1, perm[l] - 1));
        return q;
    };
    std::vector<Box> boxes;
    for (const auto& b : boxes_) {
        Box nb;
        for (int a = 0; a < 3; ++a) {
            nb.corner[a] = b.corner[perm[a] - 1];
            nb.size[a] = b.size[perm[a] - 1];
        }
        nb.phase = permute_phase(b.phase);
        boxes.push_back(nb);
    }
    return ElasticCell(T_[perm[0] - 1], T_[perm[1] - 1], T_[perm[2] - 1],
                       permute_phase(background_), std::move(boxes));
}

ElasticGenerator assemble_generator_3d(const ElasticCell& cell, double x1,
                                       int N2, int N3) {
    if (N2 < 0 || N3 < 0)
        throw std::invalid_argument("truncation half-widths must be >= 0");
    const double T2 = cell.period(2), T3 = cell.period(3);
    const auto rects = cross_section(cell, x1);
    const ModeSet ms{N2, N3, (2 * N2 + 1) * (2 * N3 + 1), T2, T3};
    const int M = ms.M;
    const cplx iu(0.0, 1.0);

    auto table = [&](auto f) { return fourier_table(rects, T2, T3, N2, N3, f); };
    const CoeffTable Chat = table([](const ElasticPhase& p) {
        return slice_c(p, 0, 0);
    });
    const CoeffTable A1hat2 = table([](const ElasticPhase& p) {
        return slice_c(p, 0, 1);
    });
    const CoeffTable A1hat3 = table([](const ElasticPhase& p) {
        return slice_c(p, 0, 2);
    });

    auto one = [](int) { return cplx(1.0); };
    // Invert the truncated multiplication operator of C rather than
    // truncating the multiplication operator of C^-1: the traction it
    // multiplies jumps together with C, so this is the convergent rule
    // (exact for laminates at any truncation).
    const Eigen::MatrixXcd Cinv =
        mult_op(Chat, ms, one, one).llt().solve(
            Eigen::MatrixXcd::Identity(3 * M, 3 * M));
    Eigen::MatrixXcd A1 =
        mult_op(A1hat2, ms, one, [&](int m) { return iu * ms.k(2, m); }) +
        mult_op(A1hat3, ms, one, [&](int m) { return iu * ms.k(3, m); });

    Eigen::MatrixXcd A2 = Eigen::MatrixXcd::Zero(3 * M, 3 * M);
    for (int a = 2; a <= 3; ++a)
        for (int b = 2; b <= 3; ++b) {
            const CoeffTable tab = table([&](const ElasticPhase& p) {
                return slice_c(p, a - 1, b - 1);
            });
            A2 -= mult_op(
                tab, ms, [&](int n) { return cplx(ms.k(a, n)); },
                [&](int m) { return cplx(ms.k(b, m)); });
        }

    ElasticGenerator gen;
    gen.N2 = N2;
    gen.N3 = N3;
    gen.modes = M;
    gen.A2 = A2;
    gen.Q.resize(6 * M, 6 * M);
    const Eigen::MatrixXcd CinvA1 = Cinv * A1;
    gen.Q.topLeftCorner(3 * M, 3 * M) = -CinvA1;
    gen.Q.topRightCorner(3 * M, 3 * M) = Cinv;
    gen.Q.bottomLeftCorner(3 * M, 3 * M) = -A2 - A1.adjoint() * CinvA1;
    gen.Q.bottomRightCorner(3 * M, 3 * M) = A1.adjoint() * Cinv;
    return gen;
}

Eigen::Vector3d principal_speeds_3d(const ElasticCell& cell_in, int N2, int N3,
                                    int axis) {
    const ElasticCell cell =
        axis == 1 ? cell_in
        : axis == 2 ? cell_in.permuted({2, 1, 3})
        : cell_in.permuted({3, 2, 1});
    const double T1 = cell.period(1);

    std::vector<double> cuts{0.0, T1};
    for (const auto& b : cell.boxes()) {
        cuts.push_back(std::clamp(b.corner.x(), 0.0, T1));
        cuts.push_back(std::clamp(b.corner.x() + b.size.x(), 0.0, T1));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double a, double b) {
                               return b - a <= 1e-12 * T1;
                           }),
               cuts.end());

    const ModeSet ms{N2, N3, (2 * N2 + 1) * (2 * N3 + 1), cell.period(2),
                     cell.period(3)};
    const int M = ms.M;

    // Segment exponentials, each kept modest in norm (see shooting.hpp).
    constexpr double max_log_norm = 7.0;
    std::vector<internal::DynMat<cplx>> E;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const auto gen =
            assemble_generator_3d(cell, 0.5 * (cuts[i] + cuts[i + 1]), N2, N3);
        const double rate = internal::spectral_growth(gen.Q);
        const int m = std::max(1, int(std::ceil(rate * len / max_log_norm)));
        const Eigen::MatrixXcd Eseg = mat_exp(gen.Q, len / m);
        for (int s = 0; s < m; ++s) E.push_back(Eseg);
    }

    // Deflate the three constant displacement columns and the three
    // constant traction rows, then read the zero-mode responses.
    const int m0 = ms.zero();
    const std::vector<int> cols{m0, M + m0, 2 * M + m0};
    const std::vector<int> rows{3 * M + m0, 4 * M + m0, 5 * M + m0};
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(6 * M, 3);
    for (int j = 0; j < 3; ++j) W(j * M + m0, j) = 1.0;
    const auto states =
        internal::periodic_shooting_states<cplx>(E, cols, rows, W);

    Eigen::Matrix3cd K;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            K(k, j) = states[0](3 * M + k * M + m0, j);

    const double rho = cell.rho_mean();
    Eigen::Matrix3d S = (T1 / rho) * K.real();
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if (K.imag().cwiseAbs().maxCoeff() * T1 / rho > 1e-6 * scale)
        throw std::runtime_error("principal_speeds_3d: non-real speed matrix");

    const Eigen::Vector3d ev = sym_eigen_small(0.5 * (S + S.transpose()));
    if (!(ev.minCoeff() > 0.0))
        throw std::runtime_error(
            "principal_speeds_3d: negative squared speed (truncation failure)");
    return ev.cwiseSqrt();
}

}  // namespace phxc
