#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "phxc/cell.hpp"
#include "phxc/dense.hpp"
#include "phxc/fourier.hpp"
#include "phxc/mm.hpp"

using namespace phxc;
using std::numbers::pi;

namespace {

const MaterialPhase steel{7.8e3, 80e9};
const MaterialPhase epoxy{1.14e3, 1.48e9};

UnitCell centered_rod(MaterialPhase matrix, MaterialPhase rod, double f) {
    const double a = std::sqrt(f);
    return build_cell(1.0, 1.0, matrix,
                      {{{(1 - a) / 2, (1 - a) / 2}, {a, a}, rod}});
}

double logdet_abs(const Eigen::MatrixXd& A) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    double s = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        s += std::log(std::abs(lu.matrixLU()(i, i)));
    return s;
}

UnitCell random_cell(std::mt19937& rng, double max_contrast) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double T1 = 0.5 + 1.5 * uni(rng);
    const double T2 = 0.5 + 1.5 * uni(rng);
    auto phase = [&] {
        const double rho = std::pow(10.0, 3.0 * uni(rng));
        const double mu = std::pow(max_contrast, uni(rng));
        return MaterialPhase{rho, mu};
    };
    std::vector<Inclusion> incs;
    const int k = 1 + int(3.0 * uni(rng));
    for (int i = 0; i < k; ++i) {
        const double w = (0.1 + 0.8 * uni(rng)) * T1;
        const double h = (0.1 + 0.8 * uni(rng)) * T2;
        incs.push_back({{uni(rng) * (T1 - w), uni(rng) * (T2 - h)},
                        {w, h},
                        phase()});
    }
    return build_cell(T1, T2, phase(), incs);
}

}  // namespace

TEST_CASE("generator for a constant slab") {
    const MaterialPhase m{1.0, 3.0};
    const FourierSlab fs = slab_fourier({{0.0, 1.0, m}}, 1.0, 1, 1.0);

    // real basis ordering: constant, cos, sin
    const TruncatedGenerator gen = assemble_generator(fs, 1.0);
    REQUIRE(gen.d == 3);
    const Eigen::MatrixXd inv = gen.Q.topRightCorner(3, 3);
    CHECK((inv - Eigen::MatrixXd::Identity(3, 3) / 3.0).norm() < 1e-14);
    Eigen::Vector3d a_diag(0.0, 4 * pi * pi * 3.0, 4 * pi * pi * 3.0);
    CHECK((gen.Q.bottomLeftCorner(3, 3) -
           Eigen::MatrixXd(a_diag.asDiagonal()))
              .norm() < 1e-10);
    CHECK(gen.Q.topLeftCorner(3, 3).norm() == 0.0);
    CHECK(gen.Q.bottomRightCorner(3, 3).norm() == 0.0);

    // complex basis: modes -1, 0, 1
    const Eigen::MatrixXcd Qc = assemble_generator_complex(fs, 1.0);
    Eigen::Vector3cd ac(4 * pi * pi * 3.0, 0.0, 4 * pi * pi * 3.0);
    CHECK((Qc.bottomLeftCorner(3, 3) - Eigen::MatrixXcd(ac.asDiagonal()))
              .norm() < 1e-10);
}

TEST_CASE("generator A block row n = 0 vanishes") {
    const std::vector<ProfilePiece> prof{{0.0, 0.4, {2.0, 5.0}},
                                         {0.4, 1.0, {1.0, 0.7}}};
    const FourierSlab fs = slab_fourier(prof, 1.0, 2, 1.0);
    const Eigen::MatrixXcd Qc = assemble_generator_complex(fs, 1.0);
    const int N = 2, d = 5;
    CHECK(Qc.bottomLeftCorner(d, d).row(N).norm() == 0.0);
    CHECK(Qc.bottomLeftCorner(d, d).col(N).norm() == 0.0);

    // A_{nm} = 4 pi^2 n m mu_{n-m}, Hermitian for real mu
    const Eigen::MatrixXcd A = Qc.bottomLeftCorner(d, d);
    CHECK((A - A.adjoint()).norm() < 1e-10 * A.norm());
    for (int n = -N; n <= N; ++n)
        for (int m = -N; m <= N; ++m) {
            const std::complex<double> want =
                4.0 * pi * pi * double(n) * double(m) * fs.mu(n - m);
            CHECK(std::abs(A(n + N, m + N) - want) < 1e-10 * std::abs(want) + 1e-12);
        }
}

TEST_CASE("monodromy of a homogeneous cell is a single exponential") {
    const UnitCell hom = build_cell(1.0, 1.0, epoxy);
    MmOptions opt;
    opt.N = 2;
    const MonodromyMatrix M = monodromy(hom, opt);
    const auto part = slab_partition(hom);
    const FourierSlab fs = slab_fourier(part.slabs[0], 1.0, opt.N);
    const Eigen::MatrixXd E = mat_exp(assemble_generator(fs, 1.0, opt).Q, 1.0);
    CHECK((M.M - E).norm() < 1e-12 * E.norm());
}

TEST_CASE("monodromy fixed vectors and unit determinant") {
    const UnitCell rod = centered_rod(steel, epoxy, 0.5);
    for (int N : {0, 1, 2}) {
        MmOptions opt;
        opt.N = N;
        const MonodromyMatrix M = monodromy(rod, opt);
        const int d = M.d;
        const double scale = M.M.norm();

        Eigen::VectorXd w0 = Eigen::VectorXd::Zero(2 * d);
        w0(0) = 1.0;  // constant displacement, real basis
        Eigen::VectorXd wt0 = Eigen::VectorXd::Zero(2 * d);
        wt0(d) = 1.0;  // constant traction
        CHECK((M.M * w0 - w0).norm() <= 1e-10 * scale);
        CHECK((M.M.transpose() * wt0 - wt0).norm() <= 1e-10 * scale);

        // det M0 = 1 (trace-free generators); the LU determinant itself
        // is conditioning-limited, so only small N is meaningful here
        if (N <= 1) CHECK(std::abs(logdet_abs(M.M)) < 1e-7);
    }
}

TEST_CASE("homogeneous cell speed at any truncation") {
    const UnitCell hom = build_cell(1.0, 1.0, epoxy);
    const double exact = std::sqrt(1.48e9 / 1.14e3);
    for (int N : {0, 1, 4}) {
        MmOptions opt;
        opt.N = N;
        for (int axis : {1, 2})
            CHECK(principal_speed(hom, opt, axis).c ==
                  doctest::Approx(exact).epsilon(1e-10));
    }
    MmOptions bad;
    bad.N = -1;
    CHECK_THROWS(principal_speed(hom, bad));
}

TEST_CASE("laminate recovers harmonic and arithmetic means") {
    // mu = 1 and 4 half-half along x1, rho = 1
    const UnitCell lam = build_cell(1.0, 1.0, {1.0, 1.0},
                                    {{{0.0, 0.0}, {0.5, 1.0}, {1.0, 4.0}}});
    for (int N : {0, 1, 3}) {
        MmOptions opt;
        opt.N = N;
        const double c1 = principal_speed(lam, opt, 1).c;
        const double c2 = principal_speed(lam, opt, 2).c;
        CHECK(c1 * c1 == doctest::Approx(1.6).epsilon(1e-10));
        CHECK(c2 * c2 == doctest::Approx(2.5).epsilon(1e-10));
        CHECK(std::abs(offdiagonal_m12(lam, opt)) <= 1e-10 * 2.5);
    }
    // the direct rule converges to the same limits, slower
    MmOptions dir;
    dir.N = 8;
    dir.inverse_rule = InverseRule::direct;
    CHECK(principal_speed(lam, dir, 1).c * principal_speed(lam, dir, 1).c ==
          doctest::Approx(1.6).epsilon(1e-10));
    CHECK(principal_speed(lam, dir, 2).c * principal_speed(lam, dir, 2).c ==
          doctest::Approx(2.5).epsilon(0.03));
}

TEST_CASE("swap symmetry and reversed slab order") {
    const UnitCell cell = build_cell(1.0, 1.0, steel,
                                     {{{0.1, 0.2}, {0.5, 0.3}, epoxy}});
    const UnitCell swapped = build_cell(1.0, 1.0, steel,
                                        {{{0.2, 0.1}, {0.3, 0.5}, epoxy}});
    MmOptions opt;
    opt.N = 3;
    CHECK(principal_speed(cell, opt, 1).M_diag ==
          doctest::Approx(principal_speed(swapped, opt, 2).M_diag)
              .epsilon(1e-10));

    // mirror in x1: same speed
    const UnitCell mirror = build_cell(1.0, 1.0, steel,
                                       {{{0.4, 0.2}, {0.5, 0.3}, epoxy}});
    CHECK(principal_speed(cell, opt, 1).c ==
          doctest::Approx(principal_speed(mirror, opt, 1).c).epsilon(1e-10));
}

TEST_CASE("scale covariance") {
    const UnitCell cell = centered_rod(steel, epoxy, 0.4);
    MmOptions opt;
    opt.N = 3;
    const double c0 = principal_speed(cell, opt, 1).c;

    const double s = 7.5;
    const UnitCell mu_scaled = build_cell(
        1.0, 1.0, {steel.rho, s * steel.mu},
        {{{cell.inclusions()[0].corner[0], cell.inclusions()[0].corner[1]},
          {cell.inclusions()[0].size[0], cell.inclusions()[0].size[1]},
          {epoxy.rho, s * epoxy.mu}}});
    CHECK(principal_speed(mu_scaled, opt, 1).c * principal_speed(mu_scaled, opt, 1).c ==
          doctest::Approx(s * c0 * c0).epsilon(1e-12));

    const UnitCell rho_scaled = build_cell(
        1.0, 1.0, {s * steel.rho, steel.mu},
        {{{cell.inclusions()[0].corner[0], cell.inclusions()[0].corner[1]},
          {cell.inclusions()[0].size[0], cell.inclusions()[0].size[1]},
          {s * epoxy.rho, epoxy.mu}}});
    CHECK(principal_speed(rho_scaled, opt, 1).c * principal_speed(rho_scaled, opt, 1).c ==
          doctest::Approx(c0 * c0 / s).epsilon(1e-12));
}

TEST_CASE("complex and real paths agree") {
    const UnitCell cell = build_cell(1.0, 1.0, steel,
                                     {{{0.1, 0.2}, {0.5, 0.3}, epoxy}});
    MmOptions real_opt;
    real_opt.N = 3;
    MmOptions cplx_opt = real_opt;
    cplx_opt.complex_path = true;
    CHECK(principal_speed(cell, real_opt, 1).c ==
          doctest::Approx(principal_speed(cell, cplx_opt, 1).c).epsilon(1e-10));

    // nonzero M12 cell for a meaningful off-diagonal comparison
    const UnitCell L = build_cell(1.0, 1.0, steel,
                                  {{{0.1, 0.1}, {0.6, 0.2}, epoxy},
                                   {{0.1, 0.1}, {0.2, 0.6}, epoxy}});
    CHECK(offdiagonal_m12(L, real_opt) ==
          doctest::Approx(offdiagonal_m12(L, cplx_opt)).epsilon(1e-8));
}

TEST_CASE("truncation convergence on the benchmark rod") {
    const UnitCell rod = centered_rod(steel, epoxy, 0.5);
    std::vector<double> c;
    for (int N : {1, 2, 4, 6, 8}) {
        MmOptions opt;
        opt.N = N;
        c.push_back(principal_speed(rod, opt, 1).c);
    }
    // differences shrink monotonically
    for (std::size_t i = 2; i < c.size(); ++i)
        CHECK(std::abs(c[i] - c[i - 1]) < std::abs(c[i - 1] - c[i - 2]));
    // N = 1 already close to converged
    CHECK(std::abs(c.front() - c.back()) / c.back() < 0.05);
}

TEST_CASE("M12 vanishes for even cells") {
    MmOptions opt;
    opt.N = 4;
    const UnitCell rod = centered_rod(steel, epoxy, 0.5);
    const double mu_avg = cell_averages(rod).second;
    CHECK(std::abs(offdiagonal_m12(rod, opt)) <= 1e-8 * mu_avg);
    CHECK(std::abs(offdiagonal_m12(rod, opt, M12Method::rotation)) <=
          1e-2 * mu_avg);  // staircase noise only
}

TEST_CASE("M12 direct and rotation paths agree on a chiral cell") {
    // L-shaped inclusion: only diagonal mirror symmetry, M12 != 0
    const UnitCell L = build_cell(1.0, 1.0, steel,
                                  {{{0.1, 0.1}, {0.6, 0.2}, epoxy},
                                   {{0.1, 0.1}, {0.2, 0.6}, epoxy}});
    MmOptions opt;
    opt.N = 8;
    const double md = offdiagonal_m12(L, opt, M12Method::direct);
    const double mr = offdiagonal_m12(L, opt, M12Method::rotation);
    CHECK(md != 0.0);
    CHECK(std::abs(md - mr) / std::abs(md) < 0.05);

    // diagonal mirror symmetry forces M11 = M22
    CHECK(principal_speed(L, opt, 1).M_diag ==
          doctest::Approx(principal_speed(L, opt, 2).M_diag).epsilon(1e-8));

    CHECK_THROWS(offdiagonal_m12(build_cell(1.0, 2.0, steel), opt,
                                 M12Method::rotation));
}

TEST_CASE("effective tensor and oblique speeds") {
    MmOptions opt;
    opt.N = 6;
    const UnitCell rod = centered_rod(steel, epoxy, 0.5);
    const EffectiveTensor t = effective_tensor(rod, opt);
    CHECK(t.M11 == doctest::Approx(t.M22).epsilon(1e-8));
    CHECK(std::abs(t.M12) <= 1e-8 * t.mu_avg);
    CHECK(t.c1() == doctest::Approx(principal_speed(rod, opt, 1).c));

    // speed at 45 degrees against the rotated-cell principal speed
    const double c45 = t.speed(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    const UnitCell rot = rotate45(rod, opt.slices_or_default());
    const double cr = principal_speed(rot, opt, 1).c;
    CHECK(std::abs(c45 - cr) / cr < 0.01);
}

TEST_CASE("closed form estimate") {
    const UnitCell hom = build_cell(1.0, 1.0, epoxy);
    CHECK(closed_form_estimate(hom) ==
          doctest::Approx(std::sqrt(1.48e9 / 1.14e3)).epsilon(1e-12));

    // x1-laminate: both averages reduce to the harmonic mean
    const UnitCell lam = build_cell(1.0, 1.0, {1.0, 1.0},
                                    {{{0.0, 0.0}, {0.5, 1.0}, {1.0, 4.0}}});
    CHECK(closed_form_estimate(lam) * closed_form_estimate(lam) ==
          doctest::Approx(1.6).epsilon(1e-12));

    // between the Reuss and Voigt bounds on the benchmark
    const UnitCell rod = centered_rod(steel, epoxy, 0.5);
    const auto [lo, hi] = speed_bounds(rod);
    const double est = closed_form_estimate(rod);
    CHECK(est >= lo);
    CHECK(est <= hi);
}

TEST_CASE("random cells: bounds, covariance, fixed vectors") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const UnitCell cell = random_cell(rng, 100.0);
        MmOptions opt;
        opt.N = 2;
        const auto [lo, hi] = speed_bounds(cell);
        for (int axis : {1, 2}) {
            const double c = principal_speed(cell, opt, axis).c;
            CHECK(c >= lo * (1.0 - 1e-9));
            CHECK(c <= hi * (1.0 + 1e-9));
        }
        const MonodromyMatrix M = monodromy(cell, opt);
        Eigen::VectorXd w0 = Eigen::VectorXd::Zero(2 * M.d);
        w0(0) = 1.0;
        CHECK((M.M * w0 - w0).norm() <= 1e-10 * M.M.norm());
    }
}
