#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "phxc/cell.hpp"
#include "phxc/elastic3d.hpp"
#include "phxc/mm.hpp"

using namespace phxc;

TEST_CASE("phase construction and validation") {
    const ElasticPhase iso = ElasticPhase::isotropic(1000.0, 2e9, 1e9);
    CHECK(iso.C(0, 0) == doctest::Approx(4e9));   // lambda + 2 mu
    CHECK(iso.C(0, 1) == doctest::Approx(2e9));   // lambda
    CHECK(iso.C(3, 3) == doctest::Approx(1e9));   // mu
    CHECK(iso.c(1, 1, 1, 1) == doctest::Approx(4e9));
    CHECK(iso.c(1, 2, 1, 2) == doctest::Approx(1e9));
    CHECK(iso.c(1, 1, 2, 2) == doctest::Approx(2e9));
    CHECK(iso.c(1, 1, 1, 2) == doctest::Approx(0.0));

    CHECK_THROWS(ElasticCell(0.0, 1.0, 1.0, iso));
    ElasticPhase bad = iso;
    bad.rho = -1.0;
    CHECK_THROWS(ElasticCell(1.0, 1.0, 1.0, bad));
    CHECK_THROWS(ElasticCell(1.0, 1.0, 1.0, iso,
                             {{{0.5, 0.5, 0.5}, {1.0, 1.0, 1.0}, iso}}));
}

TEST_CASE("homogeneous isotropic speeds") {
    const ElasticPhase iso = ElasticPhase::isotropic(1000.0, 2e9, 1e9);
    const ElasticCell hom(1.0, 1.0, 1.0, iso);
    const double cp = std::sqrt(4e9 / 1000.0);
    const double cs = std::sqrt(1e9 / 1000.0);
    for (int N : {0, 1}) {
        const Eigen::Vector3d sp = principal_speeds_3d(hom, N, N, 1);
        CHECK(sp(0) == doctest::Approx(cp).epsilon(1e-8));
        CHECK(sp(1) == doctest::Approx(cs).epsilon(1e-8));
        CHECK(sp(2) == doctest::Approx(cs).epsilon(1e-8));
    }
    CHECK_THROWS(principal_speeds_3d(hom, -1, 0, 1));
}

TEST_CASE("backus laminate, propagation normal to layers") {
    const ElasticPhase a = ElasticPhase::isotropic(1000.0, 2e9, 1e9);
    const ElasticPhase b = ElasticPhase::isotropic(3000.0, 5e9, 4e9);
    const ElasticCell lam(1.0, 1.0, 1.0, a, {{{0, 0, 0}, {0.5, 1, 1}, b}});
    const double rho = 2000.0;
    const double cs = std::sqrt(1.0 / (0.5 / 1e9 + 0.5 / 4e9) / rho);
    const double cp = std::sqrt(1.0 / (0.5 / 4e9 + 0.5 / 13e9) / rho);
    for (int N : {0, 2}) {
        const Eigen::Vector3d sp = principal_speeds_3d(lam, N, N, 1);
        CHECK(sp(0) == doctest::Approx(cp).epsilon(1e-6));
        CHECK(sp(1) == doctest::Approx(cs).epsilon(1e-6));
        CHECK(sp(2) == doctest::Approx(cs).epsilon(1e-6));
    }
}

TEST_CASE("generator block structure") {
    const ElasticPhase a = ElasticPhase::isotropic(1000.0, 2e9, 1e9);
    const ElasticPhase b = ElasticPhase::isotropic(3000.0, 5e9, 4e9);
    const ElasticCell rod(1.0, 1.0, 1.0, a,
                          {{{0.25, 0.25, 0.0}, {0.5, 0.5, 1.0}, b}});
    const ElasticGenerator gen = assemble_generator_3d(rod, 0.3, 2, 2);
    CHECK(gen.modes == 25);
    CHECK(gen.Q.rows() == 6 * 25);
    CHECK((gen.A2 - gen.A2.adjoint()).norm() <= 1e-10 * gen.A2.norm());
}

TEST_CASE("permuted cell gives the same speeds") {
    const ElasticPhase a = ElasticPhase::isotropic(1000.0, 2e9, 1e9);
    const ElasticPhase b = ElasticPhase::isotropic(3000.0, 5e9, 4e9);
    const ElasticCell rod(1.0, 1.0, 1.0, a,
                          {{{0.25, 0.25, 0.0}, {0.5, 0.5, 1.0}, b}});
    // explicit permutation putting old x3 first must agree with axis = 3
    const Eigen::Vector3d along3 = principal_speeds_3d(rod, 2, 2, 3);
    const Eigen::Vector3d along1 =
        principal_speeds_3d(rod.permuted({3, 1, 2}), 2, 2, 1);
    // the rod is symmetric under swapping x1 and x2
    const Eigen::Vector3d ax1 = principal_speeds_3d(rod, 2, 2, 1);
    const Eigen::Vector3d ax2 = principal_speeds_3d(rod, 2, 2, 2);
    CHECK((ax1 - ax2).norm() <= 1e-8 * ax1.norm());
    CHECK((along3 - along1).norm() <= 1e-8 * along3.norm());
}

TEST_CASE("antiplane shear reduces to the scalar 2d problem") {
    // mu and rho vary in (x1, x2) only; for k along x1 the x3-polarized
    // shear wave decouples and obeys the scalar equation
    const MaterialPhase m1{1.0e3, 1.0e9};
    const MaterialPhase m2{2.0e3, 4.0e9};
    const double lam_a = 2e9, lam_b = 5e9;
    const ElasticPhase e1 = ElasticPhase::isotropic(m1.rho, lam_a, m1.mu);
    const ElasticPhase e2 = ElasticPhase::isotropic(m2.rho, lam_b, m2.mu);
    const ElasticCell cell3(1.0, 1.0, 1.0, e1,
                            {{{0.3, 0.3, 0.0}, {0.4, 0.4, 1.0}, e2}});
    const UnitCell cell2 =
        build_cell(1.0, 1.0, m1, {{{0.3, 0.3}, {0.4, 0.4}, m2}});

    MmOptions opt;
    opt.N = 5;
    const double c2d = principal_speed(cell2, opt, 1).c;
    const Eigen::Vector3d sp = principal_speeds_3d(cell3, 5, 0, 1);
    const double best = (sp.array() - c2d).abs().minCoeff();
    CHECK(best <= 1e-6 * c2d);
}
