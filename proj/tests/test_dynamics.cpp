#include "doctest.h"

#include <cmath>

#include "anosov/dynamics.hpp"
#include "anosov/examples.hpp"

using namespace anosov;

TEST_CASE("cartan decomposition reconstructs the matrix") {
    CMat g(3, 3);
    g << 2, cd(0, 1), 0, 1, 1, 0, 0, 3, cd(1, -1);
    CartanData c = cartan(g);
    CMat rebuilt = c.k * c.sigma.cast<cd>().asDiagonal() * c.kp;
    CHECK((rebuilt - g).norm() < 1e-12);
    CHECK(c.sigma(0) >= c.sigma(1));
    CHECK(c.sigma(1) >= c.sigma(2));
    CHECK(c.gap(1) == doctest::Approx(c.sigma(1) / c.sigma(0)));
    CHECK_THROWS_AS(c.gap(3), ShapeError);
    CHECK_THROWS_AS(cartan(CMat::Identity(2, 3)), ShapeError);
    CHECK_THROWS_AS(cartan(CMat::Zero(2, 2)), DomainError);
}

TEST_CASE("quaternionic cartan goes through the real model") {
    Matrix q = Matrix::identity(Field::H, 2);
    q.set(0, 0, Scalar::quat(0, 0, 3, 0));
    CartanData c = cartan(q);
    CHECK(c.sigma(0) == doctest::Approx(3.0));
}

TEST_CASE("xi flag of a diagonal matrix") {
    CMat g = CMat::Zero(3, 3);
    g.diagonal() << 5, 1, 0.2;
    Flag x = xi_flag(g);
    CHECK(std::abs(x.v()(0)) == doctest::Approx(1.0));
    CHECK(std::abs(x.w()(2)) == doctest::Approx(1.0));
    Flag y = xi_flag(Transform::make(g));
    CHECK(flag_dist(x, y) < 1e-12);
}

TEST_CASE("xi flag needs both gaps") {
    CMat g = CMat::Zero(3, 3);
    g.diagonal() << 5, 5, 0.04;
    CHECK_THROWS_AS(xi_flag(g), GapTooSmall);
    g.diagonal() << 25, 0.2, 0.2;
    CHECK_THROWS_AS(xi_flag(g), GapTooSmall);
    CHECK_THROWS_AS(xi_flag(CMat::Identity(1, 1)), ShapeError);
    CHECK_THROWS_AS(xi_flag(CMat::Zero(2, 2)), DomainError);
}

TEST_CASE("proximal data of a loxodromic element") {
    CMat g = CMat::Zero(3, 3);
    g.diagonal() << 4, 1, 0.25;
    CMat P = CMat::Identity(3, 3);
    P(0, 1) = 1;
    P(2, 0) = cd(0, 1);
    CMat h = P * g * P.inverse();
    ProximalData p = proximal(h);
    CHECK(p.proximal);
    CHECK(p.biproximal);
    CHECK(p.status == "proximal");
    CHECK(p.gap == doctest::Approx(0.25));
    REQUIRE(p.plus.has_value());
    CHECK(chordal_unit(p.plus->v(), CVec(P.col(0)).normalized()) < 1e-10);
    // The attracting flag is fixed.
    CHECK(flag_dist(flag_image(Transform::make(h), *p.plus), *p.plus) < 1e-10);
    CHECK(antipodal_distance(*p.plus, *p.minus) > 0.1);
}

TEST_CASE("rotations are not proximal") {
    CMat r(2, 2);
    r << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
    ProximalData p = proximal(r);
    CHECK_FALSE(p.proximal);
    CHECK(p.status == "NotProximal");
    CHECK_FALSE(p.plus.has_value());
    CHECK_THROWS_AS(proximal(CMat::Zero(2, 2)), DomainError);
    CHECK_THROWS_AS(proximal(CMat::Identity(1, 1)), ShapeError);
}

TEST_CASE("contraction bound dominates the actual contraction") {
    CMat w = CMat::Zero(2, 2);
    w.diagonal() << 10, 0.1;
    CVec a(2), b(2);
    a << 1, 0.5;
    b << 1, -0.3;
    Flag x = Flag::make(a, CVec((CVec(2) << -0.5, 1).finished())), y = Flag::make(b, CVec((CVec(2) << 0.3, 1).finished()));
    const double bound = contraction_bound(w, x, y);
    const double actual = chordal_unit((w * x.v()).normalized(), (w * y.v()).normalized());
    CHECK(actual <= bound + 1e-15);
    Flag bad = Flag::make(CVec::Unit(2, 1), CVec::Unit(2, 0));
    CHECK_THROWS_AS(contraction_bound(w, bad, y), NearSingularConfig);
    CHECK_THROWS_AS(contraction_bound(CMat::Identity(3, 3) * 2.0, x, y), ShapeError);
}

TEST_CASE("gap fit on an exact line") {
    std::vector<GapRow> rows;
    for (int l = 1; l <= 6; ++l) rows.push_back({l, 1.5 * l - 0.5, ""});
    GapCertificate g = fit_gap_certificate(rows);
    CHECK(g.c == doctest::Approx(1.5));
    CHECK(g.intercept == doctest::Approx(-0.5));
    CHECK(g.C == doctest::Approx(0.5));
    CHECK(g.residual_max < 1e-12);
    CHECK(g.passed);
    CHECK_FALSE(fit_gap_certificate({}).passed);
}

TEST_CASE("schottky gap growth") {
    GapCertificate g = gap_growth(schottky2(), 6);
    REQUIRE(g.rows.size() == 6);
    CHECK(g.passed);
    CHECK(g.c > 0.5);
    for (size_t i = 1; i < g.rows.size(); ++i) CHECK(g.rows[i].min_gap > g.rows[i - 1].min_gap);
    const std::string csv = gap_table_csv(g);
    CHECK(csv.rfind("length,min_gap,argmin_word\n", 0) == 0);
    CHECK_THROWS_AS(gap_growth(schottky2(), 0), ConfigError);
}

TEST_CASE("elliptic generators give no gap growth") {
    std::vector<CMat> mats(2);
    mats[0] = CMat::Identity(2, 2);
    mats[0](0, 0) = 3;
    mats[0](1, 1) = 1.0 / 3;
    mats[1].resize(2, 2);
    mats[1] << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
    GapCertificate g = gap_growth(FreeRep::make(GenSet::standard(2), mats, Field::R), 5);
    CHECK(g.rows[0].min_gap < 1e-12);
    CHECK_FALSE(g.passed);
}
