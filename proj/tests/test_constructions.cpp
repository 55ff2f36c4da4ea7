#include "doctest.h"

#include <cmath>

#include "anosov/constructions.hpp"
#include "anosov/examples.hpp"
#include "anosov/multilinear.hpp"

using namespace anosov;

TEST_CASE("examples pass the interval oracle and have determinant one") {
    for (const auto& name : example_names()) {
        CAPTURE(name);
        FreeRep r = example_by_name(name);
        for (const auto& m : r.mats) CHECK(std::abs(m.determinant() - 1.0) < 1e-9);
    }
    IntervalOracle o = interval_pingpong(schottky2_sl2(), std::acos(-1.0) / 9);
    CHECK(o.passed);
    CHECK(o.margin > 0);
    CHECK(schottky2_sym3().d == 4);
    CHECK(rank1_lattice_toy().gens.rank() == 1);
    CHECK_THROWS_AS(example_by_name("nope"), ConfigError);
}

TEST_CASE("interval oracle rejects a rotation") {
    RMat a(2, 2), r(2, 2);
    a << 3, 0, 0, 1.0 / 3;
    r << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
    IntervalOracle o = interval_pingpong({a, r}, 0.2);
    CHECK_FALSE(o.passed);
    CHECK_FALSE(o.reason.empty());
    // Arcs that overlap fail as well.
    CHECK_FALSE(interval_pingpong({a, a}, 0.2).passed);
}

TEST_CASE("cyclic conjugator centralizes and rotates the smallest eigenline") {
    FreeRep r = schottky2_sym3();
    CyclicConjugator c = cyclic_conjugator(r, Word{1, 2});
    const CMat m = r.eval(Word{1, 2});
    CHECK((c.g * m - m * c.g).norm() < 1e-8 * m.norm());
    CHECK(c.commutator_norm < 1e-8);
    CMat expect = CMat::Identity(4, 4);
    expect(3, 3) = cd(0, 1);
    CHECK((c.Pinv * c.g * c.P - expect).norm() < 1e-10);
    CHECK_THROWS_AS(cyclic_conjugator(r, Word{}), ConfigError);
    CMat rot(2, 2);
    rot << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
    CHECK_THROWS_AS(cyclic_conjugator(rot), NotProximal);
    CHECK_THROWS_AS(cyclic_conjugator(CMat::Identity(2, 2) * cd(0, 1)), DomainError);
    CHECK_THROWS_AS(cyclic_conjugator(CMat::Identity(1, 1)), ShapeError);
}

TEST_CASE("cyclic conjugator expansion matches the bilinear form") {
    CyclicConjugator c = cyclic_conjugator(schottky2().mats[0]);
    CVec x(2), y(2);
    x << 0.3, cd(1, 0.2);
    y << cd(-1, 1), 2;
    for (int sign : {1, -1}) {
        CMat g = sign > 0 ? c.g : CMat(c.g.inverse());
        cd direct = (y.transpose() * g * x)(0, 0);
        CHECK(std::abs(direct - c.expansion(x, y, sign)) < 1e-12);
    }
}

TEST_CASE("doubling pairing closed form") {
    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(2, 0), e2 = Eigen::VectorXd::Unit(2, 1);
    CHECK(doubling_pairing(e1, e2, e1, e2) == cd(0, 2));
    CHECK(doubling_pairing(e1, e2, e1, e2, -1) == cd(0, -2));
    Eigen::VectorXd u(3), v(3), a(3), b(3);
    u << 1, 2, 0;
    v << 0, -1, 1;
    a << 0.5, 0, 1;
    b << 1, 1, 1;
    const double s = std::pow(u.dot(a), 2) + std::pow(u.dot(b), 2) + std::pow(v.dot(a), 2) + std::pow(v.dot(b), 2);
    CHECK(std::abs(doubling_pairing(u, v, a, b) - cd(0, s)) < 1e-12);
    CHECK_THROWS_AS(doubling_pairing(u, v, a, e1), ShapeError);
    CHECK_THROWS_AS(doubling_conjugator(0), ShapeError);
}

TEST_CASE("pairing block mismatch") {
    for (int d = 1; d <= 4; ++d) {
        CMat M = pairing_mismatch(pairing_block(d));
        CHECK(M.topLeftCorner(d, d).norm() == 0.0);
        CHECK(M.bottomRightCorner(d, d).norm() == 0.0);
        CHECK((M.topRightCorner(d, d) - cd(0, 0.5) * CMat::Identity(d, d)).norm() == 0.0);
        CHECK((M.bottomLeftCorner(d, d) - cd(0, 2) * CMat::Identity(d, d)).norm() == 0.0);
    }
    CVec a1(2), a2(2), b1(2), b2(2);
    a1 << 1, cd(0, 1);
    a2 << 2, 1;
    b1 << cd(1, 1), 0;
    b2 << 0.5, -1;
    cd want = cd(a1.transpose() * b2) * cd(a2.transpose() * b1);
    CHECK(std::abs(paired_mismatch_pairing(pairing_block(2), a1, a2, b1, b2) - want) < 1e-13);
    CHECK_THROWS_AS(paired_mismatch_pairing(pairing_block(3), a1, a2, b1, b2), ShapeError);
}

TEST_CASE("paired representation is a homomorphism into dimension 2d+1") {
    FreeRep r1 = schottky2(), r2 = schottky2();
    r2.mats[0] = r2.mats[0].inverse().eval();
    r2 = FreeRep::make(r2.gens, r2.mats, Field::R);
    PairedRep p = paired_rep(r1, r2);
    CHECK(p.rep.d == 5);
    const Word u{1, -2, 2, 2};
    CMat m = p.rep.eval(u);
    CHECK(std::abs(m(4, 4) - 1.0) < 1e-12);
    CMat blk = p.g.inverse() * m.topLeftCorner(4, 4) * p.g;
    CHECK((blk.topLeftCorner(2, 2) - r1.eval(u)).norm() < 1e-9);
    CHECK((blk.bottomRightCorner(2, 2) - r2.eval(u)).norm() < 1e-9);
    CHECK_THROWS_AS(paired_rep(r1, schottky2_sym3()), ShapeError);
    CHECK_THROWS_AS(paired_rep(r1, rank1_lattice_toy()), ShapeError);
}

TEST_CASE("quaternionic structure on the second exterior power") {
    RMat w = RMat::Identity(3, 3);
    w(2, 2) = -1;
    QuatStructure q = quat_structure(3, w);
    CHECK(q.dim_w1 == 3);
    CHECK(q.dim_w2 == 9);
    CHECK(q.dim_w3 == 3);
    CHECK((q.f_plus * q.f_minus - CMat::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(q.beta.field() == Field::H);
    CHECK(q.beta.rows() == 15);
    RMat notinv = RMat::Identity(3, 3) * 2.0;
    CHECK_THROWS_AS(quat_structure(3, notinv), DomainError);
    CHECK_THROWS_AS(quat_structure(2, w), ShapeError);
}

TEST_CASE("wedge block representation") {
    FreeRep rho = schottky2();
    // psi swaps the generators, an automorphism of order two.
    WedgeBlockRep wb = wedge_block_rep(rho, std::vector<Word>{Word{2}, Word{1}}, 1);
    CHECK(wb.rep.d == static_cast<int>(binomial(4, 2)));
    CHECK(wb.w0.rows() == wb.rep.d);
    const Word u{1, 2, -1};
    CMat direct = wb.rep.eval(u);
    CMat alt = wedge_block_matrix({rho.eval(u), rho.eval(Word{2, 1, -2})}, 1);
    CHECK((direct - alt).norm() < 1e-9 * alt.norm());
    CHECK_THROWS_AS(wedge_block_rep(rho, std::vector<Word>{Word{1}, Word{1}}, 1), ConfigError);
    CHECK_THROWS_AS(wedge_block_rep(rho, std::vector<Word>{Word{1}}, 1), ConfigError);
    CHECK_THROWS_AS(wedge_block_rep(rho, std::vector<Word>{Word{2}, Word{1}}, 0), ConfigError);
    CHECK_THROWS_AS(wedge_block_matrix({CMat::Identity(2, 2)}, 1), ShapeError);
    auto not_mult = [](const CMat& m) { return CMat(m + CMat::Identity(m.rows(), m.cols())); };
    CHECK_THROWS_AS(wedge_block_rep(rho, not_mult, 1, {Word{1}, Word{2}}), ConfigError);
}

TEST_CASE("stable letter construction") {
    FreeRep r = schottky2();
    CMat tau = cyclic_conjugator(r, Word{1}).g;
    CMat t3 = hnn_stable_letter(tau, r, Word{2}, 3);
    CHECK((t3 - tau * r.eval(Word{2, 2, 2})).norm() < 1e-9 * t3.norm());
    CHECK_THROWS_AS(hnn_stable_letter(tau, r, Word{2}, 0), ConfigError);
    CHECK_THROWS_AS(hnn_stable_letter(CMat::Identity(3, 3), r, Word{2}, 1), ShapeError);
    StableLetterResult s = hnn_stable_letter_search(tau, r, Word{2});
    CHECK(s.accepted);
    CHECK(s.p >= 1);
    CHECK(s.p <= 64);
    CHECK(s.prox.biproximal);
    CHECK(s.fact_sup <= 0.05);
    StableLetterOptions one;
    one.p_max = 1;
    CHECK_THROWS_AS(hnn_stable_letter_search(tau, r, Word{2}, one), ProximalizationFailed);
    one.p_max = 0;
    CHECK_THROWS_AS(hnn_stable_letter_search(tau, r, Word{2}, one), ConfigError);
}

TEST_CASE("dimension budgets") {
    CHECK(dimension_budget("pair_m", 3) == 42);
    CHECK(dimension_budget("double_2d", 7) == 14);
    CHECK(dimension_budget("quat_remark", 2) == 2025 * 256);
    CHECK(dimension_budget("quat_r", 3) == BigInt("951152548170"));
    const BigInt c = big_binomial(4, 2);
    CHECK(dimension_budget("wedge_p", 2, 1) == c * (2 * c + 1));
    CHECK(big_binomial(5, 7) == 0);
    CHECK(big_binomial(100, 50) == BigInt("100891344545564193334812497256"));
    CHECK_THROWS_AS(dimension_budget("nope", 2), ConfigError);
    CHECK_THROWS_AS(dimension_budget("pair_m", 0), ConfigError);
    CHECK_THROWS_AS(dimension_budget("wedge_p", 2, 0), ConfigError);
    CHECK(dimension_tags().size() == 5);
}

TEST_CASE("codimension one conjugator") {
    CMat a = codim1_conjugator(3);
    CHECK(a(0, 0) == cd(0, 1));
    CHECK(a(2, 2) == cd(1, 0));
    CHECK_THROWS_AS(codim1_conjugator(1), ShapeError);
}
