#include "doctest.h"

#include <cmath>

#include "anosov/scalars.hpp"

using namespace anosov;

namespace {

Matrix boost(double s, Field f = Field::R) {
    // Hyperbolic rotation in the (e_1, e_3) plane of R^{2,1}.
    RMat m = RMat::Identity(3, 3);
    m(0, 0) = m(2, 2) = std::cosh(s);
    m(0, 2) = m(2, 0) = std::sinh(s);
    Matrix g = Matrix::from_real(m);
    return f == Field::R ? g : g.promoted(f);
}

}  // namespace

TEST_CASE("quaternion units multiply like i, j, k") {
    const Scalar i = Scalar::quat(0, 1, 0, 0), j = Scalar::quat(0, 0, 1, 0), k = Scalar::quat(0, 0, 0, 1);
    CHECK(quat_mul(i, j) == k);
    CHECK(quat_mul(j, i) == Scalar::quat(0, 0, 0, -1));
    CHECK(quat_mul(i, i) == Scalar::quat(-1, 0, 0, 0));
    CHECK(quat_mul(j, k) == i);
}

TEST_CASE("quaternion norm is multiplicative and conj inverts units") {
    const Scalar p = Scalar::quat(1, -2, 0.5, 3), q = Scalar::quat(-0.25, 1, 2, -1);
    CHECK(quat_mul(p, q).norm() == doctest::Approx(p.norm() * q.norm()).epsilon(1e-14));
    const Scalar pp = quat_mul(p, p.conj());
    CHECK(pp.c[0] == doctest::Approx(p.norm() * p.norm()));
    CHECK(std::abs(pp.c[1]) + std::abs(pp.c[2]) + std::abs(pp.c[3]) < 1e-14);
}

TEST_CASE("mixed-field products promote to the wider field") {
    Scalar r = Scalar::real(2), z = Scalar::complex({0, 1});
    CHECK(scalar_mul(r, z).field == Field::C);
    CHECK(scalar_mul(r, z).as_complex() == cd(0, 2));
    CHECK(scalar_add(z, Scalar::quat(0, 0, 1, 0)).field == Field::H);
    CHECK_THROWS_AS(Scalar::quat(0, 0, 1, 0).as_complex(), FieldError);
    CHECK_THROWS_AS(quat_mul(r, r), FieldError);
}

TEST_CASE("field names round trip") {
    for (Field f : {Field::R, Field::C, Field::H}) CHECK(field_from_name(field_name(f)) == f);
    CHECK_THROWS_AS(field_from_name("O"), FieldError);
}

TEST_CASE("matrix construction and field rules") {
    CHECK_THROWS_AS(Matrix(Field::R, 0, 2), ShapeError);
    Matrix m(Field::R, 2, 2);
    CHECK_THROWS_AS(m.set(0, 0, Scalar::complex({1, 1})), FieldError);
    CHECK_THROWS_AS(Matrix::from_complex(CMat::Identity(2, 2) * cd(0, 1), Field::R), FieldError);
    CHECK_THROWS_AS(Matrix::identity(Field::H, 2).promoted(Field::C), FieldError);
    Matrix h = Matrix::identity(Field::H, 2);
    h.set(0, 1, Scalar::quat(0, 0, 1, 0));
    CHECK_THROWS_AS(h.to_complex(), FieldError);
    CHECK_THROWS_AS(Matrix::identity(Field::R, 2) * Matrix::identity(Field::R, 3), ShapeError);
    CHECK_THROWS_AS(Matrix::identity(Field::R, 2) + Matrix::identity(Field::R, 3), ShapeError);
}

TEST_CASE("complex round trip through Matrix") {
    CMat a(2, 2);
    a << cd(1, 2), cd(0, -1), cd(3, 0), cd(0.5, 0.5);
    Matrix m = Matrix::from_complex(a);
    CHECK((m.to_complex() - a).norm() == 0.0);
    CHECK((conj_transpose(m).to_complex() - a.adjoint()).norm() == 0.0);
    CHECK((conj_entries(m).to_complex() - a.conjugate()).norm() == 0.0);
}

TEST_CASE("quaternionic product is not commutative but realification is a homomorphism") {
    Matrix a(Field::H, 2, 2), b(Field::H, 2, 2);
    a.set(0, 0, Scalar::quat(0, 1, 0, 0));
    a.set(1, 1, Scalar::quat(1, 0, 0, 0));
    b.set(0, 0, Scalar::quat(0, 0, 1, 0));
    b.set(1, 0, Scalar::quat(2, 0, 0, 1));
    CHECK((a * b).max_abs_diff(b * a) > 0.5);
    RMat lhs = realify_quat(a * b), rhs = realify_quat(a) * realify_quat(b);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(realify_quat(a).rows() == 8);
}

TEST_CASE("left multiplication matrix of a quaternion") {
    const Scalar q = Scalar::quat(1, 2, 3, 4), x = Scalar::quat(-1, 0.5, 2, 1);
    Eigen::Vector4d xv(x.c[0], x.c[1], x.c[2], x.c[3]);
    Eigen::Vector4d got = quat_left_matrix(q) * xv;
    const Scalar want = quat_mul(q, x);
    for (int i = 0; i < 4; ++i) CHECK(got(i) == doctest::Approx(want.c[i]));
}

TEST_CASE("quaternionic inverse") {
    Matrix a = Matrix::identity(Field::H, 3);
    a.set(0, 1, Scalar::quat(0, 1, 1, 0));
    a.set(2, 0, Scalar::quat(0.5, 0, 0, -2));
    Matrix ai = inverse(a);
    CHECK((a * ai).max_abs_diff(Matrix::identity(Field::H, 3)) < 1e-12);
    CHECK((ai * a).max_abs_diff(Matrix::identity(Field::H, 3)) < 1e-12);
    CHECK_THROWS_AS(inverse(Matrix(Field::H, 2, 2)), DomainError);
    CHECK_THROWS_AS(inverse(Matrix(Field::R, 2, 3)), ShapeError);
}

TEST_CASE("isometries of the (n,1) form") {
    HermitianForm J{2, Field::R};
    CHECK(form_member(boost(0.7), J));
    CHECK(form_member(Matrix::identity(Field::R, 3), J));
    Matrix stretch = Matrix::identity(Field::R, 3);
    stretch.set(0, 0, Scalar::real(2));
    CHECK_FALSE(form_member(stretch, J));
    CHECK_THROWS_AS(form_member(Matrix::identity(Field::R, 2), J), ShapeError);
}

TEST_CASE("compatible automorphisms preserve the isometry group") {
    const Matrix g = boost(0.4);
    for (int kase = 1; kase <= 7; ++kase) {
        for (int which = 0; which < (kase >= 6 ? 2 : 1); ++which) {
            CAPTURE(kase);
            CAPTURE(which);
            const Matrix gi = compatible_automorphism(kase, 2, 1, g, which);
            CHECK(gi.field() == (kase == 1 ? Field::R : automorphism_field(kase)));
            CHECK(form_member(gi, HermitianForm{2, gi.field()}));
        }
    }
}

TEST_CASE("case 1 is an involution and a homomorphism") {
    const Matrix g = boost(0.3), h = boost(-1.1);
    const Matrix twice = compatible_automorphism(1, 2, 1, compatible_automorphism(1, 2, 1, g));
    CHECK(twice.max_abs_diff(g) < 1e-14);
    const Matrix lhs = compatible_automorphism(1, 2, 1, g * h);
    const Matrix rhs = compatible_automorphism(1, 2, 1, g) * compatible_automorphism(1, 2, 1, h);
    CHECK(lhs.max_abs_diff(rhs) < 1e-12);
}

TEST_CASE("compatible automorphism argument checks") {
    const Matrix g = boost(0.2);
    CHECK_THROWS_AS(compatible_automorphism(0, 2, 1, g), ConfigError);
    CHECK_THROWS_AS(compatible_automorphism(8, 2, 1, g), ConfigError);
    CHECK_THROWS_AS(compatible_automorphism(1, 2, 2, g), ConfigError);
    CHECK_THROWS_AS(compatible_automorphism(6, 2, 1, g, 2), ConfigError);
    CHECK_THROWS_AS(compatible_automorphism(1, 3, 1, g), ShapeError);
    CHECK_THROWS_AS(compatible_automorphism(2, 2, 1, g.promoted(Field::H)), FieldError);
    Matrix bad = Matrix::identity(Field::R, 3);
    bad.set(0, 1, Scalar::real(1));
    CHECK_THROWS_AS(compatible_automorphism(1, 2, 1, bad), DomainError);
}
