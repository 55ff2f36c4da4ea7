#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "anosov/errors.hpp"

namespace anosov {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;

enum class Field { R, C, H };

const char* field_name(Field f);
Field field_from_name(const std::string& s);

// A scalar stores up to four real components a + b i + c j + d k.  Real and
// complex scalars simply keep the unused components at zero.
struct Scalar {
    Field field = Field::R;
    std::array<double, 4> c{0, 0, 0, 0};

    Scalar() = default;
    static Scalar real(double a);
    static Scalar complex(cd z);
    static Scalar quat(double a, double b, double c, double d);

    cd as_complex() const;
    double norm() const;
    Scalar conj() const;
    bool operator==(const Scalar& o) const = default;
};

Scalar quat_mul(const Scalar& q1, const Scalar& q2);
// Field-aware product and sum; the result field is the larger of the two.
Scalar scalar_mul(const Scalar& x, const Scalar& y);
Scalar scalar_add(const Scalar& x, const Scalar& y);

class Matrix {
public:
    Matrix() = default;
    Matrix(Field f, int rows, int cols);

    static Matrix identity(Field f, int n);
    static Matrix from_complex(const CMat& m, Field f = Field::C);
    static Matrix from_real(const RMat& m);

    Field field() const { return field_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
    void set(int i, int j, Scalar s);

    // Complex view; throws FieldError for quaternionic entries with j/k parts.
    CMat to_complex() const;
    // Promote to another field (R -> C -> H); demotion is not allowed.
    Matrix promoted(Field f) const;

    double max_abs_diff(const Matrix& o) const;

private:
    Field field_ = Field::R;
    int rows_ = 0, cols_ = 0;
    std::vector<Scalar> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix scale_left(const Scalar& s, const Matrix& m);

Matrix conj_transpose(const Matrix& m);
// Entrywise conjugation (no transpose).
Matrix conj_entries(const Matrix& m);
Matrix block_diag(const Matrix& a, const Matrix& b);

RMat realify_complex(const CMat& m);
Matrix realify_complex(const Matrix& m);
RMat realify_quat(const Matrix& m);
// 4x4 matrix of left multiplication by q on the basis (1, i, j, k).
RMat quat_left_matrix(const Scalar& q);

// Inverse of a quaternionic (or any field) square matrix via its real model.
Matrix inverse(const Matrix& m);

struct HermitianForm {
    int n = 1;            // signature (n, 1)
    Field field = Field::R;
    Matrix J() const;     // diag(I_n, -1)
};

bool form_member(const Matrix& g, const HermitianForm& J, double tol = 1e-9);

// The seven compatible automorphisms.  For cases 6 and 7 the catalog lists two
// automorphisms; `which` (0 or 1) selects between them.
Matrix compatible_automorphism(int kase, int n, int k, const Matrix& g, int which = 0);
// Field of the ambient group G for a catalog case.
Field automorphism_field(int kase);
// Stated order of the automorphism (what the catalog claims, see notes).
int automorphism_order(int kase, int which = 0);

}  // namespace anosov
