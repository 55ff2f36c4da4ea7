#include "anosov/scalars.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace anosov {

const char* field_name(Field f) {
    switch (f) {
        case Field::R: return "R";
        case Field::C: return "C";
        case Field::H: return "H";
    }
    return "?";
}

Field field_from_name(const std::string& s) {
    if (s == "R") return Field::R;
    if (s == "C") return Field::C;
    if (s == "H") return Field::H;
    throw FieldError("unknown field tag '" + s + "'");
}

static Field wider(Field a, Field b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

Scalar Scalar::real(double a) {
    Scalar s;
    s.field = Field::R;
    s.c = {a, 0, 0, 0};
    return s;
}

Scalar Scalar::complex(cd z) {
    Scalar s;
    s.field = Field::C;
    s.c = {z.real(), z.imag(), 0, 0};
    return s;
}

Scalar Scalar::quat(double a, double b, double c, double d) {
    Scalar s;
    s.field = Field::H;
    s.c = {a, b, c, d};
    return s;
}

cd Scalar::as_complex() const {
    if (c[2] != 0.0 || c[3] != 0.0) throw FieldError("quaternion with j/k part has no complex value");
    return {c[0], c[1]};
}

double Scalar::norm() const { return std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2] + c[3] * c[3]); }

Scalar Scalar::conj() const {
    Scalar s = *this;
    s.c[1] = -s.c[1];
    s.c[2] = -s.c[2];
    s.c[3] = -s.c[3];
    return s;
}

Scalar quat_mul(const Scalar& p, const Scalar& q) {
    if (p.field != Field::H || q.field != Field::H) throw FieldError("quat_mul expects two quaternions");
    const auto& a = p.c;
    const auto& b = q.c;
    return Scalar::quat(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
}

Scalar scalar_mul(const Scalar& x, const Scalar& y) {
    Field f = wider(x.field, y.field);
    Scalar a = x, b = y;
    a.field = b.field = Field::H;
    Scalar r = quat_mul(a, b);
    r.field = f;
    return r;
}

Scalar scalar_add(const Scalar& x, const Scalar& y) {
    Scalar r;
    r.field = wider(x.field, y.field);
    for (int i = 0; i < 4; ++i) r.c[i] = x.c[i] + y.c[i];
    return r;
}

Matrix::Matrix(Field f, int rows, int cols) : field_(f), rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) throw ShapeError("matrix dimensions must be positive");
    Scalar zero;
    zero.field = f;
    data_.assign(static_cast<size_t>(rows) * cols, zero);
}

Matrix Matrix::identity(Field f, int n) {
    Matrix m(f, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i).c[0] = 1.0;
    return m;
}

Matrix Matrix::from_complex(const CMat& c, Field f) {
    if (f == Field::H) throw FieldError("use promoted() to move complex data into H");
    Matrix m(f, static_cast<int>(c.rows()), static_cast<int>(c.cols()));
    for (int i = 0; i < m.rows_; ++i)
        for (int j = 0; j < m.cols_; ++j) {
            m.at(i, j).c[0] = c(i, j).real();
            if (f == Field::R) {
                if (std::abs(c(i, j).imag()) > 1e-12) throw FieldError("complex entry in a real matrix");
            } else {
                m.at(i, j).c[1] = c(i, j).imag();
            }
        }
    return m;
}

Matrix Matrix::from_real(const RMat& r) {
    Matrix m(Field::R, static_cast<int>(r.rows()), static_cast<int>(r.cols()));
    for (int i = 0; i < m.rows_; ++i)
        for (int j = 0; j < m.cols_; ++j) m.at(i, j).c[0] = r(i, j);
    return m;
}

void Matrix::set(int i, int j, Scalar s) {
    if (static_cast<int>(s.field) > static_cast<int>(field_))
        throw FieldError(std::string("cannot store a ") + field_name(s.field) + " scalar in a " +
                         field_name(field_) + " matrix");
    s.field = field_;
    at(i, j) = s;
}

CMat Matrix::to_complex() const {
    CMat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j).as_complex();
    return m;
}

Matrix Matrix::promoted(Field f) const {
    if (static_cast<int>(f) < static_cast<int>(field_)) throw FieldError("cannot demote a matrix");
    Matrix m = *this;
    m.field_ = f;
    for (auto& s : m.data_) s.field = f;
    return m;
}

double Matrix::max_abs_diff(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("max_abs_diff: shape mismatch");
    double worst = 0.0;
    for (size_t i = 0; i < data_.size(); ++i)
        for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(data_[i].c[c] - o.data_[i].c[c]));
    return worst;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
    Field f = wider(a.field(), b.field());
    Matrix out(f, a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            Scalar acc;
            acc.field = f;
            for (int k = 0; k < a.cols(); ++k) acc = scalar_add(acc, scalar_mul(a.at(i, k), b.at(k, j)));
            acc.field = f;
            out.at(i, j) = acc;
        }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix sum: shape mismatch");
    Field f = wider(a.field(), b.field());
    Matrix out(f, a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            Scalar s = scalar_add(a.at(i, j), b.at(i, j));
            s.field = f;
            out.at(i, j) = s;
        }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + scale_left(Scalar::real(-1.0), b); }

Matrix scale_left(const Scalar& s, const Matrix& m) {
    Field f = wider(s.field, m.field());
    Matrix out(f, m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            Scalar v = scalar_mul(s, m.at(i, j));
            v.field = f;
            out.at(i, j) = v;
        }
    return out;
}

Matrix conj_transpose(const Matrix& m) {
    Matrix out(m.field(), m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j).conj();
    return out;
}

Matrix conj_entries(const Matrix& m) {
    Matrix out(m.field(), m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j).conj();
    return out;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
    Field f = wider(a.field(), b.field());
    Matrix out(f, a.rows() + b.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.set(i, j, a.at(i, j));
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) out.set(a.rows() + i, a.cols() + j, b.at(i, j));
    return out;
}

RMat realify_complex(const CMat& m) {
    if (m.rows() != m.cols()) throw ShapeError("realify_complex expects a square matrix");
    const Eigen::Index n = m.rows();
    RMat r(2 * n, 2 * n);
    RMat X = m.real(), Y = m.imag();
    r.topLeftCorner(n, n) = X;
    r.topRightCorner(n, n) = -Y;
    r.bottomLeftCorner(n, n) = Y;
    r.bottomRightCorner(n, n) = X;
    return r;
}

Matrix realify_complex(const Matrix& m) {
    if (m.field() == Field::H) throw FieldError("realify_complex expects a real or complex matrix");
    return Matrix::from_real(realify_complex(m.to_complex()));
}

RMat quat_left_matrix(const Scalar& q) {
    const auto& c = q.c;
    RMat L(4, 4);
    // columns are q*1, q*i, q*j, q*k
    L << c[0], -c[1], -c[2], -c[3],
         c[1],  c[0], -c[3],  c[2],
         c[2],  c[3],  c[0], -c[1],
         c[3], -c[2],  c[1],  c[0];
    return L;
}

RMat realify_quat(const Matrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("realify_quat expects a square matrix");
    const int n = m.rows();
    RMat r = RMat::Zero(4 * n, 4 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r.block(4 * i, 4 * j, 4, 4) = quat_left_matrix(m.at(i, j));
    return r;
}

Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("inverse expects a square matrix");
    if (m.field() != Field::H) {
        CMat c = m.to_complex();
        Eigen::FullPivLU<CMat> lu(c);
        if (!lu.isInvertible()) throw DomainError("matrix is singular");
        CMat inv = lu.inverse();
        if (m.field() == Field::R) return Matrix::from_real(inv.real());
        return Matrix::from_complex(inv, Field::C);
    }
    // The real model of an H-matrix inverts to the real model of its inverse;
    // read the quaternion entries back from the first column of each block.
    RMat r = realify_quat(m);
    Eigen::FullPivLU<RMat> lu(r);
    if (!lu.isInvertible()) throw DomainError("matrix is singular");
    RMat inv = lu.inverse();
    const int n = m.rows();
    Matrix out(Field::H, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.at(i, j) = Scalar::quat(inv(4 * i, 4 * j), inv(4 * i + 1, 4 * j), inv(4 * i + 2, 4 * j),
                                        inv(4 * i + 3, 4 * j));
    return out;
}

Matrix HermitianForm::J() const {
    Matrix j = Matrix::identity(field, n + 1);
    j.at(n, n).c[0] = -1.0;
    return j;
}

bool form_member(const Matrix& g, const HermitianForm& form, double tol) {
    if (g.rows() != g.cols() || g.rows() != form.n + 1)
        throw ShapeError("form_member: matrix must be (n+1)x(n+1)");
    Matrix J = form.J();
    Matrix lhs = conj_transpose(g) * J * g;
    return lhs.max_abs_diff(J.promoted(lhs.field())) <= tol;
}

namespace {

Matrix diag_tail(Field f, int n1, int k, const Scalar& s) {
    Matrix m = Matrix::identity(f, n1);
    for (int i = k; i < n1; ++i) m.at(i, i) = s, m.at(i, i).field = f;
    return m;
}

Matrix scalar_identity(const Scalar& s, int n1) { return diag_tail(Field::H, n1, 0, s); }

}  // namespace

Field automorphism_field(int kase) {
    switch (kase) {
        case 1: return Field::R;  // any field, decided by the argument
        case 2: return Field::C;
        case 3: case 4: case 5: case 6: case 7: return Field::H;
        default: throw ConfigError("automorphism case must be in 1..7");
    }
}

int automorphism_order(int kase, int which) {
    if (which != 0 && which != 1) throw ConfigError("which must be 0 or 1");
    switch (kase) {
        case 1: case 2: case 3: return 2;
        case 4: case 5: return 4;
        // Both maps of case 6 are conjugation by a central-square unit, hence involutions.
        case 6: return 2;
        case 7: return 4;
        default: throw ConfigError("automorphism case must be in 1..7");
    }
}

Matrix compatible_automorphism(int kase, int n, int k, const Matrix& g, int which) {
    if (kase < 1 || kase > 7) throw ConfigError("automorphism case must be in 1..7");
    if (n < 1) throw ConfigError("n must be positive");
    if (which != 0 && which != 1) throw ConfigError("which must be 0 or 1");
    const bool needs_k = kase == 1 || kase == 4 || kase == 5 || kase == 7;
    if (needs_k && (k < 1 || k > n - 1)) throw ConfigError("k must satisfy 1 <= k <= n-1");
    if (g.rows() != n + 1 || g.cols() != n + 1) throw ShapeError("g must be (n+1)x(n+1)");

    Field f = kase == 1 ? g.field() : automorphism_field(kase);
    if (kase == 2 && g.field() == Field::H) throw FieldError("case 2 acts on U(n,1)");
    if (kase == 5 && g.field() == Field::H) throw FieldError("case 5 takes an element of U(n,1)");
    Matrix G = g.promoted(wider(g.field(), f));
    Field check_field = kase == 5 ? Field::C : G.field();
    if (!form_member(G, HermitianForm{n, check_field}, 1e-8))
        throw DomainError("g is not in the isometry group of J_{n,1}");

    const int n1 = n + 1;
    const Scalar qi = Scalar::quat(0, 1, 0, 0), qj = Scalar::quat(0, 0, 1, 0);
    const Scalar qmi = Scalar::quat(0, -1, 0, 0), qmj = Scalar::quat(0, 0, -1, 0);
    auto conj_by = [&](const Matrix& x, const Matrix& xinv) { return x * G * xinv; };

    switch (kase) {
        case 1: {
            Matrix w = diag_tail(G.field(), n1, k, Scalar::real(-1.0));
            return conj_by(w, w);
        }
        case 2: {
            Matrix c = G.promoted(Field::C);
            return conj_entries(c);
        }
        case 3:
            return scalar_identity(qmi, n1) * G.promoted(Field::H) * scalar_identity(qi, n1);
        case 4: {
            Matrix b = diag_tail(Field::H, n1, k, qi), binv = diag_tail(Field::H, n1, k, qmi);
            return b * G.promoted(Field::H) * binv;
        }
        case 5: {
            Matrix a = diag_tail(Field::H, n1, k, qj), ainv = diag_tail(Field::H, n1, k, qmj);
            return a * G.promoted(Field::H) * ainv;
        }
        case 6: {
            const Scalar& u = which == 0 ? qi : qj;
            const Scalar& uinv = which == 0 ? qmi : qmj;
            return scalar_identity(uinv, n1) * G.promoted(Field::H) * scalar_identity(u, n1);
        }
        case 7: {
            const Scalar& u = which == 0 ? qi : qj;
            const Scalar& uinv = which == 0 ? qmi : qmj;
            Matrix x = diag_tail(Field::H, n1, k, u), xinv = diag_tail(Field::H, n1, k, uinv);
            return x * G.promoted(Field::H) * xinv;
        }
    }
    throw ConfigError("unreachable automorphism case");
}

}  // namespace anosov
