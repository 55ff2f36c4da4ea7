#include "anosov/multilinear.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace anosov {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

WedgeIndex::WedgeIndex(int d_, int k_) : d(d_), k(k_) {
    if (d < 1 || k < 0 || k > d) throw ShapeError("wedge index needs 0 <= k <= d");
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            subsets.push_back(cur);
            return;
        }
        for (int i = start; i < d; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

int WedgeIndex::index_of(const std::vector<int>& s) const {
    auto it = std::lower_bound(subsets.begin(), subsets.end(), s);
    if (it == subsets.end() || *it != s) throw ShapeError("not an increasing k-subset");
    return static_cast<int>(it - subsets.begin());
}

namespace {

cd minor(const CMat& M, const std::vector<int>& rows, const std::vector<int>& cols) {
    const int k = static_cast<int>(rows.size());
    if (k == 0) return 1.0;
    CMat sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = M(rows[i], cols[j]);
    if (k == 1) return sub(0, 0);
    if (k == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
    return sub.determinant();
}

CMat stack(const std::vector<CVec>& a) {
    if (a.empty()) throw ShapeError("need at least one vector");
    CMat m(a[0].size(), static_cast<Eigen::Index>(a.size()));
    for (size_t j = 0; j < a.size(); ++j) {
        if (a[j].size() != a[0].size()) throw ShapeError("vectors have different ambient dimensions");
        m.col(static_cast<Eigen::Index>(j)) = a[j];
    }
    return m;
}

}  // namespace

CMat wedge_matrix(const CMat& M, int k) {
    if (M.rows() != M.cols()) throw ShapeError("wedge_matrix expects a square matrix");
    const int d = static_cast<int>(M.rows());
    if (k < 1 || k > d) throw ShapeError("wedge_matrix: k out of range");
    WedgeIndex idx(d, k);
    CMat out(idx.size(), idx.size());
    for (int I = 0; I < idx.size(); ++I)
        for (int J = 0; J < idx.size(); ++J) out(I, J) = minor(M, idx.subsets[I], idx.subsets[J]);
    return out;
}

Matrix wedge_matrix(const Matrix& M, int k) {
    if (M.field() == Field::H) throw FieldError("exterior powers are not defined over H");
    CMat w = wedge_matrix(M.to_complex(), k);
    return M.field() == Field::R ? Matrix::from_real(w.real()) : Matrix::from_complex(w);
}

CVec wedge_vectors(const std::vector<CVec>& a) {
    CMat m = stack(a);
    const int d = static_cast<int>(m.rows()), k = static_cast<int>(m.cols());
    if (k > d) throw ShapeError("more vectors than the ambient dimension");
    WedgeIndex idx(d, k);
    std::vector<int> all(k);
    for (int j = 0; j < k; ++j) all[j] = j;
    CVec out(idx.size());
    for (int I = 0; I < idx.size(); ++I) out(I) = minor(m, idx.subsets[I], all);
    return out;
}

cd gram_pairing(const std::vector<CVec>& a, const std::vector<CVec>& b, bool hermitian) {
    if (a.size() != b.size()) throw ShapeError("gram_pairing: different vector counts");
    CMat A = stack(a), B = stack(b);
    if (A.rows() != B.rows()) throw ShapeError("gram_pairing: ambient mismatch");
    CMat G = hermitian ? CMat(A.adjoint() * B) : CMat(A.transpose() * B);
    return G.determinant();
}

cd coordinate_pairing(const std::vector<CVec>& a, const std::vector<CVec>& b, bool hermitian) {
    if (a.size() != b.size()) throw ShapeError("coordinate_pairing: different vector counts");
    CVec wa = wedge_vectors(a), wb = wedge_vectors(b);
    if (wa.size() != wb.size()) throw ShapeError("coordinate_pairing: ambient mismatch");
    return hermitian ? wa.dot(wb) : cd(wa.transpose() * wb);
}

Subspace Subspace::span(const CMat& columns, Field f, double tol) {
    Eigen::ColPivHouseholderQR<CMat> qr(columns);
    qr.setThreshold(tol);
    if (qr.rank() != columns.cols()) throw DegenerateInput("spanning set is rank deficient");
    CMat Q = qr.householderQ() * CMat::Identity(columns.rows(), columns.cols());
    Subspace s;
    s.field = f;
    s.ambient = static_cast<int>(columns.rows());
    s.basis = Q;
    return s;
}

Subspace Subspace::complement() const {
    Eigen::JacobiSVD<CMat> svd(basis.adjoint(), Eigen::ComputeFullV);
    CMat V = svd.matrixV();
    Subspace s;
    s.field = field;
    s.ambient = ambient;
    s.basis = V.rightCols(ambient - dim());
    return s;
}

bool Subspace::contains(const Subspace& other, double tol) const {
    if (other.ambient != ambient) throw ShapeError("subspaces live in different spaces");
    CMat resid = other.basis - basis * (basis.adjoint() * other.basis);
    return resid.norm() <= tol;
}

ProjPoint plucker_point(const Subspace& W) {
    if (W.dim() != 2) throw ShapeError("plucker_point needs a 2-dimensional subspace");
    CVec w = wedge_vectors({W.basis.col(0), W.basis.col(1)});
    if (w.norm() < 1e-12) throw DegenerateInput("degenerate 2-plane");
    return ProjPoint::make(w, W.field);
}

Hyperplane plucker_hyperplane(const Subspace& Wperp) {
    if (Wperp.dim() != Wperp.ambient - 2) throw ShapeError("plucker_hyperplane needs codimension 2");
    Subspace V = Wperp.complement();
    CVec w = wedge_vectors({V.basis.col(0), V.basis.col(1)});
    return Hyperplane::make(w, Wperp.field);
}

Subspace iota2_plus(const ProjPoint& p) {
    const Eigen::Index d = p.v.size();
    if (p.v.norm() < 1e-14) throw DegenerateInput("zero representative");
    CMat cols = CMat::Zero(2 * d, 2);
    for (Eigen::Index i = 0; i < d; ++i) {
        double u = p.v(i).real(), v = p.v(i).imag();
        cols(i, 0) = u;
        cols(d + i, 0) = v;
        cols(i, 1) = -v;
        cols(d + i, 1) = u;
    }
    return Subspace::span(cols, Field::R);
}

Subspace iota2_minus(const Hyperplane& h) {
    if (h.w.norm() < 1e-14) throw DegenerateInput("zero normal");
    return iota2_plus(ProjPoint{h.field, h.w}).complement();
}

RMat sym_power_sl2(const RMat& M, int k) {
    if (M.rows() != 2 || M.cols() != 2) throw ShapeError("sym_power_sl2 expects a 2x2 matrix");
    if (k < 0) throw ShapeError("degree must be nonnegative");
    if (std::abs(M.determinant() - 1.0) > 1e-10) throw DomainError("sym_power_sl2 expects det = 1");
    RMat out = RMat::Zero(k + 1, k + 1);
    // column j is the image of x^{k-j} y^j: (m11 x + m21 y)^{k-j} (m12 x + m22 y)^j,
    // stored as coefficients of y^i
    for (int j = 0; j <= k; ++j) {
        std::vector<double> poly{1.0};
        auto times = [&](double c0, double c1) {
            std::vector<double> next(poly.size() + 1, 0.0);
            for (size_t i = 0; i < poly.size(); ++i) {
                next[i] += poly[i] * c0;
                next[i + 1] += poly[i] * c1;
            }
            poly.swap(next);
        };
        for (int r = 0; r < k - j; ++r) times(M(0, 0), M(1, 0));
        for (int r = 0; r < j; ++r) times(M(0, 1), M(1, 1));
        for (int i = 0; i <= k; ++i) out(i, j) = poly[i];
    }
    return out;
}

Matrix sym_power_sl2(const Matrix& M, int k) {
    if (M.field() != Field::R) throw FieldError("sym_power_sl2 expects a real matrix");
    return Matrix::from_real(sym_power_sl2(M.to_complex().real(), k));
}

}  // namespace anosov
