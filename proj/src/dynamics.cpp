#include "anosov/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "anosov/parallel.hpp"

namespace anosov {

double CartanData::gap(int i) const {
    if (i < 1 || i >= sigma.size()) throw ShapeError("gap index out of range");
    return sigma(i) / sigma(i - 1);
}

CartanData cartan(const CMat& g) {
    if (g.rows() != g.cols() || g.rows() == 0) throw ShapeError("cartan expects a nonempty square matrix");
    Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (!(s(0) > 0.0) || !std::isfinite(s(0)) || s(s.size() - 1) <= 1e-14 * s(0))
        throw DomainError("matrix is singular to working precision");
    return CartanData{s, svd.matrixU(), svd.matrixV().adjoint()};
}

CartanData cartan(const Matrix& g) {
    if (g.field() != Field::H) return cartan(g.to_complex());
    // The real model repeats every singular value four times.
    CartanData full = cartan(CMat(realify_quat(g).cast<cd>()));
    CartanData out = full;
    out.sigma.resize(full.sigma.size() / 4);
    for (Eigen::Index i = 0; i < out.sigma.size(); ++i) out.sigma(i) = full.sigma(4 * i);
    return out;
}

namespace {

Flag top_flag(const CartanData& c, Field f) {
    const Eigen::Index d = c.k.cols();
    CVec v = c.k.col(0), w = c.k.col(d - 1);
    return Flag{ProjPoint{f, v / v.norm()}, Hyperplane{f, w / w.norm()}};
}

void check_gaps(const Eigen::VectorXd& s, double gap_tol) {
    const Eigen::Index d = s.size();
    if (d < 2) throw ShapeError("flags need dimension at least 2");
    if (s(1) / s(0) > 1.0 - gap_tol || s(d - 1) / s(d - 2) > 1.0 - gap_tol)
        throw GapTooSmall("singular value gap below tolerance (s2/s1 = " + std::to_string(s(1) / s(0)) + ")");
}

}  // namespace

Flag xi_flag(const CMat& g, double gap_tol) {
    // No invertibility test here: long words have singular value ratios far
    // beyond 1e-14 and only the top directions matter.
    if (g.rows() != g.cols() || g.rows() == 0) throw ShapeError("xi_flag expects a nonempty square matrix");
    Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullU);
    if (!(svd.singularValues()(0) > 0.0) || !std::isfinite(svd.singularValues()(0)))
        throw DomainError("xi_flag of a zero or non-finite matrix");
    CartanData c{svd.singularValues(), svd.matrixU(), CMat()};
    check_gaps(c.sigma, gap_tol);
    return top_flag(c, Field::C);
}

Flag xi_flag(const Matrix& g, double gap_tol) {
    if (g.field() != Field::H) {
        Flag f = xi_flag(g.to_complex(), gap_tol);
        f.point.field = f.hyperplane.field = g.field();
        return f;
    }
    CartanData c = cartan(g);
    check_gaps(c.sigma, gap_tol);
    return top_flag(c, Field::H);
}

Flag xi_flag(const Transform& t, double gap_tol) {
    if (t.g.rows() != t.g.cols() || t.g.rows() < 2) throw ShapeError("xi_flag expects a square matrix of size >= 2");
    Eigen::JacobiSVD<CMat> top(t.g, Eigen::ComputeFullU), dual(t.normal_map, Eigen::ComputeFullU);
    const auto& s = top.singularValues();
    const auto& sd = dual.singularValues();
    if (!(s(0) > 0.0) || !std::isfinite(s(0)) || !(sd(0) > 0.0) || !std::isfinite(sd(0)))
        throw DomainError("xi_flag of a zero or non-finite matrix");
    if (s(1) / s(0) > 1.0 - gap_tol || sd(1) / sd(0) > 1.0 - gap_tol)
        throw GapTooSmall("singular value gap below tolerance (s2/s1 = " + std::to_string(s(1) / s(0)) + ")");
    CVec v = top.matrixU().col(0), w = dual.matrixU().col(0);
    return Flag{ProjPoint{Field::C, v / v.norm()}, Hyperplane{Field::C, w / w.norm()}};
}

ProximalData proximal(const CMat& g, double tol) {
    if (g.rows() != g.cols() || g.rows() < 2) throw ShapeError("proximal expects a square matrix of size >= 2");
    Eigen::FullPivLU<CMat> lu(g);
    if (!lu.isInvertible()) throw DomainError("proximal expects an invertible matrix");
    Eigen::ComplexEigenSolver<CMat> es(g);
    if (es.info() != Eigen::Success) throw DomainError("eigen-decomposition failed");
    const Eigen::Index d = g.rows();
    std::vector<Eigen::Index> order(d);
    for (Eigen::Index i = 0; i < d; ++i) order[i] = i;
    const auto& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(ev(a)) > std::abs(ev(b)); });

    ProximalData p;
    for (auto i : order) p.moduli.push_back(std::abs(ev(i)));
    p.lambda1 = p.moduli[0];
    p.lambda2 = p.moduli[1];
    p.gap = p.lambda2 / p.lambda1;
    p.proximal = p.gap < 1.0 - tol;
    const bool inverse_proximal = p.moduli[d - 1] / p.moduli[d - 2] < 1.0 - tol;
    p.biproximal = p.proximal && inverse_proximal;
    p.status = p.proximal ? "proximal" : "NotProximal";
    if (!p.proximal) return p;

    CMat P(d, d);
    for (Eigen::Index j = 0; j < d; ++j) P.col(j) = es.eigenvectors().col(order[j]);
    p.attracting_point = ProjPoint::make(P.col(0));
    if (!p.biproximal) return p;
    // Rows of P^-1 are left eigenvectors; ker(l_d) is the attracting hyperplane.
    Eigen::FullPivLU<CMat> plu(P);
    if (!plu.isInvertible()) return p;
    CMat Pinv = plu.inverse();
    CVec top = P.col(0), bottom = P.col(d - 1);
    CVec n_plus = Pinv.row(d - 1).adjoint(), n_minus = Pinv.row(0).adjoint();
    p.plus = Flag::make(ProjPoint::make(top), Hyperplane::make(n_plus), 1e-7);
    p.minus = Flag::make(ProjPoint::make(bottom), Hyperplane::make(n_minus), 1e-7);
    return p;
}

double contraction_bound(const CMat& w, const Flag& x, const Flag& y, double tol) {
    CartanData c = cartan(w);
    if (x.dim() != w.rows() || y.dim() != w.rows()) throw ShapeError("flag dimension does not match the matrix");
    // Normal of the repelling hyperplane: the top right-singular direction.
    CVec n = c.kp.row(0).adjoint();
    double dx = std::abs(n.dot(x.v())), dy = std::abs(n.dot(y.v()));
    if (dx <= tol || dy <= tol) throw NearSingularConfig("point too close to the repelling hyperplane");
    return kChordalComparison * (c.sigma(1) / c.sigma(0)) / (dx * dy);
}

namespace {

double log_gap(const CMat& m) {
    Eigen::JacobiSVD<CMat> svd(m);
    const auto& s = svd.singularValues();
    if (!(s(1) > 0.0)) return std::numeric_limits<double>::infinity();
    return std::log(s(0) / s(1));
}

}  // namespace

GapCertificate fit_gap_certificate(std::vector<GapRow> rows) {
    GapCertificate cert;
    cert.rows = std::move(rows);
    cert.L = static_cast<int>(cert.rows.size());
    const int n = cert.L;
    if (n == 0) return cert;
    bool finite = true;
    for (const auto& r : cert.rows) finite &= std::isfinite(r.min_gap);
    if (n == 1) {
        cert.c = cert.rows[0].min_gap / cert.rows[0].length;
        cert.intercept = 0.0;
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& r : cert.rows) {
            sx += r.length;
            sy += r.min_gap;
            sxx += double(r.length) * r.length;
            sxy += r.length * r.min_gap;
        }
        double den = n * sxx - sx * sx;
        cert.c = (n * sxy - sx * sy) / den;
        cert.intercept = (sy - cert.c * sx) / n;
    }
    cert.C = -std::numeric_limits<double>::infinity();
    cert.residual_max = 0.0;
    for (const auto& r : cert.rows) {
        cert.C = std::max(cert.C, cert.c * r.length - r.min_gap);
        cert.residual_max = std::max(cert.residual_max, std::abs(r.min_gap - (cert.c * r.length + cert.intercept)));
    }
    cert.passed = finite && cert.c > 1e-8;
    return cert;
}

GapCertificate gap_growth(const FreeRep& rep, int L, int threads) {
    if (L < 1) throw ConfigError("gap_growth needs L >= 1");
    if (rep.d < 2) throw ShapeError("gap_growth needs dimension >= 2");
    const int k = rep.gens.rank();
    std::vector<Letter> letters;
    for (int i = 1; i <= k; ++i) {
        letters.push_back(i);
        letters.push_back(-i);
    }
    struct Node {
        Word w;
        CMat m;
    };
    std::vector<Node> level;
    for (Letter l : letters) level.push_back({Word{l}, rep.letter_matrix(l)});
    std::vector<GapRow> rows;
    for (int len = 1; len <= L; ++len) {
        if (len > 1) {
            const size_t branch = letters.size() - 1;
            std::vector<Node> next(level.size() * branch);
            parallel_for(level.size(), threads, [&](size_t p) {
                size_t j = 0;
                for (Letter l : letters) {
                    if (l == -level[p].w.back()) continue;
                    Node& child = next[p * branch + j++];
                    child.w = level[p].w;
                    child.w.push_back(l);
                    child.m = level[p].m * rep.letter_matrix(l);
                }
            });
            level.swap(next);
        }
        std::vector<double> gaps(level.size());
        parallel_for(level.size(), threads, [&](size_t i) { gaps[i] = log_gap(level[i].m); });
        size_t best = 0;
        for (size_t i = 1; i < gaps.size(); ++i)
            if (gaps[i] < gaps[best]) best = i;
        rows.push_back({len, gaps[best], word_to_string(level[best].w, rep.gens)});
    }
    return fit_gap_certificate(std::move(rows));
}

std::string gap_table_csv(const GapCertificate& cert) {
    std::ostringstream os;
    os.precision(12);
    os << "length,min_gap,argmin_word\n";
    for (const auto& r : cert.rows) os << r.length << "," << r.min_gap << "," << r.argmin_word << "\n";
    return os.str();
}

}  // namespace anosov
