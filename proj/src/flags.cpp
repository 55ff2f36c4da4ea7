#include "anosov/flags.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anosov {

namespace {

CVec unit(const CVec& v, const char* what) {
    double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateInput(std::string(what) + " has zero or non-finite norm");
    return v / n;
}

void same_ambient(int a, int b) {
    if (a != b) throw ShapeError("ambient dimension mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

double op_norm(const CMat& m) {
    if (m.cols() <= m.rows()) {
        Eigen::SelfAdjointEigenSolver<CMat> es(m.adjoint() * m, Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(m * m.adjoint(), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

ProjPoint ProjPoint::make(const CVec& v, Field f) { return ProjPoint{f, unit(v, "point representative")}; }

Hyperplane Hyperplane::make(const CVec& w, Field f) { return Hyperplane{f, unit(w, "hyperplane normal")}; }

Flag Flag::make(const ProjPoint& p, const Hyperplane& h, double tol) {
    same_ambient(p.dim(), h.dim());
    if (std::abs(h.w.dot(p.v)) > tol) throw DegenerateInput("point does not lie on the hyperplane");
    return Flag{p, h};
}

Flag Flag::make(const CVec& v, const CVec& w, double tol) {
    return make(ProjPoint::make(v), Hyperplane::make(w), tol);
}

double BallCover::max_radius() const {
    double r = 0.0;
    for (const auto& b : balls) r = std::max(r, b.radius);
    return r;
}

double chordal_unit(const CVec& u, const CVec& v) {
    // |v - <u,v> u| instead of sqrt(1 - |<u,v>|^2): no cancellation near 0.
    return std::min(1.0, (v - u * u.dot(v)).norm());
}

double chordal_dist(const ProjPoint& p, const ProjPoint& q) {
    same_ambient(p.dim(), q.dim());
    return chordal_unit(p.v, q.v);
}

double point_hyperplane_dist(const ProjPoint& p, const Hyperplane& h) {
    same_ambient(p.dim(), h.dim());
    return std::abs(h.w.dot(p.v));
}

double antipodal_distance(const Flag& x, const Flag& y) {
    same_ambient(x.dim(), y.dim());
    return std::min(std::abs(y.w().dot(x.v())), std::abs(x.w().dot(y.v())));
}

double flag_dist(const Flag& x, const Flag& y) {
    same_ambient(x.dim(), y.dim());
    return std::max(chordal_unit(x.v(), y.v()), chordal_unit(x.w(), y.w()));
}

double cover_margin(const BallCover& A, const BallCover& B) {
    if (A.empty() || B.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : A.balls)
        for (const auto& b : B.balls)
            best = std::min(best, antipodal_distance(a.center, b.center) - kMetricConstant * (a.radius + b.radius));
    return best;
}

Transform Transform::make(const CMat& g) {
    if (g.rows() != g.cols()) throw ShapeError("transform must be square");
    Eigen::FullPivLU<CMat> lu(g);
    if (!lu.isInvertible()) throw DomainError("singular matrix cannot act on flags");
    return Transform{g, lu.inverse().adjoint()};
}

Transform Transform::inverse() const { return Transform{normal_map.adjoint(), g.adjoint()}; }

Transform Transform::operator*(const Transform& o) const { return Transform{g * o.g, normal_map * o.normal_map}; }

Flag flag_image(const Transform& t, const Flag& x) {
    same_ambient(static_cast<int>(t.g.rows()), x.dim());
    CVec v = t.g * x.v();
    CVec w = t.normal_map * x.w();
    return Flag{ProjPoint{x.point.field, v / v.norm()}, Hyperplane{x.hyperplane.field, w / w.norm()}};
}

// For v' with chordal(v, v') = s <= r write v' = c v + s u' with u' a unit
// vector orthogonal to v and |c| = sqrt(1 - s^2).  With u = gv/|gv| the
// chordal distance of the images is |(I - uu*) g v'| / |g v'|, the numerator
// is at most s K and the denominator at least |c| |gv| - s m.
double projective_image_radius(const CMat& g, const CVec& v, double r) {
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 1.0;
    CVec gv = g * v;
    double n = gv.norm();
    CVec u = gv / n;
    CMat gP = g - gv * v.adjoint();
    Eigen::RowVectorXcd ugP = u.adjoint() * gP;
    CMat Q = gP - u * ugP;
    double K = op_norm(Q);
    double m = ugP.norm();
    double den = std::sqrt(1.0 - r * r) * n - r * m;
    if (den <= 0.0) return 1.0;
    return std::min(1.0, r * K / den);
}

double image_radius(const Transform& t, const Flag& c, double r) {
    return std::max(projective_image_radius(t.g, c.v(), r), projective_image_radius(t.normal_map, c.w(), r));
}

double inner_image_radius(const Transform& t, const Flag& c, double r) {
    if (r <= 0.0) return 0.0;
    Transform inv = t.inverse();
    Flag tc = flag_image(t, c);
    double lo = 0.0, hi = 1.0;
    if (image_radius(inv, tc, hi) <= r) return hi;
    for (int it = 0; it < 50; ++it) {
        double mid = 0.5 * (lo + hi);
        if (image_radius(inv, tc, mid) <= r) lo = mid;
        else hi = mid;
    }
    return lo;
}

Ball ball_image(const Transform& t, const Ball& b) { return Ball{flag_image(t, b.center), image_radius(t, b.center, b.radius)}; }

BallCover cover_image(const Transform& t, const BallCover& A) {
    BallCover out;
    out.label = A.label;
    out.balls.reserve(A.size());
    for (const auto& b : A.balls) out.balls.push_back(ball_image(t, b));
    return out;
}

BallCover cover_image(const CMat& g, const BallCover& A) { return cover_image(Transform::make(g), A); }

BallCover cover_union(const BallCover& A, const BallCover& B) {
    BallCover out;
    out.label = A.label.empty() ? B.label : (B.label.empty() ? A.label : A.label + "+" + B.label);
    out.balls = A.balls;
    out.balls.insert(out.balls.end(), B.balls.begin(), B.balls.end());
    return out;
}

namespace {

CVec random_tangent(const CVec& v, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 1.0);
    for (int attempt = 0; attempt < 16; ++attempt) {
        CVec x(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) x(i) = cd(N(rng), N(rng));
        x -= v * v.dot(x);
        double n = x.norm();
        if (n > 1e-9) return x / n;
    }
    throw DegenerateInput("could not draw a tangent direction");
}

// Unit vector at chordal distance exactly s from v.
CVec tilt(const CVec& v, double s, std::mt19937_64& rng) {
    CVec t = random_tangent(v, rng);
    double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    return c * v + s * t;
}

}  // namespace

Flag random_flag_in_ball(const Ball& b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const Flag& c = b.center;
    const double r = std::min(b.radius, 1.0);
    if (r <= 0.0) return c;
    for (int attempt = 0; attempt < 200; ++attempt) {
        double scale = attempt < 100 ? 1.0 : 0.5;
        CVec v = tilt(c.v(), scale * r * U(rng), rng);
        CVec w = tilt(c.w(), scale * r * U(rng), rng);
        w -= v * v.dot(w);
        if (w.norm() < 1e-12) continue;
        w /= w.norm();
        Flag f{ProjPoint{c.point.field, v}, Hyperplane{c.hyperplane.field, w}};
        if (flag_dist(f, c) <= r) return f;
    }
    return c;
}

}  // namespace anosov
