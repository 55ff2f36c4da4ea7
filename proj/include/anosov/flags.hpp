#pragma once

#include <random>
#include <string>
#include <vector>

#include "anosov/scalars.hpp"

namespace anosov {

// A point of P(K^d), stored by a unit representative.
struct ProjPoint {
    Field field = Field::C;
    CVec v;

    static ProjPoint make(const CVec& v, Field f = Field::C);
    int dim() const { return static_cast<int>(v.size()); }
};

// The hyperplane {x : w* x = 0}, stored by its unit Hermitian normal w.
struct Hyperplane {
    Field field = Field::C;
    CVec w;

    static Hyperplane make(const CVec& w, Field f = Field::C);
    int dim() const { return static_cast<int>(w.size()); }
};

struct Flag {
    ProjPoint point;
    Hyperplane hyperplane;

    // Rejects non-incident pairs (|w* v| > tol).
    static Flag make(const ProjPoint& p, const Hyperplane& h, double tol = 1e-10);
    static Flag make(const CVec& v, const CVec& w, double tol = 1e-10);
    int dim() const { return point.dim(); }
    const CVec& v() const { return point.v; }
    const CVec& w() const { return hyperplane.w; }
};

struct Ball {
    Flag center;
    double radius = 0.0;
};

struct BallCover {
    std::string label;
    std::vector<Ball> balls;

    size_t size() const { return balls.size(); }
    bool empty() const { return balls.empty(); }
    double max_radius() const;
};

// Sine of the angle between the lines of the unit vectors u and v.
double chordal_unit(const CVec& u, const CVec& v);
double chordal_dist(const ProjPoint& p, const ProjPoint& q);
double point_hyperplane_dist(const ProjPoint& p, const Hyperplane& h);
double antipodal_distance(const Flag& x, const Flag& y);
// Flag metric: the larger of the chordal distances of points and of normals.
double flag_dist(const Flag& x, const Flag& y);

// Moving a flag by d_F <= r changes each term of antipodal_distance by at most
// sqrt(2) r (phase-aligned unit vectors satisfy |v - v'| <= sqrt(2) chordal).
inline constexpr double kMetricConstant = 1.4142135623730951;

double cover_margin(const BallCover& A, const BallCover& B);

// A group element together with the matrix acting on hyperplane normals.
struct Transform {
    CMat g;
    CMat normal_map;  // (g^*)^{-1}

    static Transform make(const CMat& g);
    Transform inverse() const;
    Transform operator*(const Transform& o) const;
};

Flag flag_image(const Transform& t, const Flag& x);

// Radius of a ball around t(c) containing t(Ball(c, r)).  Uses the local
// derivative of the projective action at c rather than a global constant.
double image_radius(const Transform& t, const Flag& c, double r);
// Largest r' with t^{-1}(Ball(t c, r')) inside Ball(c, r).
double inner_image_radius(const Transform& t, const Flag& c, double r);
// The same bound for the action on P(K^d) alone.
double projective_image_radius(const CMat& g, const CVec& v, double r);

Ball ball_image(const Transform& t, const Ball& b);
BallCover cover_image(const Transform& t, const BallCover& A);
BallCover cover_image(const CMat& g, const BallCover& A);
BallCover cover_union(const BallCover& A, const BallCover& B);

// Draws a flag within flag_dist <= b.radius of the center.
Flag random_flag_in_ball(const Ball& b, std::mt19937_64& rng);

}  // namespace anosov
