#include "anosov/examples.hpp"

#include <cmath>

#include "anosov/multilinear.hpp"

namespace anosov {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Angle of a line in R^2, reduced to [0, pi).
double line_angle(double x, double y) {
    double a = std::atan2(y, x);
    a = std::fmod(a, kPi);
    if (a < 0) a += kPi;
    return a;
}

// Signed angular distance on the circle RP^1 = R / pi Z, in (-pi/2, pi/2].
double arc_offset(double a, double center) {
    double d = std::fmod(a - center, kPi);
    if (d > kPi / 2) d -= kPi;
    if (d <= -kPi / 2) d += kPi;
    return d;
}

double apply_angle(const RMat& g, double a) {
    double x = g(0, 0) * std::cos(a) + g(0, 1) * std::sin(a);
    double y = g(1, 0) * std::cos(a) + g(1, 1) * std::sin(a);
    return line_angle(x, y);
}

// Attracting and repelling eigenlines of a hyperbolic element of SL2(R).
bool fixed_lines(const RMat& g, double& plus, double& minus) {
    double tr = g.trace();
    double disc = tr * tr - 4.0 * g.determinant();
    if (disc <= 0) return false;
    double s = std::sqrt(disc);
    double big = (tr + (tr >= 0 ? s : -s)) / 2, small = g.determinant() / big;
    auto line = [&](double lam) {
        // (g - lam) v = 0
        double x = g(0, 1), y = lam - g(0, 0);
        if (std::abs(x) + std::abs(y) < 1e-14) {
            x = lam - g(1, 1);
            y = g(1, 0);
        }
        return line_angle(x, y);
    };
    plus = line(big);
    minus = line(small);
    return true;
}

RMat rotation(double phi) {
    RMat r(2, 2);
    r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    return r;
}

RMat diag3() {
    RMat a = RMat::Zero(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0 / 3.0;
    return a;
}

FreeRep from_real(const std::vector<RMat>& gens, Field f = Field::R) {
    std::vector<CMat> mats;
    for (const auto& g : gens) mats.push_back(g.cast<cd>());
    return FreeRep::make(GenSet::standard(static_cast<int>(gens.size())), mats, f);
}

}  // namespace

IntervalOracle interval_pingpong(const std::vector<RMat>& gens, double half_width) {
    IntervalOracle out;
    out.margin = kPi;
    struct Arc {
        double center;
        int gen, sign;
    };
    std::vector<Arc> arcs;
    for (size_t i = 0; i < gens.size(); ++i) {
        const RMat& g = gens[i];
        if (g.rows() != 2 || g.cols() != 2) throw ShapeError("interval oracle works in SL2(R)");
        double p, m;
        if (!fixed_lines(g, p, m)) {
            out.reason = "generator " + std::to_string(i) + " is not hyperbolic";
            out.margin = 0;
            return out;
        }
        arcs.push_back({p, int(i), +1});
        arcs.push_back({m, int(i), -1});
    }
    for (size_t i = 0; i < arcs.size(); ++i)
        for (size_t j = i + 1; j < arcs.size(); ++j) {
            double gap = std::abs(arc_offset(arcs[i].center, arcs[j].center)) - 2 * half_width;
            out.margin = std::min(out.margin, gap);
            if (gap <= 0) {
                out.reason = "arcs overlap";
                return out;
            }
        }
    // g^s maps the complement of the arc at g^{-s} into the arc at g^{s}.
    const int samples = 2000;
    for (size_t i = 0; i < gens.size(); ++i)
        for (int s : {+1, -1}) {
            RMat g = s > 0 ? gens[i] : RMat(gens[i].inverse());
            double target = arcs[2 * i + (s > 0 ? 0 : 1)].center;
            double source = arcs[2 * i + (s > 0 ? 1 : 0)].center;
            for (int k = 0; k <= samples; ++k) {
                double a = source + half_width + (kPi - 2 * half_width) * k / samples;
                double slack = half_width - std::abs(arc_offset(apply_angle(g, a), target));
                out.margin = std::min(out.margin, slack);
                if (slack <= 0) {
                    out.reason = "image escapes its arc";
                    return out;
                }
            }
        }
    out.passed = true;
    return out;
}

std::vector<RMat> schottky2_sl2() {
    RMat a = diag3();
    // The axes of a sit at angles 0 and pi/2.  Rotating by pi/4 puts the
    // axes of b halfway between them; the other angles are fallbacks.
    for (double phi : {kPi / 4, kPi / 6, kPi / 3}) {
        RMat R = rotation(phi);
        RMat b = R * a * R.transpose();
        std::vector<RMat> gens{a, b};
        if (interval_pingpong(gens, kPi / 9).passed) return gens;
    }
    throw DomainError("no rotation passes the interval oracle");
}

FreeRep schottky2() { return from_real(schottky2_sl2()); }

FreeRep schottky2_sym3() {
    std::vector<RMat> gens;
    for (const auto& g : schottky2_sl2()) gens.push_back(sym_power_sl2(g, 3));
    return from_real(gens);
}

FreeRep rank1_lattice_toy() {
    std::vector<RMat> gens{diag3()};
    if (!interval_pingpong(gens, kPi / 9).passed) throw DomainError("interval oracle rejected the cyclic example");
    return from_real(gens);
}

const std::vector<std::string>& example_names() {
    static const std::vector<std::string> names{"schottky2", "schottky2_sym3", "rank1_lattice_toy"};
    return names;
}

FreeRep example_by_name(const std::string& name) {
    if (name == "schottky2") return schottky2();
    if (name == "schottky2_sym3") return schottky2_sym3();
    if (name == "rank1_lattice_toy") return rank1_lattice_toy();
    throw ConfigError("unknown example '" + name + "'");
}

}  // namespace anosov
