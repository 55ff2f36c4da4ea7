#pragma once

#include <string>
#include <vector>

#include "anosov/words.hpp"

namespace anosov {

// Ping-pong on RP^1 with arcs of the given half-width (radians) around the
// attracting and repelling lines of every generator.  Checks that the arcs are
// pairwise disjoint and that g maps the closed complement of the arc around
// g^- strictly inside the arc around g^+ (and the same for g^-1).
struct IntervalOracle {
    bool passed = false;
    double margin = 0;  // smallest angular slack seen, radians
    std::string reason;
};

IntervalOracle interval_pingpong(const std::vector<RMat>& gens, double half_width);

// a = diag(3, 1/3), b = R a R^-1 with R the rotation chosen by the oracle.
FreeRep schottky2();
// The 2x2 generators behind schottky2, for the oracle and for sym powers.
std::vector<RMat> schottky2_sl2();
// Third symmetric power of schottky2, d = 4.
FreeRep schottky2_sym3();
// The cyclic group generated by diag(3, 1/3): a lattice in the diagonal torus.
FreeRep rank1_lattice_toy();

const std::vector<std::string>& example_names();
FreeRep example_by_name(const std::string& name);

}  // namespace anosov
