#pragma once

#include <optional>
#include <vector>

#include "anosov/flags.hpp"
#include "anosov/words.hpp"

namespace anosov {

// Balls U_v around the limit-set cylinders of all reduced words v of a fixed
// depth.  They satisfy rho(v) U_z subset U_v for every node z that may follow
// v, so the cylinder of v lies in U_v.
struct CylinderSystem {
    int depth = 1;
    std::vector<Word> nodes;
    std::vector<Flag> centers;
    std::vector<double> radii;
    int iterations = 0;

    int index_of(const Word& node) const;
};

struct CylinderOptions {
    int max_depth = 5;
    int max_iter = 400;
    double max_radius = 0.45;
    int threads = 1;
};

// Tries depth 1, 2, ... max_depth; throws NotContracting if no depth closes.
CylinderSystem cylinder_system(const FreeRep& rep, const CylinderOptions& opt = {});
CylinderSystem cylinder_system_at_depth(const FreeRep& rep, int depth, const CylinderOptions& opt = {});

// A ball around Xi(rho(w)) containing the cylinder of the nonempty reduced word w.
Ball cylinder_ball(const FreeRep& rep, const CylinderSystem& sys, const Word& w);
Ball cylinder_ball(const FreeRep& rep, const CylinderSystem& sys, const Word& w, const Transform& tw);

// Prefixes p_v l where p_v is the shortlex spanning path to vertex v of the
// folded graph of H and l leaves the graph.  Their cylinders form a
// fundamental domain for H acting on the boundary minus the limit set of H.
std::vector<Word> fundamental_prefixes(const SubgroupSpec& H, int rank);
// True if w extends one of the prefixes or is a proper prefix of one.
bool in_fundamental_domain(const Word& w, const std::vector<Word>& prefixes);

struct LimitCover {
    BallCover cover;
    std::vector<Word> words;
    double radius = 0;  // uniform r(L)
    std::vector<double> word_radius;  // the cylinder ball radius of each word
    int L = 0;
    CylinderSystem system;
};

// Cylinder balls of every reduced word of length exactly L, optionally only
// those in the fundamental domain of `filter`.  All radii equal r(L).
LimitCover limit_cover(const FreeRep& rep, int L, const std::optional<SubgroupSpec>& filter = std::nullopt,
                       int threads = 1);
BallCover sample_limit_set(const FreeRep& rep, int L, const std::optional<SubgroupSpec>& filter = std::nullopt,
                           int threads = 1);

// Xi(rho(w)) for the reduced word w.
Flag limit_point(const FreeRep& rep, const Word& w);

}  // namespace anosov
