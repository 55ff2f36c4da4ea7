#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "anosov/flags.hpp"
#include "anosov/limit_set.hpp"
#include "anosov/words.hpp"

namespace anosov {

inline constexpr std::uint64_t kDefaultSeed = 0xA905;

struct Condition {
    std::string id;
    std::string description;
    double margin = 0;
    bool pass = false;
};

struct Certificate {
    std::string pipeline;
    int L = 0;
    std::vector<Condition> conditions;
    std::map<std::string, double> parameters;
    std::map<std::string, std::string> notes;
    std::uint64_t seed = kDefaultSeed;

    // Status is derived from the margin: pass iff margin > 0 (NaN fails).
    void add(const std::string& id, const std::string& description, double margin);
    bool passed() const;
    const Condition* find(const std::string& id) const;

    nlohmann::json to_json() const;
    std::string table() const;
};

Certificate certificate_from_json(const nlohmann::json& j);

struct AntipodalityScan {
    double margin = 0;
    int a = -1, b = -1;  // witness ball indices
};

// Exact minimum over center pairs of antipodal_distance minus the radius
// inflation, with the minimizing pair.
AntipodalityScan antipodality_scan(const BallCover& A, const BallCover& B);

// Largest margin by which the ball sits inside one ball of the cover, each
// cover ball shrunk by a quarter of its radius.
double interior_margin(const Ball& x, const BallCover& cover);

// The orbit of a fundamental-domain slice under a cyclic subgroup <h>,
// truncated at |m| <= M.  Tail balls around the fixed points of h are
// h-invariant and contain every h^m slice with |m| > M.
struct OrbitCover {
    Word h;  // empty when H is trivial
    std::vector<Word> slice_words;
    BallCover slice;
    int M = 0;
    std::vector<BallCover> pieces;  // pieces[j] = h^(j - M) slice
    std::optional<Flag> fix_plus, fix_minus;
    std::optional<Ball> tail_plus, tail_minus;
    double tail_slack = 0;  // h-invariance slack of the tail balls

    const BallCover& piece(int m) const { return pieces.at(static_cast<size_t>(m + M)); }
    BallCover tails() const;
    BallCover all() const;
};

// Builds the orbit cover of `slice` under rho(h); the horizon M is the
// smallest one whose tail balls have radius <= tail_radius.
OrbitCover orbit_cover(const FreeRep& rep, const Word& h, const std::vector<Word>& words, const BallCover& slice,
                       double tail_radius, int max_horizon = 60);

struct InteractivePair {
    BallCover A, B;
    SubgroupSpec H;
    double eps = 0;
    int L = 0;
    OrbitCover a, b;
    LimitCover lim1, lim2;
};

// Throws ShrinkEpsilon when the slices are not antipodal to the opposite
// orbit at this eps.
InteractivePair build_interactive_pair(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H, double eps,
                                       int L, int threads = 1);
InteractivePair build_interactive_pair(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H, double eps,
                                       const LimitCover& lim1, const LimitCover& lim2, int threads = 1);

// 2^-3, ..., 2^-12.
std::vector<double> default_grid();

// Per-representative outcome of the containment test rho(gamma) B in A.
struct RepScan {
    Word gamma;
    int side = 1;  // amalgam 1: rho1(gamma) B in A, 2: rho2(gamma) A in B; HNN: family 1..4
    double margin = 0;
};

// Nontrivial double coset representatives H gamma H of length <= L
// (shortlex-least element of each double coset).
std::vector<Word> double_coset_reps(const SubgroupSpec& H, int rank, int L);
// The same for left \ F / right; the trivial double coset is omitted.
std::vector<Word> double_coset_reps(const SubgroupSpec& left, const SubgroupSpec& right, int rank, int L);

// Containment margins for every double coset representative of length <= L;
// `only` restricts to members of the given subgroups.
std::vector<RepScan> amalgam_rep_scan(const FreeRep& rep1, const FreeRep& rep2, const InteractivePair& pair, int L,
                                      const SubgroupSpec* fi1 = nullptr, const SubgroupSpec* fi2 = nullptr,
                                      int threads = 1);

struct AmalgamOptions {
    int L = 6;
    int samples = 1000;  // limit-point samples for the boundary condition
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
};

Certificate verify_amalgam(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H,
                           const InteractivePair& pair, const SubgroupSpec& fi1, const SubgroupSpec& fi2,
                           const AmalgamOptions& opt = {});

struct AmalgamRun {
    InteractivePair pair;
    SubgroupSpec fi1, fi2;
    std::vector<RepScan> excluded;
    Certificate cert;
};

// Full pipeline: eps grid search, representative scan, finite-index subgroups
// avoiding the failing representatives, then verification.
AmalgamRun certify_amalgam(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H,
                           const std::vector<double>& grid, const AmalgamOptions& opt = {});

struct ReplayReport {
    long samples = 0;
    long violations = 0;
    std::map<std::string, long> by_claim;
};

ReplayReport replay_amalgam(const FreeRep& rep1, const FreeRep& rep2, const AmalgamRun& run, long samples,
                            std::uint64_t seed = kDefaultSeed);

// Smallest Frobenius distance between the matrices of distinct amalgam normal
// forms with at most `syllables` syllables, using `count` coset
// representatives of H inside each finite-index subgroup.
double amalgam_injectivity(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H, const SubgroupSpec& fi1,
                           const SubgroupSpec& fi2, int syllables = 4, int count = 8);

// ---------------------------------------------------------------------------
// HNN extensions <Gamma, t | t h- t^-1 = h+>.

// gamma^-p M- gamma^p is H-, M+ is H+, and t = tau rho(gamma)^p conjugates
// the generators of H- to those of H+ up to scale.
struct HnnSetup {
    FreeRep rep;
    CMat tau;
    Word gamma;
    int p = 0;
    CMat t;
    SubgroupSpec Hplus, Hminus;
};

// Throws ConfigError when t h- t^-1 is not a multiple of h+.
HnnSetup hnn_setup(const FreeRep& rep, const CMat& tau, const Word& gamma, int p, const SubgroupSpec& Mplus,
                   const SubgroupSpec& Mminus);

// Covers of the ping-pong sets for <Gamma, t>.  A+- are the H+- orbits of
// the delta-inflated fundamental-domain slices F+-.  B+ is the H+ orbit of
// t F- together with X+, the delta-neighbourhood of
//   Sigma+ = t^m Lambda (m >= 2)  u  t^m N_theta(Lambda_H+) (m >= 1)  u  {t+},
// truncated at m <= M with a t-invariant tail ball around t+; B- likewise.
struct InteractiveTriple {
    double delta = 0, theta = 0, c = 0;
    int L = 0;
    int M = 0;  // t-power truncation, the larger of the two sides
    LimitCover limPlus, limMinus;
    OrbitCover Aplus, Aminus, Bplus, Bminus;
    BallCover SigmaPlus, SigmaMinus, Xplus, Xminus;
    BallCover A, Bp, Bm;  // flattened covers, tails included
    double contraction = 0;  // margin of t^+-1 X+- inside X+-(delta/2)
};

InteractiveTriple build_hnn_sets(const HnnSetup& s, double delta, double theta, int L, int threads = 1);
InteractiveTriple build_hnn_sets(const HnnSetup& s, double delta, double theta, const LimitCover& limPlus,
                                 const LimitCover& limMinus);

struct HnnOptions {
    int L = 5;
    int max_power = 4;  // H+- may be replaced by <h+-^n>, n <= max_power
    // The short double coset representatives all fail, so the subgroup is deep.
    FiniteIndexOptions fi_search{1024, 2'000'000};
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
};

// Containment margins of the representatives gamma of the four double coset
// families: gamma B+- inside A+- interior, and gamma B+- inside A-+ (which
// gives t gamma B+ in B+ and t^-1 gamma B- in B-).  `fi` restricts to its members.
std::vector<RepScan> hnn_rep_scan(const HnnSetup& s, const InteractiveTriple& tr, int L,
                                  const SubgroupSpec* fi = nullptr, int threads = 1);

Certificate verify_hnn(const HnnSetup& s, const InteractiveTriple& triple, const SubgroupSpec& fi,
                       const HnnOptions& opt = {});

struct HnnRun {
    HnnSetup setup;  // the input setup with H+- replaced by <h+-^n>
    int power = 1;
    InteractiveTriple triple;
    SubgroupSpec fi;
    std::vector<RepScan> excluded;
    Certificate cert;
};

// Grid search over (delta, theta), finite-index subgroup containing H+- and
// avoiding the failing representatives, then verification.  When a failing
// representative lies in <H+, H-> no such subgroup exists, and the search
// moves on to the associated subgroups <h+^n>, <h-^n> for the next n.
HnnRun certify_hnn(const HnnSetup& s, const std::vector<double>& delta_grid, const std::vector<double>& theta_grid,
                   const HnnOptions& opt = {});

ReplayReport replay_hnn(const HnnRun& run, long samples, std::uint64_t seed = kDefaultSeed);

// Smallest Frobenius distance between the matrices of distinct Britton forms
// with at most `syllables` syllables over fi, using the first `count`
// nontrivial elements of fi in shortlex order.
double hnn_injectivity(const HnnSetup& s, const SubgroupSpec& fi, int syllables = 4, int count = 8);

}  // namespace anosov
