#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "anosov/flags.hpp"
#include "anosov/scalars.hpp"

namespace anosov {

// Letters are nonzero ints: +(i+1) is generator i, -(i+1) its inverse.
using Letter = int;
using Word = std::vector<Letter>;

struct GenSet {
    std::vector<std::string> labels;

    // a, b, c, ... (then x1, x2, ... past z).
    static GenSet standard(int rank);
    static GenSet make(std::vector<std::string> labels);
    int rank() const { return static_cast<int>(labels.size()); }
    Letter letter(const std::string& label) const;
};

Word reduce(const Word& w);
Word word_mul(const Word& a, const Word& b);
Word word_inverse(const Word& w);
Word word_pow(const Word& w, int k);
bool is_reduced(const Word& w);

// "a b^-1 a" or "ab^-1a"; labels may be several characters when separated by
// spaces.  "e" and "" are the identity.
Word parse_word(const std::string& s, const GenSet& g);
std::string word_to_string(const Word& w, const GenSet& g);

// Fixed letter order a < a^-1 < b < b^-1 < ...
bool letter_less(Letter x, Letter y);
// Shortlex order on words.
bool shortlex_less(const Word& x, const Word& y);

// Calls `f` on every reduced word of length <= L in shortlex order.
void enumerate_reduced(const GenSet& g, int L, const std::function<void(const Word&)>& f);
std::vector<Word> reduced_words(const GenSet& g, int L);
std::vector<Word> reduced_words_of_length(const GenSet& g, int len);

// Right action of the free group on {0..degree-1}: x . a = perms[a][x].
struct PermAction {
    int degree = 0;
    std::vector<std::vector<int>> perms;

    int act(int x, const Word& w) const;
    bool fixes_base(const Word& w) const { return act(0, w) == 0; }
    // Every perms[i] is a bijection of the right size.
    bool valid(int rank) const;
};

// Folded labelled graph with a base vertex 0.
struct StallingsGraph {
    int rank = 0;
    std::vector<std::vector<int>> out, in;  // [vertex][generator], -1 if absent

    static StallingsGraph from_generators(int rank, const std::vector<Word>& gens);
    int vertices() const { return static_cast<int>(out.size()); }
    // Attaches a path reading w from `from`; returns the end vertex.  Folds.
    int add_path(int from, const Word& w);
    // Vertex reached by reading w from `from`, or -1.
    int read(int from, const Word& w) const;
    bool accepts(const Word& w) const { return read(0, w) == 0; }
    // Graph distances to the base vertex.
    std::vector<int> distances_to_base() const;

private:
    int edge(int v, Letter l) const;
    int attach(int from, const Word& w, int to);
};

struct SubgroupSpec {
    std::vector<Word> generators;
    std::optional<PermAction> action;  // finite-index membership oracle

    bool contains(const Word& w, int rank) const;
};

bool subgroup_contains(const std::vector<Word>& gens, const Word& w, int rank);
// min |u| over u in wH (left coset).
int coset_norm(const Word& w, const SubgroupSpec& H, int rank);
// Shortlex-least element of the left coset wH.
Word coset_rep(const Word& w, const SubgroupSpec& H, int rank);

struct FiniteIndexOptions {
    int max_index = 64;
    long long node_budget = 2'000'000;
};

// Finite-index subgroup containing H whose cosets separate every excluded word
// from the base coset.  Smallest index found by exhaustive search first; the
// folded graph of H plus the excluded paths is the fallback.
SubgroupSpec stallings_finite_index(const SubgroupSpec& H, const std::vector<Word>& excluded, int rank,
                                    const FiniteIndexOptions& opt = {});

// First `count` canonical nontrivial left-coset representatives of H in the
// free group of the given rank, in shortlex order, searching lengths <= max_len.
std::vector<Word> coset_representatives(const SubgroupSpec& H, int rank, int count, int max_len);

struct Syllable {
    int factor = 0;  // 0 or 1 for amalgams; for HNN forms 0 = group element, 1 = stable letter
    Word w;
};
using NormalForm = std::vector<Syllable>;

// Alternating products of at most L syllables drawn from the supplied coset
// representatives of each factor.
std::vector<NormalForm> amalgam_normal_forms(const std::vector<Word>& reps1, const std::vector<Word>& reps2, int L);
std::vector<NormalForm> amalgam_normal_forms(int rank1, int rank2, const SubgroupSpec& H1, const SubgroupSpec& H2,
                                             int L, int reps_per_factor = 8, int rep_max_len = 6);

// Britton-reduced words g0 t^e1 g1 ... t^en gn of total letter length <= L.
// Before t the element is a canonical rep mod H+, before t^-1 mod H-.
// The stable-letter syllable stores {+1} or {-1}.
std::vector<NormalForm> hnn_normal_forms(int rank, const SubgroupSpec& Hplus, const SubgroupSpec& Hminus, int L);
// The same over a subgroup: group syllables are drawn from `elements` (nonempty
// words of the subgroup), reduced mod H+ before t and mod H- before t^-1, and
// L bounds the number of syllables, stable letters included.
std::vector<NormalForm> hnn_normal_forms(const std::vector<Word>& elements, int rank, const SubgroupSpec& Hplus,
                                         const SubgroupSpec& Hminus, int L);
// phi must pair the generators of H- with those of H+.
void check_hnn_pairing(const SubgroupSpec& Hplus, const SubgroupSpec& Hminus);

struct FreeRep {
    GenSet gens;
    Field field = Field::C;
    int d = 0;
    std::vector<CMat> mats, invs;

    // Rejects singular or mis-sized generators.
    static FreeRep make(GenSet gens, std::vector<CMat> mats, Field f = Field::C);
    const CMat& letter_matrix(Letter l) const;
    CMat eval(const Word& w) const;
    Transform transform(const Word& w) const;
    // max ||rho(x) rho(x)^-1 - I|| over generators.
    double inverse_error() const;
};

}  // namespace anosov
