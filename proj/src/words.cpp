#include "anosov/words.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

namespace anosov {

GenSet GenSet::standard(int rank) {
    if (rank < 1) throw ConfigError("rank must be positive");
    GenSet g;
    for (int i = 0; i < rank; ++i) {
        if (i < 26) g.labels.push_back(std::string(1, static_cast<char>('a' + i)));
        else g.labels.push_back("x" + std::to_string(i - 25));
    }
    return g;
}

GenSet GenSet::make(std::vector<std::string> labels) {
    if (labels.empty()) throw ConfigError("generating set is empty");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty() || l == "e") throw ConfigError("invalid generator label '" + l + "'");
        if (l.find('^') != std::string::npos || l.find(' ') != std::string::npos)
            throw ConfigError("generator label '" + l + "' contains a reserved character");
        if (!seen.insert(l).second) throw ConfigError("duplicate generator label '" + l + "'");
    }
    return GenSet{std::move(labels)};
}

Letter GenSet::letter(const std::string& label) const {
    for (int i = 0; i < rank(); ++i)
        if (labels[i] == label) return i + 1;
    throw ConfigError("unknown generator '" + label + "'");
}

Word reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (Letter l : w) {
        if (l == 0) throw ConfigError("zero is not a letter");
        if (!out.empty() && out.back() == -l) out.pop_back();
        else out.push_back(l);
    }
    return out;
}

Word word_mul(const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return reduce(w);
}

Word word_inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& l : out) l = -l;
    return out;
}

Word word_pow(const Word& w, int k) {
    Word base = k >= 0 ? w : word_inverse(w);
    Word out;
    for (int i = 0; i < std::abs(k); ++i) out = word_mul(out, base);
    return out;
}

bool is_reduced(const Word& w) {
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] == -w[i + 1]) return false;
    return std::find(w.begin(), w.end(), 0) == w.end();
}

Word parse_word(const std::string& s, const GenSet& g) {
    std::string t;
    for (char ch : s)
        if (ch != '*') t.push_back(ch);
    Word w;
    // Greedy longest-label match so multi-character labels work without spaces.
    size_t i = 0;
    while (i < t.size()) {
        if (std::isspace(static_cast<unsigned char>(t[i]))) {
            ++i;
            continue;
        }
        if (t[i] == 'e' && (i + 1 == t.size() || std::isspace(static_cast<unsigned char>(t[i + 1])))) {
            bool is_label = std::find(g.labels.begin(), g.labels.end(), "e") != g.labels.end();
            if (!is_label) {
                ++i;
                continue;
            }
        }
        int best = -1;
        size_t best_len = 0;
        for (int k = 0; k < g.rank(); ++k) {
            const auto& lab = g.labels[k];
            if (lab.size() > best_len && t.compare(i, lab.size(), lab) == 0) {
                best = k;
                best_len = lab.size();
            }
        }
        if (best < 0) throw ConfigError("cannot parse word '" + s + "' at position " + std::to_string(i));
        i += best_len;
        int exponent = 1;
        if (i < t.size() && t[i] == '^') {
            size_t j = i + 1;
            bool neg = false;
            if (j < t.size() && (t[j] == '-' || t[j] == '+')) {
                neg = t[j] == '-';
                ++j;
            }
            size_t start = j;
            while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
            if (j == start) throw ConfigError("missing exponent in '" + s + "'");
            exponent = std::stoi(t.substr(start, j - start));
            if (neg) exponent = -exponent;
            i = j;
        }
        Letter l = best + 1;
        for (int r = 0; r < std::abs(exponent); ++r) w.push_back(exponent > 0 ? l : -l);
    }
    return reduce(w);
}

std::string word_to_string(const Word& w, const GenSet& g) {
    if (w.empty()) return "e";
    std::string out;
    for (Letter l : w) {
        int i = std::abs(l) - 1;
        if (i >= g.rank()) throw ConfigError("letter outside the generating set");
        if (!out.empty() && g.labels[i].size() > 1) out += " ";
        out += g.labels[i];
        if (l < 0) out += "^-1";
    }
    return out;
}

bool letter_less(Letter x, Letter y) {
    int ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax < ay;
    return x > y;  // a before a^-1
}

bool shortlex_less(const Word& x, const Word& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), letter_less);
}

namespace {

std::vector<Letter> ordered_letters(int rank) {
    std::vector<Letter> out;
    for (int i = 1; i <= rank; ++i) {
        out.push_back(i);
        out.push_back(-i);
    }
    return out;
}

}  // namespace

void enumerate_reduced(const GenSet& g, int L, const std::function<void(const Word&)>& f) {
    if (L < 0) return;
    const auto letters = ordered_letters(g.rank());
    for (int len = 0; len <= L; ++len) {
        Word w(len);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == len) {
                f(w);
                return;
            }
            for (Letter l : letters) {
                if (pos > 0 && w[pos - 1] == -l) continue;
                w[pos] = l;
                rec(pos + 1);
            }
        };
        rec(0);
    }
}

std::vector<Word> reduced_words(const GenSet& g, int L) {
    std::vector<Word> out;
    enumerate_reduced(g, L, [&](const Word& w) { out.push_back(w); });
    return out;
}

std::vector<Word> reduced_words_of_length(const GenSet& g, int len) {
    std::vector<Word> out;
    enumerate_reduced(g, len, [&](const Word& w) {
        if (static_cast<int>(w.size()) == len) out.push_back(w);
    });
    return out;
}

int PermAction::act(int x, const Word& w) const {
    for (Letter l : w) {
        const auto& p = perms.at(std::abs(l) - 1);
        if (l > 0) {
            x = p[x];
        } else {
            auto it = std::find(p.begin(), p.end(), x);
            x = static_cast<int>(it - p.begin());
        }
    }
    return x;
}

bool PermAction::valid(int rank) const {
    if (static_cast<int>(perms.size()) != rank || degree < 1) return false;
    for (const auto& p : perms) {
        if (static_cast<int>(p.size()) != degree) return false;
        std::vector<char> hit(degree, 0);
        for (int y : p) {
            if (y < 0 || y >= degree || hit[y]) return false;
            hit[y] = 1;
        }
    }
    return true;
}

namespace {

struct RawEdge {
    int a, b, gen;
};

// Folds a labelled multigraph; returns the folded adjacency and writes the
// image of every input vertex into `map`.  Vertex 0 stays 0.
void fold_edges(int rank, int nverts, const std::vector<RawEdge>& edges, std::vector<std::vector<int>>& out,
                std::vector<std::vector<int>>& in, std::vector<int>& map) {
    std::vector<int> parent(nverts);
    for (int i = 0; i < nverts; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    auto unite = [&](int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (x > y) std::swap(x, y);
        parent[y] = x;
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<int>> o(nverts, std::vector<int>(rank, -1)), i(nverts, std::vector<int>(rank, -1));
        for (const auto& e : edges) {
            int a = find(e.a), b = find(e.b);
            int& ob = o[a][e.gen];
            if (ob < 0) ob = b;
            else if (find(ob) != b) changed |= unite(ob, b);
            int& ia = i[b][e.gen];
            if (ia < 0) ia = a;
            else if (find(ia) != a) changed |= unite(ia, a);
        }
    }
    std::vector<int> label(nverts, -1);
    int n = 0;
    for (int x = 0; x < nverts; ++x) {
        int r = find(x);
        if (label[r] < 0) label[r] = n++;
    }
    out.assign(n, std::vector<int>(rank, -1));
    in.assign(n, std::vector<int>(rank, -1));
    for (const auto& e : edges) {
        int a = label[find(e.a)], b = label[find(e.b)];
        out[a][e.gen] = b;
        in[b][e.gen] = a;
    }
    map.resize(nverts);
    for (int x = 0; x < nverts; ++x) map[x] = label[find(x)];
}

void check_letters(const Word& w, int rank) {
    for (Letter l : w)
        if (l == 0 || std::abs(l) > rank) throw ConfigError("word uses a letter outside the free group of rank " + std::to_string(rank));
}

}  // namespace

int StallingsGraph::edge(int v, Letter l) const {
    int i = std::abs(l) - 1;
    return l > 0 ? out[v][i] : in[v][i];
}

// Appends a path from `from` to `to` (a fresh vertex when to < 0) and folds.
int StallingsGraph::attach(int from, const Word& w, int to) {
    std::vector<RawEdge> edges;
    for (int a = 0; a < vertices(); ++a)
        for (int i = 0; i < rank; ++i)
            if (out[a][i] >= 0) edges.push_back({a, out[a][i], i});
    int n = vertices();
    int v = from;
    for (size_t k = 0; k < w.size(); ++k) {
        int u;
        if (k + 1 == w.size() && to >= 0) u = to;
        else u = n++;
        Letter l = w[k];
        if (l > 0) edges.push_back({v, u, l - 1});
        else edges.push_back({u, v, -l - 1});
        v = u;
    }
    if (w.empty() && to >= 0 && to != from) throw ConfigError("cannot identify vertices with an empty path");
    std::vector<int> map;
    fold_edges(rank, n, edges, out, in, map);
    return map[v];
}

int StallingsGraph::add_path(int from, const Word& w) {
    check_letters(w, rank);
    return attach(from, reduce(w), -1);
}

StallingsGraph StallingsGraph::from_generators(int rank, const std::vector<Word>& gens) {
    if (rank < 1) throw ConfigError("rank must be positive");
    StallingsGraph g;
    g.rank = rank;
    g.out.assign(1, std::vector<int>(rank, -1));
    g.in.assign(1, std::vector<int>(rank, -1));
    for (const auto& w0 : gens) {
        check_letters(w0, rank);
        Word w = reduce(w0);
        if (!w.empty()) g.attach(0, w, 0);
    }
    return g;
}

int StallingsGraph::read(int from, const Word& w) const {
    int v = from;
    for (Letter l : w) {
        if (std::abs(l) > rank) return -1;
        v = edge(v, l);
        if (v < 0) return -1;
    }
    return v;
}

std::vector<int> StallingsGraph::distances_to_base() const {
    std::vector<int> dist(vertices(), -1);
    std::deque<int> q{0};
    dist[0] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int i = 0; i < rank; ++i)
            for (int u : {out[v][i], in[v][i]})
                if (u >= 0 && dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
    }
    return dist;
}

}  // namespace anosov

namespace anosov {

bool subgroup_contains(const std::vector<Word>& gens, const Word& w, int rank) {
    check_letters(w, rank);
    return StallingsGraph::from_generators(rank, gens).accepts(reduce(w));
}

bool SubgroupSpec::contains(const Word& w, int rank) const {
    if (action) return action->fixes_base(reduce(w));
    return subgroup_contains(generators, w, rank);
}

namespace {

// The vertex s with u in wH iff u labels a walk from s to the base.
std::pair<StallingsGraph, int> coset_graph(const Word& w, const SubgroupSpec& H, int rank) {
    StallingsGraph g = StallingsGraph::from_generators(rank, H.generators);
    int s = g.add_path(0, word_inverse(reduce(w)));
    return {g, s};
}

}  // namespace

int coset_norm(const Word& w, const SubgroupSpec& H, int rank) {
    auto [g, s] = coset_graph(w, H, rank);
    return g.distances_to_base()[s];
}

Word coset_rep(const Word& w, const SubgroupSpec& H, int rank) {
    auto [g, s] = coset_graph(w, H, rank);
    const auto dist = g.distances_to_base();
    const auto letters = ordered_letters(rank);
    Word rep;
    int v = s;
    while (dist[v] > 0) {
        for (Letter l : letters) {
            int u = g.read(v, Word{l});
            if (u >= 0 && dist[u] == dist[v] - 1) {
                rep.push_back(l);
                v = u;
                break;
            }
        }
    }
    return rep;
}

namespace {

struct PartialAction {
    int rank = 0, used = 1;
    std::vector<std::vector<int>> out, in;  // [generator][vertex]

    PartialAction(int r, int n) : rank(r), out(r, std::vector<int>(n, -1)), in(r, std::vector<int>(n, -1)) {}
    int step(int v, Letter l) const {
        int i = std::abs(l) - 1;
        return l > 0 ? out[i][v] : in[i][v];
    }
    void link(int v, Letter l, int u) {
        int i = std::abs(l) - 1;
        if (l > 0) {
            out[i][v] = u;
            in[i][u] = v;
        } else {
            in[i][v] = u;
            out[i][u] = v;
        }
    }
    void unlink(int v, Letter l, int u) {
        int i = std::abs(l) - 1;
        if (l > 0) {
            out[i][v] = -1;
            in[i][u] = -1;
        } else {
            in[i][v] = -1;
            out[i][u] = -1;
        }
    }
    // Extends each partial injection on {0..used-1} to a permutation by
    // pairing free sources with free targets in increasing order.
    PermAction complete() const {
        PermAction a;
        a.degree = used;
        for (int i = 0; i < rank; ++i) {
            std::vector<int> p(used, -1), free_targets;
            for (int x = 0; x < used; ++x) p[x] = out[i][x];
            for (int y = 0; y < used; ++y)
                if (in[i][y] < 0) free_targets.push_back(y);
            size_t k = 0;
            for (int x = 0; x < used; ++x)
                if (p[x] < 0) p[x] = free_targets[k++];
            a.perms.push_back(p);
        }
        return a;
    }
};

struct Constraint {
    Word w;
    bool must_fix;
};

class ActionSearch {
public:
    ActionSearch(int rank, int n, const std::vector<Constraint>& cs, long long& budget)
        : st_(rank, n), n_(n), cs_(cs), budget_(budget) {}

    std::optional<PermAction> run() {
        if (dfs(0, 0, 0)) return found_;
        return std::nullopt;
    }
    bool exhausted() const { return budget_ <= 0; }

private:
    bool dfs(size_t ci, size_t pos, int v) {
        if (--budget_ <= 0) return false;
        if (ci == cs_.size()) {
            found_ = st_.complete();
            return true;
        }
        const auto& c = cs_[ci];
        if (pos == c.w.size()) {
            if ((v == 0) != c.must_fix) return false;
            return dfs(ci + 1, 0, 0);
        }
        Letter l = c.w[pos];
        int u = st_.step(v, l);
        if (u >= 0) return dfs(ci, pos + 1, u);
        int i = std::abs(l) - 1;
        auto& reverse = l > 0 ? st_.in[i] : st_.out[i];
        for (int y = 0; y <= st_.used && y < n_; ++y) {
            bool fresh = y == st_.used;
            if (!fresh && reverse[y] >= 0) continue;
            if (fresh) ++st_.used;
            st_.link(v, l, y);
            if (dfs(ci, pos + 1, y)) return true;
            st_.unlink(v, l, y);
            if (fresh) --st_.used;
            if (budget_ <= 0) return false;
        }
        return false;
    }

    PartialAction st_;
    int n_;
    const std::vector<Constraint>& cs_;
    long long& budget_;
    PermAction found_;
};

PermAction complete_graph(const StallingsGraph& g) {
    PartialAction st(g.rank, g.vertices());
    st.used = g.vertices();
    for (int v = 0; v < g.vertices(); ++v)
        for (int i = 0; i < g.rank; ++i)
            if (g.out[v][i] >= 0) st.link(v, i + 1, g.out[v][i]);
    return st.complete();
}

}  // namespace

SubgroupSpec stallings_finite_index(const SubgroupSpec& H, const std::vector<Word>& excluded, int rank,
                                    const FiniteIndexOptions& opt) {
    std::vector<Constraint> cs;
    for (const auto& h : H.generators) {
        check_letters(h, rank);
        Word r = reduce(h);
        if (r.empty()) throw ConfigError("subgroup generators must be nontrivial");
        cs.push_back({r, true});
    }
    StallingsGraph fallback = StallingsGraph::from_generators(rank, H.generators);
    for (const auto& e : excluded) {
        check_letters(e, rank);
        Word r = reduce(e);
        if (subgroup_contains(H.generators, r, rank))
            throw ConfigError("excluded word lies in the subgroup and cannot be separated");
        cs.push_back({r, false});
        fallback.add_path(0, r);
    }

    std::optional<PermAction> best;
    long long budget = opt.node_budget;
    const int cap = std::min(opt.max_index, fallback.vertices() - 1);
    for (int n = 1; n <= cap && !best; ++n) {
        ActionSearch search(rank, n, cs, budget);
        best = search.run();
        if (!best && search.exhausted()) break;
    }
    if (!best) {
        if (fallback.vertices() > opt.max_index)
            throw SearchBudgetExceeded("no action of index <= " + std::to_string(opt.max_index) +
                                       " found (folded cover needs " + std::to_string(fallback.vertices()) + ")");
        best = complete_graph(fallback);
    }

    SubgroupSpec out;
    out.generators = H.generators;
    out.action = *best;
    if (!out.action->valid(rank)) throw Error("finite-index construction produced an invalid action");
    for (const auto& c : cs)
        if (out.action->fixes_base(c.w) != c.must_fix)
            throw Error("finite-index construction failed its replay check");
    return out;
}

std::vector<Word> coset_representatives(const SubgroupSpec& H, int rank, int count, int max_len) {
    std::vector<Word> reps;
    GenSet g = GenSet::standard(rank);
    for (int len = 1; len <= max_len && static_cast<int>(reps.size()) < count; ++len)
        for (const auto& w : reduced_words_of_length(g, len)) {
            if (static_cast<int>(reps.size()) >= count) break;
            if (coset_rep(w, H, rank) == w) reps.push_back(w);
        }
    return reps;
}

std::vector<NormalForm> amalgam_normal_forms(const std::vector<Word>& reps1, const std::vector<Word>& reps2, int L) {
    std::vector<NormalForm> out;
    const std::vector<Word>* reps[2] = {&reps1, &reps2};
    for (const auto* r : reps)
        for (const auto& w : *r)
            if (w.empty()) throw ConfigError("coset representatives must be nontrivial");
    NormalForm cur;
    std::function<void(int)> rec = [&](int factor) {
        if (static_cast<int>(cur.size()) == L) return;
        for (const auto& w : *reps[factor]) {
            cur.push_back({factor, w});
            out.push_back(cur);
            rec(1 - factor);
            cur.pop_back();
        }
    };
    rec(0);
    rec(1);
    return out;
}

std::vector<NormalForm> amalgam_normal_forms(int rank1, int rank2, const SubgroupSpec& H1, const SubgroupSpec& H2,
                                             int L, int reps_per_factor, int rep_max_len) {
    return amalgam_normal_forms(coset_representatives(H1, rank1, reps_per_factor, rep_max_len),
                                coset_representatives(H2, rank2, reps_per_factor, rep_max_len), L);
}

void check_hnn_pairing(const SubgroupSpec& Hplus, const SubgroupSpec& Hminus) {
    if (Hplus.generators.empty() || Hplus.generators.size() != Hminus.generators.size())
        throw ConfigError("phi must pair the generators of H- and H+ one to one");
    for (const auto* H : {&Hplus, &Hminus})
        for (const auto& w : H->generators)
            if (reduce(w).empty()) throw ConfigError("trivial generator in an associated subgroup");
}

std::vector<NormalForm> hnn_normal_forms(int rank, const SubgroupSpec& Hplus, const SubgroupSpec& Hminus, int L) {
    check_hnn_pairing(Hplus, Hminus);
    GenSet g = GenSet::standard(rank);
    const auto all = reduced_words(g, L);
    std::vector<Word> canon_plus, canon_minus;
    for (const auto& w : all) {
        if (coset_rep(w, Hplus, rank) == w) canon_plus.push_back(w);
        if (coset_rep(w, Hminus, rank) == w) canon_minus.push_back(w);
    }
    std::vector<NormalForm> out;
    NormalForm cur;
    auto push_group = [&](const Word& w) {
        if (!w.empty()) cur.push_back({0, w});
    };
    auto pop_group = [&](const Word& w) {
        if (!w.empty()) cur.pop_back();
    };
    std::function<void(int, int)> rec = [&](int rem, int prev_eps) {
        for (const auto& w : all) {
            if (static_cast<int>(w.size()) > rem) break;
            push_group(w);
            out.push_back(cur);
            pop_group(w);
        }
        for (int eps : {+1, -1}) {
            const auto& canon = eps > 0 ? canon_plus : canon_minus;
            for (const auto& w : canon) {
                if (static_cast<int>(w.size()) + 1 > rem) break;
                if (w.empty() && prev_eps == -eps) continue;  // pinch
                push_group(w);
                cur.push_back({1, Word{eps}});
                rec(rem - static_cast<int>(w.size()) - 1, eps);
                cur.pop_back();
                pop_group(w);
            }
        }
    };
    rec(L, 0);
    return out;
}

FreeRep FreeRep::make(GenSet gens, std::vector<CMat> mats, Field f) {
    if (static_cast<int>(mats.size()) != gens.rank())
        throw ShapeError("representation needs one matrix per generator");
    FreeRep r;
    r.gens = std::move(gens);
    r.field = f;
    r.d = static_cast<int>(mats.at(0).rows());
    for (const auto& m : mats) {
        if (m.rows() != r.d || m.cols() != r.d) throw ShapeError("generator matrices must be square of equal size");
        Eigen::FullPivLU<CMat> lu(m);
        if (!lu.isInvertible()) throw DomainError("generator matrix is singular");
        r.invs.push_back(lu.inverse());
    }
    r.mats = std::move(mats);
    return r;
}

const CMat& FreeRep::letter_matrix(Letter l) const {
    int i = std::abs(l) - 1;
    if (l == 0 || i >= static_cast<int>(mats.size())) throw ConfigError("letter outside the representation");
    return l > 0 ? mats[i] : invs[i];
}

CMat FreeRep::eval(const Word& w) const {
    CMat m = CMat::Identity(d, d);
    for (Letter l : w) m = m * letter_matrix(l);
    return m;
}

Transform FreeRep::transform(const Word& w) const {
    CMat g = CMat::Identity(d, d), n = CMat::Identity(d, d);
    for (Letter l : w) {
        g = g * letter_matrix(l);
        n = n * letter_matrix(-l).adjoint();
    }
    return Transform{g, n};
}

double FreeRep::inverse_error() const {
    double e = 0.0;
    for (size_t i = 0; i < mats.size(); ++i)
        e = std::max(e, (mats[i] * invs[i] - CMat::Identity(d, d)).cwiseAbs().maxCoeff());
    return e;
}

std::vector<NormalForm> hnn_normal_forms(const std::vector<Word>& elements, int rank, const SubgroupSpec& Hplus,
                                         const SubgroupSpec& Hminus, int L) {
    check_hnn_pairing(Hplus, Hminus);
    std::vector<Word> canon_plus{Word{}}, canon_minus{Word{}};
    for (const auto& w : elements) {
        if (reduce(w).empty()) throw ConfigError("subgroup elements must be nontrivial");
        Word cp = coset_rep(w, Hplus, rank), cm = coset_rep(w, Hminus, rank);
        if (!cp.empty() && std::find(canon_plus.begin(), canon_plus.end(), cp) == canon_plus.end()) canon_plus.push_back(cp);
        if (!cm.empty() && std::find(canon_minus.begin(), canon_minus.end(), cm) == canon_minus.end())
            canon_minus.push_back(cm);
    }
    std::vector<NormalForm> out;
    NormalForm cur;
    std::function<void(int, int)> rec = [&](int rem, int prev_eps) {
        // Close the form with a last group syllable (possibly none).
        if (!cur.empty()) out.push_back(cur);
        if (rem >= 1)
            for (const auto& w : elements) {
                cur.push_back({0, w});
                out.push_back(cur);
                cur.pop_back();
            }
        for (int eps : {+1, -1}) {
            for (const auto& w : eps > 0 ? canon_plus : canon_minus) {
                const int cost = w.empty() ? 1 : 2;
                if (cost > rem) continue;
                if (w.empty() && prev_eps == -eps) continue;  // pinch
                if (!w.empty()) cur.push_back({0, w});
                cur.push_back({1, Word{eps}});
                rec(rem - cost, eps);
                cur.pop_back();
                if (!w.empty()) cur.pop_back();
            }
        }
    };
    rec(L, 0);
    return out;
}

}  // namespace anosov
