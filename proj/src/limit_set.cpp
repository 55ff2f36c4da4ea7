#include "anosov/limit_set.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "anosov/dynamics.hpp"
#include "anosov/parallel.hpp"

namespace anosov {

int CylinderSystem::index_of(const Word& node) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node, shortlex_less);
    if (it == nodes.end() || *it != node) return -1;
    return static_cast<int>(it - nodes.begin());
}

Flag limit_point(const FreeRep& rep, const Word& w) { return xi_flag(rep.transform(w)); }

namespace {

std::vector<Letter> all_letters(int rank) {
    std::vector<Letter> out;
    for (int i = 1; i <= rank; ++i) {
        out.push_back(i);
        out.push_back(-i);
    }
    return out;
}

// Nodes z that may follow v in an infinite reduced word.
std::vector<int> successors(const CylinderSystem& sys, const Word& v) {
    std::vector<int> out;
    for (size_t z = 0; z < sys.nodes.size(); ++z)
        if (sys.nodes[z][0] != -v.back()) out.push_back(static_cast<int>(z));
    return out;
}

}  // namespace

CylinderSystem cylinder_system_at_depth(const FreeRep& rep, int depth, const CylinderOptions& opt) {
    if (depth < 1) throw ConfigError("cylinder depth must be positive");
    CylinderSystem sys;
    sys.depth = depth;
    sys.nodes = reduced_words_of_length(rep.gens, depth);
    std::sort(sys.nodes.begin(), sys.nodes.end(), shortlex_less);
    const size_t n = sys.nodes.size();
    sys.centers.resize(n);
    // The cylinder of v is rho(v) applied to the union of the successor
    // cylinders; a whole node word contracts far more than a single letter.
    std::vector<Transform> first(n);
    std::vector<std::vector<int>> succ(n);
    for (size_t i = 0; i < n; ++i) {
        // Continuing with the last letter gives a genuine point of the cylinder.
        Word w = sys.nodes[i];
        for (int j = 0; j < 8; ++j) w.push_back(sys.nodes[i].back());
        sys.centers[i] = limit_point(rep, w);
        first[i] = rep.transform(sys.nodes[i]);
        succ[i] = successors(sys, sys.nodes[i]);
    }
    // Offsets d(c_v, rho(v) c_z) do not depend on the radii.
    std::vector<std::vector<double>> offset(n);
    std::vector<std::vector<Flag>> moved(n);
    for (size_t i = 0; i < n; ++i)
        for (int z : succ[i]) {
            moved[i].push_back(sys.centers[z]);
            offset[i].push_back(flag_dist(sys.centers[i], flag_image(first[i], sys.centers[z])));
        }
    auto step = [&](const std::vector<double>& R) {
        std::vector<double> out(n, 0.0);
        parallel_for(n, opt.threads, [&](size_t i) {
            double m = 0.0;
            for (size_t j = 0; j < succ[i].size(); ++j)
                m = std::max(m, offset[i][j] + image_radius(first[i], moved[i][j], R[succ[i][j]]));
            out[i] = m;
        });
        return out;
    };
    std::vector<double> R(n, 0.0);
    for (int it = 1; it <= opt.max_iter; ++it) {
        std::vector<double> next = step(R);
        double worst = *std::max_element(next.begin(), next.end());
        if (!std::isfinite(worst) || worst > opt.max_radius)
            throw NotContracting("cylinder radii exceed " + std::to_string(opt.max_radius) + " at depth " +
                                 std::to_string(depth));
        double change = 0.0;
        for (size_t i = 0; i < n; ++i) change = std::max(change, next[i] - R[i]);
        R.swap(next);
        if (change < 1e-13) {
            // Inflate slightly and confirm that the inflated radii are invariant.
            std::vector<double> infl(n);
            for (size_t i = 0; i < n; ++i) infl[i] = R[i] * 1.001 + 1e-12;
            std::vector<double> check = step(infl);
            bool ok = true;
            for (size_t i = 0; i < n; ++i) ok &= check[i] <= infl[i];
            if (ok) {
                sys.radii = infl;
                sys.iterations = it;
                return sys;
            }
        }
    }
    throw NotContracting("cylinder radii did not settle at depth " + std::to_string(depth));
}

CylinderSystem cylinder_system(const FreeRep& rep, const CylinderOptions& opt) {
    std::string last;
    for (int depth = 1; depth <= opt.max_depth; ++depth) {
        try {
            return cylinder_system_at_depth(rep, depth, opt);
        } catch (const NotContracting& e) {
            last = e.what();
        }
    }
    throw NotContracting("no cylinder system up to depth " + std::to_string(opt.max_depth) + " (" + last + ")");
}

Ball cylinder_ball(const FreeRep& rep, const CylinderSystem& sys, const Word& w) {
    return cylinder_ball(rep, sys, w, rep.transform(w));
}

Ball cylinder_ball(const FreeRep& /*rep*/, const CylinderSystem& sys, const Word& w, const Transform& tw) {
    if (w.empty()) throw ConfigError("cylinder of the empty word");
    Flag center = xi_flag(tw);
    double r = 0.0;
    for (size_t z = 0; z < sys.nodes.size(); ++z) {
        if (sys.nodes[z][0] == -w.back()) continue;
        r = std::max(r, flag_dist(center, flag_image(tw, sys.centers[z])) + image_radius(tw, sys.centers[z], sys.radii[z]));
    }
    return Ball{center, std::min(r, 1.0)};
}

std::vector<Word> fundamental_prefixes(const SubgroupSpec& H, int rank) {
    StallingsGraph G = StallingsGraph::from_generators(rank, H.generators);
    std::vector<Word> path(G.vertices());
    std::vector<bool> seen(G.vertices(), false);
    std::deque<int> queue{0};
    seen[0] = true;
    std::vector<int> order;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        order.push_back(v);
        for (Letter l : all_letters(rank)) {
            int u = G.read(v, Word{l});
            if (u < 0 || seen[u]) continue;
            seen[u] = true;
            path[u] = path[v];
            path[u].push_back(l);
            queue.push_back(u);
        }
    }
    std::vector<Word> out;
    for (int v : order)
        for (Letter l : all_letters(rank)) {
            if (G.read(v, Word{l}) >= 0) continue;
            Word p = path[v];
            p.push_back(l);
            out.push_back(p);
        }
    std::sort(out.begin(), out.end(), shortlex_less);
    return out;
}

bool in_fundamental_domain(const Word& w, const std::vector<Word>& prefixes) {
    for (const auto& p : prefixes) {
        size_t n = std::min(p.size(), w.size());
        if (std::equal(p.begin(), p.begin() + n, w.begin())) return true;
    }
    return false;
}

LimitCover limit_cover(const FreeRep& rep, int L, const std::optional<SubgroupSpec>& filter, int threads) {
    if (L < 1) throw ConfigError("limit_cover needs L >= 1");
    GapCertificate pre = gap_growth(rep, std::min(L, 6), threads);
    if (!pre.passed) throw NotContracting("singular value gaps do not grow (fitted slope " + std::to_string(pre.c) + ")");
    LimitCover out;
    out.L = L;
    CylinderOptions opt;
    opt.threads = threads;
    out.system = cylinder_system(rep, opt);
    std::vector<Word> prefixes;
    if (filter) prefixes = fundamental_prefixes(*filter, rep.gens.rank());
    for (auto& w : reduced_words_of_length(rep.gens, L))
        if (!filter || in_fundamental_domain(w, prefixes)) out.words.push_back(w);
    std::vector<Ball> balls(out.words.size());
    parallel_for(balls.size(), threads, [&](size_t i) { balls[i] = cylinder_ball(rep, out.system, out.words[i]); });
    for (const auto& b : balls) out.radius = std::max(out.radius, b.radius);
    out.cover.label = "limit-set L=" + std::to_string(L);
    for (auto& b : balls) {
        out.cover.balls.push_back(Ball{b.center, out.radius});
        out.word_radius.push_back(b.radius);
    }
    return out;
}

BallCover sample_limit_set(const FreeRep& rep, int L, const std::optional<SubgroupSpec>& filter, int threads) {
    return limit_cover(rep, L, filter, threads).cover;
}

}  // namespace anosov
