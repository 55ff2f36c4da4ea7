#pragma once

// Helpers shared by the amalgam and HNN verifiers.

#include <limits>
#include <map>
#include <optional>

#include "anosov/certify.hpp"
#include "anosov/dynamics.hpp"

namespace anosov::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline Word subgroup_generator(const SubgroupSpec& H) {
    if (H.generators.size() > 1) throw ConfigError("only cyclic or trivial subgroups are supported");
    if (H.generators.empty()) return {};
    Word h = reduce(H.generators[0]);
    if (h.empty()) throw ConfigError("subgroup generator is trivial");
    return h;
}

inline SubgroupSpec whole_group(int rank) {
    SubgroupSpec s;
    for (int i = 1; i <= rank; ++i) s.generators.push_back(Word{i});
    PermAction trivial;
    trivial.degree = 1;
    trivial.perms.assign(rank, std::vector<int>{0});
    s.action = trivial;
    return s;
}

inline int subgroup_index(const SubgroupSpec& s) { return s.action ? s.action->degree : 1; }

// Finds m with h^-m w in the fundamental domain, smallest |m| first.
inline std::optional<int> strip_power(const Word& w, const Word& h, const std::vector<Word>& prefixes, int bound) {
    if (h.empty()) return in_fundamental_domain(w, prefixes) ? std::optional<int>(0) : std::nullopt;
    for (int k = 0; k <= bound; ++k)
        for (int m : {k, -k}) {
            if (in_fundamental_domain(reduce(word_mul(word_pow(h, -m), w)), prefixes)) return m;
            if (k == 0) break;
        }
    return std::nullopt;
}

// Xi(rho(v)) for every reduced word of length <= L, indexed by word.
struct CenterTable {
    std::map<Word, Flag> centers;

    CenterTable(const FreeRep& rep, int L) {
        for (const auto& w : reduced_words(rep.gens, L))
            if (!w.empty()) centers.emplace(w, xi_flag(rep.transform(w)));
    }
    const Flag* find(const Word& w) const {
        auto it = centers.find(w);
        return it == centers.end() ? nullptr : &it->second;
    }
};

// Containment of rho(gamma) applied to every source ball inside the slice.
struct ContainmentJob {
    const FreeRep* rep;              // acts on the source
    const BallCover* source;         // the opposite orbit cover
    const OrbitCover* target;        // slice side
    const CenterTable* table;        // centers for rep
    std::map<Word, int> slice_index;
    std::vector<Word> prefixes;
    int L = 0;
    int rank = 0;
    double shrink = 0.75;  // 1 tests the closed slice balls, 0.75 their interiors

    double margin(const Word& gamma) const {
        std::optional<int> m = strip_power(gamma, target->h, prefixes, static_cast<int>(gamma.size()) + 2);
        if (!m) return -kInf;
        Word g = reduce(word_mul(word_pow(target->h, -*m), gamma));
        Transform T = rep->transform(g);
        double worst = kInf;
        for (const auto& beta : source->balls) {
            Ball img = ball_image(T, beta);
            Word u(g.begin(), g.begin() + std::min<size_t>(g.size(), L));
            // Greedy descent through the cylinder tree to a slice word.
            while (static_cast<int>(u.size()) < L) {
                double best = kInf;
                Letter pick = 0;
                for (int i = 1; i <= rank; ++i)
                    for (Letter z : {i, -i}) {
                        if (!u.empty() && z == -u.back()) continue;
                        Word v = u;
                        v.push_back(z);
                        const Flag* c = table->find(v);
                        if (!c) continue;
                        double dist = flag_dist(img.center, *c);
                        if (dist < best) {
                            best = dist;
                            pick = z;
                        }
                    }
                u.push_back(pick);
            }
            auto it = slice_index.find(u);
            if (it == slice_index.end()) return -kInf;
            const Ball& t = target->slice.balls[it->second];
            double mg = shrink * t.radius - flag_dist(img.center, t.center) - img.radius;
            worst = std::min(worst, mg);
            if (worst <= 0) return worst;
        }
        return worst;
    }
};

inline ContainmentJob make_job(const FreeRep& rep, const BallCover& source, const OrbitCover& target,
                               const CenterTable& table, const SubgroupSpec& H, int L) {
    ContainmentJob job;
    job.rep = &rep;
    job.source = &source;
    job.target = &target;
    job.table = &table;
    job.L = L;
    job.rank = rep.gens.rank();
    job.prefixes = fundamental_prefixes(H, job.rank);
    for (size_t i = 0; i < target.slice_words.size(); ++i) job.slice_index[target.slice_words[i]] = static_cast<int>(i);
    return job;
}

}  // namespace anosov::detail
