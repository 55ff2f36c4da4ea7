#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "anosov/certify.hpp"
#include "anosov/dynamics.hpp"
#include "anosov/parallel.hpp"
#include "certify_internal.hpp"

namespace anosov {

namespace {

using namespace detail;

void check_common_subgroup(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H) {
    if (rep1.d != rep2.d || rep1.gens.rank() != rep2.gens.rank())
        throw ConfigError("the two representations must share rank and dimension");
    for (const auto& h : H.generators) {
        CMat x = rep1.eval(h), y = rep2.eval(h);
        if ((x - y).norm() > 1e-9 * std::max(1.0, x.norm()))
            throw ConfigError("subgroup generator acts differently in the two representations");
    }
}

}  // namespace

OrbitCover orbit_cover(const FreeRep& rep, const Word& h, const std::vector<Word>& words, const BallCover& slice,
                       double tail_radius, int max_horizon) {
    OrbitCover oc;
    oc.h = h;
    oc.slice_words = words;
    oc.slice = slice;
    if (h.empty()) {
        oc.pieces.push_back(slice);
        oc.tail_slack = kInf;
        return oc;
    }
    ProximalData prox = proximal(rep.eval(h));
    if (!prox.biproximal || !prox.plus || !prox.minus) throw NotProximal("subgroup generator is not biproximal");
    oc.fix_plus = *prox.plus;
    oc.fix_minus = *prox.minus;
    const Transform th = rep.transform(h), thi = th.inverse();

    auto tail_for = [&](int m, const Flag& fix, const Transform& step, double& slack) {
        BallCover p = cover_image(rep.transform(word_pow(h, m)), slice);
        double tau = 0.0;
        for (const auto& b : p.balls) tau = std::max(tau, flag_dist(fix, b.center) + b.radius);
        slack = tau - (flag_dist(fix, flag_image(step, fix)) + image_radius(step, fix, tau));
        return tau;
    };
    for (int M = 1; M <= max_horizon; ++M) {
        double sp, sm;
        double tp = tail_for(M + 1, *oc.fix_plus, th, sp);
        double tm = tail_for(-(M + 1), *oc.fix_minus, thi, sm);
        if (tp <= tail_radius && tm <= tail_radius && sp > 0 && sm > 0) {
            oc.M = M;
            oc.tail_plus = Ball{*oc.fix_plus, tp};
            oc.tail_minus = Ball{*oc.fix_minus, tm};
            oc.tail_slack = std::min(sp, sm);
            for (int m = -M; m <= M; ++m)
                oc.pieces.push_back(m == 0 ? slice : cover_image(rep.transform(word_pow(h, m)), slice));
            return oc;
        }
    }
    throw ShrinkEpsilon("orbit tails do not settle within horizon " + std::to_string(max_horizon));
}

InteractivePair build_interactive_pair(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H, double eps,
                                       int L, int threads) {
    LimitCover l1 = limit_cover(rep1, L, H, threads), l2 = limit_cover(rep2, L, H, threads);
    return build_interactive_pair(rep1, rep2, H, eps, l1, l2, threads);
}

InteractivePair build_interactive_pair(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H, double eps,
                                       const LimitCover& lim1, const LimitCover& lim2, int threads) {
    (void)threads;
    if (!(eps > 0)) throw ConfigError("eps must be positive");
    check_common_subgroup(rep1, rep2, H);
    Word h = subgroup_generator(H);
    InteractivePair p;
    p.H = H;
    p.eps = eps;
    p.L = lim1.L;
    p.lim1 = lim1;
    p.lim2 = lim2;
    auto inflate = [&](const LimitCover& lim, const std::string& label) {
        BallCover c = lim.cover;
        c.label = label;
        for (auto& b : c.balls) b.radius = lim.radius + eps;
        return c;
    };
    p.a = orbit_cover(rep1, h, lim1.words, inflate(lim1, "A0"), eps / 2);
    p.b = orbit_cover(rep2, h, lim2.words, inflate(lim2, "B0"), eps / 2);
    p.A = p.a.all();
    p.A.label = "A";
    p.B = p.b.all();
    p.B.label = "B";
    double m1 = antipodality_scan(p.a.slice, p.B).margin;
    double m2 = antipodality_scan(p.b.slice, p.A).margin;
    if (!(std::min(m1, m2) > 0))
        throw ShrinkEpsilon("slices are not antipodal to the opposite orbit (margin " + std::to_string(std::min(m1, m2)) +
                            ")");
    return p;
}

std::vector<RepScan> amalgam_rep_scan(const FreeRep& rep1, const FreeRep& rep2, const InteractivePair& pair, int L,
                                      const SubgroupSpec* fi1, const SubgroupSpec* fi2, int threads) {
    const int rank = rep1.gens.rank();
    CenterTable t1(rep1, pair.L), t2(rep2, pair.L);
    ContainmentJob j1 = make_job(rep1, pair.B, pair.a, t1, pair.H, pair.L);
    ContainmentJob j2 = make_job(rep2, pair.A, pair.b, t2, pair.H, pair.L);
    std::vector<RepScan> jobs;
    for (const auto& g : double_coset_reps(pair.H, rank, L)) {
        if (!fi1 || fi1->contains(g, rank)) jobs.push_back({g, 1, 0});
        if (!fi2 || fi2->contains(g, rank)) jobs.push_back({g, 2, 0});
    }
    parallel_for(jobs.size(), threads, [&](size_t i) {
        jobs[i].margin = jobs[i].side == 1 ? j1.margin(jobs[i].gamma) : j2.margin(jobs[i].gamma);
    });
    return jobs;
}

Certificate verify_amalgam(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H,
                           const InteractivePair& pair, const SubgroupSpec& fi1, const SubgroupSpec& fi2,
                           const AmalgamOptions& opt) {
    const int rank = rep1.gens.rank();
    check_common_subgroup(rep1, rep2, H);
    for (const auto& h : H.generators)
        if (!fi1.contains(h, rank) || !fi2.contains(h, rank))
            throw ConfigError("finite-index subgroup does not contain H");
    const Word h = subgroup_generator(H);
    Certificate cert;
    cert.pipeline = "amalgam";
    cert.L = opt.L;
    cert.seed = opt.seed;
    cert.parameters["eps"] = pair.eps;
    cert.parameters["cover_level"] = pair.L;
    cert.parameters["r1"] = pair.lim1.radius;
    cert.parameters["r2"] = pair.lim2.radius;
    cert.parameters["horizon_A"] = pair.a.M;
    cert.parameters["horizon_B"] = pair.b.M;
    cert.parameters["index1"] = subgroup_index(fi1);
    cert.parameters["index2"] = subgroup_index(fi2);

    // (1) Every pair (h^m x, h^n y) reduces to a slice against the opposite orbit.
    AntipodalityScan s1 = antipodality_scan(pair.a.slice, pair.B);
    AntipodalityScan s2 = antipodality_scan(pair.b.slice, pair.A);
    cert.add("1", "A and B antipodal (slices against opposite orbits and tails)", std::min(s1.margin, s2.margin));

    // (2) Sampled limit points off the Lambda_H cover lie inside the open cover.
    std::mt19937_64 rng(opt.seed);
    const std::vector<Word> prefixes = fundamental_prefixes(H, rank);
    double m2 = kInf;
    long skipped = 0;
    auto sample_side = [&](const FreeRep& rep, const InteractivePair& p, const OrbitCover& oc, const LimitCover& lim) {
        const int len = pair.L + oc.M * static_cast<int>(h.size()) + 4;
        std::uniform_int_distribution<int> pick(0, 2 * rank - 1);
        std::map<Word, int> index;
        for (size_t i = 0; i < oc.slice_words.size(); ++i) index[oc.slice_words[i]] = static_cast<int>(i);
        (void)p;
        for (int s = 0; s < opt.samples; ++s) {
            Word w;
            while (static_cast<int>(w.size()) < len) {
                int k = pick(rng);
                Letter l = (k / 2 + 1) * (k % 2 == 0 ? 1 : -1);
                if (!w.empty() && l == -w.back()) continue;
                w.push_back(l);
            }
            std::optional<int> m = strip_power(w, h, prefixes, oc.M);
            if (!m) {
                ++skipped;
                continue;
            }
            Word u = reduce(word_mul(word_pow(h, -*m), w));
            Ball cyl = cylinder_ball(rep, lim.system, u);
            auto it = index.find(Word(u.begin(), u.begin() + pair.L));
            if (it == index.end()) {
                m2 = -kInf;
                continue;
            }
            const Ball& t = oc.slice.balls[it->second];
            m2 = std::min(m2, 0.75 * t.radius - flag_dist(cyl.center, t.center) - cyl.radius);
        }
    };
    sample_side(rep1, pair, pair.a, pair.lim1);
    sample_side(rep2, pair, pair.b, pair.lim2);
    cert.add("2", "sampled limit points off the Lambda_H cover are interior to A resp. B", m2);
    cert.notes["boundary"] =
        "one-sided check; " + std::to_string(skipped) + " samples fell in the Lambda_H tails and were skipped";

    // (3) Containment for double coset representatives inside the finite-index subgroups.
    std::vector<RepScan> scan = amalgam_rep_scan(rep1, rep2, pair, opt.L, &fi1, &fi2, opt.threads);
    double m3 = kInf;
    for (const auto& r : scan) m3 = std::min(m3, r.margin);
    cert.parameters["representatives"] = static_cast<double>(scan.size());
    cert.add("3", "rho1(g) B inside A-interior and rho2(g) A inside B-interior for fi representatives", m3);

    // (4) h maps orbit piece m onto piece m + 1 and the tails into themselves.
    double m4 = 1.0;
    if (!h.empty()) {
        double mismatch = 0.0;
        for (const auto* oc : {&pair.a, &pair.b}) {
            const FreeRep& rep = oc == &pair.a ? rep1 : rep2;
            Transform th = rep.transform(h);
            for (int m = -oc->M; m < oc->M; ++m)
                for (size_t i = 0; i < oc->slice.size(); ++i)
                    mismatch = std::max(mismatch, flag_dist(flag_image(th, oc->piece(m).balls[i].center),
                                                            oc->piece(m + 1).balls[i].center));
        }
        m4 = std::min({1e-6 - mismatch, pair.a.tail_slack, pair.b.tail_slack});
        cert.parameters["center_mismatch"] = mismatch;
    }
    cert.add("4", "H-invariance: orbit centers match under h and tails are h-invariant", m4);
    return cert;
}

AmalgamRun certify_amalgam(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H,
                           const std::vector<double>& grid, const AmalgamOptions& opt) {
    const int rank = rep1.gens.rank();
    LimitCover l1 = limit_cover(rep1, opt.L, H, opt.threads), l2 = limit_cover(rep2, opt.L, H, opt.threads);
    std::optional<AmalgamRun> last;
    std::string why = "no eps in the grid";
    for (double eps : grid) {
        InteractivePair pair;
        try {
            pair = build_interactive_pair(rep1, rep2, H, eps, l1, l2, opt.threads);
        } catch (const ShrinkEpsilon& e) {
            why = e.what();
            continue;
        }
        AmalgamRun run;
        run.pair = std::move(pair);
        std::vector<Word> bad1, bad2;
        for (const auto& r : amalgam_rep_scan(rep1, rep2, run.pair, opt.L, nullptr, nullptr, opt.threads))
            if (!(r.margin > 0)) {
                run.excluded.push_back(r);
                (r.side == 1 ? bad1 : bad2).push_back(r.gamma);
            }
        try {
            run.fi1 = bad1.empty() ? whole_group(rank) : stallings_finite_index(H, bad1, rank);
            run.fi2 = bad2.empty() ? whole_group(rank) : stallings_finite_index(H, bad2, rank);
        } catch (const SearchBudgetExceeded& e) {
            why = e.what();
            continue;
        }
        run.cert = verify_amalgam(rep1, rep2, H, run.pair, run.fi1, run.fi2, opt);
        run.cert.notes["excluded_representatives"] = std::to_string(run.excluded.size());
        if (run.cert.passed()) return run;
        last = std::move(run);
    }
    if (last) return *last;
    throw NoValidEpsilon(why);
}

ReplayReport replay_amalgam(const FreeRep& rep1, const FreeRep& rep2, const AmalgamRun& run, long samples,
                            std::uint64_t seed) {
    const InteractivePair& p = run.pair;
    const int rank = rep1.gens.rank();
    const Word h = subgroup_generator(p.H);
    std::mt19937_64 rng(seed);
    ReplayReport rep;
    auto any_ball = [&](const BallCover& c) -> const Ball& {
        std::uniform_int_distribution<size_t> U(0, c.size() - 1);
        return c.balls[U(rng)];
    };
    auto inside = [](const Flag& x, const BallCover& c) {
        for (const auto& b : c.balls)
            if (flag_dist(x, b.center) < b.radius) return true;
        return false;
    };
    std::vector<Word> reps1, reps2;
    for (const auto& g : double_coset_reps(p.H, rank, run.cert.L)) {
        if (run.fi1.contains(g, rank)) reps1.push_back(g);
        if (run.fi2.contains(g, rank)) reps2.push_back(g);
    }
    const std::vector<Word> prefixes = fundamental_prefixes(p.H, rank);
    auto violation = [&](const std::string& claim) {
        ++rep.violations;
        ++rep.by_claim[claim];
    };
    for (long s = 0; s < samples; ++s) {
        ++rep.samples;
        // Antipodality of a slice point against a point of the opposite orbit.
        bool left = s % 2 == 0;
        const OrbitCover& sl = left ? p.a : p.b;
        const BallCover& other = left ? p.B : p.A;
        Flag x = random_flag_in_ball(any_ball(sl.slice), rng);
        Flag y = random_flag_in_ball(any_ball(other), rng);
        if (!(antipodal_distance(x, y) > 0)) violation("antipodal");
        // Containment: a random representative moves a random point of the
        // opposite cover into the slice.
        const std::vector<Word>& reps = left ? reps1 : reps2;
        if (!reps.empty()) {
            std::uniform_int_distribution<size_t> U(0, reps.size() - 1);
            const Word& g = reps[U(rng)];
            std::optional<int> m = strip_power(g, h, prefixes, static_cast<int>(g.size()) + 2);
            if (!m) {
                violation("containment");
                continue;
            }
            const FreeRep& rr = left ? rep1 : rep2;
            Transform T = rr.transform(reduce(word_mul(word_pow(h, -*m), g)));
            Flag z = flag_image(T, random_flag_in_ball(any_ball(other), rng));
            if (!inside(z, sl.slice)) violation("containment");
        }
    }
    return rep;
}

double amalgam_injectivity(const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H, const SubgroupSpec& fi1,
                           const SubgroupSpec& fi2, int syllables, int count) {
    const int rank = rep1.gens.rank();
    auto reps_in = [&](const SubgroupSpec& fi) {
        std::vector<Word> out;
        for (int len = 1; len <= 10 && static_cast<int>(out.size()) < count; ++len)
            for (const auto& w : reduced_words_of_length(rep1.gens, len)) {
                if (static_cast<int>(out.size()) >= count) break;
                if (fi.contains(w, rank) && coset_rep(w, H, rank) == w) out.push_back(w);
            }
        return out;
    };
    std::vector<NormalForm> forms = amalgam_normal_forms(reps_in(fi1), reps_in(fi2), syllables);
    std::vector<CMat> mats;
    mats.reserve(forms.size());
    for (const auto& f : forms) {
        CMat m = CMat::Identity(rep1.d, rep1.d);
        for (const auto& s : f) m = m * (s.factor == 0 ? rep1.eval(s.w) : rep2.eval(s.w));
        mats.push_back(m);
    }
    double best = kInf;
    for (size_t i = 0; i < mats.size(); ++i)
        for (size_t j = i + 1; j < mats.size(); ++j) best = std::min(best, (mats[i] - mats[j]).norm());
    return best;
}

}  // namespace anosov
