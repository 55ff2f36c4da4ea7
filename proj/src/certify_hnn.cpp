#include <algorithm>
#include <cmath>
#include <random>

#include "anosov/certify.hpp"
#include "anosov/constructions.hpp"
#include "anosov/dynamics.hpp"
#include "anosov/parallel.hpp"
#include "certify_internal.hpp"

namespace anosov {

namespace {

using namespace detail;

// Cylinder level of the coarse limit-set cover that seeds Sigma.
constexpr int kSigmaLevel = 2;
// The slices t F- and t^-1 F+ of B+- are inflated by this factor over the
// image bound, so that t A-+ lands strictly inside.
constexpr double kImageSlack = 1.0 + 1.0 / 64;
constexpr double kMatchTol = 1e-6;

// Distance between the unit-normalized matrices after the best phase.
double projective_mismatch(const CMat& x, const CMat& y) {
    CMat a = x / x.norm(), b = y / y.norm();
    cd ip = (b.adjoint() * a).trace();
    cd phase = std::abs(ip) > 0 ? ip / std::abs(ip) : cd(1.0);
    return (a - phase * b).norm();
}

BallCover word_radius_cover(const LimitCover& lim, double extra, const std::string& label) {
    BallCover c;
    c.label = label;
    for (size_t i = 0; i < lim.cover.size(); ++i) c.balls.push_back({lim.cover.balls[i].center, lim.word_radius[i] + extra});
    return c;
}

double lipschitz_on(const Transform& g, const LimitCover& lim) {
    double worst = 0.0;
    for (size_t i = 0; i < lim.cover.size(); ++i) {
        const double r = lim.word_radius[i];
        worst = std::max(worst, image_radius(g, lim.cover.balls[i].center, r) / r);
    }
    return worst;
}

double best_containment(const Ball& x, const BallCover& cands, double shrink) {
    double best = -kInf;
    for (const auto& b : cands.balls) best = std::max(best, shrink * b.radius - flag_dist(x.center, b.center) - x.radius);
    return best;
}

BallCover scaled(BallCover c, double f) {
    for (auto& b : c.balls) b.radius *= f;
    return c;
}

void append(BallCover& into, const BallCover& from) { into.balls.insert(into.balls.end(), from.balls.begin(), from.balls.end()); }

struct SigmaCover {
    BallCover sigma, x;
    int M = 0;
    double contraction = 0;
};

// Pieces m = 1..M of step^m N_theta(Lambda_H) and step^(m-1) base (m >= 2),
// then a step-invariant ball around the attracting point holding the rest.
SigmaCover sigma_cover(const Transform& step, const BallCover& base, const BallCover& theta_balls, const Flag& fix,
                       double delta, int max_horizon = 60) {
    std::vector<BallCover> pieces{cover_image(step, theta_balls)};
    BallCover next = cover_image(step, base);
    append(next, cover_image(step, pieces.back()));
    SigmaCover out;
    for (;;) {
        double tau = 0.0;
        for (const auto& b : next.balls) tau = std::max(tau, flag_dist(fix, b.center) + b.radius);
        const double slack = tau - (flag_dist(fix, flag_image(step, fix)) + image_radius(step, fix, tau));
        if (tau <= delta / 2 && slack > 0) {
            out.M = static_cast<int>(pieces.size());
            for (const auto& p : pieces) append(out.sigma, p);
            out.sigma.balls.push_back({fix, tau});
            break;
        }
        if (static_cast<int>(pieces.size()) >= max_horizon)
            throw ShrinkEpsilon("t-powers do not settle within horizon " + std::to_string(max_horizon));
        pieces.push_back(next);
        next = cover_image(step, next);
    }
    out.x = out.sigma;
    for (auto& b : out.x.balls) b.radius += delta;
    // step X inside X(delta/2)
    BallCover half = out.sigma;
    for (auto& b : half.balls) b.radius += delta / 2;
    out.contraction = kInf;
    for (const auto& b : out.x.balls) out.contraction = std::min(out.contraction, best_containment(ball_image(step, b), half, 1.0));
    return out;
}

// g maps every ball of the source orbit (pieces and tails) into the matching
// piece of the destination orbit or its tails.
double orbit_into(const Transform& g, const OrbitCover& src, const OrbitCover& dst) {
    const BallCover dtails = dst.tails();
    double worst = kInf;
    for (int m = -src.M; m <= src.M; ++m) {
        BallCover cand = dtails;
        if (std::abs(m) <= dst.M) append(cand, dst.piece(m));
        for (const auto& b : src.piece(m).balls) worst = std::min(worst, best_containment(ball_image(g, b), cand, 1.0));
    }
    for (const auto& b : src.tails().balls) worst = std::min(worst, best_containment(ball_image(g, b), dtails, 1.0));
    return worst;
}

// g maps the whole orbit cover into the interior of its own slice and tails.
double self_into(const Transform& g, const OrbitCover& oc) {
    BallCover cand = oc.tails();
    append(cand, oc.piece(0));
    double worst = kInf;
    for (const auto& b : oc.all().balls) worst = std::min(worst, best_containment(ball_image(g, b), cand, 0.75));
    return worst;
}

double orbit_mismatch(const FreeRep& rep, const OrbitCover& oc) {
    double mismatch = 0.0;
    Transform th = rep.transform(oc.h);
    for (int m = -oc.M; m < oc.M; ++m)
        for (size_t i = 0; i < oc.slice.size(); ++i)
            mismatch = std::max(mismatch, flag_dist(flag_image(th, oc.piece(m).balls[i].center),
                                                    oc.piece(m + 1).balls[i].center));
    return mismatch;
}

SubgroupSpec both_subgroups(const HnnSetup& s) {
    SubgroupSpec H;
    H.generators = s.Hplus.generators;
    H.generators.insert(H.generators.end(), s.Hminus.generators.begin(), s.Hminus.generators.end());
    return H;
}

struct Family {
    const SubgroupSpec* left;
    const SubgroupSpec* right;
};

}  // namespace

HnnSetup hnn_setup(const FreeRep& rep, const CMat& tau, const Word& gamma, int p, const SubgroupSpec& Mplus,
                   const SubgroupSpec& Mminus) {
    check_hnn_pairing(Mplus, Mminus);
    HnnSetup s;
    s.rep = rep;
    s.tau = tau;
    s.gamma = reduce(gamma);
    s.p = p;
    s.t = hnn_stable_letter(tau, rep, s.gamma, p);
    s.Hplus = Mplus;
    for (const auto& m : Mminus.generators)
        s.Hminus.generators.push_back(reduce(word_mul(word_mul(word_pow(s.gamma, -p), m), word_pow(s.gamma, p))));
    const CMat ti = s.t.inverse();
    for (size_t i = 0; i < s.Hplus.generators.size(); ++i) {
        CMat lhs = s.t * rep.eval(s.Hminus.generators[i]) * ti;
        if (projective_mismatch(lhs, rep.eval(s.Hplus.generators[i])) > 1e-8)
            throw ConfigError("t does not conjugate the generators of H- onto those of H+");
    }
    return s;
}

InteractiveTriple build_hnn_sets(const HnnSetup& s, double delta, double theta, int L, int threads) {
    LimitCover lp = limit_cover(s.rep, L, s.Hplus, threads), lm = limit_cover(s.rep, L, s.Hminus, threads);
    return build_hnn_sets(s, delta, theta, lp, lm);
}

InteractiveTriple build_hnn_sets(const HnnSetup& s, double delta, double theta, const LimitCover& limPlus,
                                 const LimitCover& limMinus) {
    if (!(delta > 0) || !(theta > 0)) throw ConfigError("delta and theta must be positive");
    if (limPlus.L != limMinus.L) throw ConfigError("the two fundamental-domain covers use different levels");
    const Word hp = subgroup_generator(s.Hplus), hm = subgroup_generator(s.Hminus);
    if (hp.empty() || hm.empty()) throw ConfigError("the associated subgroups must be nontrivial");
    const FreeRep& rep = s.rep;
    const Transform T = Transform::make(s.t), Ti = T.inverse(), Tau = Transform::make(s.tau);
    const ProximalData pt = proximal(s.t);
    if (!pt.biproximal || !pt.plus || !pt.minus) throw NotProximal("the stable letter is not biproximal");

    InteractiveTriple tr;
    tr.delta = delta;
    tr.theta = theta;
    tr.L = limPlus.L;
    tr.limPlus = limPlus;
    tr.limMinus = limMinus;

    // c keeps t^{+-1} and t^{+-2} of the c delta-inflated slices within delta/2
    // of the images of the slices.
    const double lip = std::max({lipschitz_on(T, limMinus), lipschitz_on(T * T, limMinus), lipschitz_on(Ti, limPlus),
                                 lipschitz_on(Ti * Ti, limPlus)});
    tr.c = std::min(1.0, 0.5 / lip);
    const double cdelta = tr.c * delta;
    const BallCover Fp = word_radius_cover(limPlus, cdelta, "F+"), Fm = word_radius_cover(limMinus, cdelta, "F-");

    // The A tails must land inside the B tails after one application of t^{+-1}.
    const ProximalData php = proximal(rep.eval(hp)), phm = proximal(rep.eval(hm));
    if (!php.biproximal || !phm.biproximal) throw NotProximal("subgroup generator is not biproximal");
    auto lip_at = [](const Transform& g, const ProximalData& pd) {
        const double r = 1e-6;
        return std::max(image_radius(g, *pd.plus, r), image_radius(g, *pd.minus, r)) / r;
    };
    const double tailB = delta / 2;
    tr.Aplus = orbit_cover(rep, hp, limPlus.words, Fp, tailB / (2 * std::max(1.0, lip_at(Ti, php))));
    tr.Aminus = orbit_cover(rep, hm, limMinus.words, Fm, tailB / (2 * std::max(1.0, lip_at(T, phm))));

    BallCover coarse;
    for (const auto& w : reduced_words_of_length(rep.gens, kSigmaLevel))
        coarse.balls.push_back(cylinder_ball(rep, limPlus.system, w));
    auto theta_balls = [&](const ProximalData& pd) {
        BallCover c;
        c.balls = {{*pd.plus, theta}, {*pd.minus, theta}};
        return c;
    };
    // t Lambda = tau Lambda because rho(gamma)^p preserves the limit set.
    SigmaCover sp = sigma_cover(T, cover_image(Tau, coarse), theta_balls(php), *pt.plus, delta);
    SigmaCover sm = sigma_cover(Ti, cover_image(Ti, coarse), theta_balls(phm), *pt.minus, delta);
    tr.M = std::max(sp.M, sm.M);
    tr.contraction = std::min(sp.contraction, sm.contraction);
    if (!(tr.contraction > 0))
        throw ShrinkEpsilon("t does not contract X into X(delta/2) (margin " + std::to_string(tr.contraction) + ")");
    tr.SigmaPlus = sp.sigma;
    tr.SigmaPlus.label = "Sigma+";
    tr.SigmaMinus = sm.sigma;
    tr.SigmaMinus.label = "Sigma-";
    tr.Xplus = sp.x;
    tr.Xplus.label = "X+";
    tr.Xminus = sm.x;
    tr.Xminus.label = "X-";

    BallCover bp = scaled(cover_image(T, Fm), kImageSlack), bm = scaled(cover_image(Ti, Fp), kImageSlack);
    append(bp, tr.Xplus);
    append(bm, tr.Xminus);
    bp.label = "B+ slice";
    bm.label = "B- slice";
    tr.Bplus = orbit_cover(rep, hp, {}, bp, tailB);
    tr.Bminus = orbit_cover(rep, hm, {}, bm, tailB);

    tr.A = tr.Aplus.all();
    append(tr.A, tr.Aminus.all());
    tr.A.label = "A";
    tr.Bp = tr.Bplus.all();
    tr.Bp.label = "B+";
    tr.Bm = tr.Bminus.all();
    tr.Bm.label = "B-";
    return tr;
}

std::vector<RepScan> hnn_rep_scan(const HnnSetup& s, const InteractiveTriple& tr, int L, const SubgroupSpec* fi,
                                  int threads) {
    const int rank = s.rep.gens.rank();
    CenterTable table(s.rep, tr.L);
    std::vector<ContainmentJob> job{make_job(s.rep, tr.Bp, tr.Aplus, table, s.Hplus, tr.L),
                                    make_job(s.rep, tr.Bm, tr.Aminus, table, s.Hminus, tr.L),
                                    make_job(s.rep, tr.Bp, tr.Aminus, table, s.Hminus, tr.L),
                                    make_job(s.rep, tr.Bm, tr.Aplus, table, s.Hplus, tr.L)};
    // Families 3 and 4 feed t gamma B+ in B+ and t^-1 gamma B- in B-, which
    // only need the closed balls.
    job[2].shrink = job[3].shrink = 1.0;
    const Family fam[4] = {{&s.Hplus, &s.Hplus}, {&s.Hminus, &s.Hminus}, {&s.Hminus, &s.Hplus}, {&s.Hplus, &s.Hminus}};
    std::vector<RepScan> jobs;
    for (int f = 0; f < 4; ++f)
        for (const auto& g : double_coset_reps(*fam[f].left, *fam[f].right, rank, L))
            if (!fi || fi->contains(g, rank)) jobs.push_back({g, f + 1, 0});
    parallel_for(jobs.size(), threads, [&](size_t i) { jobs[i].margin = job[jobs[i].side - 1].margin(jobs[i].gamma); });
    return jobs;
}

Certificate verify_hnn(const HnnSetup& s, const InteractiveTriple& tr, const SubgroupSpec& fi, const HnnOptions& opt) {
    const int rank = s.rep.gens.rank();
    for (const auto* H : {&s.Hplus, &s.Hminus})
        for (const auto& h : H->generators)
            if (!fi.contains(h, rank)) throw ConfigError("finite-index subgroup does not contain H+ and H-");
    const Transform T = Transform::make(s.t), Ti = T.inverse();
    Certificate cert;
    cert.pipeline = "hnn";
    cert.L = opt.L;
    cert.seed = opt.seed;
    cert.parameters["delta"] = tr.delta;
    cert.parameters["theta"] = tr.theta;
    cert.parameters["c"] = tr.c;
    cert.parameters["p"] = s.p;
    cert.parameters["cover_level"] = tr.L;
    cert.parameters["r_plus"] = tr.limPlus.radius;
    cert.parameters["r_minus"] = tr.limMinus.radius;
    cert.parameters["horizon_t"] = tr.M;
    cert.parameters["horizon_A+"] = tr.Aplus.M;
    cert.parameters["horizon_A-"] = tr.Aminus.M;
    cert.parameters["horizon_B+"] = tr.Bplus.M;
    cert.parameters["horizon_B-"] = tr.Bminus.M;
    cert.parameters["contraction"] = tr.contraction;
    cert.parameters["index"] = subgroup_index(fi);

    // (1) A+- slices against the B+- orbits reduce every pair by H+- invariance.
    const double a1 = antipodality_scan(tr.Aplus.slice, tr.Bp).margin;
    const double a2 = antipodality_scan(tr.Aminus.slice, tr.Bm).margin;
    const double a3 = antipodality_scan(tr.Bp, tr.Bm).margin;
    cert.add("1", "A+- antipodal to B+- and B+ antipodal to B-", std::min({a1, a2, a3}));

    // (2) The slices at the bare cylinder radii cover Lambda minus Lambda_H+-.
    const double b1 = antipodality_scan(word_radius_cover(tr.limPlus, 0.0, "F+"), tr.Bp).margin;
    const double b2 = antipodality_scan(word_radius_cover(tr.limMinus, 0.0, "F-"), tr.Bm).margin;
    cert.add("2", "Lambda minus Lambda_H+- antipodal to B+-", std::min(b1, b2));

    cert.add("3a", "t A- inside B+ and t^-1 A+ inside B-",
             std::min(orbit_into(T, tr.Aminus, tr.Bplus), orbit_into(Ti, tr.Aplus, tr.Bminus)));
    cert.add("3b", "t B+ inside B+ interior and t^-1 B- inside B- interior",
             std::min(self_into(T, tr.Bplus), self_into(Ti, tr.Bminus)));

    std::vector<RepScan> scan = hnn_rep_scan(s, tr, opt.L, &fi, opt.threads);
    double m3 = kInf;
    for (const auto& r : scan) m3 = std::min(m3, r.margin);
    cert.parameters["representatives"] = static_cast<double>(scan.size());
    cert.add("3c", "gamma B+- inside A+- interior and t^+-1 gamma B+- inside B+- for fi representatives", m3);

    // (4) Orbit pieces match under h+-, tails are invariant and t h- t^-1 = h+.
    double mismatch = 0.0;
    for (const auto* oc : {&tr.Aplus, &tr.Aminus, &tr.Bplus, &tr.Bminus}) mismatch = std::max(mismatch, orbit_mismatch(s.rep, *oc));
    double conj = 0.0;
    for (size_t i = 0; i < s.Hplus.generators.size(); ++i)
        conj = std::max(conj, projective_mismatch(s.t * s.rep.eval(s.Hminus.generators[i]) * s.t.inverse(),
                                                  s.rep.eval(s.Hplus.generators[i])));
    cert.parameters["center_mismatch"] = mismatch;
    cert.parameters["conjugation_mismatch"] = conj;
    cert.add("4", "H+- invariance of the orbit covers and t h- t^-1 = h+",
             std::min({kMatchTol - mismatch, kMatchTol - conj, tr.Aplus.tail_slack, tr.Aminus.tail_slack,
                       tr.Bplus.tail_slack, tr.Bminus.tail_slack}));
    cert.notes["boundary"] = "orbit tails around Lambda_H+- are over-approximations and are not tested against each other";
    return cert;
}

HnnRun certify_hnn(const HnnSetup& base, const std::vector<double>& delta_grid, const std::vector<double>& theta_grid,
                   const HnnOptions& opt) {
    const int rank = base.rep.gens.rank();
    if (opt.max_power < 1) throw ConfigError("max_power must be at least 1");
    std::optional<HnnRun> last;
    std::string why = "empty parameter grid";
    for (int n = 1; n <= opt.max_power; ++n) {
        HnnSetup s = base;
        for (auto* H : {&s.Hplus, &s.Hminus})
            for (auto& h : H->generators) h = word_pow(h, n);
        LimitCover lp = limit_cover(s.rep, opt.L, s.Hplus, opt.threads),
                   lm = limit_cover(s.rep, opt.L, s.Hminus, opt.threads);
        const SubgroupSpec H = both_subgroups(s);
        bool deeper = false;
        for (double delta : delta_grid) {
            for (double theta : theta_grid) {
                HnnRun run;
                run.setup = s;
                run.power = n;
                try {
                    run.triple = build_hnn_sets(s, delta, theta, lp, lm);
                } catch (const ShrinkEpsilon& e) {
                    why = e.what();
                    continue;
                }
                std::vector<Word> bad;
                for (const auto& r : hnn_rep_scan(s, run.triple, opt.L, nullptr, opt.threads))
                    if (!(r.margin > 0)) {
                        run.excluded.push_back(r);
                        if (std::find(bad.begin(), bad.end(), r.gamma) == bad.end()) bad.push_back(r.gamma);
                    }
                if (std::any_of(bad.begin(), bad.end(),
                                [&](const Word& w) { return subgroup_contains(H.generators, w, rank); })) {
                    why = "a failing representative lies in <H+, H-> at power " + std::to_string(n);
                    deeper = true;
                    break;  // theta does not move the failing representative
                }
                try {
                    run.fi = bad.empty() ? whole_group(rank) : stallings_finite_index(H, bad, rank, opt.fi_search);
                } catch (const SearchBudgetExceeded& e) {
                    why = e.what();
                    continue;
                }
                run.cert = verify_hnn(s, run.triple, run.fi, opt);
                run.cert.parameters["power"] = n;
                run.cert.notes["excluded_representatives"] = std::to_string(run.excluded.size());
                if (run.cert.passed()) return run;
                last = std::move(run);
            }
        }
        if (!deeper && last) break;
    }
    if (last) return *last;
    throw NoValidParameters(why);
}

ReplayReport replay_hnn(const HnnRun& run, long samples, std::uint64_t seed) {
    const HnnSetup& s = run.setup;
    const InteractiveTriple& tr = run.triple;
    const int rank = s.rep.gens.rank();
    const Transform T = Transform::make(s.t), Ti = T.inverse();
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
    auto violation = [&](const std::string& claim) {
        ++rep.violations;
        ++rep.by_claim[claim];
    };
    const Family fam[4] = {{&s.Hplus, &s.Hplus}, {&s.Hminus, &s.Hminus}, {&s.Hminus, &s.Hplus}, {&s.Hplus, &s.Hminus}};
    const OrbitCover* target[4] = {&tr.Aplus, &tr.Aminus, &tr.Aminus, &tr.Aplus};
    const BallCover* source[4] = {&tr.Bp, &tr.Bm, &tr.Bp, &tr.Bm};
    std::vector<Word> reps[4], prefixes[4];
    for (int f = 0; f < 4; ++f) {
        for (const auto& g : double_coset_reps(*fam[f].left, *fam[f].right, rank, run.cert.L))
            if (run.fi.contains(g, rank)) reps[f].push_back(g);
        prefixes[f] = fundamental_prefixes(*fam[f].left, rank);
    }
    const BallCover Aall[2] = {tr.Aplus.all(), tr.Aminus.all()};
    for (long n = 0; n < samples; ++n) {
        ++rep.samples;
        const bool plus = n % 2 == 0;
        const OrbitCover& Aside = plus ? tr.Aplus : tr.Aminus;
        const BallCover& Bside = plus ? tr.Bp : tr.Bm;
        const BallCover& Bother = plus ? tr.Bm : tr.Bp;
        const Transform& g = plus ? T : Ti;
        if (!(antipodal_distance(random_flag_in_ball(any_ball(Aside.slice), rng),
                                 random_flag_in_ball(any_ball(Bside), rng)) > 0))
            violation("A antipodal to B");
        if (!(antipodal_distance(random_flag_in_ball(any_ball(Bside), rng),
                                 random_flag_in_ball(any_ball(Bother), rng)) > 0))
            violation("B+ antipodal to B-");
        // t A- in B+ and t^-1 A+ in B-.
        if (!inside(flag_image(g, random_flag_in_ball(any_ball(Aall[plus ? 1 : 0]), rng)), Bside))
            violation("t A in B");
        if (!inside(flag_image(g, random_flag_in_ball(any_ball(Bside), rng)), Bside)) violation("t B in B");
        const int f = static_cast<int>(n % 4);
        if (reps[f].empty()) continue;
        std::uniform_int_distribution<size_t> U(0, reps[f].size() - 1);
        const Word& gamma = reps[f][U(rng)];
        const Word& h = target[f]->h;
        std::optional<int> m = strip_power(gamma, h, prefixes[f], static_cast<int>(gamma.size()) + 2);
        if (!m) {
            violation("representative");
            continue;
        }
        Transform G = s.rep.transform(reduce(word_mul(word_pow(h, -*m), gamma)));
        if (!inside(flag_image(G, random_flag_in_ball(any_ball(*source[f]), rng)), target[f]->slice))
            violation("representative");
    }
    return rep;
}

double hnn_injectivity(const HnnSetup& s, const SubgroupSpec& fi, int syllables, int count) {
    const int rank = s.rep.gens.rank();
    std::vector<Word> elements;
    for (int len = 1; len <= 12 && static_cast<int>(elements.size()) < count; ++len)
        for (const auto& w : reduced_words_of_length(s.rep.gens, len)) {
            if (static_cast<int>(elements.size()) >= count) break;
            if (fi.contains(w, rank)) elements.push_back(w);
        }
    const CMat ti = s.t.inverse();
    std::vector<CMat> mats;
    for (const auto& f : hnn_normal_forms(elements, rank, s.Hplus, s.Hminus, syllables)) {
        CMat m = CMat::Identity(s.rep.d, s.rep.d);
        for (const auto& syl : f) m = m * (syl.factor == 0 ? s.rep.eval(syl.w) : (syl.w[0] > 0 ? s.t : ti));
        mats.push_back(m);
    }
    double best = kInf;
    for (size_t i = 0; i < mats.size(); ++i)
        for (size_t j = i + 1; j < mats.size(); ++j) best = std::min(best, (mats[i] - mats[j]).norm());
    return best;
}

}  // namespace anosov
