#include "anosov/cli.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "CLI11.hpp"

#include "anosov/certify.hpp"
#include "anosov/constructions.hpp"
#include "anosov/examples.hpp"
#include "anosov/io.hpp"

namespace anosov {

namespace {

constexpr int kMaxL = 10;

struct Flags {
    std::string rep, rep2, subgroup, out;
    std::string eps, delta, theta;
    std::string seed = "0xA905";
    std::string gamma, tag, name;
    int L = 0;
    int p_max = 64;
    int threads = 1;
    int d = 0, q = 1;
    long replay = 10000;
};

std::uint64_t parse_seed(const std::string& s) {
    try {
        size_t used = 0;
        std::uint64_t v = std::stoull(s, &used, 16);
        if (used != s.size()) throw ConfigError("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("--seed expects a hexadecimal value, got '" + s + "'");
    }
}

int horizon(const Flags& f, int fallback) {
    int L = f.L > 0 ? f.L : fallback;
    if (L > kMaxL) throw ConfigError("--L is capped at " + std::to_string(kMaxL));
    return L;
}

FreeRep load_rep(const std::string& path, const char* flag) {
    if (path.empty()) throw ConfigError(std::string(flag) + " is required");
    return rep_from_json(read_json_file(path));
}

// Writes `text` to out/<file> when --out is set.
void emit(const Flags& f, const std::string& file, const std::string& text) {
    if (f.out.empty()) return;
    std::filesystem::create_directories(f.out);
    write_text_file((std::filesystem::path(f.out) / file).string(), text);
}

FreeRep conjugate_rep(const FreeRep& rep, const CMat& g) {
    const CMat gi = g.inverse();
    std::vector<CMat> mats;
    for (const auto& m : rep.mats) mats.push_back(g * m * gi);
    return FreeRep::make(rep.gens, mats, Field::C);
}

int report(const Flags& f, const Certificate& cert, const ReplayReport* replay, std::ostream& out) {
    out << cert.table();
    nlohmann::json j = cert.to_json();
    if (replay) {
        j["replay"] = {{"samples", replay->samples}, {"violations", replay->violations}};
        out << "  replay: " << replay->violations << " violations in " << replay->samples << " samples\n";
    }
    emit(f, "certificate_" + cert.pipeline + ".json", j.dump(2) + "\n");
    const bool ok = cert.passed() && (!replay || replay->violations == 0);
    return ok ? kExitPass : kExitNotCertified;
}

int cmd_example(const Flags& f, std::ostream& out) {
    FreeRep rep = example_by_name(f.name);
    if (f.name != "rank1_lattice_toy") {
        IntervalOracle o = interval_pingpong(schottky2_sl2(), std::acos(-1.0) / 9);
        if (!o.passed) throw DomainError("interval oracle rejected the example: " + o.reason);
    }
    for (const auto& m : rep.mats)
        if (std::abs(m.determinant() - cd(1.0)) > 1e-9) throw DomainError("example generator has determinant != 1");
    const std::string text = rep_to_json(rep).dump(2) + "\n";
    if (f.out.empty())
        out << text;
    else
        emit(f, f.name + ".json", text);
    return kExitPass;
}

int cmd_sample(const Flags& f, std::ostream& out) {
    FreeRep rep = load_rep(f.rep, "--rep");
    std::optional<SubgroupSpec> filter;
    if (!f.subgroup.empty()) filter = subgroup_from_json(read_json_file(f.subgroup), rep.gens);
    const int L = horizon(f, 6);
    LimitCover lc = limit_cover(rep, L, filter, f.threads);
    const std::string csv = cover_csv(lc.cover, lc.words, rep.gens);
    if (f.out.empty())
        out << csv;
    else {
        emit(f, "limit_set_L" + std::to_string(L) + ".csv", csv);
        out << lc.cover.size() << " balls, r(L) = " << lc.radius << "\n";
    }
    return kExitPass;
}

int cmd_gap(const Flags& f, std::ostream& out) {
    FreeRep rep = load_rep(f.rep, "--rep");
    GapCertificate g = gap_growth(rep, horizon(f, 8), f.threads);
    const std::string csv = gap_table_csv(g);
    out << csv << "c = " << g.c << ", C = " << g.C << ", max residual = " << g.residual_max << "\n";
    emit(f, "gap.csv", csv);
    return g.passed ? kExitPass : kExitNotCertified;
}

int cmd_dims(const Flags& f, std::ostream& out) {
    if (f.d < 1) throw ConfigError("--d must be positive");
    if (f.tag.empty()) {
        for (const auto& t : dimension_tags()) out << t << " " << dimension_budget(t, f.d, f.q) << "\n";
        return kExitPass;
    }
    out << dimension_budget(f.tag, f.d, f.q) << "\n";
    return kExitPass;
}

int cmd_certify_amalgam(const Flags& f, const FreeRep& rep1, const FreeRep& rep2, const SubgroupSpec& H,
                        std::ostream& out) {
    AmalgamOptions opt;
    opt.L = horizon(f, 6);
    opt.seed = parse_seed(f.seed);
    opt.threads = f.threads;
    AmalgamRun run = certify_amalgam(rep1, rep2, H, parse_grid(f.eps), opt);
    if (!run.cert.passed() || f.replay <= 0) return report(f, run.cert, nullptr, out);
    ReplayReport rr = replay_amalgam(rep1, rep2, run, f.replay, opt.seed);
    return report(f, run.cert, &rr, out);
}

int cmd_double(const Flags& f, std::ostream& out) {
    FreeRep rep = load_rep(f.rep, "--rep");
    if (f.subgroup.empty()) throw ConfigError("--subgroup is required");
    SubgroupSpec H = subgroup_from_json(read_json_file(f.subgroup), rep.gens);
    if (H.generators.size() != 1) throw ConfigError("double expects a cyclic subgroup");
    FreeRep rep2 = conjugate_rep(rep, cyclic_conjugator(rep, H.generators[0]).g);
    emit(f, "rep2.json", rep_to_json(rep2).dump(2) + "\n");
    emit(f, "paired.json", rep_to_json(paired_rep(rep, rep2).rep).dump(2) + "\n");
    return cmd_certify_amalgam(f, rep, rep2, H, out);
}

struct HnnInput {
    FreeRep rep;
    SubgroupSpec Mplus, Mminus;
    Word gamma;
    CMat tau;
};

HnnInput hnn_input(const Flags& f) {
    HnnInput in;
    in.rep = load_rep(f.rep, "--rep");
    if (f.subgroup.empty()) throw ConfigError("--subgroup is required");
    nlohmann::json sj = read_json_file(f.subgroup);
    in.Mplus = subgroup_from_json(sj, in.rep.gens);
    in.Mminus = in.Mplus;
    if (sj.contains("paired")) in.Mminus = subgroup_from_json({{"generators", sj.at("paired")}}, in.rep.gens);
    check_hnn_pairing(in.Mplus, in.Mminus);
    if (in.Mplus.generators.size() != 1) throw ConfigError("hnn expects cyclic associated subgroups");
    std::string g = f.gamma;
    if (g.empty() && sj.contains("gamma")) g = sj.at("gamma").get<std::string>();
    if (g.empty()) {
        // First generator that does not occur in the subgroup generators.
        for (int i = 1; i <= in.rep.gens.rank() && in.gamma.empty(); ++i) {
            bool used = false;
            for (const auto* M : {&in.Mplus, &in.Mminus})
                for (const auto& w : M->generators)
                    for (Letter l : w) used = used || std::abs(l) == i;
            if (!used) in.gamma = Word{i};
        }
        if (in.gamma.empty()) throw ConfigError("--gamma is required when every generator occurs in the subgroup");
    } else {
        in.gamma = reduce(parse_word(g, in.rep.gens));
    }
    // tau maps the eigenbasis of m- onto that of m+ and turns the last line by i.
    CyclicConjugator cp = cyclic_conjugator(in.rep, in.Mplus.generators[0]);
    CyclicConjugator cm = cyclic_conjugator(in.rep, in.Mminus.generators[0]);
    in.tau = cp.g * cp.P * cm.Pinv;
    return in;
}

StableLetterResult stable_letter(const Flags& f, const HnnInput& in) {
    StableLetterOptions so;
    so.p_max = f.p_max;
    so.threads = f.threads;
    if (so.p_max < 1) throw ConfigError("--p-max must be at least 1");
    return hnn_stable_letter_search(in.tau, in.rep, in.gamma, so);
}

int cmd_hnn(const Flags& f, std::ostream& out) {
    HnnInput in = hnn_input(f);
    StableLetterResult sl = stable_letter(f, in);
    out << "p = " << sl.p << ", sup_k d(Xi(t^k), tau gamma+) = " << sl.fact_sup << ", " << sl.prox.status << "\n";
    std::vector<std::string> labels = in.rep.gens.labels;
    labels.push_back("t");
    std::vector<CMat> mats = in.rep.mats;
    mats.push_back(sl.t);
    nlohmann::json j = rep_to_json(FreeRep::make(GenSet::make(labels), mats, Field::C));
    j["p"] = sl.p;
    j["gamma"] = word_to_string(in.gamma, in.rep.gens);
    const std::string text = j.dump(2) + "\n";
    if (f.out.empty())
        out << text;
    else
        emit(f, "hnn_rep.json", text);
    return kExitPass;
}

int cmd_certify_hnn(const Flags& f, std::ostream& out) {
    HnnInput in = hnn_input(f);
    StableLetterResult sl = stable_letter(f, in);
    HnnSetup s = hnn_setup(in.rep, in.tau, in.gamma, sl.p, in.Mplus, in.Mminus);
    HnnOptions opt;
    opt.L = horizon(f, 5);
    opt.seed = parse_seed(f.seed);
    opt.threads = f.threads;
    HnnRun run = certify_hnn(s, parse_grid(f.delta), parse_grid(f.theta), opt);
    run.cert.parameters["fact_sup"] = sl.fact_sup;
    if (!run.cert.passed() || f.replay <= 0) return report(f, run.cert, nullptr, out);
    ReplayReport rr = replay_hnn(run, f.replay, opt.seed);
    return report(f, run.cert, &rr, out);
}

bool not_certified(const std::exception& e) {
    return dynamic_cast<const NotContracting*>(&e) || dynamic_cast<const NotProximal*>(&e) ||
           dynamic_cast<const GapTooSmall*>(&e) || dynamic_cast<const ShrinkEpsilon*>(&e) ||
           dynamic_cast<const NoValidEpsilon*>(&e) || dynamic_cast<const NoValidParameters*>(&e) ||
           dynamic_cast<const ProximalizationFailed*>(&e) || dynamic_cast<const SearchBudgetExceeded*>(&e);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Anosov combination certificates"};
    app.require_subcommand(1);
    Flags f;

    auto seed_opts = [&](CLI::App* c) {
        c->add_option("--seed", f.seed, "RNG seed (hex)");
        c->add_option("--out", f.out, "output directory");
        c->add_option("--threads", f.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    };
    auto* ex = app.add_subcommand("example", "write a built-in representation");
    ex->add_option("name", f.name, "schottky2 | schottky2_sym3 | rank1_lattice_toy")->required();
    ex->add_option("--out", f.out, "output directory");

    auto* sa = app.add_subcommand("sample", "limit-set cover as CSV");
    sa->add_option("--rep", f.rep)->required();
    sa->add_option("--subgroup", f.subgroup, "restrict to a fundamental domain of this subgroup");
    sa->add_option("--L", f.L);
    seed_opts(sa);

    auto* gp = app.add_subcommand("gap", "singular value gap growth");
    gp->add_option("--rep", f.rep)->required();
    gp->add_option("--L", f.L);
    seed_opts(gp);

    auto* dm = app.add_subcommand("dims", "dimension budgets");
    dm->add_option("--tag", f.tag);
    dm->add_option("--d", f.d)->required();
    dm->add_option("--q", f.q);

    auto* db = app.add_subcommand("double", "double along a cyclic subgroup and certify the amalgam");
    db->add_option("--rep", f.rep)->required();
    db->add_option("--subgroup", f.subgroup)->required();
    db->add_option("--L", f.L);
    db->add_option("--eps", f.eps, "grid, e.g. 2^-3:2^-12 or 0.1,0.05");
    db->add_option("--replay", f.replay, "replay samples for a passing certificate");
    seed_opts(db);

    auto* ca = app.add_subcommand("certify-amalgam", "certify rep *_H rep2");
    ca->add_option("--rep", f.rep)->required();
    ca->add_option("--rep2", f.rep2)->required();
    ca->add_option("--subgroup", f.subgroup)->required();
    ca->add_option("--L", f.L);
    ca->add_option("--eps", f.eps);
    ca->add_option("--replay", f.replay);
    seed_opts(ca);

    for (auto* c : {app.add_subcommand("hnn", "search the stable letter"),
                    app.add_subcommand("certify-hnn", "certify the HNN extension")}) {
        c->add_option("--rep", f.rep)->required();
        c->add_option("--subgroup", f.subgroup)->required();
        c->add_option("--gamma", f.gamma);
        c->add_option("--p-max", f.p_max);
        seed_opts(c);
    }
    auto* ch = app.get_subcommand("certify-hnn");
    ch->add_option("--L", f.L);
    ch->add_option("--delta", f.delta);
    ch->add_option("--theta", f.theta);
    ch->add_option("--replay", f.replay);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitError;
    }

    try {
        if (ex->parsed()) return cmd_example(f, out);
        if (sa->parsed()) return cmd_sample(f, out);
        if (gp->parsed()) return cmd_gap(f, out);
        if (dm->parsed()) return cmd_dims(f, out);
        if (db->parsed()) return cmd_double(f, out);
        if (ca->parsed()) {
            FreeRep rep1 = load_rep(f.rep, "--rep"), rep2 = load_rep(f.rep2, "--rep2");
            SubgroupSpec H = subgroup_from_json(read_json_file(f.subgroup), rep1.gens);
            return cmd_certify_amalgam(f, rep1, rep2, H, out);
        }
        if (app.get_subcommand("hnn")->parsed()) return cmd_hnn(f, out);
        if (ch->parsed()) return cmd_certify_hnn(f, out);
    } catch (const std::exception& e) {
        if (not_certified(e)) {
            out << "not certified: " << e.what() << "\n";
            return kExitNotCertified;
        }
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace anosov
