#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "anosov/certify.hpp"

namespace anosov {

void Certificate::add(const std::string& id, const std::string& description, double margin) {
    conditions.push_back({id, description, margin, margin > 0.0});
}

bool Certificate::passed() const {
    if (conditions.empty()) return false;
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.pass; });
}

const Condition* Certificate::find(const std::string& id) const {
    for (const auto& c : conditions)
        if (c.id == id) return &c;
    return nullptr;
}

namespace {

std::string hex_seed(std::uint64_t s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(s));
    return buf;
}

nlohmann::json number_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

}  // namespace

nlohmann::json Certificate::to_json() const {
    nlohmann::json j;
    j["pipeline"] = pipeline;
    j["L"] = L;
    j["passed"] = passed();
    j["seed"] = hex_seed(seed);
    j["parameters"] = nlohmann::json::object();
    for (const auto& [k, v] : parameters) j["parameters"][k] = number_or_null(v);
    j["notes"] = notes;
    j["conditions"] = nlohmann::json::array();
    for (const auto& c : conditions)
        j["conditions"].push_back({{"id", c.id},
                                   {"description", c.description},
                                   {"margin", number_or_null(c.margin)},
                                   {"status", c.pass ? "pass" : "fail"}});
    return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
    Certificate c;
    c.pipeline = j.at("pipeline").get<std::string>();
    c.L = j.at("L").get<int>();
    c.seed = std::stoull(j.at("seed").get<std::string>(), nullptr, 16);
    for (auto& [k, v] : j.at("parameters").items())
        c.parameters[k] = v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    if (j.contains("notes")) c.notes = j.at("notes").get<std::map<std::string, std::string>>();
    for (const auto& e : j.at("conditions")) {
        double m = e.at("margin").is_null() ? std::numeric_limits<double>::quiet_NaN() : e.at("margin").get<double>();
        c.add(e.at("id").get<std::string>(), e.at("description").get<std::string>(), m);
    }
    return c;
}

std::string Certificate::table() const {
    std::ostringstream os;
    os << pipeline << "  L=" << L << "  seed=" << hex_seed(seed) << "\n";
    for (const auto& [k, v] : parameters) os << "  " << k << " = " << v << "\n";
    char line[512];
    std::snprintf(line, sizeof line, "  %-5s %-6s %14s  %s\n", "cond", "status", "margin", "description");
    os << line;
    for (const auto& c : conditions) {
        std::snprintf(line, sizeof line, "  %-5s %-6s %14.6e  %s\n", c.id.c_str(), c.pass ? "pass" : "FAIL", c.margin,
                      c.description.c_str());
        os << line;
    }
    for (const auto& [k, v] : notes) os << "  note " << k << ": " << v << "\n";
    os << "  overall: " << (passed() ? "PASS" : "NOT CERTIFIED") << "\n";
    return os.str();
}

AntipodalityScan antipodality_scan(const BallCover& A, const BallCover& B) {
    AntipodalityScan s;
    s.margin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < B.size(); ++j) {
            const auto& a = A.balls[i];
            const auto& b = B.balls[j];
            double m = antipodal_distance(a.center, b.center) - kMetricConstant * (a.radius + b.radius);
            if (m < s.margin) {
                s.margin = m;
                s.a = static_cast<int>(i);
                s.b = static_cast<int>(j);
            }
        }
    return s;
}

double interior_margin(const Ball& x, const BallCover& cover) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& b : cover.balls)
        best = std::max(best, 0.75 * b.radius - flag_dist(x.center, b.center) - x.radius);
    return best;
}

BallCover OrbitCover::tails() const {
    BallCover out;
    out.label = "tails";
    if (tail_plus) out.balls.push_back(*tail_plus);
    if (tail_minus) out.balls.push_back(*tail_minus);
    return out;
}

BallCover OrbitCover::all() const {
    BallCover out;
    out.label = slice.label + " orbit";
    if (pieces.empty()) out.balls = slice.balls;
    for (const auto& p : pieces) out.balls.insert(out.balls.end(), p.balls.begin(), p.balls.end());
    for (const auto& b : tails().balls) out.balls.push_back(b);
    return out;
}

std::vector<double> default_grid() {
    std::vector<double> g;
    for (int k = 3; k <= 12; ++k) g.push_back(std::ldexp(1.0, -k));
    return g;
}

std::vector<Word> double_coset_reps(const SubgroupSpec& H, int rank, int L) { return double_coset_reps(H, H, rank, L); }

std::vector<Word> double_coset_reps(const SubgroupSpec& left, const SubgroupSpec& right, int rank, int L) {
    GenSet g = GenSet::standard(rank);
    auto reduced = [](const SubgroupSpec& s) {
        std::vector<Word> out;
        for (const auto& h : s.generators) out.push_back(reduce(h));
        return out;
    };
    const std::vector<Word> lg = reduced(left), rg = reduced(right);
    const std::vector<Word> none{Word{}};
    std::vector<Word> out;
    enumerate_reduced(g, L, [&](const Word& w) {
        if (w.empty()) return;
        // Multiplying by generators on either side (up to a bounded power)
        // must not produce a shortlex-smaller word.  Words of the trivial
        // double coset reduce to the empty word and drop out here.
        bool canonical = true;
        const int K = L + 2;
        for (const auto& hl : lg.empty() ? none : lg)
            for (const auto& hr : rg.empty() ? none : rg)
                for (int i = -K; i <= K && canonical; ++i) {
                    if (hl.empty() && i != 0) continue;
                    Word left_w = reduce(word_mul(word_pow(hl, i), w));
                    for (int j = -K; j <= K && canonical; ++j) {
                        if ((i == 0 && j == 0) || (hr.empty() && j != 0)) continue;
                        Word x = reduce(word_mul(left_w, word_pow(hr, j)));
                        if (shortlex_less(x, w)) canonical = false;
                    }
                }
        if (canonical) out.push_back(w);
    });
    return out;
}

}  // namespace anosov
