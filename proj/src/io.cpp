#include "anosov/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace anosov {

namespace {

nlohmann::json matrix_part(const CMat& m, bool imag) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
        rows.push_back(row);
    }
    return rows;
}

void read_part(const nlohmann::json& rows, CMat& m, bool imag) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != m.rows())
        throw ConfigError("matrix has the wrong number of rows");
    for (int i = 0; i < m.rows(); ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != m.cols())
            throw ConfigError("matrix row has the wrong length");
        for (int j = 0; j < m.cols(); ++j) {
            double x = row[j].get<double>();
            if (imag)
                m(i, j).imag(x);
            else
                m(i, j).real(x);
        }
    }
}

double parse_number(const std::string& s) {
    auto caret = s.find('^');
    try {
        if (caret == std::string::npos) return std::stod(s);
        return std::pow(std::stod(s.substr(0, caret)), std::stod(s.substr(caret + 1)));
    } catch (const std::exception&) {
        throw ConfigError("cannot parse grid value '" + s + "'");
    }
}

}  // namespace

nlohmann::json rep_to_json(const FreeRep& rep) {
    nlohmann::json j;
    j["field"] = field_name(rep.field);
    j["d"] = rep.d;
    j["generators"] = nlohmann::json::array();
    for (int i = 0; i < rep.gens.rank(); ++i) {
        nlohmann::json g;
        g["label"] = rep.gens.labels[i];
        g["re"] = matrix_part(rep.mats[i], false);
        if (!rep.mats[i].imag().isZero(0.0)) g["im"] = matrix_part(rep.mats[i], true);
        j["generators"].push_back(g);
    }
    return j;
}

FreeRep rep_from_json(const nlohmann::json& j) {
    try {
        const int d = j.at("d").get<int>();
        if (d < 1) throw ConfigError("representation dimension must be positive");
        std::vector<std::string> labels;
        std::vector<CMat> mats;
        for (const auto& g : j.at("generators")) {
            labels.push_back(g.at("label").get<std::string>());
            CMat m = CMat::Zero(d, d);
            read_part(g.at("re"), m, false);
            if (g.contains("im")) read_part(g.at("im"), m, true);
            mats.push_back(m);
        }
        if (mats.empty()) throw ConfigError("representation has no generators");
        Field f = j.contains("field") ? field_from_name(j.at("field").get<std::string>()) : Field::C;
        return FreeRep::make(GenSet::make(labels), mats, f);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed representation: ") + e.what());
    }
}

nlohmann::json subgroup_to_json(const SubgroupSpec& H, const GenSet& g) {
    nlohmann::json j;
    j["generators"] = nlohmann::json::array();
    for (const auto& w : H.generators) j["generators"].push_back(word_to_string(w, g));
    return j;
}

SubgroupSpec subgroup_from_json(const nlohmann::json& j, const GenSet& g) {
    SubgroupSpec H;
    try {
        for (const auto& w : j.at("generators")) H.generators.push_back(reduce(parse_word(w.get<std::string>(), g)));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed subgroup: ") + e.what());
    }
    return H;
}

std::string cover_csv(const BallCover& cover, const std::vector<Word>& words, const GenSet& g) {
    std::ostringstream os;
    os.precision(17);
    const int d = cover.empty() ? 0 : cover.balls[0].center.dim();
    os << "index,word,radius";
    for (int k = 0; k < d; ++k) os << ",v" << k << "_re,v" << k << "_im";
    for (int k = 0; k < d; ++k) os << ",w" << k << "_re,w" << k << "_im";
    os << "\n";
    for (size_t i = 0; i < cover.size(); ++i) {
        const Ball& b = cover.balls[i];
        os << i << "," << (i < words.size() ? word_to_string(words[i], g) : "") << "," << b.radius;
        for (int k = 0; k < d; ++k) os << "," << b.center.v()(k).real() << "," << b.center.v()(k).imag();
        for (int k = 0; k < d; ++k) os << "," << b.center.w()(k).real() << "," << b.center.w()(k).imag();
        os << "\n";
    }
    return os.str();
}

std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) return default_grid();
    std::vector<double> out;
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        // Powers of two between the endpoints, largest first.
        double lo = parse_number(text.substr(0, colon)), hi = parse_number(text.substr(colon + 1));
        if (!(lo > 0) || !(hi > 0)) throw ConfigError("grid endpoints must be positive");
        int a = static_cast<int>(std::lround(std::log2(std::max(lo, hi))));
        int b = static_cast<int>(std::lround(std::log2(std::min(lo, hi))));
        for (int k = a; k >= b; --k) out.push_back(std::ldexp(1.0, k));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double x = parse_number(item);
        if (!(x > 0)) throw ConfigError("grid values must be positive");
        out.push_back(x);
    }
    if (out.empty()) throw ConfigError("empty grid");
    return out;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace anosov
