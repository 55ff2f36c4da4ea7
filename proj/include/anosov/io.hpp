#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "anosov/certify.hpp"
#include "anosov/flags.hpp"
#include "anosov/words.hpp"

namespace anosov {

// Representation files:
//   {"field": "R", "d": 2,
//    "generators": [{"label": "a", "re": [[3, 0], [0, 0.333]], "im": [[0, 0], [0, 0]]}, ...]}
// "im" may be omitted for real matrices.
nlohmann::json rep_to_json(const FreeRep& rep);
FreeRep rep_from_json(const nlohmann::json& j);

// Subgroup files: {"generators": ["a", "bab^-1"]}.  For HNN runs the optional
// keys "paired" (generators of M-, defaulting to M+) and "gamma" are read by
// the CLI directly.
nlohmann::json subgroup_to_json(const SubgroupSpec& H, const GenSet& g);
SubgroupSpec subgroup_from_json(const nlohmann::json& j, const GenSet& g);

// One row per ball: index, word, radius, then Re/Im of the point and of the
// hyperplane normal.
std::string cover_csv(const BallCover& cover, const std::vector<Word>& words, const GenSet& g);

// "0.1,0.05" or "2^-3:2^-12" (every power of two in between).  Empty gives the
// default grid.
std::vector<double> parse_grid(const std::string& text);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace anosov
