#pragma once

#include "nnml/logic.hpp"
#include "nnml/random.hpp"

#include <string>
#include <vector>

namespace corpus {

using namespace nnml;

// The eight cube logics crossed with the suffixes {none, T, P, D, D2+, D3+},
// keeping one representative per distinct rule set.
inline std::vector<LogicSpec> logics() {
    std::vector<LogicSpec> out;
    std::vector<std::vector<RuleId>> seen;
    for (const char* base : {"E", "M", "EC", "EN", "ECN", "MC", "MN", "MCN"})
        for (const char* suffix : {"", "T", "P", "D", "D2+", "D3+"}) {
            LogicSpec l = parse_logic_name(std::string(base) + suffix);
            auto rs = rule_set(l);
            if (std::find(seen.begin(), seen.end(), rs) != seen.end()) continue;
            seen.push_back(rs);
            out.push_back(l);
        }
    return out;
}

inline std::vector<Formula> formulas(std::uint64_t seed, int count, int max_size = 25, int max_depth = 3) {
    Rng rng(seed);
    std::uniform_int_distribution<int> size(1, max_size);
    std::vector<Formula> out;
    for (int i = 0; i < count; ++i) out.push_back(random_formula(rng, size(rng), max_depth, {"p", "q", "r"}));
    return out;
}

}  // namespace corpus
