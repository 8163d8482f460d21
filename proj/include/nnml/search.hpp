#pragma once

#include "nnml/calculus.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace nnml {

struct Derivation {
    Hypersequent conclusion;
    RuleId rule;     // Init, BotL or TopR at leaves
    int target = 0;  // component the rule acts on
    Principal principal;
    std::vector<Derivation> children;

    std::size_t node_count() const;
};

struct SearchStats {
    long visited = 0;
    int input_size = 0;
    int max_components = 0;
    int max_component_size = 0;
    int max_blocks = 0;  // per component
};

struct Proved {
    Derivation derivation;
};

struct Refuted {
    Hypersequent leaf;
    std::map<int, int> enumeration;  // component id -> world
};

struct SearchOutcome {
    std::variant<Proved, Refuted> result;
    SearchStats stats;

    bool proved() const { return std::holds_alternative<Proved>(result); }
    const Derivation& derivation() const { return std::get<Proved>(result).derivation; }
    const Refuted& refuted() const { return std::get<Refuted>(result); }
};

struct SearchOptions {
    long budget = 1'000'000;  // visited hypersequents
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(SearchStats s)
        : Error("search budget exhausted after " + std::to_string(s.visited) + " hypersequents"), stats(s) {}
    SearchStats stats;
};

// Budget from NNML_BUDGET, or the default.
long default_budget();

SearchOutcome prove(const Hypersequent& h, const LogicSpec& l, const SearchOptions& opts = {});

struct UnkleenedStats {
    long calls = 0;
    int max_depth = 0;
    long memo_size = 0;
};

bool prove_unkleened(const Hypersequent& h, const LogicSpec& l, UnkleenedStats* stats = nullptr);

struct CheckResult {
    bool ok = true;
    std::string path;  // child indices from the root, e.g. "0.1.0"
    std::string reason;
    explicit operator bool() const { return ok; }
};

CheckResult check_derivation(const Derivation& d, const LogicSpec& l);

std::string render_derivation(const Derivation& d);

}  // namespace nnml
