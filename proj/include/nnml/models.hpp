#pragma once

#include "nnml/hypersequent.hpp"
#include "nnml/logic.hpp"

#include <compare>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace nnml {

using World = int;
using WorldSet = std::set<World>;
using Valuation = std::map<std::string, WorldSet>;

struct BiPair {
    WorldSet plus;   // alpha
    WorldSet minus;  // beta
    auto operator<=>(const BiPair&) const = default;
};

struct BiModel {
    WorldSet worlds;
    Valuation valuation;
    std::map<World, std::set<BiPair>> nbhd;
};

struct StandardModel {
    WorldSet worlds;
    Valuation valuation;
    std::map<World, std::set<WorldSet>> nbhd;
};

struct RelationalModel {
    WorldSet worlds;
    WorldSet non_normal;
    std::map<World, WorldSet> relation;
    Valuation valuation;
};

using AnyModel = std::variant<BiModel, StandardModel, RelationalModel>;

WorldSet truth_set(const BiModel& m, Formula f);
WorldSet truth_set(const StandardModel& m, Formula f);
WorldSet truth_set(const RelationalModel& m, Formula f);

bool force(const BiModel& m, World w, Formula f);
bool force(const StandardModel& m, World w, Formula f);
bool force(const RelationalModel& m, World w, Formula f);
bool force(const AnyModel& m, World w, Formula f);

enum class CondStatus { Pass, Fail, Unchecked };

struct ConditionResult {
    std::string name;
    CondStatus status = CondStatus::Pass;
    std::string witness;
};

struct ConditionReport {
    std::vector<ConditionResult> items;
    bool ok() const;
    const ConditionResult* find(const std::string& name) const;
    std::string str() const;
};

ConditionReport check_conditions(const BiModel& m, const LogicSpec& l);
ConditionReport check_conditions(const StandardModel& m, const LogicSpec& l);
ConditionReport check_conditions(const RelationalModel& m, const LogicSpec& l);
ConditionReport check_conditions(const AnyModel& m, const LogicSpec& l);

BiModel extract_bi_countermodel(const Hypersequent& leaf, const std::map<int, int>& enumeration, const LogicSpec& l);
RelationalModel extract_relational_countermodel(const Hypersequent& leaf, const std::map<int, int>& enumeration,
                                                const LogicSpec& l);

BiModel bi_from_standard(const StandardModel& m, bool supplemented);
StandardModel standard_from_bi_rough(const BiModel& m, int world_cap = 20);
bool is_subformula_closed(const std::vector<Formula>& s);
StandardModel standard_from_bi_fine(const BiModel& m, const std::vector<Formula>& s, bool supplement,
                                    int world_cap = 20);
// Adds the unit when l has N and closes under intersection when l has C
// (re-supplementing in monotonic logics). Applied to a fine transformation
// of an l-model this keeps forcing and repairs N and C when the formula set
// lacks box-top or box-conjunctions.
StandardModel close_for_logic(StandardModel m, const LogicSpec& l, int world_cap = 20);

std::size_t model_size(const BiModel& m);
std::size_t model_size(const StandardModel& m);
std::size_t model_size(const RelationalModel& m);
std::size_t model_size(const AnyModel& m);

std::string render(const WorldSet& s);
std::string render(const BiModel& m);
std::string render(const StandardModel& m);
std::string render(const RelationalModel& m);

}  // namespace nnml
