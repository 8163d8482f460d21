#pragma once

#include "nnml/hypersequent.hpp"
#include "nnml/logic.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nnml {

// Principal material of a rule application inside one component. Formulas
// are the principal formula occurrences (the boxed succedent formula for
// BoxR/BoxRm), blocks are indices into the component's block list.
struct Principal {
    std::vector<Formula> formulas;
    std::vector<int> blocks;
    bool operator==(const Principal&) const = default;
};

struct RuleInstance {
    RuleId rule;
    int target = 0;  // component id
    Principal principal;
    std::vector<Hypersequent> premisses;

    std::string str(const Hypersequent& conclusion) const;
};

bool is_initial(const Hypersequent& h);
// Which closing condition holds, and in which component.
std::optional<std::pair<RuleId, int>> initial_reason(const Hypersequent& h);

// Premisses of one rule application in kleene'd form, with no loop check.
// Formulas already present on the same side of the target component are not
// added a second time.
std::vector<Hypersequent> build_premisses(const Hypersequent& h, RuleId rule, int target, const Principal& p);

// Enumerates loop-checked instances in the fixed global order; the visitor
// returns false to stop.
void for_each_instance(const Hypersequent& h, const LogicSpec& l, const std::function<bool(RuleInstance&&)>& visit);

std::vector<RuleInstance> applicable_instances(const Hypersequent& h, const LogicSpec& l);
std::optional<RuleInstance> first_instance(const Hypersequent& h, const LogicSpec& l);

// Checks the saturation conditions directly, independent of the instance
// enumerator.
bool is_saturated(const Hypersequent& h, const LogicSpec& l);

}  // namespace nnml
