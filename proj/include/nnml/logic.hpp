#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nnml {

struct LogicSpec {
    bool monotonic = false;
    bool has_c = false;
    bool has_n = false;
    bool has_t = false;
    bool has_p = false;
    bool has_d = false;
    std::optional<int> dplus;

    // The eight logics of the classical cube, no deontic or T extensions.
    bool in_cube() const { return !has_t && !has_p && !has_d && !dplus; }
    bool regular() const { return monotonic && has_c; }
    // Largest number of blocks a D-style rule consumes.
    int d_arity() const;

    std::string name() const;
    bool operator==(const LogicSpec&) const = default;
};

LogicSpec parse_logic_name(std::string_view text);
// Axiom letters: E, M, C, N, T, P, D (case-insensitive), plus optional dplus.
LogicSpec logic_from_axioms(const std::vector<std::string>& axioms, std::optional<int> dplus = {});

enum class Rule {
    Init, BotL, TopR, ImpL, ImpR, AndL, AndR, OrL, OrR,
    BoxL, BoxR, BoxRm, N, C, T, P, D1, D2, DnPlus
};

struct RuleId {
    Rule rule = Rule::Init;
    int arity = 0;  // only for DnPlus

    bool operator==(const RuleId&) const = default;
    auto operator<=>(const RuleId&) const = default;
    std::string str() const;
};

std::optional<RuleId> parse_rule_id(std::string_view s);

// Rules of the logic's calculus, in search order. Init/BotL/TopR are not
// listed; they are covered by the initial-hypersequent test.
std::vector<RuleId> rule_set(const LogicSpec& l);
bool has_rule(const LogicSpec& l, RuleId r);

}  // namespace nnml
