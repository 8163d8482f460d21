#pragma once

#include "nnml/search.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace nnml {

// Reserved label for the neighbourhood constant.
inline const std::string kTau = "tau";

// A positive term is a multiset of neighbourhood labels; a negative term is
// its overline. Labels are kept sorted.
struct NbTerm {
    std::vector<std::string> labels;
    bool negative = false;

    static NbTerm of(std::vector<std::string> labels, bool negative = false);
    static NbTerm tau(bool negative = false) { return of({kTau}, negative); }

    NbTerm bar() const;
    NbTerm positive() const;
    bool is_tau() const { return labels.size() == 1 && labels[0] == kTau; }
    auto operator<=>(const NbTerm&) const = default;
    std::string str() const;
};

// Multiset union of two positive terms.
NbTerm compose(const NbTerm& t, const NbTerm& s);

enum class LKind { Pair, ForcesAll, Member, World, ForcesEx };

struct LFormula {
    LKind kind = LKind::World;
    std::string world;  // World, Member, Pair
    NbTerm term;        // ForcesAll, ForcesEx, Member, Pair
    Formula formula;    // World, ForcesAll, ForcesEx

    static LFormula at(std::string x, Formula f);
    static LFormula forces_all(NbTerm t, Formula f);
    static LFormula forces_ex(NbTerm t, Formula f);
    static LFormula member(std::string x, NbTerm t);
    static LFormula pair(NbTerm t, std::string x);

    std::strong_ordering operator<=>(const LFormula& o) const;
    bool operator==(const LFormula& o) const { return (*this <=> o) == 0; }
    std::string str() const;
};

struct LSequent {
    std::vector<LFormula> ante;  // sorted multisets
    std::vector<LFormula> succ;

    void add_ante(LFormula f);
    void add_succ(LFormula f);
    bool remove_ante(const LFormula& f);
    bool remove_succ(const LFormula& f);
    bool in_ante(const LFormula& f) const;
    bool in_succ(const LFormula& f) const;
    std::size_t count_ante(const LFormula& f) const;
    // Every world and neighbourhood label occurring anywhere.
    std::vector<std::string> labels() const;
    bool mentions(const std::string& label) const;

    bool operator==(const LSequent&) const = default;
    std::string str() const;
};

enum class LRule {
    Init, BotL, TopR,
    AndL, AndR, OrL, OrR, ImpL, ImpR,
    BoxL, BoxR, M, N, C,
    ForallL, ForallR, ExistsL, ExistsR,
    Dec, DecBar, TauBar,
};

std::string lrule_name(LRule r);

// One rule application. The principal list holds the occurrences the rule
// acts on, in the order fixed per rule; fresh carries the eigenlabel (or the
// world for N); split is the first half of a dec / dec-bar decomposition.
struct LStep {
    LRule rule = LRule::Init;
    std::vector<LFormula> principal;
    std::string fresh;
    NbTerm split;
};

struct LNode {
    LSequent conclusion;
    LStep step;
    std::vector<LNode> children;

    std::size_t size() const;
};

struct LabelledDerivation {
    LogicSpec logic;
    std::optional<LNode> root;

    std::size_t size() const { return root ? root->size() : 0; }
};

// Premisses of a step applied to s; throws Error naming the violated
// condition.
std::vector<LSequent> lse_premisses(const LSequent& s, const LStep& step, const LogicSpec& l);

LSequent translate_hypersequent(const Hypersequent& h, const LogicSpec& l);
LabelledDerivation translate_derivation(const Derivation& d, const LogicSpec& l);

CheckResult check_labelled(const LabelledDerivation& d);

std::string render_labelled(const LNode& n);

}  // namespace nnml
