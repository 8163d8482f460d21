#include "nnml/labelled.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace nnml {

// ------------------------------------------------------------------ terms

NbTerm NbTerm::of(std::vector<std::string> labels, bool negative) {
    std::sort(labels.begin(), labels.end());
    return NbTerm{std::move(labels), negative};
}

NbTerm NbTerm::bar() const { return NbTerm{labels, true}; }
NbTerm NbTerm::positive() const { return NbTerm{labels, false}; }

std::string NbTerm::str() const {
    std::string s;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) s += ".";
        s += labels[i];
    }
    if (!negative) return s;
    return labels.size() > 1 ? "~(" + s + ")" : "~" + s;
}

NbTerm compose(const NbTerm& t, const NbTerm& s) {
    std::vector<std::string> all = t.labels;
    all.insert(all.end(), s.labels.begin(), s.labels.end());
    return NbTerm::of(std::move(all));
}

// --------------------------------------------------------------- formulas

LFormula LFormula::at(std::string x, Formula f) { return {LKind::World, std::move(x), {}, f}; }
LFormula LFormula::forces_all(NbTerm t, Formula f) { return {LKind::ForcesAll, {}, std::move(t), f}; }
LFormula LFormula::forces_ex(NbTerm t, Formula f) { return {LKind::ForcesEx, {}, std::move(t), f}; }
LFormula LFormula::member(std::string x, NbTerm t) { return {LKind::Member, std::move(x), std::move(t), {}}; }
LFormula LFormula::pair(NbTerm t, std::string x) { return {LKind::Pair, std::move(x), std::move(t), {}}; }

std::strong_ordering LFormula::operator<=>(const LFormula& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = world <=> o.world; c != 0) return c;
    if (auto c = term <=> o.term; c != 0) return c;
    if (formula.null() || o.formula.null()) return formula.null() == o.formula.null()
                                                      ? std::strong_ordering::equal
                                                      : (formula.null() ? std::strong_ordering::less
                                                                        : std::strong_ordering::greater);
    return formula <=> o.formula;
}

namespace {

std::string fstr(Formula f) { return f.is_binary() ? "(" + print(f) + ")" : print(f); }

}  // namespace

std::string LFormula::str() const {
    switch (kind) {
    case LKind::World: return world + ":" + fstr(formula);
    case LKind::ForcesAll: return term.str() + " |=A " + fstr(formula);
    case LKind::ForcesEx: return term.str() + " |=E " + fstr(formula);
    case LKind::Member: return world + " in " + term.str();
    case LKind::Pair: return term.str() + " |> " + world;
    }
    return "?";
}

// --------------------------------------------------------------- sequents

namespace {

void insert_sorted(std::vector<LFormula>& v, LFormula f) { v.insert(std::upper_bound(v.begin(), v.end(), f), std::move(f)); }

bool erase_one(std::vector<LFormula>& v, const LFormula& f) {
    auto it = std::lower_bound(v.begin(), v.end(), f);
    if (it == v.end() || !(*it == f)) return false;
    v.erase(it);
    return true;
}

bool contains(const std::vector<LFormula>& v, const LFormula& f) { return std::binary_search(v.begin(), v.end(), f); }

std::string join(const std::vector<LFormula>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s;
}

}  // namespace

void LSequent::add_ante(LFormula f) { insert_sorted(ante, std::move(f)); }
void LSequent::add_succ(LFormula f) { insert_sorted(succ, std::move(f)); }
bool LSequent::remove_ante(const LFormula& f) { return erase_one(ante, f); }
bool LSequent::remove_succ(const LFormula& f) { return erase_one(succ, f); }
bool LSequent::in_ante(const LFormula& f) const { return contains(ante, f); }
bool LSequent::in_succ(const LFormula& f) const { return contains(succ, f); }

std::size_t LSequent::count_ante(const LFormula& f) const {
    auto [lo, hi] = std::equal_range(ante.begin(), ante.end(), f);
    return static_cast<std::size_t>(hi - lo);
}

std::vector<std::string> LSequent::labels() const {
    std::set<std::string> out;
    for (const auto* side : {&ante, &succ})
        for (const LFormula& f : *side) {
            if (!f.world.empty()) out.insert(f.world);
            for (const std::string& l : f.term.labels)
                if (l != kTau) out.insert(l);
        }
    return {out.begin(), out.end()};
}

bool LSequent::mentions(const std::string& label) const {
    auto ls = labels();
    return std::binary_search(ls.begin(), ls.end(), label);
}

std::string LSequent::str() const {
    std::string l = join(ante), r = join(succ);
    return (l.empty() ? "" : l + " ") + "=>" + (r.empty() ? "" : " " + r);
}

std::size_t LNode::size() const {
    std::size_t n = 1;
    for (const LNode& c : children) n += c.size();
    return n;
}

std::string lrule_name(LRule r) {
    switch (r) {
    case LRule::Init: return "init";
    case LRule::BotL: return "botL";
    case LRule::TopR: return "topR";
    case LRule::AndL: return "andL";
    case LRule::AndR: return "andR";
    case LRule::OrL: return "orL";
    case LRule::OrR: return "orR";
    case LRule::ImpL: return "impL";
    case LRule::ImpR: return "impR";
    case LRule::BoxL: return "boxL";
    case LRule::BoxR: return "boxR";
    case LRule::M: return "M";
    case LRule::N: return "N";
    case LRule::C: return "C";
    case LRule::ForallL: return "L|=A";
    case LRule::ForallR: return "R|=A";
    case LRule::ExistsL: return "L|=E";
    case LRule::ExistsR: return "R|=E";
    case LRule::Dec: return "dec";
    case LRule::DecBar: return "~dec";
    case LRule::TauBar: return "~tau";
    }
    return "?";
}

// ------------------------------------------------------------ rule shapes

std::vector<LSequent> lse_premisses(const LSequent& s, const LStep& step, const LogicSpec& l) {
    const std::string name = lrule_name(step.rule);
    auto fail = [&](const std::string& why) -> Error { return Error(name + ": " + why); };
    const auto& p = step.principal;
    auto arity = [&](std::size_t n) {
        if (p.size() != n) throw fail("expected " + std::to_string(n) + " principal formulas");
    };
    auto in_ante = [&](const LFormula& f) {
        if (!s.in_ante(f)) throw fail(f.str() + " is not in the antecedent");
    };
    auto in_succ = [&](const LFormula& f) {
        if (!s.in_succ(f)) throw fail(f.str() + " is not in the succedent");
    };
    auto world_of = [&](const LFormula& f, Kind k) -> Formula {
        if (f.kind != LKind::World || f.formula.null() || !f.formula.is(k)) throw fail("principal has the wrong shape");
        return f.formula;
    };
    auto fresh = [&]() {
        if (step.fresh.empty() || step.fresh == kTau) throw fail("missing eigenlabel");
        if (s.mentions(step.fresh)) throw fail("label " + step.fresh + " is not fresh");
    };
    auto positive = [&](const NbTerm& t) {
        if (t.negative || t.labels.empty()) throw fail("expected a positive term");
    };
    auto negative = [&](const NbTerm& t) {
        if (!t.negative || t.labels.empty()) throw fail("expected a negative term");
    };

    std::vector<LSequent> out;
    switch (step.rule) {
    case LRule::Init:
        arity(1);
        world_of(p[0], Kind::Atom);
        in_ante(p[0]);
        in_succ(p[0]);
        return out;
    case LRule::BotL:
        arity(1);
        world_of(p[0], Kind::Bottom);
        in_ante(p[0]);
        return out;
    case LRule::TopR:
        arity(1);
        world_of(p[0], Kind::Top);
        in_succ(p[0]);
        return out;
    case LRule::AndL: {
        arity(1);
        Formula f = world_of(p[0], Kind::And);
        in_ante(p[0]);
        LSequent a = s;
        a.remove_ante(p[0]);
        a.add_ante(LFormula::at(p[0].world, f.left()));
        a.add_ante(LFormula::at(p[0].world, f.right()));
        out.push_back(a);
        return out;
    }
    case LRule::OrL: {
        arity(1);
        Formula f = world_of(p[0], Kind::Or);
        in_ante(p[0]);
        for (Formula g : {f.left(), f.right()}) {
            LSequent a = s;
            a.remove_ante(p[0]);
            a.add_ante(LFormula::at(p[0].world, g));
            out.push_back(a);
        }
        return out;
    }
    case LRule::ImpL: {
        arity(1);
        Formula f = world_of(p[0], Kind::Imp);
        in_ante(p[0]);
        LSequent a = s, b = s;
        a.remove_ante(p[0]);
        b.remove_ante(p[0]);
        a.add_succ(LFormula::at(p[0].world, f.left()));
        b.add_ante(LFormula::at(p[0].world, f.right()));
        out.push_back(a);
        out.push_back(b);
        return out;
    }
    case LRule::AndR: {
        arity(1);
        Formula f = world_of(p[0], Kind::And);
        in_succ(p[0]);
        for (Formula g : {f.left(), f.right()}) {
            LSequent a = s;
            a.remove_succ(p[0]);
            a.add_succ(LFormula::at(p[0].world, g));
            out.push_back(a);
        }
        return out;
    }
    case LRule::OrR: {
        arity(1);
        Formula f = world_of(p[0], Kind::Or);
        in_succ(p[0]);
        LSequent a = s;
        a.remove_succ(p[0]);
        a.add_succ(LFormula::at(p[0].world, f.left()));
        a.add_succ(LFormula::at(p[0].world, f.right()));
        out.push_back(a);
        return out;
    }
    case LRule::ImpR: {
        arity(1);
        Formula f = world_of(p[0], Kind::Imp);
        in_succ(p[0]);
        LSequent a = s;
        a.remove_succ(p[0]);
        a.add_ante(LFormula::at(p[0].world, f.left()));
        a.add_succ(LFormula::at(p[0].world, f.right()));
        out.push_back(a);
        return out;
    }
    case LRule::BoxL: {
        arity(1);
        Formula f = world_of(p[0], Kind::Box);
        in_ante(p[0]);
        fresh();
        NbTerm a = NbTerm::of({step.fresh});
        LSequent r = s;
        r.remove_ante(p[0]);
        r.add_ante(LFormula::pair(a, p[0].world));
        r.add_ante(LFormula::forces_all(a, f.body()));
        r.add_succ(LFormula::forces_ex(a.bar(), f.body()));
        out.push_back(r);
        return out;
    }
    case LRule::BoxR: {
        arity(2);
        if (p[0].kind != LKind::Pair) throw fail("first principal must be t |> x");
        positive(p[0].term);
        Formula f = world_of(p[1], Kind::Box);
        if (p[0].world != p[1].world) throw fail("pair and boxed formula sit at different worlds");
        in_ante(p[0]);
        in_succ(p[1]);
        LSequent a = s, b = s;
        a.add_succ(LFormula::forces_all(p[0].term, f.body()));
        b.add_ante(LFormula::forces_ex(p[0].term.bar(), f.body()));
        out.push_back(a);
        out.push_back(b);
        return out;
    }
    case LRule::M: {
        if (!l.monotonic) throw fail("rule M is not available in " + l.name());
        arity(2);
        if (p[0].kind != LKind::Pair || p[1].kind != LKind::Member) throw fail("expected t |> x and y in ~t");
        positive(p[0].term);
        negative(p[1].term);
        if (p[1].term.positive() != p[0].term) throw fail("terms differ");
        in_ante(p[0]);
        in_ante(p[1]);
        return out;
    }
    case LRule::N: {
        if (!l.has_n) throw fail("rule N is not available in " + l.name());
        if (!p.empty()) throw fail("N has no principal formulas");
        if (step.fresh.empty() || !s.mentions(step.fresh)) throw fail("world " + step.fresh + " does not occur");
        LSequent a = s;
        a.add_ante(LFormula::pair(NbTerm::tau(), step.fresh));
        out.push_back(a);
        return out;
    }
    case LRule::C: {
        if (!l.has_c) throw fail("rule C is not available in " + l.name());
        arity(2);
        if (p[0].kind != LKind::Pair || p[1].kind != LKind::Pair) throw fail("expected two pairs");
        if (p[0].world != p[1].world) throw fail("pairs sit at different worlds");
        positive(p[0].term);
        positive(p[1].term);
        if (p[0] == p[1]) {
            if (s.count_ante(p[0]) < 2) throw fail(p[0].str() + " occurs only once");
        } else {
            in_ante(p[0]);
            in_ante(p[1]);
        }
        LSequent a = s;
        a.add_ante(LFormula::pair(compose(p[0].term, p[1].term), p[0].world));
        out.push_back(a);
        return out;
    }
    case LRule::ForallL: {
        arity(2);
        if (p[0].kind != LKind::Member || p[1].kind != LKind::ForcesAll) throw fail("expected x in t and t |=A A");
        positive(p[0].term);
        if (p[0].term != p[1].term) throw fail("terms differ");
        in_ante(p[0]);
        in_ante(p[1]);
        LSequent a = s;
        a.add_ante(LFormula::at(p[0].world, p[1].formula));
        out.push_back(a);
        return out;
    }
    case LRule::ForallR: {
        arity(1);
        if (p[0].kind != LKind::ForcesAll) throw fail("expected t |=A A");
        positive(p[0].term);
        in_succ(p[0]);
        fresh();
        LSequent a = s;
        a.remove_succ(p[0]);
        a.add_ante(LFormula::member(step.fresh, p[0].term));
        a.add_succ(LFormula::at(step.fresh, p[0].formula));
        out.push_back(a);
        return out;
    }
    case LRule::ExistsL: {
        arity(1);
        if (p[0].kind != LKind::ForcesEx) throw fail("expected ~t |=E A");
        negative(p[0].term);
        in_ante(p[0]);
        fresh();
        LSequent a = s;
        a.remove_ante(p[0]);
        a.add_ante(LFormula::member(step.fresh, p[0].term));
        a.add_ante(LFormula::at(step.fresh, p[0].formula));
        out.push_back(a);
        return out;
    }
    case LRule::ExistsR: {
        arity(2);
        if (p[0].kind != LKind::Member || p[1].kind != LKind::ForcesEx) throw fail("expected x in ~t and ~t |=E A");
        negative(p[0].term);
        if (p[0].term != p[1].term) throw fail("terms differ");
        in_ante(p[0]);
        in_succ(p[1]);
        LSequent a = s;
        a.add_succ(LFormula::at(p[0].world, p[1].formula));
        out.push_back(a);
        return out;
    }
    case LRule::Dec:
    case LRule::DecBar: {
        arity(1);
        if (p[0].kind != LKind::Member) throw fail("expected a membership");
        const bool bar = step.rule == LRule::DecBar;
        if (bar) negative(p[0].term);
        else positive(p[0].term);
        in_ante(p[0]);
        positive(step.split);
        std::vector<std::string> rest;
        const auto& all = p[0].term.labels;
        const auto& part = step.split.labels;
        std::set_difference(all.begin(), all.end(), part.begin(), part.end(), std::back_inserter(rest));
        if (!std::includes(all.begin(), all.end(), part.begin(), part.end()) || rest.empty())
            throw fail("split is not a proper decomposition of " + p[0].term.str());
        NbTerm t = NbTerm::of(part, bar), r = NbTerm::of(rest, bar);
        if (bar) {
            LSequent a = s, b = s;
            a.add_ante(LFormula::member(p[0].world, t));
            b.add_ante(LFormula::member(p[0].world, r));
            out.push_back(a);
            out.push_back(b);
        } else {
            LSequent a = s;
            a.add_ante(LFormula::member(p[0].world, t));
            a.add_ante(LFormula::member(p[0].world, r));
            out.push_back(a);
        }
        return out;
    }
    case LRule::TauBar:
        arity(1);
        if (p[0].kind != LKind::Member || p[0].term != NbTerm::tau(true)) throw fail("expected x in ~tau");
        in_ante(p[0]);
        return out;
    }
    throw fail("unknown rule");
}

// ---------------------------------------------------------------- checker

namespace {

CheckResult check_lnode(const LNode& n, const LogicSpec& l, const std::string& path) {
    auto fail = [&](std::string why) { return CheckResult{false, path.empty() ? "root" : path, std::move(why)}; };
    std::vector<LSequent> prem;
    try {
        prem = lse_premisses(n.conclusion, n.step, l);
    } catch (const Error& e) {
        return fail(e.what());
    }
    if (prem.size() != n.children.size())
        return fail(lrule_name(n.step.rule) + " needs " + std::to_string(prem.size()) + " premisses, found " +
                    std::to_string(n.children.size()));
    for (std::size_t i = 0; i < prem.size(); ++i)
        if (!(prem[i] == n.children[i].conclusion))
            return fail("premiss " + std::to_string(i) + " of " + lrule_name(n.step.rule) + " should be " +
                        prem[i].str());
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        auto r = check_lnode(n.children[i], l, path.empty() ? std::to_string(i) : path + "." + std::to_string(i));
        if (!r) return r;
    }
    return {};
}

}  // namespace

CheckResult check_labelled(const LabelledDerivation& d) {
    if (!d.root) return CheckResult{false, "root", "empty derivation"};
    if (!d.logic.in_cube()) return CheckResult{false, "root", "logic " + d.logic.name() + " is outside the cube"};
    return check_lnode(*d.root, d.logic, "");
}

// ------------------------------------------------------------ translation

namespace {

struct BlockEntry {
    Block block;
    NbTerm term;
    std::vector<std::pair<std::string, Formula>> parts;  // label and the formula it carries
};

struct TState {
    LSequent seq;
    std::map<int, std::string> world;
    std::map<int, std::vector<BlockEntry>> blocks;
};

std::string fresh_label(const LSequent& s, const std::string& base) {
    auto used = s.labels();
    std::string c = base;
    while (std::binary_search(used.begin(), used.end(), c)) c += "'";
    return c;
}

void add_block(TState& st, int comp, const std::string& x, BlockEntry e) {
    st.seq.add_ante(LFormula::pair(e.term, x));
    for (auto& [lab, f] : e.parts) {
        NbTerm t = NbTerm::of({lab});
        st.seq.add_ante(LFormula::forces_all(t, f));
        st.seq.add_succ(LFormula::forces_ex(t.bar(), f));
    }
    st.blocks[comp].push_back(std::move(e));
}

TState root_state(const Hypersequent& h) {
    TState st;
    const NbTerm* first_term = nullptr;
    for (std::size_t p = 0; p < h.comps.size(); ++p) {
        const Component& c = h.comps[p];
        const std::string x = "x" + std::to_string(c.id);
        st.world[c.id] = x;
        for (Formula f : c.seq.ante) st.seq.add_ante(LFormula::at(x, f));
        for (Formula f : c.seq.succ) st.seq.add_succ(LFormula::at(x, f));
        if (p > 0 && first_term) st.seq.add_ante(LFormula::member(x, *first_term));
        for (std::size_t i = 0; i < c.seq.blocks.size(); ++i) {
            const Block& b = c.seq.blocks[i];
            const bool top = b.set() == std::vector<Formula>{Formula::top()};
            BlockEntry e{b, {}, {}};
            std::vector<std::string> labs;
            for (std::size_t j = 0; j < b.members.size(); ++j) {
                std::string lab = top ? kTau
                                      : "a" + std::to_string(c.id) + "_" + std::to_string(i + 1) + "_" +
                                            std::to_string(j + 1);
                labs.push_back(lab);
                e.parts.push_back({lab, b.members[j]});
            }
            e.term = NbTerm::of(labs);
            add_block(st, c.id, x, std::move(e));
        }
        if (!first_term && !st.blocks[c.id].empty()) first_term = &st.blocks[c.id].front().term;
    }
    return st;
}

bool loosely_equal(const Hypersequent& a, const Hypersequent& b) {
    if (a.comps.size() != b.comps.size()) return false;
    for (std::size_t i = 0; i < a.comps.size(); ++i) {
        const Sequent& s = a.comps[i].seq;
        const Sequent& t = b.comps[i].seq;
        auto set = [](std::vector<Formula> v) {
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return v;
        };
        if (a.comps[i].id != b.comps[i].id || set(s.ante) != set(t.ante) || set(s.succ) != set(t.succ) ||
            s.blocks != t.blocks)
            return false;
    }
    return true;
}

const Derivation& child_for(const Derivation& d, const Hypersequent& h) {
    for (const Derivation& c : d.children)
        if (c.conclusion == h) return c;
    for (const Derivation& c : d.children)
        if (loosely_equal(c.conclusion, h)) return c;
    throw Error("no premiss of " + d.rule.str() + " matches " + h.str());
}

class Translator {
public:
    explicit Translator(LogicSpec l) : l_(l) {}

    LNode node(const Derivation& d, const TState& st);

private:
    using Cont = std::function<LNode(LSequent)>;

    LogicSpec l_;

    LNode make(const LSequent& s, LStep step, const std::function<LNode(std::size_t, LSequent)>& k) {
        LNode n{s, step, {}};
        auto prem = lse_premisses(s, n.step, l_);
        for (std::size_t i = 0; i < prem.size(); ++i) n.children.push_back(k(i, std::move(prem[i])));
        return n;
    }

    LNode unary(const LSequent& s, LStep step, const Cont& k) {
        return make(s, std::move(step), [&](std::size_t, LSequent p) { return k(std::move(p)); });
    }

    std::optional<LNode> axiom(const LSequent& s);
    LNode split_dec(const LSequent& s, const std::string& y, const NbTerm& t, const Cont& k);
    LNode pi1(const LSequent& s, const BlockEntry& e, Formula b, const std::string& base,
              const std::function<LNode(LSequent, std::string)>& k);
    LNode pi2(const LSequent& s, const BlockEntry& e, Formula b, const std::string& x, const std::string& base,
              const std::function<LNode(LSequent, std::string, Formula)>& k);
    LNode branch_bar(const LSequent& s, const std::string& z, const NbTerm& t, const BlockEntry& e,
                     const std::function<LNode(LSequent, std::string, Formula)>& k);

    bool left_ev(const LSequent& s, const std::string& x, Formula f);
    bool right_ev(const LSequent& s, const std::string& x, Formula f);
    std::optional<NbTerm> box_term(const LSequent& s, const std::string& x, Formula a);
    LNode goal(const LSequent& s, const std::string& x, Formula f);
    LNode leaf(const Derivation& d, const TState& st);
};

std::optional<LNode> Translator::axiom(const LSequent& s) {
    auto leaf = [&](LRule r, std::vector<LFormula> p) { return LNode{s, LStep{r, std::move(p), {}, {}}, {}}; };
    for (const LFormula& f : s.ante) {
        if (f.kind == LKind::World && f.formula.is(Kind::Bottom)) return leaf(LRule::BotL, {f});
        if (f.kind == LKind::World && f.formula.is(Kind::Atom) && s.in_succ(f)) return leaf(LRule::Init, {f});
        if (f.kind == LKind::Member && f.term == NbTerm::tau(true)) return leaf(LRule::TauBar, {f});
        if (l_.monotonic && f.kind == LKind::Member && f.term.negative) {
            for (const LFormula& g : s.ante)
                if (g.kind == LKind::Pair && g.term == f.term.positive()) return leaf(LRule::M, {g, f});
        }
    }
    for (const LFormula& f : s.succ)
        if (f.kind == LKind::World && f.formula.is(Kind::Top)) return leaf(LRule::TopR, {f});
    return std::nullopt;
}

LNode Translator::split_dec(const LSequent& s, const std::string& y, const NbTerm& t, const Cont& k) {
    if (t.labels.size() <= 1) return k(s);
    NbTerm head = NbTerm::of({t.labels[0]});
    NbTerm rest = NbTerm::of({t.labels.begin() + 1, t.labels.end()});
    return unary(s, {LRule::Dec, {LFormula::member(y, t)}, {}, head},
                 [&](LSequent p) { return split_dec(p, y, rest, k); });
}

// R|=A on t |=A B, then decompose the membership and pull every block
// formula into the new world.
LNode Translator::pi1(const LSequent& s, const BlockEntry& e, Formula b, const std::string& base,
                      const std::function<LNode(LSequent, std::string)>& k) {
    const std::string y = fresh_label(s, base);
    return unary(s, {LRule::ForallR, {LFormula::forces_all(e.term, b)}, y, {}}, [&](LSequent p) {
        return split_dec(p, y, e.term, [&](LSequent q) {
            std::function<LNode(LSequent, std::size_t)> pull = [&](LSequent r, std::size_t i) -> LNode {
                if (i == e.parts.size()) return k(std::move(r), y);
                const auto& [lab, a] = e.parts[i];
                NbTerm t = NbTerm::of({lab});
                LFormula fa = LFormula::forces_all(t, a);
                if (!r.in_ante(fa)) {
                    if (lab == kTau) return pull(std::move(r), i + 1);
                    throw Error("missing " + fa.str());
                }
                return unary(r, {LRule::ForallL, {LFormula::member(y, t), fa}, {}, {}},
                             [&](LSequent u) { return pull(std::move(u), i + 1); });
            };
            return pull(std::move(q), 0);
        });
    });
}

LNode Translator::branch_bar(const LSequent& s, const std::string& z, const NbTerm& t, const BlockEntry& e,
                             const std::function<LNode(LSequent, std::string, Formula)>& k) {
    if (t.labels.size() > 1) {
        NbTerm head = NbTerm::of({t.labels[0]});
        NbTerm rest = NbTerm::of({t.labels.begin() + 1, t.labels.end()}, true);
        return make(s, {LRule::DecBar, {LFormula::member(z, t)}, {}, head}, [&](std::size_t i, LSequent p) {
            return i == 0 ? branch_bar(p, z, head.bar(), e, k) : branch_bar(p, z, rest, e, k);
        });
    }
    const std::string& lab = t.labels[0];
    if (lab == kTau) return LNode{s, LStep{LRule::TauBar, {LFormula::member(z, t)}, {}, {}}, {}};
    auto it = std::find_if(e.parts.begin(), e.parts.end(), [&](const auto& pr) { return pr.first == lab; });
    if (it == e.parts.end()) throw Error("label " + lab + " carries no formula");
    Formula a = it->second;
    LFormula fe = LFormula::forces_ex(t, a);
    return unary(s, {LRule::ExistsR, {LFormula::member(z, t), fe}, {}, {}},
                 [&](LSequent p) { return k(std::move(p), z, a); });
}

// L|=E on ~t |=E B; closed by M in monotonic logics, otherwise split the
// negative membership and push each block formula to the right.
LNode Translator::pi2(const LSequent& s, const BlockEntry& e, Formula b, const std::string& x,
                      const std::string& base, const std::function<LNode(LSequent, std::string, Formula)>& k) {
    const std::string z = fresh_label(s, base);
    return unary(s, {LRule::ExistsL, {LFormula::forces_ex(e.term.bar(), b)}, z, {}}, [&](LSequent p) {
        if (l_.monotonic)
            return LNode{p, LStep{LRule::M, {LFormula::pair(e.term, x), LFormula::member(z, e.term.bar())}, {}, {}},
                         {}};
        return branch_bar(p, z, e.term.bar(), e, k);
    });
}

std::optional<NbTerm> Translator::box_term(const LSequent& s, const std::string& x, Formula a) {
    std::optional<NbTerm> best;
    for (const LFormula& f : s.ante) {
        if (f.kind != LKind::Pair || f.world != x || f.term.negative) continue;
        bool ok = true;
        for (const std::string& lab : f.term.labels) {
            NbTerm t = NbTerm::of({lab});
            ok = ok && lab != kTau && s.in_ante(LFormula::forces_all(t, a)) &&
                 (l_.monotonic || s.in_succ(LFormula::forces_ex(t.bar(), a)));
        }
        if (ok && (!best || f.term.labels.size() < best->labels.size())) best = f.term;
    }
    return best;
}

bool Translator::left_ev(const LSequent& s, const std::string& x, Formula f) {
    if (s.in_ante(LFormula::at(x, f))) return true;
    switch (f.kind()) {
    case Kind::And: return left_ev(s, x, f.left()) && left_ev(s, x, f.right());
    case Kind::Or: return left_ev(s, x, f.left()) || left_ev(s, x, f.right());
    case Kind::Imp: return right_ev(s, x, f.left()) || left_ev(s, x, f.right());
    case Kind::Box: return box_term(s, x, f.body()).has_value();
    default: return false;
    }
}

bool Translator::right_ev(const LSequent& s, const std::string& x, Formula f) {
    if (s.in_succ(LFormula::at(x, f))) return true;
    switch (f.kind()) {
    case Kind::And: return right_ev(s, x, f.left()) || right_ev(s, x, f.right());
    case Kind::Or: return right_ev(s, x, f.left()) && right_ev(s, x, f.right());
    case Kind::Imp: return left_ev(s, x, f.left()) && right_ev(s, x, f.right());
    default: return false;
    }
}

// Closes a sequent holding left and right evidence for f at world x.
LNode Translator::goal(const LSequent& s, const std::string& x, Formula f) {
    if (auto a = axiom(s)) return *a;
    const LFormula at = LFormula::at(x, f);
    if (f.is(Kind::Box)) {
        if (!s.in_succ(at)) throw Error("cannot close " + s.str());
        Formula a = f.body();
        auto t = box_term(s, x, a);
        if (!t) {
            if (!s.in_ante(at)) throw Error("cannot close " + s.str());
            return unary(s, {LRule::BoxL, {at}, fresh_label(s, "b"), {}}, [&](LSequent p) { return goal(p, x, f); });
        }
        BlockEntry e{Block({a}), *t, {}};
        for (const std::string& lab : t->labels) e.parts.push_back({lab, a});
        return make(s, {LRule::BoxR, {LFormula::pair(*t, x), at}, {}, {}}, [&](std::size_t i, LSequent p) {
            if (i == 0) return pi1(p, e, a, "y", [&](LSequent q, std::string y) { return goal(q, y, a); });
            return pi2(p, e, a, x, "y", [&](LSequent q, std::string z, Formula) { return goal(q, z, a); });
        });
    }
    auto rule_for = [&](bool left) {
        switch (f.kind()) {
        case Kind::And: return left ? LRule::AndL : LRule::AndR;
        case Kind::Or: return left ? LRule::OrL : LRule::OrR;
        case Kind::Imp: return left ? LRule::ImpL : LRule::ImpR;
        default: throw Error("cannot close " + s.str());
        }
    };
    auto again = [&](std::size_t, LSequent p) { return goal(p, x, f); };
    if (s.in_succ(at)) return make(s, {rule_for(false), {at}, {}, {}}, again);
    if (s.in_ante(at)) return make(s, {rule_for(true), {at}, {}, {}}, again);
    switch (f.kind()) {
    case Kind::And: return goal(s, x, right_ev(s, x, f.left()) ? f.left() : f.right());
    case Kind::Or: return goal(s, x, left_ev(s, x, f.left()) ? f.left() : f.right());
    case Kind::Imp: return goal(s, x, right_ev(s, x, f.left()) ? f.left() : f.right());
    default: throw Error("cannot close " + s.str());
    }
}

LNode Translator::leaf(const Derivation& d, const TState& st) {
    if (auto a = axiom(st.seq)) return *a;
    const Component* c = d.conclusion.find(d.target);
    if (c && d.rule.rule == Rule::Init) {
        const std::string& x = st.world.at(c->id);
        for (Formula f : c->seq.ante)
            if (c->seq.in_succ(f) && left_ev(st.seq, x, f) && right_ev(st.seq, x, f)) return goal(st.seq, x, f);
    }
    throw Error("leaf has no labelled closure: " + st.seq.str());
}

const BlockEntry& entry_for(const TState& st, const Component& c, int index) {
    const Block& b = c.seq.blocks.at(static_cast<std::size_t>(index));
    int rank = 0;
    for (int i = 0; i < index; ++i)
        if (c.seq.blocks[static_cast<std::size_t>(i)] == b) ++rank;
    auto it = st.blocks.find(c.id);
    if (it != st.blocks.end())
        for (const BlockEntry& e : it->second)
            if (e.block == b && rank-- == 0) return e;
    throw Error("block " + b.str() + " has no labelled term");
}

LNode Translator::node(const Derivation& d, const TState& st) {
    const Rule r = d.rule.rule;
    if (r == Rule::Init || r == Rule::BotL || r == Rule::TopR) return leaf(d, st);
    const Component* c = d.conclusion.find(d.target);
    if (!c) throw Error("target component missing");
    const std::string x = st.world.at(c->id);
    const auto hyp = build_premisses(d.conclusion, d.rule, d.target, d.principal);
    auto follow = [&](const Hypersequent& h, TState next) { return node(child_for(d, h), next); };

    switch (r) {
    case Rule::AndL:
    case Rule::OrL:
    case Rule::ImpL:
    case Rule::AndR:
    case Rule::OrR:
    case Rule::ImpR: {
        const bool left = r == Rule::AndL || r == Rule::OrL || r == Rule::ImpL;
        const LFormula at = LFormula::at(x, d.principal.formulas.at(0));
        if (left ? st.seq.in_ante(at) : st.seq.in_succ(at)) {
            static const std::map<Rule, LRule> to = {{Rule::AndL, LRule::AndL}, {Rule::OrL, LRule::OrL},
                                                     {Rule::ImpL, LRule::ImpL}, {Rule::AndR, LRule::AndR},
                                                     {Rule::OrR, LRule::OrR},   {Rule::ImpR, LRule::ImpR}};
            return make(st.seq, {to.at(r), {at}, {}, {}}, [&](std::size_t i, LSequent p) {
                TState next = st;
                next.seq = std::move(p);
                return follow(hyp.at(i), next);
            });
        }
        // Already decomposed on this branch: some premiss repeats the
        // conclusion.
        for (const Hypersequent& h : hyp)
            if (h == d.conclusion) return follow(h, st);
        throw Error(d.rule.str() + " principal is consumed but no premiss repeats the conclusion");
    }
    case Rule::BoxL: {
        Formula f = d.principal.formulas.at(0);
        const LFormula at = LFormula::at(x, f);
        if (st.seq.in_ante(at)) {
            const std::string a =
                fresh_label(st.seq, "a" + std::to_string(c->id) + "_" + std::to_string(st.blocks.count(c->id)
                                                                                            ? st.blocks.at(c->id).size() + 1
                                                                                            : 1));
            return unary(st.seq, {LRule::BoxL, {at}, a, {}}, [&](LSequent p) {
                TState next = st;
                next.seq = std::move(p);
                next.blocks[c->id].push_back({Block({f.body()}), NbTerm::of({a}), {{a, f.body()}}});
                return follow(hyp.at(0), next);
            });
        }
        TState next = st;
        const Block want({f.body()});
        for (const BlockEntry& e : next.blocks[c->id])
            if (e.block == want) {
                BlockEntry alias = e;
                next.blocks[c->id].push_back(std::move(alias));
                return follow(hyp.at(0), next);
            }
        throw Error("boxL principal consumed and no block to share");
    }
    case Rule::C: {
        const BlockEntry& e1 = entry_for(st, *c, d.principal.blocks.at(0));
        const BlockEntry& e2 = entry_for(st, *c, d.principal.blocks.at(1));
        return unary(st.seq, {LRule::C, {LFormula::pair(e1.term, x), LFormula::pair(e2.term, x)}, {}, {}},
                     [&](LSequent p) {
                         TState next = st;
                         next.seq = std::move(p);
                         std::vector<Formula> ms = e1.block.members;
                         ms.insert(ms.end(), e2.block.members.begin(), e2.block.members.end());
                         BlockEntry e{Block(ms), compose(e1.term, e2.term), e1.parts};
                         e.parts.insert(e.parts.end(), e2.parts.begin(), e2.parts.end());
                         next.blocks[c->id].push_back(std::move(e));
                         return follow(hyp.at(0), next);
                     });
    }
    case Rule::N:
        // An empty component leaves no trace in the labelled sequent, and
        // nothing derived from its unit block can close a cube derivation.
        if (!st.seq.mentions(x)) return follow(hyp.at(0), st);
        return unary(st.seq, {LRule::N, {}, x, {}}, [&](LSequent p) {
            TState next = st;
            next.seq = std::move(p);
            next.blocks[c->id].push_back({Block({Formula::top()}), NbTerm::tau(), {{kTau, Formula::top()}}});
            return follow(hyp.at(0), next);
        });
    case Rule::BoxR:
    case Rule::BoxRm: {
        const BlockEntry e = entry_for(st, *c, d.principal.blocks.at(0));
        Formula boxed = d.principal.formulas.at(0);
        Formula b = boxed.body();
        const int id = d.conclusion.next_id();
        const std::string base = "x" + std::to_string(id);
        auto created = [&](const Sequent& s) -> const Hypersequent& {
            for (const Hypersequent& h : hyp)
                if (h.comps.size() == d.conclusion.comps.size() + 1 && h.comps.back().seq == s) return h;
            throw Error("no premiss creates " + s.str());
        };
        return make(st.seq, {LRule::BoxR, {LFormula::pair(e.term, x), LFormula::at(x, boxed)}, {}, {}},
                    [&](std::size_t i, LSequent p) {
                        if (i == 0)
                            return pi1(p, e, b, base, [&](LSequent q, std::string y) {
                                TState next = st;
                                next.seq = std::move(q);
                                next.world[id] = y;
                                return follow(hyp.at(0), next);
                            });
                        return pi2(p, e, b, x, base, [&](LSequent q, std::string z, Formula a) {
                            TState next = st;
                            next.seq = std::move(q);
                            next.world[id] = z;
                            Sequent s;
                            s.ante = {b};
                            s.succ = {a};
                            return follow(created(s), next);
                        });
                    });
    }
    default:
        throw Error("rule " + d.rule.str() + " is outside the classical cube");
    }
}

}  // namespace

LSequent translate_hypersequent(const Hypersequent& h, const LogicSpec& l) {
    if (!l.in_cube()) throw Error("labelled translation needs a logic of the classical cube, not " + l.name());
    return root_state(h).seq;
}

LabelledDerivation translate_derivation(const Derivation& d, const LogicSpec& l) {
    if (!l.in_cube()) throw Error("labelled translation needs a logic of the classical cube, not " + l.name());
    if (auto r = check_derivation(d, l); !r) throw Error("derivation does not check at " + r.path + ": " + r.reason);
    Translator t(l);
    return {l, t.node(d, root_state(d.conclusion))};
}

std::string render_labelled(const LNode& n) {
    std::string out;
    std::function<void(const LNode&, int)> rec = [&](const LNode& m, int indent) {
        out.append(static_cast<std::size_t>(indent) * 2, ' ');
        out += m.conclusion.str() + "   [" + lrule_name(m.step.rule) + "]\n";
        for (const LNode& c : m.children) rec(c, indent + 1);
    };
    rec(n, 0);
    return out;
}

}  // namespace nnml
