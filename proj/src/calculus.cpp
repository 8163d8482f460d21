#include "nnml/calculus.hpp"

#include <algorithm>

namespace nnml {

namespace {

std::vector<Formula> distinct(std::vector<Formula> v) {
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Sequent make_sequent(std::vector<Formula> ante, std::vector<Formula> succ) {
    Sequent s;
    s.ante = std::move(ante);
    s.succ = std::move(succ);
    std::sort(s.ante.begin(), s.ante.end());
    std::sort(s.succ.begin(), s.succ.end());
    return s;
}

bool subsumed_by_any(const Sequent& s, const Hypersequent& h) {
    for (const Component& c : h.comps)
        if (subsumes(s, c.seq)) return true;
    return false;
}

Hypersequent with_component(const Hypersequent& h, Sequent s) {
    Hypersequent out = h;
    out.comps.push_back({h.next_id(), std::move(s)});
    return out;
}

const Component& component(const Hypersequent& h, int id) {
    const Component* c = h.find(id);
    if (!c) throw Error("no component with id " + std::to_string(id));
    return *c;
}

std::vector<Formula> concat_blocks(const Sequent& s, const std::vector<int>& idx) {
    std::vector<Formula> out;
    for (int i : idx) out.insert(out.end(), s.blocks[i].members.begin(), s.blocks[i].members.end());
    return out;
}

// Combinations of k indices out of n, skipping repeats caused by equal
// neighbouring blocks (the block list is sorted).
template <class F>
bool for_each_combination(const std::vector<Block>& blocks, int k, F&& f) {
    int n = static_cast<int>(blocks.size());
    if (k > n || k <= 0) return true;
    std::vector<int> idx(k);
    auto rec = [&](auto&& self, int pos, int start) -> bool {
        if (pos == k) return f(idx);
        for (int i = start; i < n; ++i) {
            if (i > start && blocks[i] == blocks[i - 1]) continue;
            idx[pos] = i;
            if (!self(self, pos + 1, i + 1)) return false;
        }
        return true;
    };
    return rec(rec, 0, 0);
}

struct Adds {
    std::vector<Formula> ante, succ;
    std::vector<Block> blocks;
};

Hypersequent apply_adds(const Hypersequent& h, int target, const Adds& a) {
    Hypersequent out = h;
    Sequent& s = out.find(target)->seq;
    for (Formula f : a.ante) s.absorb_ante(f);
    for (Formula f : a.succ) s.absorb_succ(f);
    for (const Block& b : a.blocks) s.add_block(b);
    return out;
}

bool adds_something(const Sequent& s, const Adds& a) {
    for (Formula f : a.ante)
        if (!s.in_ante(f)) return true;
    for (Formula f : a.succ)
        if (!s.in_succ(f)) return true;
    for (const Block& b : a.blocks)
        if (!s.has_block_set(b.set())) return true;
    return false;
}

// A rule's effect on the target component, either additions per premiss or
// new components per premiss.
struct Effect {
    std::vector<Adds> local;
    std::vector<Sequent> created;
};

Effect effect(const Sequent& s, RuleId rule, const Principal& p) {
    Effect e;
    auto need_formula = [&](Kind k, bool left) -> Formula {
        if (p.formulas.size() != 1) throw Error(rule.str() + ": expected one principal formula");
        Formula f = p.formulas[0];
        if (!f.is(k)) throw Error(rule.str() + ": principal has the wrong shape");
        if (left ? !s.in_ante(f) : !s.in_succ(f)) throw Error(rule.str() + ": principal not in component");
        return f;
    };
    auto need_blocks = [&](std::size_t n) {
        if (p.blocks.size() != n) throw Error(rule.str() + ": wrong number of principal blocks");
        for (std::size_t i = 0; i < n; ++i) {
            if (p.blocks[i] < 0 || p.blocks[i] >= static_cast<int>(s.blocks.size()))
                throw Error(rule.str() + ": block index out of range");
            for (std::size_t j = 0; j < i; ++j)
                if (p.blocks[i] == p.blocks[j]) throw Error(rule.str() + ": principal blocks must be distinct");
        }
    };
    switch (rule.rule) {
    case Rule::AndL: {
        Formula f = need_formula(Kind::And, true);
        e.local.push_back({{f.left(), f.right()}, {}, {}});
        break;
    }
    case Rule::OrL: {
        Formula f = need_formula(Kind::Or, true);
        e.local.push_back({{f.left()}, {}, {}});
        e.local.push_back({{f.right()}, {}, {}});
        break;
    }
    case Rule::ImpR: {
        Formula f = need_formula(Kind::Imp, false);
        e.local.push_back({{f.left()}, {f.right()}, {}});
        break;
    }
    case Rule::AndR: {
        Formula f = need_formula(Kind::And, false);
        e.local.push_back({{}, {f.left()}, {}});
        e.local.push_back({{}, {f.right()}, {}});
        break;
    }
    case Rule::OrR: {
        Formula f = need_formula(Kind::Or, false);
        e.local.push_back({{}, {f.left(), f.right()}, {}});
        break;
    }
    case Rule::ImpL: {
        Formula f = need_formula(Kind::Imp, true);
        e.local.push_back({{}, {f.left()}, {}});
        e.local.push_back({{f.right()}, {}, {}});
        break;
    }
    case Rule::BoxL: {
        Formula f = need_formula(Kind::Box, true);
        e.local.push_back({{}, {}, {Block({f.body()})}});
        break;
    }
    case Rule::T: {
        need_blocks(1);
        e.local.push_back({s.blocks[p.blocks[0]].members, {}, {}});
        break;
    }
    case Rule::C: {
        need_blocks(2);
        e.local.push_back({{}, {}, {Block(concat_blocks(s, p.blocks))}});
        break;
    }
    case Rule::N: {
        if (!p.formulas.empty() || !p.blocks.empty()) throw Error("N takes no principal material");
        e.local.push_back({{}, {}, {Block({Formula::top()})}});
        break;
    }
    case Rule::BoxR:
    case Rule::BoxRm: {
        need_blocks(1);
        Formula b = need_formula(Kind::Box, false).body();
        const Block& sigma = s.blocks[p.blocks[0]];
        e.created.push_back(make_sequent(sigma.members, {b}));
        if (rule.rule == Rule::BoxR)
            for (Formula a : sigma.set()) e.created.push_back(make_sequent({b}, {a}));
        break;
    }
    case Rule::P: {
        need_blocks(1);
        e.created.push_back(make_sequent(s.blocks[p.blocks[0]].members, {}));
        break;
    }
    case Rule::D1: {
        need_blocks(1);
        const Block& sigma = s.blocks[p.blocks[0]];
        e.created.push_back(make_sequent(sigma.members, {}));
        for (Formula a : sigma.set()) e.created.push_back(make_sequent({}, {a}));
        break;
    }
    case Rule::D2: {
        need_blocks(2);
        const Block& sigma = s.blocks[p.blocks[0]];
        const Block& pi = s.blocks[p.blocks[1]];
        e.created.push_back(make_sequent(concat_blocks(s, p.blocks), {}));
        for (Formula a : sigma.set())
            for (Formula b : pi.set()) e.created.push_back(make_sequent({}, {a, b}));
        break;
    }
    case Rule::DnPlus: {
        need_blocks(static_cast<std::size_t>(rule.arity));
        e.created.push_back(make_sequent(concat_blocks(s, p.blocks), {}));
        break;
    }
    default:
        throw Error("rule " + rule.str() + " has no premisses");
    }
    return e;
}

std::vector<Hypersequent> premisses_of(const Hypersequent& h, int target, const Effect& e) {
    std::vector<Hypersequent> out;
    for (const Adds& a : e.local) out.push_back(apply_adds(h, target, a));
    for (const Sequent& s : e.created) out.push_back(with_component(h, s));
    return out;
}

bool passes_loop_check(const Hypersequent& h, const Sequent& target, const Effect& e) {
    for (const Adds& a : e.local)
        if (!adds_something(target, a)) return false;
    for (const Sequent& s : e.created)
        if (subsumed_by_any(s, h)) return false;
    return true;
}

}  // namespace

std::string RuleInstance::str(const Hypersequent& conclusion) const {
    std::string s = rule.str() + " @" + std::to_string(target);
    const Component* c = conclusion.find(target);
    for (Formula f : principal.formulas) s += " " + print_in_sequent(f);
    if (c)
        for (int b : principal.blocks) s += " " + c->seq.blocks[b].str();
    return s;
}

std::optional<std::pair<RuleId, int>> initial_reason(const Hypersequent& h) {
    for (const Component& c : h.comps) {
        const Sequent& s = c.seq;
        if (s.in_ante(Formula::bottom())) return std::pair{RuleId{Rule::BotL}, c.id};
        if (s.in_succ(Formula::top())) return std::pair{RuleId{Rule::TopR}, c.id};
        for (Formula f : s.ante)
            if (s.in_succ(f)) return std::pair{RuleId{Rule::Init}, c.id};
    }
    return std::nullopt;
}

bool is_initial(const Hypersequent& h) { return initial_reason(h).has_value(); }

std::vector<Hypersequent> build_premisses(const Hypersequent& h, RuleId rule, int target, const Principal& p) {
    return premisses_of(h, target, effect(component(h, target).seq, rule, p));
}

void for_each_instance(const Hypersequent& h, const LogicSpec& l, const std::function<bool(RuleInstance&&)>& visit) {
    auto try_instance = [&](RuleId r, const Component& c, Principal p) -> bool {
        Effect e = effect(c.seq, r, p);
        if (!passes_loop_check(h, c.seq, e)) return true;
        RuleInstance inst{r, c.id, std::move(p), premisses_of(h, c.id, e)};
        return visit(std::move(inst));
    };
    for (RuleId r : rule_set(l)) {
        for (const Component& c : h.comps) {
            const Sequent& s = c.seq;
            auto over = [&](const std::vector<Formula>& side, Kind k) -> bool {
                for (Formula f : distinct(side))
                    if (f.is(k) && !try_instance(r, c, {{f}, {}})) return false;
                return true;
            };
            bool go = true;
            switch (r.rule) {
            case Rule::AndL: go = over(s.ante, Kind::And); break;
            case Rule::OrL: go = over(s.ante, Kind::Or); break;
            case Rule::ImpR: go = over(s.succ, Kind::Imp); break;
            case Rule::AndR: go = over(s.succ, Kind::And); break;
            case Rule::OrR: go = over(s.succ, Kind::Or); break;
            case Rule::ImpL: go = over(s.ante, Kind::Imp); break;
            case Rule::BoxL: go = over(s.ante, Kind::Box); break;
            case Rule::N: go = try_instance(r, c, {}); break;
            case Rule::T:
            case Rule::P:
            case Rule::D1:
                go = for_each_combination(s.blocks, 1, [&](const std::vector<int>& idx) {
                    return try_instance(r, c, {{}, idx});
                });
                break;
            case Rule::C:
            case Rule::D2:
                go = for_each_combination(s.blocks, 2, [&](const std::vector<int>& idx) {
                    return try_instance(r, c, {{}, idx});
                });
                break;
            case Rule::DnPlus:
                go = for_each_combination(s.blocks, r.arity, [&](const std::vector<int>& idx) {
                    return try_instance(r, c, {{}, idx});
                });
                break;
            case Rule::BoxR:
            case Rule::BoxRm:
                go = for_each_combination(s.blocks, 1, [&](const std::vector<int>& idx) {
                    for (Formula f : distinct(s.succ))
                        if (f.is(Kind::Box) && !try_instance(r, c, {{f}, idx})) return false;
                    return true;
                });
                break;
            default: break;
            }
            if (!go) return;
        }
    }
}

std::vector<RuleInstance> applicable_instances(const Hypersequent& h, const LogicSpec& l) {
    std::vector<RuleInstance> out;
    if (is_initial(h)) return out;
    for_each_instance(h, l, [&](RuleInstance&& i) {
        out.push_back(std::move(i));
        return true;
    });
    return out;
}

std::optional<RuleInstance> first_instance(const Hypersequent& h, const LogicSpec& l) {
    std::optional<RuleInstance> out;
    for_each_instance(h, l, [&](RuleInstance&& i) {
        out = std::move(i);
        return false;
    });
    return out;
}

// ------------------------------------------------------------- saturation

namespace {

bool subset_of(const std::vector<Formula>& xs, const std::vector<Formula>& sorted) {
    for (Formula x : xs)
        if (!std::binary_search(sorted.begin(), sorted.end(), x)) return false;
    return true;
}

bool some_component(const Hypersequent& h, const std::vector<Formula>& left, const std::vector<Formula>& right) {
    for (const Component& c : h.comps)
        if (subset_of(left, c.seq.ante) && subset_of(right, c.seq.succ)) return true;
    return false;
}

bool component_saturated(const Hypersequent& h, const Sequent& s, const LogicSpec& l) {
    for (Formula f : s.ante) {
        switch (f.kind()) {
        case Kind::And:
            if (!s.in_ante(f.left()) || !s.in_ante(f.right())) return false;
            break;
        case Kind::Or:
            if (!s.in_ante(f.left()) && !s.in_ante(f.right())) return false;
            break;
        case Kind::Imp:
            if (!s.in_succ(f.left()) && !s.in_ante(f.right())) return false;
            break;
        case Kind::Box:
            if (!s.has_block_set({f.body()})) return false;
            break;
        default: break;
        }
    }
    for (Formula f : s.succ) {
        switch (f.kind()) {
        case Kind::And:
            if (!s.in_succ(f.left()) && !s.in_succ(f.right())) return false;
            break;
        case Kind::Or:
            if (!s.in_succ(f.left()) || !s.in_succ(f.right())) return false;
            break;
        case Kind::Imp:
            if (!s.in_ante(f.left()) || !s.in_succ(f.right())) return false;
            break;
        default: break;
        }
    }
    const auto& bs = s.blocks;
    const std::size_t nb = bs.size();
    if (l.has_n && !s.has_block_set({Formula::top()})) return false;
    for (std::size_t i = 0; i < nb; ++i) {
        std::vector<Formula> sigma = bs[i].set();
        if (l.has_t && !subset_of(sigma, s.ante)) return false;
        for (Formula f : s.succ) {
            if (!f.is(Kind::Box)) continue;
            Formula b = f.body();
            bool ok = some_component(h, sigma, {b});
            if (!l.monotonic)
                for (Formula a : sigma) ok = ok || some_component(h, {b}, {a});
            if (!ok) return false;
        }
        if (l.has_p && !some_component(h, sigma, {})) return false;
        if (l.has_d && !l.monotonic) {
            bool ok = some_component(h, sigma, {});
            for (Formula a : sigma) ok = ok || some_component(h, {}, {a});
            if (!ok) return false;
        }
        for (std::size_t j = i + 1; j < nb; ++j) {
            std::vector<Formula> pi = bs[j].set();
            std::vector<Formula> both;
            std::set_union(sigma.begin(), sigma.end(), pi.begin(), pi.end(), std::back_inserter(both));
            if (l.has_c && !s.has_block_set(both)) return false;
            if (l.has_d && !l.monotonic) {
                bool ok = some_component(h, both, {});
                for (Formula a : sigma)
                    for (Formula b : pi) ok = ok || some_component(h, {}, {a, b});
                if (!ok) return false;
            }
        }
    }
    int n = 0;
    if (l.has_d && l.monotonic) n = 2;
    if (l.dplus) n = std::max(n, *l.dplus);
    for (int k = 1; k <= n; ++k) {
        bool ok = for_each_combination(bs, k, [&](const std::vector<int>& idx) {
            std::vector<Formula> all;
            for (int i : idx) {
                auto st = bs[i].set();
                all.insert(all.end(), st.begin(), st.end());
            }
            return some_component(h, all, {});
        });
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool is_saturated(const Hypersequent& h, const LogicSpec& l) {
    if (is_initial(h)) return false;
    for (const Component& c : h.comps)
        if (!component_saturated(h, c.seq, l)) return false;
    return true;
}

}  // namespace nnml
