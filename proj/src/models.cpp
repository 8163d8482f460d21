#include "nnml/models.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace nnml {

namespace {

WorldSet intersect(const WorldSet& a, const WorldSet& b) {
    WorldSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

WorldSet unite(const WorldSet& a, const WorldSet& b) {
    WorldSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

WorldSet complement(const WorldSet& w, const WorldSet& a) {
    WorldSet out;
    std::set_difference(w.begin(), w.end(), a.begin(), a.end(), std::inserter(out, out.end()));
    return out;
}

bool subset(const WorldSet& a, const WorldSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

bool disjoint(const WorldSet& a, const WorldSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return false;
        if (*i < *j) ++i;
        else ++j;
    }
    return true;
}

// Truth sets are computed bottom-up; only the box clause differs between
// the semantics.
template <class BoxFn>
WorldSet evaluate(const WorldSet& worlds, const Valuation& v, Formula f, BoxFn&& box,
                  std::unordered_map<const FormulaNode*, WorldSet>& memo) {
    if (auto it = memo.find(f.node()); it != memo.end()) return it->second;
    WorldSet out;
    switch (f.kind()) {
    case Kind::Bottom: break;
    case Kind::Top: out = worlds; break;
    case Kind::Atom:
        if (auto it = v.find(f.name()); it != v.end()) out = intersect(it->second, worlds);
        break;
    case Kind::And:
        out = intersect(evaluate(worlds, v, f.left(), box, memo), evaluate(worlds, v, f.right(), box, memo));
        break;
    case Kind::Or:
        out = unite(evaluate(worlds, v, f.left(), box, memo), evaluate(worlds, v, f.right(), box, memo));
        break;
    case Kind::Imp:
        out = unite(complement(worlds, evaluate(worlds, v, f.left(), box, memo)),
                    evaluate(worlds, v, f.right(), box, memo));
        break;
    case Kind::Box: {
        WorldSet body = evaluate(worlds, v, f.body(), box, memo);
        for (World w : worlds)
            if (box(w, body)) out.insert(w);
        break;
    }
    }
    memo.emplace(f.node(), out);
    return out;
}

template <class M>
void require_world(const M& m, World w) {
    if (!m.worlds.count(w)) throw Error("unknown world " + std::to_string(w));
}

}  // namespace

WorldSet truth_set(const BiModel& m, Formula f) {
    std::unordered_map<const FormulaNode*, WorldSet> memo;
    auto box = [&](World w, const WorldSet& t) {
        auto it = m.nbhd.find(w);
        if (it == m.nbhd.end()) return false;
        for (const BiPair& p : it->second)
            if (subset(p.plus, t) && disjoint(t, p.minus)) return true;
        return false;
    };
    return evaluate(m.worlds, m.valuation, f, box, memo);
}

WorldSet truth_set(const StandardModel& m, Formula f) {
    std::unordered_map<const FormulaNode*, WorldSet> memo;
    auto box = [&](World w, const WorldSet& t) {
        auto it = m.nbhd.find(w);
        return it != m.nbhd.end() && it->second.count(t) > 0;
    };
    return evaluate(m.worlds, m.valuation, f, box, memo);
}

WorldSet truth_set(const RelationalModel& m, Formula f) {
    std::unordered_map<const FormulaNode*, WorldSet> memo;
    auto box = [&](World w, const WorldSet& t) {
        if (m.non_normal.count(w)) return false;
        auto it = m.relation.find(w);
        return it == m.relation.end() || subset(it->second, t);
    };
    return evaluate(m.worlds, m.valuation, f, box, memo);
}

bool force(const BiModel& m, World w, Formula f) {
    require_world(m, w);
    return truth_set(m, f).count(w) > 0;
}
bool force(const StandardModel& m, World w, Formula f) {
    require_world(m, w);
    return truth_set(m, f).count(w) > 0;
}
bool force(const RelationalModel& m, World w, Formula f) {
    require_world(m, w);
    return truth_set(m, f).count(w) > 0;
}
bool force(const AnyModel& m, World w, Formula f) {
    return std::visit([&](const auto& x) { return force(x, w, f); }, m);
}

// ------------------------------------------------------------ conditions

bool ConditionReport::ok() const {
    for (const ConditionResult& r : items)
        if (r.status == CondStatus::Fail) return false;
    return true;
}

const ConditionResult* ConditionReport::find(const std::string& name) const {
    for (const ConditionResult& r : items)
        if (r.name == name) return &r;
    return nullptr;
}

std::string ConditionReport::str() const {
    if (items.empty()) return "no frame conditions\n";
    std::string s;
    for (const ConditionResult& r : items) {
        s += "(" + r.name + ") ";
        s += r.status == CondStatus::Pass ? "pass" : r.status == CondStatus::Fail ? "FAIL" : "unchecked";
        if (!r.witness.empty()) s += ": " + r.witness;
        s += "\n";
    }
    return s;
}

std::string render(const WorldSet& s) {
    std::string out = "{";
    bool first = true;
    for (World w : s) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(w);
    }
    return out + "}";
}

namespace {

std::string pair_str(const BiPair& p) { return "(" + render(p.plus) + ", " + render(p.minus) + ")"; }

template <class Item, class F>
void for_each_subset_upto(const std::vector<Item>& items, int k, F&& f) {
    std::vector<const Item*> pick;
    auto rec = [&](auto&& self, std::size_t start) -> bool {
        if (!pick.empty() && !f(pick)) return false;
        if (static_cast<int>(pick.size()) == k) return true;
        for (std::size_t i = start; i < items.size(); ++i) {
            pick.push_back(&items[i]);
            bool go = self(self, i + 1);
            pick.pop_back();
            if (!go) return false;
        }
        return true;
    };
    rec(rec, 0);
}

std::vector<BiPair> pairs_at(const BiModel& m, World w) {
    auto it = m.nbhd.find(w);
    if (it == m.nbhd.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<WorldSet> sets_at(const StandardModel& m, World w) {
    auto it = m.nbhd.find(w);
    if (it == m.nbhd.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::string rd_name(int n) { return "RD" + std::to_string(n) + "+"; }

}  // namespace

ConditionReport check_conditions(const BiModel& m, const LogicSpec& l) {
    ConditionReport rep;
    auto add = [&](std::string name, std::function<std::string()> test) {
        std::string w = test();
        rep.items.push_back({std::move(name), w.empty() ? CondStatus::Pass : CondStatus::Fail, w});
    };
    if (l.monotonic)
        add("M", [&]() -> std::string {
            for (World w : m.worlds)
                for (const BiPair& p : pairs_at(m, w))
                    if (!p.minus.empty()) return "N(" + std::to_string(w) + ") contains " + pair_str(p);
            return "";
        });
    if (l.has_n)
        add("N", [&]() -> std::string {
            if (m.worlds.empty()) return "";
            for (const BiPair& cand : pairs_at(m, *m.worlds.begin())) {
                if (!cand.minus.empty()) continue;
                bool all = true;
                for (World w : m.worlds) all = all && m.nbhd.count(w) && m.nbhd.at(w).count(cand);
                if (all) return "";
            }
            return "no alpha with (alpha, {}) in every neighbourhood";
        });
    if (l.has_c)
        add("C", [&]() -> std::string {
            for (World w : m.worlds) {
                auto ps = pairs_at(m, w);
                for (const BiPair& a : ps)
                    for (const BiPair& b : ps) {
                        BiPair c{intersect(a.plus, b.plus), unite(a.minus, b.minus)};
                        if (!m.nbhd.at(w).count(c))
                            return "N(" + std::to_string(w) + ") lacks " + pair_str(c) + " from " + pair_str(a) +
                                   " and " + pair_str(b);
                    }
            }
            return "";
        });
    if (l.has_t)
        add("T", [&]() -> std::string {
            for (World w : m.worlds)
                for (const BiPair& p : pairs_at(m, w))
                    if (!p.plus.count(w)) return std::to_string(w) + " not in the first set of " + pair_str(p);
            return "";
        });
    if (l.has_p)
        add("P", [&]() -> std::string {
            for (World w : m.worlds)
                for (const BiPair& p : pairs_at(m, w))
                    if (p.plus.empty()) return "N(" + std::to_string(w) + ") contains " + pair_str(p);
            return "";
        });
    if (l.has_d)
        add("D", [&]() -> std::string {
            for (World w : m.worlds) {
                auto ps = pairs_at(m, w);
                for (const BiPair& a : ps)
                    for (const BiPair& b : ps)
                        if (disjoint(a.plus, b.plus) && disjoint(a.minus, b.minus))
                            return "N(" + std::to_string(w) + "): " + pair_str(a) + " and " + pair_str(b);
            }
            return "";
        });
    if (l.dplus)
        add(rd_name(*l.dplus), [&]() -> std::string {
            std::string bad;
            for (World w : m.worlds) {
                auto ps = pairs_at(m, w);
                for_each_subset_upto(ps, *l.dplus, [&](const std::vector<const BiPair*>& pick) {
                    WorldSet acc = pick[0]->plus;
                    for (const BiPair* p : pick) acc = intersect(acc, p->plus);
                    if (!acc.empty()) return true;
                    bad = "N(" + std::to_string(w) + "): " + std::to_string(pick.size()) +
                          " pairs with disjoint first sets";
                    return false;
                });
                if (!bad.empty()) return bad;
            }
            return "";
        });
    return rep;
}

ConditionReport check_conditions(const StandardModel& m, const LogicSpec& l) {
    ConditionReport rep;
    auto add = [&](std::string name, std::function<std::string()> test) {
        std::string w = test();
        rep.items.push_back({std::move(name), w.empty() ? CondStatus::Pass : CondStatus::Fail, w});
    };
    auto has = [&](World w, const WorldSet& s) { return m.nbhd.count(w) && m.nbhd.at(w).count(s); };
    if (l.monotonic)
        add("M", [&]() -> std::string {
            for (World w : m.worlds)
                for (const WorldSet& a : sets_at(m, w))
                    for (World v : m.worlds) {
                        if (a.count(v)) continue;
                        WorldSet b = a;
                        b.insert(v);
                        if (!has(w, b)) return "N(" + std::to_string(w) + ") has " + render(a) + " but not " + render(b);
                    }
            return "";
        });
    if (l.has_c)
        add("C", [&]() -> std::string {
            for (World w : m.worlds) {
                auto ss = sets_at(m, w);
                for (const WorldSet& a : ss)
                    for (const WorldSet& b : ss)
                        if (!has(w, intersect(a, b)))
                            return "N(" + std::to_string(w) + ") lacks " + render(intersect(a, b));
            }
            return "";
        });
    if (l.has_n)
        add("N", [&]() -> std::string {
            for (World w : m.worlds)
                if (!has(w, m.worlds)) return "W not in N(" + std::to_string(w) + ")";
            return "";
        });
    if (l.has_t)
        add("T", [&]() -> std::string {
            for (World w : m.worlds)
                for (const WorldSet& a : sets_at(m, w))
                    if (!a.count(w)) return std::to_string(w) + " not in " + render(a);
            return "";
        });
    if (l.has_p)
        add("P", [&]() -> std::string {
            for (World w : m.worlds)
                if (has(w, {})) return "empty set in N(" + std::to_string(w) + ")";
            return "";
        });
    if (l.has_d)
        add("D", [&]() -> std::string {
            for (World w : m.worlds)
                for (const WorldSet& a : sets_at(m, w))
                    if (has(w, complement(m.worlds, a)))
                        return "N(" + std::to_string(w) + ") has " + render(a) + " and its complement";
            return "";
        });
    if (l.dplus)
        add(rd_name(*l.dplus), [&]() -> std::string {
            std::string bad;
            for (World w : m.worlds) {
                auto ss = sets_at(m, w);
                for_each_subset_upto(ss, *l.dplus, [&](const std::vector<const WorldSet*>& pick) {
                    WorldSet acc = *pick[0];
                    for (const WorldSet* s : pick) acc = intersect(acc, *s);
                    if (!acc.empty()) return true;
                    bad = "N(" + std::to_string(w) + "): " + std::to_string(pick.size()) + " sets with empty intersection";
                    return false;
                });
                if (!bad.empty()) return bad;
            }
            return "";
        });
    return rep;
}

ConditionReport check_conditions(const RelationalModel& m, const LogicSpec& l) {
    ConditionReport rep;
    if (l.has_n) {
        std::string w = m.non_normal.empty() ? "" : "non-normal worlds " + render(m.non_normal);
        rep.items.push_back({"N", w.empty() ? CondStatus::Pass : CondStatus::Fail, w});
    }
    if (l.has_t) {
        std::string bad;
        for (World w : m.worlds) {
            if (m.non_normal.count(w)) continue;
            auto it = m.relation.find(w);
            if (it == m.relation.end() || !it->second.count(w)) {
                bad = "normal world " + std::to_string(w) + " is not reflexive";
                break;
            }
        }
        rep.items.push_back({"T", bad.empty() ? CondStatus::Pass : CondStatus::Fail, bad});
    }
    if (l.has_p) rep.items.push_back({"P", CondStatus::Unchecked, ""});
    if (l.has_d) rep.items.push_back({"D", CondStatus::Unchecked, ""});
    if (l.dplus) rep.items.push_back({rd_name(*l.dplus), CondStatus::Unchecked, ""});
    return rep;
}

ConditionReport check_conditions(const AnyModel& m, const LogicSpec& l) {
    return std::visit([&](const auto& x) { return check_conditions(x, l); }, m);
}

// ------------------------------------------------------------ extraction

namespace {

struct LeafIndex {
    std::vector<std::pair<World, const Sequent*>> comps;
};

LeafIndex index_leaf(const Hypersequent& leaf, const std::map<int, int>& e) {
    LeafIndex ix;
    for (const Component& c : leaf.comps) {
        auto it = e.find(c.id);
        if (it == e.end()) throw Error("enumeration misses component " + std::to_string(c.id));
        ix.comps.push_back({it->second, &c.seq});
    }
    return ix;
}

Valuation leaf_valuation(const LeafIndex& ix) {
    Valuation v;
    std::vector<std::string> atoms;
    for (auto& [w, s] : ix.comps) {
        for (Formula f : s->ante) collect_atoms(f, atoms);
        for (Formula f : s->succ) collect_atoms(f, atoms);
        for (const Block& b : s->blocks)
            for (Formula f : b.members) collect_atoms(f, atoms);
    }
    for (const std::string& a : atoms) v[a];
    for (auto& [w, s] : ix.comps)
        for (Formula f : s->ante)
            if (f.is(Kind::Atom)) v[f.name()].insert(w);
    return v;
}

WorldSet block_plus(const LeafIndex& ix, const Block& b) {
    WorldSet out;
    auto set = b.set();
    for (auto& [w, s] : ix.comps) {
        bool all = true;
        for (Formula f : set) all = all && s->in_ante(f);
        if (all) out.insert(w);
    }
    return out;
}

WorldSet block_minus(const LeafIndex& ix, const Block& b) {
    WorldSet out;
    for (auto& [w, s] : ix.comps)
        for (Formula f : b.members)
            if (s->in_succ(f)) {
                out.insert(w);
                break;
            }
    return out;
}

}  // namespace

BiModel extract_bi_countermodel(const Hypersequent& leaf, const std::map<int, int>& enumeration, const LogicSpec& l) {
    LeafIndex ix = index_leaf(leaf, enumeration);
    BiModel m;
    for (auto& [w, s] : ix.comps) m.worlds.insert(w);
    m.valuation = leaf_valuation(ix);
    for (auto& [w, s] : ix.comps) {
        auto& ns = m.nbhd[w];
        for (const Block& b : s->blocks)
            ns.insert({block_plus(ix, b), l.monotonic ? WorldSet{} : block_minus(ix, b)});
    }
    return m;
}

RelationalModel extract_relational_countermodel(const Hypersequent& leaf, const std::map<int, int>& enumeration,
                                                const LogicSpec& l) {
    if (!l.regular()) throw Error("relational countermodels need a logic with M and C");
    LeafIndex ix = index_leaf(leaf, enumeration);
    RelationalModel m;
    for (auto& [w, s] : ix.comps) m.worlds.insert(w);
    m.valuation = leaf_valuation(ix);
    for (auto& [w, s] : ix.comps) {
        if (s->blocks.empty()) {
            m.non_normal.insert(w);
            continue;
        }
        std::vector<std::vector<Formula>> sets;
        for (const Block& b : s->blocks) sets.push_back(b.set());
        std::optional<WorldSet> succ;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            bool maximal = true;
            for (const auto& other : sets)
                maximal = maximal && std::includes(sets[i].begin(), sets[i].end(), other.begin(), other.end());
            if (!maximal) continue;
            WorldSet plus = block_plus(ix, s->blocks[i]);
            if (succ && *succ != plus) throw Error("maximal blocks disagree at world " + std::to_string(w));
            succ = plus;
        }
        if (!succ) throw Error("no maximal block at world " + std::to_string(w) + "; leaf is not C-saturated");
        m.relation[w] = *succ;
    }
    return m;
}

// -------------------------------------------------------- transformations

BiModel bi_from_standard(const StandardModel& m, bool supplemented) {
    BiModel b;
    b.worlds = m.worlds;
    b.valuation = m.valuation;
    for (World w : m.worlds) {
        auto& ps = b.nbhd[w];
        auto it = m.nbhd.find(w);
        if (it == m.nbhd.end()) continue;
        for (const WorldSet& a : it->second) ps.insert({a, supplemented ? WorldSet{} : complement(m.worlds, a)});
    }
    return b;
}

namespace {

void check_cap(const WorldSet& w, int cap) {
    if (static_cast<int>(w.size()) > cap)
        throw Error("model has " + std::to_string(w.size()) + " worlds, above the cap of " + std::to_string(cap));
}

// All sets g with lo <= g <= hi.
template <class F>
void for_each_between(const WorldSet& lo, const WorldSet& hi, F&& f) {
    std::vector<World> free;
    for (World w : hi)
        if (!lo.count(w)) free.push_back(w);
    const std::size_t n = free.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        WorldSet g = lo;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) g.insert(free[i]);
        f(g);
    }
}

}  // namespace

StandardModel standard_from_bi_rough(const BiModel& m, int world_cap) {
    check_cap(m.worlds, world_cap);
    StandardModel s;
    s.worlds = m.worlds;
    s.valuation = m.valuation;
    for (World w : m.worlds) {
        auto& ns = s.nbhd[w];
        for (const BiPair& p : pairs_at(m, w)) {
            WorldSet hi = complement(m.worlds, p.minus);
            if (!subset(p.plus, hi)) continue;
            for_each_between(p.plus, hi, [&](const WorldSet& g) { ns.insert(g); });
        }
    }
    return s;
}

bool is_subformula_closed(const std::vector<Formula>& s) {
    std::set<Formula> all(s.begin(), s.end());
    for (Formula f : s) {
        if (f.is(Kind::Box) && !all.count(f.body())) return false;
        if (f.is_binary() && (!all.count(f.left()) || !all.count(f.right()))) return false;
    }
    return true;
}

StandardModel standard_from_bi_fine(const BiModel& m, const std::vector<Formula>& s, bool supplement, int world_cap) {
    if (!is_subformula_closed(s)) throw Error("formula set is not closed under subformulas");
    if (supplement) check_cap(m.worlds, world_cap);
    StandardModel out;
    out.worlds = m.worlds;
    out.valuation = m.valuation;
    for (World w : m.worlds) out.nbhd[w];
    for (Formula f : s) {
        if (!f.is(Kind::Box)) continue;
        WorldSet boxed = truth_set(m, f);
        WorldSet body = truth_set(m, f.body());
        for (World w : boxed) {
            if (supplement) for_each_between(body, m.worlds, [&](const WorldSet& g) { out.nbhd[w].insert(g); });
            else out.nbhd[w].insert(body);
        }
    }
    return out;
}

StandardModel close_for_logic(StandardModel m, const LogicSpec& l, int world_cap) {
    if (l.has_n)
        for (World w : m.worlds) m.nbhd[w].insert(m.worlds);
    if (!l.has_c) return m;
    if (l.monotonic) check_cap(m.worlds, world_cap);
    for (World w : m.worlds) {
        auto& ns = m.nbhd[w];
        for (bool changed = true; changed;) {
            changed = false;
            std::vector<WorldSet> cur(ns.begin(), ns.end());
            for (std::size_t i = 0; i < cur.size(); ++i)
                for (std::size_t j = i + 1; j < cur.size(); ++j)
                    changed = ns.insert(intersect(cur[i], cur[j])).second || changed;
            if (l.monotonic)
                for (const WorldSet& a : std::vector<WorldSet>(ns.begin(), ns.end()))
                    for_each_between(a, m.worlds, [&](const WorldSet& g) { changed = ns.insert(g).second || changed; });
        }
    }
    return m;
}

std::size_t model_size(const BiModel& m) {
    std::size_t n = m.worlds.size();
    for (auto& [w, ps] : m.nbhd) n += ps.size();
    return n;
}

std::size_t model_size(const StandardModel& m) {
    std::size_t n = m.worlds.size();
    for (auto& [w, ss] : m.nbhd) n += ss.size();
    return n;
}

std::size_t model_size(const RelationalModel& m) {
    std::size_t n = m.worlds.size();
    for (auto& [w, r] : m.relation) n += r.size();
    return n;
}

std::size_t model_size(const AnyModel& m) {
    return std::visit([](const auto& x) { return model_size(x); }, m);
}

namespace {

std::string render_valuation(const Valuation& v) {
    std::string s;
    for (auto& [a, ws] : v) s += "  V(" + a + ") = " + render(ws) + "\n";
    return s;
}

}  // namespace

std::string render(const BiModel& m) {
    std::string s = "W = " + render(m.worlds) + "\n" + render_valuation(m.valuation);
    for (World w : m.worlds) {
        s += "  N(" + std::to_string(w) + ") = {";
        bool first = true;
        for (const BiPair& p : pairs_at(m, w)) {
            if (!first) s += ", ";
            first = false;
            s += pair_str(p);
        }
        s += "}\n";
    }
    return s;
}

std::string render(const StandardModel& m) {
    std::string s = "W = " + render(m.worlds) + "\n" + render_valuation(m.valuation);
    for (World w : m.worlds) {
        s += "  N(" + std::to_string(w) + ") = {";
        bool first = true;
        for (const WorldSet& a : sets_at(m, w)) {
            if (!first) s += ", ";
            first = false;
            s += render(a);
        }
        s += "}\n";
    }
    return s;
}

std::string render(const RelationalModel& m) {
    std::string s = "W = " + render(m.worlds) + ", non-normal = " + render(m.non_normal) + "\n" +
                    render_valuation(m.valuation);
    for (auto& [w, r] : m.relation) s += "  R(" + std::to_string(w) + ") = " + render(r) + "\n";
    return s;
}

}  // namespace nnml
