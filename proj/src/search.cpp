#include "nnml/search.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace nnml {

std::size_t Derivation::node_count() const {
    std::size_t n = 1;
    for (const Derivation& c : children) n += c.node_count();
    return n;
}

long default_budget() {
    if (const char* env = std::getenv("NNML_BUDGET")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return 1'000'000;
}

// ------------------------------------------------------- invertible search

namespace {

class Search {
public:
    Search(const LogicSpec& l, long budget) : l_(l), budget_(budget) {}

    SearchStats stats;

    // Fills `out` and returns true when h is derivable; otherwise stores the
    // first saturated leaf.
    bool run(const Hypersequent& h, Derivation& out, Hypersequent& leaf) {
        if (++stats.visited > budget_) throw BudgetExceeded(stats);
        stats.max_components = std::max(stats.max_components, static_cast<int>(h.comps.size()));
        for (const Component& c : h.comps) {
            stats.max_component_size = std::max(stats.max_component_size, c.seq.distinct_size());
            stats.max_blocks = std::max(stats.max_blocks, static_cast<int>(c.seq.blocks.size()));
        }
        out.conclusion = h;
        if (auto why = initial_reason(h)) {
            out.rule = why->first;
            out.target = why->second;
            return true;
        }
        auto inst = first_instance(h, l_);
        if (!inst) {
            leaf = h;
            return false;
        }
        out.rule = inst->rule;
        out.target = inst->target;
        out.principal = inst->principal;
        out.children.resize(inst->premisses.size());
        for (std::size_t i = 0; i < inst->premisses.size(); ++i)
            if (!run(inst->premisses[i], out.children[i], leaf)) return false;
        return true;
    }

private:
    const LogicSpec& l_;
    long budget_;
};

}  // namespace

SearchOutcome prove(const Hypersequent& h, const LogicSpec& l, const SearchOptions& opts) {
    Search s(l, opts.budget);
    s.stats.input_size = h.node_count();
    Derivation d;
    Hypersequent leaf;
    SearchOutcome out;
    if (s.run(h, d, leaf)) {
        out.result = Proved{std::move(d)};
    } else {
        Refuted r;
        r.leaf = leaf;
        int w = 1;
        for (const Component& c : leaf.comps) r.enumeration[c.id] = w++;
        out.result = std::move(r);
    }
    out.stats = s.stats;
    return out;
}

// ------------------------------------------------------- unkleene'd search

namespace {

bool seq_less(const Sequent& a, const Sequent& b) {
    if (a.ante != b.ante) return a.ante < b.ante;
    if (a.succ != b.succ) return a.succ < b.succ;
    return std::lexicographical_compare(a.blocks.begin(), a.blocks.end(), b.blocks.begin(), b.blocks.end(),
                                        [](const Block& x, const Block& y) { return x.members < y.members; });
}

// Formulas that have been in the antecedent along the current branch, sorted.
using Seen = std::vector<Formula>;

// A sequent together with its T history.
using Key = std::pair<Sequent, Seen>;

struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
        if (seq_less(a.first, b.first)) return true;
        if (seq_less(b.first, a.first)) return false;
        return a.second < b.second;
    }
};

template <class T>
void erase_one(std::vector<T>& v, const T& x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it != v.end()) v.erase(it);
}

class Unkleened {
public:
    Unkleened(const LogicSpec& l, UnkleenedStats& st) : l_(l), st_(st) {}

    Sequent fresh(std::vector<Formula> ante, std::vector<Formula> succ) const {
        Sequent s;
        for (Formula f : ante) s.add_ante(f);
        for (Formula f : succ) s.add_succ(f);
        if (l_.has_n) s.add_block(Block({Formula::top()}));
        return s;
    }

    bool derivable(Sequent s, int depth) { return derivable(std::move(s), {}, depth); }

    // T keeps its block and only fires when it brings back a formula the
    // branch has never had on the left.
    bool derivable(Sequent s, Seen used, int depth) {
        ++st_.calls;
        st_.max_depth = std::max(st_.max_depth, depth);
        if (closed(s)) return true;
        for (Formula f : s.ante) {
            if (l_.has_t && (f.is(Kind::Box) || f.is_binary())) {
                auto pos = std::lower_bound(used.begin(), used.end(), f);
                if (pos == used.end() || !(*pos == f)) used.insert(pos, f);
            }
            if (f.is(Kind::Box)) {
                erase_one(s.ante, f);
                if (!s.has_block_set({f.body()})) s.add_block(Block({f.body()}));
                return derivable(std::move(s), std::move(used), depth + 1);
            }
            if (!f.is_binary()) continue;
            erase_one(s.ante, f);
            switch (f.kind()) {
            case Kind::And:
                s.add_ante(f.left());
                s.add_ante(f.right());
                return derivable(std::move(s), std::move(used), depth + 1);
            case Kind::Or: {
                Sequent t = s;
                s.add_ante(f.left());
                t.add_ante(f.right());
                return derivable(std::move(s), used, depth + 1) && derivable(std::move(t), used, depth + 1);
            }
            default: {
                Sequent t = s;
                s.add_succ(f.left());
                t.add_ante(f.right());
                return derivable(std::move(s), used, depth + 1) && derivable(std::move(t), used, depth + 1);
            }
            }
        }
        for (Formula f : s.succ) {
            if (!f.is_binary()) continue;
            erase_one(s.succ, f);
            switch (f.kind()) {
            case Kind::And: {
                Sequent t = s;
                s.add_succ(f.left());
                t.add_succ(f.right());
                return derivable(std::move(s), used, depth + 1) && derivable(std::move(t), used, depth + 1);
            }
            case Kind::Or:
                s.add_succ(f.left());
                s.add_succ(f.right());
                return derivable(std::move(s), std::move(used), depth + 1);
            default:
                s.add_ante(f.left());
                s.add_succ(f.right());
                return derivable(std::move(s), std::move(used), depth + 1);
            }
        }
        Key key{std::move(s), std::move(used)};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        // A sequent already being decided further up (e.g. P on <true> with N
        // recreating the same fresh component) adds nothing on this path.
        if (!on_stack_.insert(key).second) {
            cut_ = true;
            return false;
        }
        const bool outer_cut = cut_;
        cut_ = false;
        bool r = modal(key.first, key.second, depth);
        on_stack_.erase(key);
        if (r || !cut_) {
            memo_.emplace(std::move(key), r);
            st_.memo_size = static_cast<long>(memo_.size());
        }
        cut_ = outer_cut || (cut_ && !r);
        return r;
    }

private:
    static bool closed(const Sequent& s) {
        if (s.in_ante(Formula::bottom()) || s.in_succ(Formula::top())) return true;
        for (Formula f : s.ante)
            if (s.in_succ(f)) return true;
        return false;
    }

    bool all(const std::vector<Sequent>& ss, int depth) {
        for (const Sequent& s : ss)
            if (!derivable(s, depth + 1)) return false;
        return true;
    }

    bool modal(const Sequent& s, const Seen& used, int depth) {
        const auto& bs = s.blocks;
        const int n = static_cast<int>(bs.size());
        auto first_of_run = [&](int i, int lo) { return i == lo || !(bs[i] == bs[i - 1]); };
        if (l_.has_t)
            for (int i = 0; i < n; ++i) {
                if (!first_of_run(i, 0)) continue;
                std::vector<Formula> set = bs[i].set();
                if (std::all_of(set.begin(), set.end(), [&](Formula f) {
                        return s.in_ante(f) || std::binary_search(used.begin(), used.end(), f);
                    }))
                    continue;
                Sequent t = s;
                for (Formula f : set) t.add_ante(f);
                if (derivable(std::move(t), used, depth + 1)) return true;
            }
        auto without = [&](std::vector<int> idx) {
            Sequent t = s;
            std::sort(idx.rbegin(), idx.rend());
            for (int i : idx) t.blocks.erase(t.blocks.begin() + i);
            return t;
        };
        if (l_.has_c)
            for (int i = 0; i < n; ++i) {
                if (!first_of_run(i, 0)) continue;
                for (int j = i + 1; j < n; ++j) {
                    if (!first_of_run(j, i + 1)) continue;
                    Sequent t = without({i, j});
                    std::vector<Formula> ms = bs[i].members;
                    ms.insert(ms.end(), bs[j].members.begin(), bs[j].members.end());
                    t.add_block(Block(Block(ms).set()));
                    if (derivable(std::move(t), used, depth + 1)) return true;
                }
            }
        std::vector<Formula> boxes;
        for (Formula f : s.succ)
            if (f.is(Kind::Box) && (boxes.empty() || !(boxes.back() == f))) boxes.push_back(f);
        for (int i = 0; i < n; ++i) {
            if (!first_of_run(i, 0)) continue;
            const Block& sigma = bs[i];
            for (Formula f : boxes) {
                std::vector<Sequent> prem{fresh(sigma.members, {f.body()})};
                if (!l_.monotonic)
                    for (Formula a : sigma.set()) prem.push_back(fresh({f.body()}, {a}));
                if (all(prem, depth)) return true;
            }
            if (l_.has_p && derivable(fresh(sigma.members, {}), depth + 1)) return true;
            if (l_.has_d && !l_.monotonic) {
                std::vector<Sequent> prem{fresh(sigma.members, {})};
                for (Formula a : sigma.set()) prem.push_back(fresh({}, {a}));
                if (all(prem, depth)) return true;
                for (int j = i + 1; j < n; ++j) {
                    if (!first_of_run(j, i + 1)) continue;
                    std::vector<Formula> ms = sigma.members;
                    ms.insert(ms.end(), bs[j].members.begin(), bs[j].members.end());
                    std::vector<Sequent> prem2{fresh(ms, {})};
                    for (Formula a : sigma.set())
                        for (Formula b : bs[j].set()) prem2.push_back(fresh({}, {a, b}));
                    if (all(prem2, depth)) return true;
                }
            }
        }
        int k = 0;
        if (l_.has_d && l_.monotonic) k = 2;
        if (l_.dplus) k = std::max(k, *l_.dplus);
        for (int arity = 1; arity <= k; ++arity) {
            std::vector<int> idx(arity);
            bool found = false;
            auto rec = [&](auto&& self, int pos, int start) -> void {
                if (found) return;
                if (pos == arity) {
                    std::vector<Formula> ms;
                    for (int i : idx) ms.insert(ms.end(), bs[i].members.begin(), bs[i].members.end());
                    found = derivable(fresh(ms, {}), depth + 1);
                    return;
                }
                for (int i = start; i < n && !found; ++i) {
                    if (!first_of_run(i, start)) continue;
                    idx[pos] = i;
                    self(self, pos + 1, i + 1);
                }
            };
            rec(rec, 0, 0);
            if (found) return true;
        }
        return false;
    }

    const LogicSpec& l_;
    UnkleenedStats& st_;
    std::map<Key, bool, KeyLess> memo_;
    std::set<Key, KeyLess> on_stack_;
    bool cut_ = false;
};

}  // namespace

bool prove_unkleened(const Hypersequent& h, const LogicSpec& l, UnkleenedStats* stats) {
    UnkleenedStats local;
    UnkleenedStats& st = stats ? *stats : local;
    Unkleened u(l, st);
    for (const Component& c : h.comps) {
        Sequent s = c.seq;
        if (l.has_n) s.add_block(Block({Formula::top()}));
        if (u.derivable(std::move(s), 0)) return true;
    }
    return false;
}

// ------------------------------------------------------------- checking

namespace {

using Multiset = std::vector<Formula>;

// Multiset difference big - small; nullopt when small is not contained.
std::optional<Multiset> minus(const Multiset& big, const Multiset& small) {
    std::map<Formula, int> count;
    for (Formula f : big) ++count[f];
    for (Formula f : small)
        if (--count[f] < 0) return std::nullopt;
    Multiset out;
    for (auto& [f, k] : count)
        for (int i = 0; i < k; ++i) out.push_back(f);
    return out;
}

std::vector<Formula> as_set(Multiset v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

struct Local {
    Multiset ante, succ;
    std::vector<Multiset> blocks;  // sorted members
};

struct Expected {
    std::vector<Local> local;
    std::vector<std::pair<Multiset, Multiset>> created;  // (ante, succ)
};

// A side grows by some of `adds`; every add must be present afterwards.
bool grows_by(const Multiset& before, const Multiset& after, const Multiset& adds) {
    auto diff = minus(after, before);
    if (!diff) return false;
    if (!minus(adds, *diff)) return false;
    std::vector<Formula> want = as_set([&] {
        Multiset u = before;
        u.insert(u.end(), adds.begin(), adds.end());
        return u;
    }());
    return as_set(after) == want;
}

bool same_except(const Hypersequent& a, const Hypersequent& b, int skip) {
    for (const Component& c : a.comps) {
        if (c.id == skip) continue;
        const Component* d = b.find(c.id);
        if (!d || !(d->seq == c.seq)) return false;
    }
    return true;
}

bool matches_local(const Hypersequent& concl, const Hypersequent& child, int target, const Local& e) {
    if (child.comps.size() != concl.comps.size() || !same_except(concl, child, target)) return false;
    const Sequent& a = concl.find(target)->seq;
    const Component* cb = child.find(target);
    if (!cb) return false;
    const Sequent& b = cb->seq;
    if (!grows_by(a.ante, b.ante, e.ante) || !grows_by(a.succ, b.succ, e.succ)) return false;
    std::vector<Multiset> ba, bb;
    for (const Block& x : a.blocks) ba.push_back(x.members);
    for (const Block& x : b.blocks) bb.push_back(x.members);
    for (const Multiset& m : e.blocks) ba.push_back(m);
    std::sort(ba.begin(), ba.end());
    std::sort(bb.begin(), bb.end());
    return ba == bb;
}

bool matches_created(const Hypersequent& concl, const Hypersequent& child, const std::pair<Multiset, Multiset>& e) {
    if (child.comps.size() != concl.comps.size() + 1 || !same_except(concl, child, -1)) return false;
    for (const Component& c : child.comps) {
        if (concl.find(c.id)) continue;
        Multiset ea = e.first, es = e.second;
        std::sort(ea.begin(), ea.end());
        std::sort(es.begin(), es.end());
        return c.seq.blocks.empty() && c.seq.ante == ea && c.seq.succ == es;
    }
    return false;
}

std::optional<std::string> expected_for(const Derivation& d, const Sequent& s, Expected& e) {
    const Principal& p = d.principal;
    auto formula = [&](Kind k, bool left) -> std::optional<Formula> {
        if (p.formulas.size() != 1 || !p.blocks.empty()) return std::nullopt;
        Formula f = p.formulas[0];
        if (!f.is(k)) return std::nullopt;
        if (left ? !s.in_ante(f) : !s.in_succ(f)) return std::nullopt;
        return f;
    };
    auto blocks = [&](std::size_t n, std::size_t nf) -> std::optional<std::vector<Multiset>> {
        if (p.blocks.size() != n || p.formulas.size() != nf) return std::nullopt;
        std::vector<Multiset> out;
        for (std::size_t i = 0; i < n; ++i) {
            int b = p.blocks[i];
            if (b < 0 || b >= static_cast<int>(s.blocks.size())) return std::nullopt;
            for (std::size_t j = 0; j < i; ++j)
                if (p.blocks[j] == b) return std::nullopt;
            out.push_back(s.blocks[b].members);
        }
        return out;
    };
    const std::string bad = "principal material does not fit the rule";
    switch (d.rule.rule) {
    case Rule::AndL:
        if (auto f = formula(Kind::And, true)) e.local.push_back({{f->left(), f->right()}, {}, {}});
        else return bad;
        break;
    case Rule::OrL:
        if (auto f = formula(Kind::Or, true)) {
            e.local.push_back({{f->left()}, {}, {}});
            e.local.push_back({{f->right()}, {}, {}});
        } else return bad;
        break;
    case Rule::ImpL:
        if (auto f = formula(Kind::Imp, true)) {
            e.local.push_back({{}, {f->left()}, {}});
            e.local.push_back({{f->right()}, {}, {}});
        } else return bad;
        break;
    case Rule::AndR:
        if (auto f = formula(Kind::And, false)) {
            e.local.push_back({{}, {f->left()}, {}});
            e.local.push_back({{}, {f->right()}, {}});
        } else return bad;
        break;
    case Rule::OrR:
        if (auto f = formula(Kind::Or, false)) e.local.push_back({{}, {f->left(), f->right()}, {}});
        else return bad;
        break;
    case Rule::ImpR:
        if (auto f = formula(Kind::Imp, false)) e.local.push_back({{f->left()}, {f->right()}, {}});
        else return bad;
        break;
    case Rule::BoxL:
        if (auto f = formula(Kind::Box, true)) e.local.push_back({{}, {}, {{f->body()}}});
        else return bad;
        break;
    case Rule::N:
        if (!p.blocks.empty() || !p.formulas.empty()) return bad;
        e.local.push_back({{}, {}, {{Formula::top()}}});
        break;
    case Rule::T:
        if (auto bs = blocks(1, 0)) e.local.push_back({(*bs)[0], {}, {}});
        else return bad;
        break;
    case Rule::C:
        if (auto bs = blocks(2, 0)) {
            Multiset m = (*bs)[0];
            m.insert(m.end(), (*bs)[1].begin(), (*bs)[1].end());
            std::sort(m.begin(), m.end());
            e.local.push_back({{}, {}, {m}});
        } else return bad;
        break;
    case Rule::BoxR:
    case Rule::BoxRm: {
        auto bs = blocks(1, 1);
        if (!bs || !p.formulas[0].is(Kind::Box) || !s.in_succ(p.formulas[0])) return bad;
        Formula b = p.formulas[0].body();
        e.created.push_back({(*bs)[0], {b}});
        if (d.rule.rule == Rule::BoxR)
            for (Formula a : as_set((*bs)[0])) e.created.push_back({{b}, {a}});
        break;
    }
    case Rule::P:
        if (auto bs = blocks(1, 0)) e.created.push_back({(*bs)[0], {}});
        else return bad;
        break;
    case Rule::D1:
        if (auto bs = blocks(1, 0)) {
            e.created.push_back({(*bs)[0], {}});
            for (Formula a : as_set((*bs)[0])) e.created.push_back({{}, {a}});
        } else return bad;
        break;
    case Rule::D2:
        if (auto bs = blocks(2, 0)) {
            Multiset m = (*bs)[0];
            m.insert(m.end(), (*bs)[1].begin(), (*bs)[1].end());
            e.created.push_back({m, {}});
            for (Formula a : as_set((*bs)[0]))
                for (Formula b : as_set((*bs)[1])) e.created.push_back({{}, {a, b}});
        } else return bad;
        break;
    case Rule::DnPlus:
        if (auto bs = blocks(static_cast<std::size_t>(d.rule.arity), 0)) {
            Multiset m;
            for (const Multiset& x : *bs) m.insert(m.end(), x.begin(), x.end());
            e.created.push_back({m, {}});
        } else return bad;
        break;
    default:
        return "rule " + d.rule.str() + " cannot label an inner node";
    }
    return std::nullopt;
}

CheckResult check_node(const Derivation& d, const LogicSpec& l, const std::string& path) {
    auto fail = [&](std::string why) { return CheckResult{false, path.empty() ? "root" : path, std::move(why)}; };
    if (d.conclusion.comps.empty()) return fail("empty hypersequent");
    const Component* c = d.conclusion.find(d.target);
    if (!c) return fail("target component " + std::to_string(d.target) + " missing");
    const Sequent& s = c->seq;
    switch (d.rule.rule) {
    case Rule::Init:
    case Rule::BotL:
    case Rule::TopR: {
        if (!d.children.empty()) return fail("axiom with premisses");
        bool ok = false;
        if (d.rule.rule == Rule::BotL) ok = s.in_ante(Formula::bottom());
        else if (d.rule.rule == Rule::TopR) ok = s.in_succ(Formula::top());
        else
            for (Formula f : s.ante) ok = ok || s.in_succ(f);
        return ok ? CheckResult{} : fail("leaf is not initial: " + d.conclusion.str());
    }
    default: break;
    }
    if (!has_rule(l, d.rule)) return fail("rule " + d.rule.str() + " is not in the calculus for " + l.name());
    Expected e;
    if (auto err = expected_for(d, s, e)) return fail(*err);
    std::size_t want = e.local.size() + e.created.size();
    if (d.children.size() != want)
        return fail(d.rule.str() + " needs " + std::to_string(want) + " premisses, found " +
                    std::to_string(d.children.size()));
    std::vector<bool> used(want, false);
    for (std::size_t i = 0; i < d.children.size(); ++i) {
        const Hypersequent& ch = d.children[i].conclusion;
        bool found = false;
        for (std::size_t j = 0; j < want && !found; ++j) {
            if (used[j]) continue;
            bool m = j < e.local.size() ? matches_local(d.conclusion, ch, d.target, e.local[j])
                                        : matches_created(d.conclusion, ch, e.created[j - e.local.size()]);
            if (m) used[j] = found = true;
        }
        if (!found) return fail("premiss " + std::to_string(i) + " does not match " + d.rule.str() + ": " + ch.str());
    }
    for (std::size_t i = 0; i < d.children.size(); ++i) {
        auto r = check_node(d.children[i], l, path.empty() ? std::to_string(i) : path + "." + std::to_string(i));
        if (!r) return r;
    }
    return {};
}

void render(const Derivation& d, int indent, std::string& out) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += d.conclusion.str() + "   [" + d.rule.str();
    if (!d.principal.formulas.empty() || !d.principal.blocks.empty() || d.children.empty())
        out += " @" + std::to_string(d.target);
    out += "]\n";
    for (const Derivation& c : d.children) render(c, indent + 1, out);
}

}  // namespace

CheckResult check_derivation(const Derivation& d, const LogicSpec& l) { return check_node(d, l, ""); }

std::string render_derivation(const Derivation& d) {
    std::string out;
    render(d, 0, out);
    return out;
}

}  // namespace nnml
