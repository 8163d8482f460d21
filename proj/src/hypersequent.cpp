#include "nnml/hypersequent.hpp"

#include "lexer.hpp"

#include <algorithm>

namespace nnml {

Block::Block(std::vector<Formula> ms) : members(std::move(ms)) {
    if (members.empty()) throw Error("empty block");
    std::sort(members.begin(), members.end());
}

std::vector<Formula> Block::set() const {
    std::vector<Formula> s = members;
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

bool Block::same_set(const Block& o) const { return set() == o.set(); }

std::string Block::str() const {
    std::string s = "<";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) s += ", ";
        s += print_in_sequent(members[i]);
    }
    return s + ">";
}

bool block_less(const Block& a, const Block& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.members < b.members;
}

int block_weight(const Block& b) {
    if (b.members.empty()) throw Error("empty block");
    int w = 0;
    for (Formula f : b.members) w = std::max(w, f.weight());
    return w + 1;
}

namespace {

void insert_sorted(std::vector<Formula>& v, Formula f) { v.insert(std::upper_bound(v.begin(), v.end(), f), f); }

bool contains_sorted(const std::vector<Formula>& v, Formula f) { return std::binary_search(v.begin(), v.end(), f); }

}  // namespace

bool Sequent::in_ante(Formula f) const { return contains_sorted(ante, f); }
bool Sequent::in_succ(Formula f) const { return contains_sorted(succ, f); }

bool Sequent::has_block_set(const std::vector<Formula>& set) const {
    for (const Block& b : blocks)
        if (b.set() == set) return true;
    return false;
}

void Sequent::add_ante(Formula f) { insert_sorted(ante, f); }
void Sequent::add_succ(Formula f) { insert_sorted(succ, f); }
void Sequent::add_block(Block b) { blocks.insert(std::upper_bound(blocks.begin(), blocks.end(), b, block_less), std::move(b)); }

bool Sequent::absorb_ante(Formula f) {
    if (in_ante(f)) return false;
    add_ante(f);
    return true;
}

bool Sequent::absorb_succ(Formula f) {
    if (in_succ(f)) return false;
    add_succ(f);
    return true;
}

int Sequent::distinct_size() const {
    std::vector<Formula> a = ante, s = succ;
    a.erase(std::unique(a.begin(), a.end()), a.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    std::vector<std::vector<Formula>> bs;
    for (const Block& b : blocks) bs.push_back(b.set());
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    return static_cast<int>(a.size() + s.size() + bs.size());
}

int Sequent::node_count() const {
    int n = 0;
    for (Formula f : ante) n += f.size();
    for (const Block& b : blocks)
        for (Formula f : b.members) n += f.size();
    for (Formula f : succ) n += f.size();
    return n;
}

std::string print_in_sequent(Formula f) {
    std::string s = print(f);
    if (f.is(Kind::Or)) return "(" + s + ")";
    return s;
}

std::string Sequent::str() const {
    std::string s;
    bool first = true;
    auto sep = [&] {
        if (!first) s += ", ";
        first = false;
    };
    for (Formula f : ante) {
        sep();
        s += print_in_sequent(f);
    }
    for (const Block& b : blocks) {
        sep();
        s += b.str();
    }
    s += s.empty() ? "=>" : " =>";
    for (std::size_t i = 0; i < succ.size(); ++i) {
        s += i ? ", " : " ";
        s += print_in_sequent(succ[i]);
    }
    return s;
}

Hypersequent Hypersequent::of_formula(Formula f) {
    Hypersequent h;
    Component c;
    c.id = 1;
    c.seq.succ.push_back(f);
    h.comps.push_back(c);
    return h;
}

Hypersequent Hypersequent::of_sequents(std::vector<Sequent> ss) {
    if (ss.empty()) throw Error("a hypersequent needs at least one component");
    Hypersequent h;
    int id = 1;
    for (Sequent& s : ss) h.comps.push_back({id++, std::move(s)});
    return h;
}

int Hypersequent::next_id() const {
    int m = 0;
    for (const Component& c : comps) m = std::max(m, c.id);
    return m + 1;
}

const Component* Hypersequent::find(int id) const {
    for (const Component& c : comps)
        if (c.id == id) return &c;
    return nullptr;
}

Component* Hypersequent::find(int id) {
    for (Component& c : comps)
        if (c.id == id) return &c;
    return nullptr;
}

int Hypersequent::node_count() const {
    int n = 0;
    for (const Component& c : comps) n += c.seq.node_count();
    return n;
}

int Hypersequent::max_component_size() const {
    int m = 0;
    for (const Component& c : comps) m = std::max(m, c.seq.distinct_size());
    return m;
}

std::string Hypersequent::str() const {
    std::string s;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) s += " | ";
        s += comps[i].seq.str();
    }
    return s;
}

namespace {

Formula fold_right(const std::vector<Formula>& xs, Formula unit, Formula (*op)(Formula, Formula)) {
    if (xs.empty()) return unit;
    Formula acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = op(xs[i], acc);
    return acc;
}

}  // namespace

Formula interpret(const Sequent& s) {
    std::vector<Formula> left = s.ante;
    for (const Block& b : s.blocks) left.push_back(Formula::box(fold_right(b.members, Formula::top(), Formula::conj)));
    return Formula::imp(fold_right(left, Formula::top(), Formula::conj),
                        fold_right(s.succ, Formula::bottom(), Formula::disj));
}

bool subsumes(const Sequent& cand, const Sequent& ref) {
    for (Formula f : cand.ante)
        if (!ref.in_ante(f)) return false;
    for (Formula f : cand.succ)
        if (!ref.in_succ(f)) return false;
    for (const Block& b : cand.blocks)
        if (!ref.has_block_set(b.set())) return false;
    return true;
}

// ----------------------------------------------------------------- parsing

namespace {

using detail::Tok;

Sequent parse_component(detail::FormulaParser& p) {
    Sequent s;
    if (p.peek().kind != Tok::Arrow) {
        do {
            if (p.accept(Tok::Langle)) {
                std::vector<Formula> ms;
                do ms.push_back(p.formula()); while (p.accept(Tok::Comma));
                p.expect(Tok::Rangle, "'>' closing a block");
                s.add_block(Block(std::move(ms)));
            } else {
                s.add_ante(p.formula());
            }
        } while (p.accept(Tok::Comma));
    }
    p.expect(Tok::Arrow, "'=>'");
    Tok k = p.peek().kind;
    if (k != Tok::Or && k != Tok::End) {
        do s.add_succ(p.formula(false)); while (p.accept(Tok::Comma));
    }
    return s;
}

}  // namespace

Sequent parse_sequent(std::string_view text) {
    auto toks = detail::lex(text);
    detail::FormulaParser p(toks);
    Sequent s = parse_component(p);
    if (p.peek().kind != Tok::End) p.fail("unexpected " + detail::describe(p.peek()));
    return s;
}

Hypersequent parse_hypersequent(std::string_view text) {
    auto toks = detail::lex(text);
    detail::FormulaParser p(toks);
    std::vector<Sequent> ss;
    do ss.push_back(parse_component(p)); while (p.accept(Tok::Or));
    if (p.peek().kind != Tok::End) p.fail("unexpected " + detail::describe(p.peek()));
    return Hypersequent::of_sequents(std::move(ss));
}

Hypersequent parse_input(std::string_view text) {
    if (text.find("=>") != std::string_view::npos) return parse_hypersequent(text);
    return Hypersequent::of_formula(parse_formula(text));
}

}  // namespace nnml
