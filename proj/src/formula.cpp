#include "nnml/formula.hpp"

#include "lexer.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_set>

namespace nnml {

struct FormulaNode {
    Kind kind;
    std::string name;
    const FormulaNode* l = nullptr;
    const FormulaNode* r = nullptr;
    std::size_t hash = 0;
    int size = 1;
    int depth = 0;
    int weight = 0;
};

namespace {

struct NodeKeyHash {
    std::size_t operator()(const FormulaNode* n) const { return n->hash; }
};

struct NodeKeyEq {
    bool operator()(const FormulaNode* a, const FormulaNode* b) const {
        return a->kind == b->kind && a->l == b->l && a->r == b->r && a->name == b->name;
    }
};

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

struct FormulaFactory {
    std::mutex mu;
    std::unordered_set<const FormulaNode*, NodeKeyHash, NodeKeyEq> table;
    std::vector<std::unique_ptr<FormulaNode>> arena;

    static FormulaFactory& get() {
        static FormulaFactory* f = new FormulaFactory;  // never destroyed: handles outlive statics
        return *f;
    }

    Formula make(Kind k, std::string name, const FormulaNode* l, const FormulaNode* r) {
        auto n = std::make_unique<FormulaNode>();
        n->kind = k;
        n->name = std::move(name);
        n->l = l;
        n->r = r;
        std::size_t h = std::hash<int>{}(static_cast<int>(k));
        h = mix(h, std::hash<std::string>{}(n->name));
        if (l) h = mix(h, l->hash);
        if (r) h = mix(h, r->hash);
        n->hash = h;
        if (l) {
            n->size += l->size;
            n->depth = l->depth;
        }
        if (r) {
            n->size += r->size;
            n->depth = std::max(n->depth, r->depth);
        }
        switch (k) {
        case Kind::Box:
            n->depth += 1;
            n->weight = l->weight + 2;
            break;
        case Kind::And:
        case Kind::Or:
        case Kind::Imp:
            n->weight = l->weight + r->weight + 1;
            break;
        default:
            n->weight = 0;
        }
        std::lock_guard lock(mu);
        auto it = table.find(n.get());
        if (it != table.end()) return Formula(*it);
        const FormulaNode* raw = n.get();
        arena.push_back(std::move(n));
        table.insert(raw);
        return Formula(raw);
    }
};

namespace {

bool valid_atom(std::string_view s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return s != "true" && s != "false" && s != "box" && s != "dia";
}

}  // namespace

Formula Formula::atom(std::string_view name) {
    if (!valid_atom(name)) throw Error("invalid atom name '" + std::string(name) + "'");
    return FormulaFactory::get().make(Kind::Atom, std::string(name), nullptr, nullptr);
}
Formula Formula::bottom() {
    static const Formula f = FormulaFactory::get().make(Kind::Bottom, "", nullptr, nullptr);
    return f;
}
Formula Formula::top() {
    static const Formula f = FormulaFactory::get().make(Kind::Top, "", nullptr, nullptr);
    return f;
}
Formula Formula::conj(Formula a, Formula b) { return FormulaFactory::get().make(Kind::And, "", a.node_, b.node_); }
Formula Formula::disj(Formula a, Formula b) { return FormulaFactory::get().make(Kind::Or, "", a.node_, b.node_); }
Formula Formula::imp(Formula a, Formula b) { return FormulaFactory::get().make(Kind::Imp, "", a.node_, b.node_); }
Formula Formula::box(Formula a) { return FormulaFactory::get().make(Kind::Box, "", a.node_, nullptr); }

Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
Formula Formula::left() const { return Formula(node_->l); }
Formula Formula::right() const { return Formula(node_->r); }
bool Formula::is_binary() const {
    Kind k = kind();
    return k == Kind::And || k == Kind::Or || k == Kind::Imp;
}
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }
int Formula::size() const { return node_->size; }
int Formula::modal_depth() const { return node_->depth; }
int Formula::weight() const { return node_->weight; }
std::string Formula::str() const { return print(*this); }

namespace {

std::strong_ordering compare_nodes(const FormulaNode* a, const FormulaNode* b) {
    if (a == b) return std::strong_ordering::equal;
    if (a->kind != b->kind) return a->kind <=> b->kind;
    if (a->kind == Kind::Atom) return a->name.compare(b->name) <=> 0;
    if (auto c = compare_nodes(a->l, b->l); c != 0) return c;
    if (a->r) return compare_nodes(a->r, b->r);
    return std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering Formula::operator<=>(const Formula& o) const {
    if (!node_ || !o.node_) return (node_ != nullptr) <=> (o.node_ != nullptr);
    return compare_nodes(node_, o.node_);
}

int weight(Formula f) { return f.weight(); }

std::vector<Formula> subformulas(Formula f) {
    std::vector<Formula> out;
    std::vector<Formula> stack{f};
    std::unordered_set<const FormulaNode*> seen;
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (!seen.insert(g.node()).second) continue;
        out.push_back(g);
        if (g.is(Kind::Box)) stack.push_back(g.body());
        if (g.is_binary()) {
            stack.push_back(g.left());
            stack.push_back(g.right());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void collect_atoms(Formula f, std::vector<std::string>& out) {
    for (Formula g : subformulas(f))
        if (g.is(Kind::Atom)) out.push_back(g.name());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

// ---------------------------------------------------------------- printing

namespace {

// precedence: 1 imp, 2 or, 3 and, 4 unary
void print_to(Formula f, int ctx, std::string& out) {
    auto wrap = [&](int prec, auto body) {
        bool paren = prec < ctx;
        if (paren) out += '(';
        body();
        if (paren) out += ')';
    };
    switch (f.kind()) {
    case Kind::Atom: out += f.name(); return;
    case Kind::Bottom: out += "false"; return;
    case Kind::Top: out += "true"; return;
    case Kind::Box:
        out += "box ";
        print_to(f.body(), 4, out);
        return;
    case Kind::Imp:
        if (f.right().is(Kind::Bottom)) {
            out += '~';
            print_to(f.left(), 4, out);
            return;
        }
        wrap(1, [&] {
            print_to(f.left(), 2, out);
            out += " -> ";
            print_to(f.right(), 1, out);
        });
        return;
    case Kind::Or:
        wrap(2, [&] {
            print_to(f.left(), 2, out);
            out += " | ";
            print_to(f.right(), 3, out);
        });
        return;
    case Kind::And:
        wrap(3, [&] {
            print_to(f.left(), 3, out);
            out += " & ";
            print_to(f.right(), 4, out);
        });
        return;
    }
}

}  // namespace

std::string print(Formula f) {
    std::string out;
    print_to(f, 0, out);
    return out;
}

// ----------------------------------------------------------------- lexing

namespace detail {

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        auto push = [&](Tok k, std::size_t len) {
            out.push_back({k, std::string(s.substr(start, len)), start});
            i += len;
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            std::string word(s.substr(i, j - i));
            Tok k = Tok::Ident;
            if (word == "true") k = Tok::True;
            else if (word == "false") k = Tok::False;
            else if (word == "box") k = Tok::Box;
            else if (word == "dia") k = Tok::Dia;
            else if (!(word[0] >= 'a' && word[0] <= 'z'))
                throw ParseError("atom must start with a lowercase letter: '" + word + "'", start);
            push(k, j - i);
        } else if (starts("<->")) push(Tok::Iff, 3);
        else if (starts("<>")) push(Tok::Dia, 2);
        else if (starts("[]")) push(Tok::Box, 2);
        else if (starts("->")) push(Tok::Imp, 2);
        else if (starts("=>")) push(Tok::Arrow, 2);
        else if (c == '<') push(Tok::Langle, 1);
        else if (c == '>') push(Tok::Rangle, 1);
        else if (c == '(') push(Tok::LParen, 1);
        else if (c == ')') push(Tok::RParen, 1);
        else if (c == '~' || c == '!') push(Tok::Not, 1);
        else if (c == '&') push(Tok::And, 1);
        else if (c == '|') push(Tok::Or, 1);
        else if (c == ',') push(Tok::Comma, 1);
        else throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
}

bool FormulaParser::accept(Tok k) {
    if (peek().kind != k) return false;
    ++i_;
    return true;
}

void FormulaParser::expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what + ", found " + describe(peek()));
}

void FormulaParser::fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }

Formula FormulaParser::formula(bool bar_is_or) {
    bool saved = bar_is_or_;
    bar_is_or_ = bar_is_or;
    Formula f = iff();
    bar_is_or_ = saved;
    return f;
}

Formula FormulaParser::iff() {
    Formula f = imp();
    while (accept(Tok::Iff)) f = Formula::iff(f, imp());
    return f;
}

Formula FormulaParser::imp() {
    Formula f = disj();
    if (accept(Tok::Imp)) return Formula::imp(f, imp());
    return f;
}

Formula FormulaParser::disj() {
    Formula f = conj();
    while (peek().kind == Tok::Or && (bar_is_or_ || depth_ > 0)) {
        next();
        f = Formula::disj(f, conj());
    }
    return f;
}

Formula FormulaParser::conj() {
    Formula f = unary();
    while (accept(Tok::And)) f = Formula::conj(f, unary());
    return f;
}

Formula FormulaParser::unary() {
    const Token& t = peek();
    switch (t.kind) {
    case Tok::Not: next(); return Formula::neg(unary());
    case Tok::Box: next(); return Formula::box(unary());
    case Tok::Dia: next(); return Formula::dia(unary());
    case Tok::True: next(); return Formula::top();
    case Tok::False: next(); return Formula::bottom();
    case Tok::Ident: next(); return Formula::atom(t.text);
    case Tok::LParen: {
        next();
        ++depth_;
        Formula f = iff();
        --depth_;
        expect(Tok::RParen, "')'");
        return f;
    }
    default: fail("expected a formula, found " + describe(t));
    }
}

}  // namespace detail

Formula parse_formula(std::string_view text) {
    auto toks = detail::lex(text);
    detail::FormulaParser p(toks);
    Formula f = p.formula();
    if (p.peek().kind != detail::Tok::End) p.fail("unexpected " + detail::describe(p.peek()));
    return f;
}

}  // namespace nnml
