#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nnml {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Kinds are listed in canonical order; the total order on formulas compares
// kinds first.
enum class Kind : std::uint8_t { Bottom, Top, Atom, Box, And, Or, Imp };

struct FormulaNode;

// Hash-consed handle: two formulas are structurally equal iff their nodes
// are the same object. Nodes live for the whole process and are immutable.
class Formula {
public:
    Formula() = default;

    static Formula atom(std::string_view name);
    static Formula bottom();
    static Formula top();
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula imp(Formula a, Formula b);
    static Formula box(Formula a);
    static Formula neg(Formula a) { return imp(a, bottom()); }
    static Formula iff(Formula a, Formula b) { return conj(imp(a, b), imp(b, a)); }
    static Formula dia(Formula a) { return neg(box(neg(a))); }

    bool null() const { return node_ == nullptr; }
    Kind kind() const;
    const std::string& name() const;
    Formula left() const;
    Formula right() const;
    Formula body() const { return left(); }  // operand of a box

    bool is(Kind k) const { return node_ && kind() == k; }
    bool is_binary() const;

    std::size_t hash() const;
    int size() const;         // node count
    int modal_depth() const;
    int weight() const;

    std::string str() const;

    const FormulaNode* node() const { return node_; }

    bool operator==(const Formula& o) const { return node_ == o.node_; }
    std::strong_ordering operator<=>(const Formula& o) const;

private:
    explicit Formula(const FormulaNode* n) : node_(n) {}
    const FormulaNode* node_ = nullptr;
    friend struct FormulaFactory;
};

int weight(Formula f);

// Sorted, duplicate-free.
std::vector<Formula> subformulas(Formula f);
void collect_atoms(Formula f, std::vector<std::string>& out);

Formula parse_formula(std::string_view text);
std::string print(Formula f);

}  // namespace nnml

template <>
struct std::hash<nnml::Formula> {
    std::size_t operator()(const nnml::Formula& f) const noexcept { return f.hash(); }
};
