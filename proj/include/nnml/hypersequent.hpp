#pragma once

#include "nnml/formula.hpp"

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace nnml {

// Multiset of formulas read as box of their conjunction. Members are kept
// sorted so multiset equality is vector equality.
struct Block {
    std::vector<Formula> members;

    Block() = default;
    explicit Block(std::vector<Formula> ms);

    std::vector<Formula> set() const;  // sorted, duplicates removed
    bool same_set(const Block& o) const;
    bool operator==(const Block&) const = default;
    std::string str() const;
};

// Blocks with more members come first, then lexicographic by members.
bool block_less(const Block& a, const Block& b);

int block_weight(const Block& b);

struct Sequent {
    std::vector<Formula> ante;   // sorted multiset
    std::vector<Block> blocks;   // sorted by block_less
    std::vector<Formula> succ;   // sorted multiset

    bool in_ante(Formula f) const;
    bool in_succ(Formula f) const;
    bool has_block_set(const std::vector<Formula>& set) const;

    void add_ante(Formula f);   // multiset insertion
    void add_succ(Formula f);
    void add_block(Block b);
    // Insert only when not already present (set-wise).
    bool absorb_ante(Formula f);
    bool absorb_succ(Formula f);

    int size() const { return static_cast<int>(ante.size() + blocks.size() + succ.size()); }
    int distinct_size() const;
    int node_count() const;

    bool operator==(const Sequent&) const = default;
    std::string str() const;
};

struct Component {
    int id = 0;
    Sequent seq;
    bool operator==(const Component&) const = default;
};

struct Hypersequent {
    std::vector<Component> comps;

    static Hypersequent of_formula(Formula f);
    static Hypersequent of_sequents(std::vector<Sequent> ss);

    int next_id() const;
    const Component* find(int id) const;
    Component* find(int id);
    int node_count() const;  // total formula-node count
    int max_component_size() const;

    bool operator==(const Hypersequent&) const = default;
    std::string str() const;
};

Formula interpret(const Sequent& s);
bool subsumes(const Sequent& candidate, const Sequent& reference);

Sequent parse_sequent(std::string_view text);
Hypersequent parse_hypersequent(std::string_view text);
// A formula, or a hypersequent when the text contains "=>".
Hypersequent parse_input(std::string_view text);

// Printing a formula inside a sequent: disjunctions are parenthesised so the
// bar cannot be mistaken for a component separator.
std::string print_in_sequent(Formula f);

}  // namespace nnml
