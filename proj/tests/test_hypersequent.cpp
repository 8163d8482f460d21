#include "nnml/hypersequent.hpp"

#include <doctest.h>

using namespace nnml;

namespace {
Formula f(const char* s) { return parse_formula(s); }
Sequent seq(const char* s) { return parse_sequent(s); }
}  // namespace

TEST_CASE("block weight") {
    CHECK(block_weight(Block({f("p")})) == 1);
    CHECK(block_weight(Block({f("p"), f("box q")})) == 3);
    CHECK(block_weight(Block({f("p & q")})) == 2);
    CHECK_THROWS_AS(Block(std::vector<Formula>{}), Error);
}

TEST_CASE("blocks are canonical multisets") {
    CHECK(Block({f("q"), f("p")}) == Block({f("p"), f("q")}));
    CHECK(Block({f("p"), f("p")}) != Block({f("p")}));
    CHECK(Block({f("p"), f("p")}).same_set(Block({f("p")})));
    CHECK(Block({f("p"), f("p")}).set().size() == 1);
}

TEST_CASE("interpret") {
    CHECK(interpret(seq("p, <q, r> => s")) == f("p & box (q & r) -> s"));
    CHECK(interpret(seq("=>")) == f("true -> false"));
    CHECK(interpret(seq("<p> =>")) == f("box p -> false"));
    CHECK(interpret(seq("=> p, q")) == f("true -> p | q"));
}

TEST_CASE("subsumes") {
    CHECK(subsumes(seq("p => q"), seq("p, r => q, s")));
    CHECK(subsumes(seq("<p, p> =>"), seq("<p> =>")));
    CHECK_FALSE(subsumes(seq("p => q"), seq("q => p")));
    CHECK_FALSE(subsumes(seq("<p> =>"), seq("<p, q> =>")));
    CHECK(subsumes(seq("p, p => "), seq("p =>")));
}

TEST_CASE("subsumption is reflexive and transitive") {
    std::vector<Sequent> ss = {seq("p => q"), seq("p, r => q"), seq("p, r, <q> => q, s"), seq("<p> =>"), seq("=>"),
                               seq("r, <q>, <p> => q, s, p")};
    for (const Sequent& a : ss) CHECK(subsumes(a, a));
    for (const Sequent& a : ss)
        for (const Sequent& b : ss)
            for (const Sequent& c : ss)
                if (subsumes(a, b) && subsumes(b, c)) CHECK(subsumes(a, c));
}

TEST_CASE("text round trip") {
    for (const char* t : {"p => q", "<p & q>, box (p & q) => box p | p => p & q, q", "=>", "<p, q>, <p> => | => r",
                          "=> (p | q), r"}) {
        Hypersequent h = parse_hypersequent(t);
        CHECK(parse_hypersequent(h.str()) == h);
    }
    CHECK(parse_hypersequent("p => q | => r").comps.size() == 2);
    CHECK_THROWS_AS(parse_hypersequent("=> p | q"), ParseError);
    CHECK(parse_hypersequent("=> (p | q)").comps.size() == 1);
}

TEST_CASE("component ids follow input order") {
    Hypersequent h = parse_hypersequent("p => | q => | r =>");
    CHECK(h.comps[0].id == 1);
    CHECK(h.comps[2].id == 3);
    CHECK(h.next_id() == 4);
    CHECK(h.find(2)->seq == seq("q =>"));
}

TEST_CASE("parse_input accepts formulas and hypersequents") {
    CHECK(parse_input("p -> p") == Hypersequent::of_formula(f("p -> p")));
    CHECK(parse_input("p => p").comps.size() == 1);
    CHECK_THROWS_AS(parse_input("p => <"), ParseError);
}

TEST_CASE("blocks only in antecedents") {
    CHECK_THROWS_AS(parse_sequent("=> <p>"), ParseError);
}
