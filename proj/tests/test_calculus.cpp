#include "nnml/calculus.hpp"
#include "nnml/random.hpp"

#include <doctest.h>

using namespace nnml;

namespace {
Hypersequent hs(const char* s) { return parse_hypersequent(s); }
LogicSpec lg(const char* s) { return parse_logic_name(s); }

// Every formula occurrence in a component, block members included.
std::vector<Formula> members(const Sequent& s) {
    std::vector<Formula> out(s.ante.begin(), s.ante.end());
    out.insert(out.end(), s.succ.begin(), s.succ.end());
    for (const Block& b : s.blocks) out.insert(out.end(), b.members.begin(), b.members.end());
    return out;
}
}  // namespace

TEST_CASE("initial hypersequents") {
    CHECK(is_initial(hs("p => p")));
    CHECK(is_initial(hs("box p => box p")));
    CHECK(is_initial(hs("p => q | false, r =>")));
    CHECK(is_initial(hs("=> true")));
    CHECK_FALSE(is_initial(hs("p => q")));
    CHECK_FALSE(is_initial(hs("<p> => p")));
}

TEST_CASE("first instance of axiom M in E is BoxL") {
    auto inst = first_instance(hs("box (p & q) => box p"), lg("E"));
    REQUIRE(inst);
    CHECK(inst->rule == RuleId{Rule::BoxL});
    REQUIRE(inst->premisses.size() == 1);
    CHECK(inst->premisses[0] == hs("<p & q>, box (p & q) => box p"));
}

TEST_CASE("BoxR in E creates the two premisses") {
    auto inst = first_instance(hs("<p & q>, box (p & q) => box p"), lg("E"));
    REQUIRE(inst);
    CHECK(inst->rule == RuleId{Rule::BoxR});
    REQUIRE(inst->premisses.size() == 2);
    CHECK(inst->premisses[0] == hs("<p & q>, box (p & q) => box p | p & q => p"));
    CHECK(inst->premisses[1] == hs("<p & q>, box (p & q) => box p | p => p & q"));
}

TEST_CASE("BoxRm has one premiss") {
    auto inst = first_instance(hs("<p & q> => box p"), lg("M"));
    REQUIRE(inst);
    CHECK(inst->rule == RuleId{Rule::BoxRm});
    CHECK(inst->premisses.size() == 1);
}

TEST_CASE("C is blocked when the merged block adds nothing set-wise") {
    for (const RuleInstance& r : applicable_instances(hs("<p>, <p> =>"), lg("EC"))) CHECK(r.rule != RuleId{Rule::C});
    bool found = false;
    for (const RuleInstance& r : applicable_instances(hs("<p>, <q> =>"), lg("EC")))
        if (r.rule == RuleId{Rule::C}) {
            found = true;
            CHECK(r.premisses[0] == hs("<p, q>, <p>, <q> =>"));
        }
    CHECK(found);
}

TEST_CASE("modal extension rules") {
    auto t = first_instance(hs("<p, q> => r"), lg("ET"));
    REQUIRE(t);
    CHECK(t->rule == RuleId{Rule::T});
    CHECK(t->premisses[0] == hs("p, q, <p, q> => r"));

    auto n = first_instance(hs("p => q"), lg("EN"));
    REQUIRE(n);
    CHECK(n->rule == RuleId{Rule::N});
    CHECK(n->premisses[0] == hs("p, <true> => q"));

    auto p = first_instance(hs("<p> =>"), lg("EP"));
    REQUIRE(p);
    CHECK(p->rule == RuleId{Rule::P});
    CHECK(p->premisses[0] == hs("<p> => | p =>"));

    auto d1 = first_instance(hs("<p, q> =>"), lg("ED"));
    REQUIRE(d1);
    CHECK(d1->rule == RuleId{Rule::D1});
    CHECK(d1->premisses.size() == 3);

    bool d2 = false;
    for (const RuleInstance& r : applicable_instances(hs("<p>, <q> =>"), lg("ED")))
        if (r.rule == RuleId{Rule::D2}) {
            d2 = true;
            CHECK(r.premisses.size() == 2);
            CHECK(r.premisses[0] == hs("<p>, <q> => | p, q =>"));
            CHECK(r.premisses[1] == hs("<p>, <q> => | => p, q"));
        }
    CHECK(d2);

    bool d3 = false;
    for (const RuleInstance& r : applicable_instances(hs("<p>, <q>, <r> =>"), lg("ED3+")))
        if (r.rule == RuleId{Rule::DnPlus, 3}) {
            d3 = true;
            CHECK(r.premisses.size() == 1);
        }
    CHECK(d3);
}

TEST_CASE("saturation examples") {
    CHECK(is_saturated(hs("<p & q>, box (p & q) => box p | p => p & q, q"), lg("E")));
    CHECK(is_saturated(hs("p => q"), lg("E")));
    CHECK_FALSE(is_saturated(hs("box p =>"), lg("E")));
    CHECK_FALSE(is_saturated(hs("p => p"), lg("E")));
}

TEST_CASE("instances follow the fixed rule order") {
    auto all = applicable_instances(hs("p & q, box r => p | q, <r> => box s"), lg("MC"));
    REQUIRE(!all.empty());
    auto order = rule_set(lg("MC"));
    auto pos = [&](RuleId r) { return std::find(order.begin(), order.end(), r) - order.begin(); };
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(pos(all[i - 1].rule) <= pos(all[i].rule));
}

TEST_CASE("saturation agrees with the instance enumerator; premisses grow; subformula property") {
    Rng rng(3);
    const char* logics[] = {"E", "M", "EC", "EN", "K", "ET", "EP", "ED", "MD", "ED3+"};
    for (const char* name : logics) {
        LogicSpec l = lg(name);
        for (int i = 0; i < 60; ++i) {
            Hypersequent h = Hypersequent::of_formula(random_formula(rng, 12, 2, {"p", "q"}));
            // Walk a few steps down the first branch, checking every visited node.
            for (int step = 0; step < 12 && !is_initial(h); ++step) {
                auto insts = applicable_instances(h, l);
                CHECK(is_saturated(h, l) == insts.empty());
                if (insts.empty()) break;
                std::vector<Formula> sub;
                for (const Component& c : h.comps)
                    for (Formula g : members(c.seq)) {
                        auto s = subformulas(g);
                        sub.insert(sub.end(), s.begin(), s.end());
                    }
                std::sort(sub.begin(), sub.end());
                for (const RuleInstance& r : insts)
                    for (const Hypersequent& pr : r.premisses) {
                        bool fresh = false;
                        for (const Component& c : pr.comps) {
                            bool covered = false;
                            for (const Component& d : h.comps) covered = covered || subsumes(c.seq, d.seq);
                            fresh = fresh || !covered;
                            for (Formula g : members(c.seq))
                                if (g != Formula::top()) CHECK(std::binary_search(sub.begin(), sub.end(), g));
                        }
                        CHECK(fresh);
                    }
                h = insts.front().premisses.back();
            }
        }
    }
}
