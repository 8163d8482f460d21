#include "nnml/json_io.hpp"
#include "nnml/models.hpp"
#include "nnml/search.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace nnml;

namespace {
Formula f(const char* s) { return parse_formula(s); }
LogicSpec lg(const char* s) { return parse_logic_name(s); }

BiModel m_example() {
    BiModel m;
    m.worlds = {1, 2};
    m.valuation = {{"p", {2}}, {"q", {}}};
    m.nbhd = {{1, {{{}, {2}}}}, {2, {}}};
    return m;
}

BiModel k_example() {
    BiModel m;
    m.worlds = {1, 2, 3};
    m.valuation = {{"p", {}}, {"q", {2}}};
    m.nbhd = {{1, {{{}, {2, 3}}, {{3}, {}}}}, {2, {}}, {3, {}}};
    return m;
}

Refuted refute(const char* logic, const char* input) {
    SearchOutcome r = prove(parse_input(input), lg(logic));
    REQUIRE_FALSE(r.proved());
    return r.refuted();
}

const ConditionResult& cond(const ConditionReport& r, const char* name) {
    const ConditionResult* c = r.find(name);
    REQUIRE(c != nullptr);
    return *c;
}
}  // namespace

TEST_CASE("bi forcing on the axiom-M model") {
    BiModel m = m_example();
    CHECK(force(m, 1, f("box (p & q)")));
    CHECK_FALSE(force(m, 1, f("box p")));
    CHECK_FALSE(force(m, 1, f("box (p & q) -> box p")));
    CHECK_FALSE(force(m, 2, f("box true")));
    CHECK(truth_set(m, f("p | q")) == WorldSet{2});
    CHECK_THROWS_AS(force(m, 7, f("p")), Error);
}

TEST_CASE("relational forcing at a non-normal world") {
    RelationalModel m;
    m.worlds = {1, 2};
    m.non_normal = {2};
    m.relation = {{1, {2}}};
    m.valuation = {{"p", {2}}};
    CHECK_FALSE(force(m, 2, f("box p")));
    CHECK_FALSE(force(m, 2, f("box true")));
    CHECK(force(m, 1, f("box p")));
    CHECK_FALSE(force(m, 1, f("box box p")));
}

TEST_CASE("standard forcing") {
    StandardModel m;
    m.worlds = {1, 2};
    m.valuation = {{"p", {2}}};
    m.nbhd = {{1, {{2}}}, {2, {}}};
    CHECK(force(m, 1, f("box p")));
    CHECK(force(m, 1, f("box (p & p)")));
    CHECK_FALSE(force(m, 1, f("box true")));
}

TEST_CASE("condition checks") {
    CHECK(check_conditions(k_example(), lg("EC")).ok());
    CHECK(check_conditions(k_example(), lg("E")).items.empty());

    BiModel d;
    d.worlds = {1};
    d.nbhd = {{1, {{{}, {}}}}};
    auto rep = check_conditions(d, lg("ED"));
    CHECK_FALSE(rep.ok());
    CHECK(cond(rep, "D").status == CondStatus::Fail);
    CHECK_FALSE(cond(rep, "D").witness.empty());

    BiModel mono = m_example();
    CHECK(cond(check_conditions(mono, lg("M")), "M").status == CondStatus::Fail);
    mono.nbhd[1] = {{{2}, {}}};
    CHECK(check_conditions(mono, lg("MC")).ok());

    BiModel t;
    t.worlds = {1, 2};
    t.nbhd = {{1, {{{2}, {}}}}, {2, {}}};
    CHECK(cond(check_conditions(t, lg("ET")), "T").status == CondStatus::Fail);
    t.nbhd[1] = {{{1}, {}}};
    CHECK(cond(check_conditions(t, lg("ET")), "T").status == CondStatus::Pass);

    BiModel rd;
    rd.worlds = {1, 2, 3};
    rd.nbhd = {{1, {{{1, 2}, {}}, {{2, 3}, {}}, {{1, 3}, {}}}}, {2, {}}, {3, {}}};
    CHECK(cond(check_conditions(rd, lg("ED2+")), "RD2+").status == CondStatus::Pass);
    CHECK(cond(check_conditions(rd, lg("ED3+")), "RD3+").status == CondStatus::Fail);

    StandardModel s;
    s.worlds = {1, 2};
    s.nbhd = {{1, {{1}, {2}}}, {2, {{1, 2}}}};
    auto sr = check_conditions(s, lg("ECND"));
    CHECK(cond(sr, "C").status == CondStatus::Fail);
    CHECK(cond(sr, "N").status == CondStatus::Fail);
    CHECK(cond(sr, "D").status == CondStatus::Fail);

    RelationalModel rm;
    rm.worlds = {1, 2};
    rm.relation = {{1, {1, 2}}, {2, {1}}};
    auto rr = check_conditions(rm, lg("MCNTD"));
    CHECK(cond(rr, "T").status == CondStatus::Fail);
    CHECK(cond(rr, "N").status == CondStatus::Pass);
    CHECK(cond(rr, "D").status == CondStatus::Unchecked);
}

TEST_CASE("extraction reproduces the worked examples") {
    Refuted m = refute("E", "box (p & q) -> box p");
    BiModel bm = extract_bi_countermodel(m.leaf, m.enumeration, lg("E"));
    CHECK(bm.worlds == WorldSet{1, 2});
    CHECK(bm.valuation.at("p") == WorldSet{2});
    CHECK(bm.valuation.at("q").empty());
    CHECK(bm.nbhd.at(1) == std::set<BiPair>{{{}, {2}}});
    CHECK(bm.nbhd.at(2).empty());
    CHECK(model_size(bm) == 3);

    Refuted k = refute("EC", "box (p -> q) -> (box p -> box q)");
    BiModel bk = extract_bi_countermodel(k.leaf, k.enumeration, lg("EC"));
    CHECK(bk.nbhd.at(1) == std::set<BiPair>{{{}, {2, 3}}, {{3}, {}}});
    CHECK(model_size(bk) == 5);

    Refuted four = refute("MC", "box p -> box box p");
    BiModel b4 = extract_bi_countermodel(four.leaf, four.enumeration, lg("MC"));
    CHECK(b4.nbhd.at(1) == std::set<BiPair>{{{2}, {}}});
    RelationalModel r4 = extract_relational_countermodel(four.leaf, four.enumeration, lg("MC"));
    CHECK(r4.non_normal == WorldSet{2});
    CHECK(r4.relation.at(1) == WorldSet{2});

    Refuted t4 = refute("MCNT", "box p -> box box p");
    RelationalModel rt = extract_relational_countermodel(t4.leaf, t4.enumeration, lg("MCNT"));
    CHECK(rt.non_normal.empty());
    CHECK(rt.relation.at(1) == WorldSet{1, 2});
    CHECK(rt.relation.at(2) == WorldSet{1, 2, 3});
    CHECK(rt.relation.at(3) == WorldSet{1, 2, 3});
    CHECK(check_conditions(rt, lg("MCNT")).ok());

    Refuted d = refute("ED", "~ box true");
    BiModel bd = extract_bi_countermodel(d.leaf, d.enumeration, lg("ED"));
    CHECK(bd.nbhd.at(1) == std::set<BiPair>{{{2}, {}}});

    CHECK_THROWS_AS(extract_relational_countermodel(m.leaf, m.enumeration, lg("E")), Error);
}

TEST_CASE("bi_from_standard") {
    StandardModel s;
    s.worlds = {1, 2};
    s.nbhd = {{1, {{}}}, {2, {}}};
    CHECK(bi_from_standard(s, false).nbhd.at(1) == std::set<BiPair>{{{}, {1, 2}}});
    s.nbhd = {{1, {{2}}}, {2, {}}};
    CHECK(bi_from_standard(s, true).nbhd.at(1) == std::set<BiPair>{{{2}, {}}});
    s.nbhd = {{1, {}}, {2, {}}};
    CHECK(bi_from_standard(s, false).nbhd.at(1).empty());
}

TEST_CASE("rough transformation") {
    BiModel m;
    m.worlds = {1, 2};
    m.nbhd = {{1, {{{}, {2}}}}, {2, {}}};
    // Oracle: enumerate the subsets of W by hand.
    CHECK(standard_from_bi_rough(m).nbhd.at(1) == std::set<WorldSet>{{}, {1}});
    BiModel one;
    one.worlds = {1};
    one.nbhd = {{1, {{{1}, {}}}}};
    CHECK(standard_from_bi_rough(one).nbhd.at(1) == std::set<WorldSet>{{1}});
    BiModel big;
    for (int i = 1; i <= 6; ++i) big.worlds.insert(i);
    CHECK_THROWS_AS(standard_from_bi_rough(big, 5), Error);
}

TEST_CASE("fine transformation on the worked examples") {
    std::vector<Formula> s = subformulas(f("box (p & q) -> box p"));
    StandardModel sm = standard_from_bi_fine(m_example(), s, false);
    CHECK(sm.nbhd.at(1) == std::set<WorldSet>{{}});

    std::vector<Formula> ks;
    for (const char* g : {"box (p -> q)", "box p", "box q", "box ((p -> q) & q)", "box (p & q)"})
        for (Formula h : subformulas(f(g))) ks.push_back(h);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    StandardModel sk = standard_from_bi_fine(k_example(), ks, false);
    CHECK(sk.nbhd.at(1) == std::set<WorldSet>{{1, 2, 3}, {}});

    CHECK(standard_from_bi_fine(m_example(), subformulas(f("p & q")), false).nbhd.at(1).empty());
    CHECK_THROWS_AS(standard_from_bi_fine(m_example(), {f("box p")}, false), Error);
}

TEST_CASE("close_for_logic adds the unit and intersections") {
    StandardModel s;
    s.worlds = {1, 2, 3};
    s.nbhd = {{1, {{1, 2}, {2, 3}}}, {2, {}}, {3, {}}};
    StandardModel c = close_for_logic(s, lg("ECN"));
    CHECK(c.nbhd.at(1).count({2}));
    CHECK(c.nbhd.at(2).count({1, 2, 3}));
    CHECK(check_conditions(c, lg("ECN")).ok());
}

TEST_CASE("model size") {
    BiModel e;
    e.worlds = {1};
    CHECK(model_size(e) == 1);
    RelationalModel r;
    r.worlds = {1, 2};
    r.relation = {{1, {1, 2}}};
    CHECK(model_size(r) == 4);
}

TEST_CASE("json round trip") {
    for (AnyModel m : {AnyModel{k_example()}, AnyModel{standard_from_bi_rough(m_example())}}) {
        AnyModel back = model_from_json(to_json(m));
        for (Formula g : {f("box p"), f("box (p -> q)"), f("p | box ~q")})
            for (World w : {1, 2}) CHECK(force(back, w, g) == force(m, w, g));
    }
    RelationalModel r;
    r.worlds = {1, 2};
    r.non_normal = {2};
    r.relation = {{1, {2}}};
    auto back = std::get<RelationalModel>(model_from_json(to_json(r)));
    CHECK(back.non_normal == r.non_normal);
    CHECK(back.relation == r.relation);
}

TEST_CASE("malformed models are rejected") {
    auto bad = [](const char* text) { CHECK_THROWS_AS(model_from_json(Json::parse(text)), Error); };
    bad("[]");
    bad(R"({"worlds":[1]})");
    bad(R"({"worlds":[],"bi":{}})");
    bad(R"({"worlds":[1],"bi":{"2":[]}})");
    bad(R"({"worlds":[1],"bi":{"1":[{"plus":[3],"minus":[]}]}})");
    bad(R"({"worlds":[1],"valuation":{"P":[1]},"standard":{}})");
    bad(R"({"worlds":[1],"standard":{},"bi":{}})");
    bad(R"({"worlds":[1,2],"relational":{"non_normal":[2],"edges":{"2":[1]}}})");
}

TEST_CASE("library forcing matches the test oracle") {
    BiModel m = k_example();
    for (const char* g : {"box p", "box (p -> q)", "box q", "box (p & (p -> q))", "~ box ~ q", "box box q"})
        for (World w : m.worlds) CHECK(force(m, w, f(g)) == oracle::bi_force(m, w, f(g)));
}
