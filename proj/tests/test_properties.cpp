#include "suites.hpp"

#include <doctest.h>

using namespace nnml;

namespace {
void require_clean(const suites::Tally& t, const char* what) {
    INFO(what, ": ", t.summary());
    CHECK(t.ok());
}
}  // namespace

TEST_CASE("corpus sample: truth lemma, mode agreement, audits, bounds") {
    suites::CorpusResult c = suites::run_corpus(40, 77);
    require_clean(c.truth, "truth lemma");
    require_clean(c.agree, "mode agreement");
    require_clean(c.audit, "derivation audit");
    require_clean(c.bound, "complexity bound");
    require_clean(c.polysize, "model size");
    CHECK(c.proved > 0);
    CHECK(c.refuted > 0);
}

TEST_CASE("structural rules and invertibility on a sample") {
    suites::AdmissibilityResult a = suites::run_admissibility(25, 78);
    require_clean(a.weakening, "weakening");
    require_clean(a.contraction, "contraction");
    require_clean(a.external, "external contraction");
    require_clean(a.cut, "cut");
    require_clean(a.invertibility, "invertibility");
    require_clean(a.audit, "audit");
}

TEST_CASE("transformations on a sample") {
    suites::TransformResult t = suites::run_transformations(20, 15, 79);
    require_clean(t.to_bi, "standard to bi");
    require_clean(t.rough, "rough");
    require_clean(t.fine, "fine");
    require_clean(t.transport, "condition transport");
    CHECK(t.transported > 0);
}

TEST_CASE("relational truth lemma on regular logics") {
    for (const char* name : {"MC", "K", "MCT", "KT", "MCP", "KD"}) {
        LogicSpec l = parse_logic_name(name);
        for (Formula f : corpus::formulas(5, 60)) {
            SearchOutcome r = prove(Hypersequent::of_formula(f), l);
            if (r.proved()) continue;
            RelationalModel m = extract_relational_countermodel(r.refuted().leaf, r.refuted().enumeration, l);
            INFO(print(f), " in ", name, "\n", render(m));
            CHECK_FALSE(oracle::rel_force(m, r.refuted().enumeration.at(1), f));
            auto rep = check_conditions(m, l);
            for (const ConditionResult& c : rep.items) CHECK(c.status != CondStatus::Fail);
        }
    }
}

TEST_CASE("search is deterministic") {
    for (Formula f : corpus::formulas(9, 30)) {
        LogicSpec l = parse_logic_name("ECN");
        SearchOutcome a = prove(Hypersequent::of_formula(f), l), b = prove(Hypersequent::of_formula(f), l);
        REQUIRE(a.proved() == b.proved());
        if (!a.proved()) {
            CHECK(a.refuted().leaf == b.refuted().leaf);
            CHECK(a.refuted().enumeration == b.refuted().enumeration);
        }
    }
}
