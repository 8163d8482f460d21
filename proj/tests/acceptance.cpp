#include "suites.hpp"

#include <cstdio>
#include <iostream>

using namespace nnml;
using suites::Tally;

namespace {

LogicSpec lg(const char* s) { return parse_logic_name(s); }

int failures = 0;

void report(int n, const char* title, bool ok, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", n, title, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

const char* kHansson = "~ (box mobile_on & box schoolplay & box ~ (mobile_on & schoolplay))";

Tally derivability_matrix(Tally& audit) {
    Tally t;
    const std::vector<std::pair<const char*, const char*>> cases = {
        {"E", "box (p & q) => box (q & p)"},
        {"E", "box (p | q) => box (q | p)"},
        {"E", "box ~ ~ p => box p"},
        {"E", "box p => box (p & p)"},
        {"M", "box (p & q) -> box p"},
        {"EN", "box true"},
        {"EC", "box p & box q -> box (p & q)"},
        {"ET", "box p -> p"},
        {"EP", "~ box false"},
        {"ED", "box p -> ~ box ~ p"},
        {"ED1+", "~ box (p & ~ p)"},
        {"ED2+", "~ box (p & ~ p)"},
        {"ED2+", "~ (box p & box ~ p)"},
        {"ED3+", "~ (box p & box ~ p)"},
        {"ED3+", "~ (box p & box q & box ~ (p & q))"},
        {"ED3+", "~ (box (p & q) & box (q -> r) & box ~ r)"},
    };
    for (auto [l, f] : cases) {
        Hypersequent h = parse_input(f);
        SearchOutcome r = prove(h, lg(l));
        t.check(r.proved(), std::string(f) + " not proved in " + l);
        if (r.proved()) suites::audit(r.derivation(), lg(l), audit);
    }
    return t;
}

Tally separation_matrix(Tally& audit) {
    Tally t;
    const std::vector<std::tuple<const char*, const char*, bool>> cases = {
        {"E", "box (p & q) -> box p", false},
        {"E", "box p & box q -> box (p & q)", false},
        {"EN", "box p & box q -> box (p & q)", false},
        {"E", "box true", false},
        {"EC", "box true", false},
        {"EC", "box (p -> q) -> (box p -> box q)", false},
        {"E", "box (p -> q) -> (box p -> box q)", false},
        {"EP", "box p -> ~ box ~ p", false},
        {"ED", "~ box false", false},
        {"ED", kHansson, false},
        {"EP", kHansson, false},
        {"EDP", kHansson, false},
        {"ED3+", kHansson, true},
        {"ECD", kHansson, true},
    };
    for (auto [l, f, expect] : cases) {
        LogicSpec spec = lg(l);
        Hypersequent h = parse_input(f);
        SearchOutcome r = prove(h, spec);
        t.check(r.proved() == expect, std::string(f) + (expect ? " not proved in " : " proved in ") + l);
        if (r.proved()) {
            suites::audit(r.derivation(), spec, audit);
            continue;
        }
        BiModel m = extract_bi_countermodel(r.refuted().leaf, r.refuted().enumeration, spec);
        t.check(check_conditions(m, spec).ok() && oracle::bi_conditions(m, spec),
                std::string("countermodel for ") + f + " in " + l + " fails the conditions");
        bool falsified = false;
        for (World w : m.worlds) falsified = falsified || !oracle::bi_force(m, w, parse_formula(f));
        t.check(falsified, std::string("countermodel for ") + f + " in " + l + " does not falsify it");
    }
    return t;
}

Tally paper_models() {
    Tally t;
    auto refute = [&](const char* l, const char* f) {
        SearchOutcome r = prove(parse_input(f), lg(l));
        if (r.proved()) throw Error(std::string(f) + " proved in " + l);
        return r.refuted();
    };
    using Pairs = std::set<BiPair>;
    try {
        Refuted m = refute("E", "box (p & q) -> box p");
        BiModel bm = extract_bi_countermodel(m.leaf, m.enumeration, lg("E"));
        t.check(bm.worlds == WorldSet{1, 2} && bm.valuation.at("p") == WorldSet{2} && bm.valuation.at("q").empty() &&
                    bm.nbhd.at(1) == Pairs{{{}, {2}}} && bm.nbhd.at(2).empty(),
                "axiom M in E:\n" + render(bm));
        StandardModel sm = standard_from_bi_fine(bm, subformulas(parse_formula("box (p & q) -> box p")), false);
        t.check(sm.nbhd.at(1) == std::set<WorldSet>{{}}, "fine transformation, M example:\n" + render(sm));

        Refuted k = refute("EC", "box (p -> q) -> (box p -> box q)");
        BiModel bk = extract_bi_countermodel(k.leaf, k.enumeration, lg("EC"));
        t.check(bk.worlds == WorldSet{1, 2, 3} && bk.valuation.at("p").empty() && bk.valuation.at("q") == WorldSet{2} &&
                    bk.nbhd.at(1) == Pairs{{{}, {2, 3}}, {{3}, {}}} && bk.nbhd.at(2).empty() && bk.nbhd.at(3).empty(),
                "axiom K in EC:\n" + render(bk));
        std::vector<Formula> ks;
        for (const char* g : {"box (p -> q)", "box p", "box q", "box ((p -> q) & q)", "box (p & q)"})
            ks.push_back(parse_formula(g));
        StandardModel sk = standard_from_bi_fine(bk, suites::closure(ks), false);
        t.check(sk.nbhd.at(1) == std::set<WorldSet>{bk.worlds, {}}, "fine transformation, K example:\n" + render(sk));

        Refuted four = refute("MC", "box p -> box box p");
        BiModel b4 = extract_bi_countermodel(four.leaf, four.enumeration, lg("MC"));
        t.check(b4.worlds == WorldSet{1, 2} && b4.nbhd.at(1) == Pairs{{{2}, {}}} && b4.nbhd.at(2).empty(),
                "axiom 4 in MC, bi:\n" + render(b4));
        RelationalModel r4 = extract_relational_countermodel(four.leaf, four.enumeration, lg("MC"));
        t.check(r4.non_normal == WorldSet{2} && r4.relation.at(1) == WorldSet{2} && !r4.relation.count(2),
                "axiom 4 in MC, relational:\n" + render(r4));

        Refuted t4 = refute("MCNT", "box p -> box box p");
        RelationalModel rt = extract_relational_countermodel(t4.leaf, t4.enumeration, lg("MCNT"));
        t.check(rt.worlds == WorldSet{1, 2, 3} && rt.non_normal.empty() && rt.relation.at(1) == WorldSet{1, 2} &&
                    rt.relation.at(2) == WorldSet{1, 2, 3} && rt.relation.at(3) == WorldSet{1, 2, 3},
                "axiom 4 in MCNT, relational:\n" + render(rt));
        t.check(!oracle::rel_force(rt, 1, parse_formula("box p -> box box p")), "MCNT model does not falsify 4");

        Refuted d = refute("ED", "~ box true");
        BiModel bd = extract_bi_countermodel(d.leaf, d.enumeration, lg("ED"));
        t.check(bd.nbhd.at(1) == Pairs{{{2}, {}}}, "~box true in ED:\n" + render(bd));
    } catch (const std::exception& e) {
        t.check(false, e.what());
    }
    return t;
}

std::string pct(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100 * x);
    return buf;
}

}  // namespace

int main() {
    Tally audit;
    Tally m1 = derivability_matrix(audit);
    report(1, "axiom derivability matrix", m1.ok(), m1.summary());
    Tally m2 = separation_matrix(audit);
    report(2, "separation matrix with countermodels", m2.ok(), m2.summary());
    Tally m3 = paper_models();
    report(3, "worked countermodels reproduced", m3.ok(), m3.summary());

    suites::CorpusResult c = suites::run_corpus(500, 1000);
    std::string corpus = std::to_string(corpus::logics().size()) + " logics, " + std::to_string(c.proved) +
                         " proved, " + std::to_string(c.refuted) + " refuted; ";
    report(4, "truth lemma on the corpus", c.truth.ok(), corpus + c.truth.summary());
    report(5, "invertible and unkleened modes agree", c.agree.ok(), c.agree.summary());

    suites::AdmissibilityResult a = suites::run_admissibility(200, 2000);
    bool adm = a.weakening.ok() && a.contraction.ok() && a.external.ok() && a.cut.ok() && a.invertibility.ok() &&
               a.weakening.checked == 200 && a.contraction.checked == 200 && a.external.checked == 200 &&
               a.cut.checked == 200 && a.invertibility.checked == 200;
    report(6, "structural rules admissible, rules invertible", adm,
           "weakening " + a.weakening.summary() + ", contraction " + a.contraction.summary() + ", external " +
               a.external.summary() + ", cut " + a.cut.summary() + ", invertibility " + a.invertibility.summary());

    Tally all_audit = audit;
    for (const Tally* t : {&c.audit, &a.audit}) {
        all_audit.checked += t->checked;
        all_audit.failed += t->failed;
        all_audit.notes.insert(all_audit.notes.end(), t->notes.begin(), t->notes.end());
    }
    report(7, "derivation audit (hypersequent and labelled)", all_audit.ok(), all_audit.summary());

    report(8, "complexity bound on C-free logics", c.bound.ok() && c.seconds < 60,
           c.bound.summary() + "; min margin components " + pct(c.comp_margin) + ", component size " +
               pct(c.size_margin) + "; corpus time " + std::to_string(c.seconds) + " s");

    suites::TransformResult tr = suites::run_transformations(100, 50, 3000);
    report(9, "transformations preserve forcing and conditions",
           tr.to_bi.ok() && tr.rough.ok() && tr.fine.ok() && tr.transport.ok(),
           "standard->bi " + tr.to_bi.summary() + ", rough " + tr.rough.summary() + ", fine " + tr.fine.summary() +
               ", transport " + tr.transport.summary());

    report(10, "polysize countermodels on C-free logics", c.polysize.ok(),
           c.polysize.summary() + "; min margin " + pct(c.model_margin));

    return failures == 0 ? 0 : 1;
}
