#include "nnml/json_io.hpp"
#include "nnml/labelled.hpp"
#include "nnml/models.hpp"
#include "nnml/random.hpp"
#include "nnml/search.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace nnml;

namespace {

enum Exit { kProved = 0, kRefuted = 1, kUsage = 2, kInternal = 3, kBudget = 4 };

struct Options {
    std::string logic = "E";
    std::vector<std::string> axioms;
    std::optional<int> dplus;
    std::string mode = "invertible";
    std::vector<std::string> models;
    std::string output = "text";
    std::optional<long> budget;
    std::uint64_t seed = 1;
    bool derive = false;
    int rough_cap = 20;
};

class UsageError : public Error {
public:
    using Error::Error;
};

LogicSpec resolve_logic(const Options& o) {
    LogicSpec l;
    if (!o.axioms.empty()) {
        l = logic_from_axioms(o.axioms, o.dplus);
    } else {
        l = parse_logic_name(o.logic);
        if (o.dplus) {
            if (l.dplus && l.dplus != o.dplus) throw UsageError("--dplus conflicts with the logic name");
            if (*o.dplus < 1) throw UsageError("--dplus needs a value >= 1");
            l.dplus = o.dplus;
        }
    }
    return l;
}

void emit(const Options& o, const Json& j, const std::string& text) {
    if (o.output == "json") std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

std::vector<Formula> input_formulas(const Hypersequent& h) {
    std::vector<Formula> all;
    for (const Component& c : h.comps) {
        auto sub = subformulas(interpret(c.seq));
        all.insert(all.end(), sub.begin(), sub.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

// Checks that the model meets the logic's conditions and falsifies every
// input component at its world. Returns a description of the first problem.
template <class Model>
std::optional<std::string> verify(const Model& m, const LogicSpec& l, const Hypersequent& input,
                                  const std::map<int, int>& e, ConditionReport& rep) {
    rep = check_conditions(m, l);
    if (!rep.ok()) return "frame conditions fail:\n" + rep.str();
    for (const Component& c : input.comps) {
        World w = e.at(c.id);
        if (force(m, w, interpret(c.seq)))
            return "component " + std::to_string(c.id) + " is not falsified at world " + std::to_string(w);
    }
    return std::nullopt;
}

int cmd_prove(const Options& o, const std::string& text) {
    LogicSpec l = resolve_logic(o);
    Hypersequent h = parse_input(text);
    for (const std::string& m : o.models)
        if (m == "relational" && !l.regular())
            throw UsageError("relational countermodels need a logic containing M and C");
    if (o.mode == "unkleened" && !o.models.empty())
        throw UsageError("--mode unkleened decides derivability only; drop --model");

    Json j = {{"logic", l.name()}, {"input", h.str()}, {"mode", o.mode}};
    std::ostringstream out;
    out << "logic: " << l.name() << "\ninput: " << h.str() << "\n";
    const long budget = o.budget ? *o.budget : default_budget();

    if (o.mode == "unkleened") {
        UnkleenedStats st;
        bool ok = prove_unkleened(h, l, &st);
        j["result"] = ok ? "proved" : "refuted";
        j["stats"] = {{"calls", st.calls}, {"max_depth", st.max_depth}, {"memo_size", st.memo_size}};
        out << "result: " << (ok ? "proved" : "refuted") << "\ncalls: " << st.calls << "\n";
        emit(o, j, out.str());
        return ok ? kProved : kRefuted;
    }

    SearchOutcome r = prove(h, l, {budget});
    j["stats"] = to_json(r.stats);
    if (r.proved()) {
        if (auto c = check_derivation(r.derivation(), l); !c) {
            std::cerr << "internal error: derivation fails its check at " << c.path << ": " << c.reason << "\n";
            return kInternal;
        }
        j["result"] = "proved";
        j["derivation"] = to_json(r.derivation());
        out << "result: proved\n" << render_derivation(r.derivation());
        emit(o, j, out.str());
        return kProved;
    }

    const Refuted& ref = r.refuted();
    j["result"] = "refuted";
    j["leaf"] = to_json(ref.leaf);
    Json en = Json::object();
    for (auto& [id, w] : ref.enumeration) en[std::to_string(id)] = w;
    j["enumeration"] = en;
    out << "result: refuted\nsaturated leaf: " << ref.leaf.str() << "\n";

    Json models = Json::object();
    auto fail = [&](const std::string& kind, const std::string& why) {
        std::cerr << "internal error: " << kind << " countermodel does not verify: " << why << "\n";
        return kInternal;
    };

    BiModel bi = extract_bi_countermodel(ref.leaf, ref.enumeration, l);
    ConditionReport rep;
    if (auto bad = verify(bi, l, h, ref.enumeration, rep)) return fail("bi-neighbourhood", *bad);
    models["bi"] = {{"model", to_json(bi)}, {"conditions", to_json(rep)}};
    out << "bi-neighbourhood countermodel:\n" << render(bi) << rep.str();

    for (const std::string& kind : o.models) {
        if (kind == "bi") continue;
        if (kind == "relational") {
            RelationalModel rm = extract_relational_countermodel(ref.leaf, ref.enumeration, l);
            if (auto bad = verify(rm, l, h, ref.enumeration, rep)) return fail(kind, *bad);
            models[kind] = {{"model", to_json(rm)}, {"conditions", to_json(rep)}};
            out << "relational countermodel:\n" << render(rm) << rep.str();
            continue;
        }
        StandardModel sm;
        try {
            if (kind == "standard-rough") {
                sm = standard_from_bi_rough(bi, o.rough_cap);
            } else {
                sm = standard_from_bi_fine(bi, input_formulas(h), l.monotonic, o.rough_cap);
                sm = close_for_logic(std::move(sm), l, o.rough_cap);
            }
        } catch (const Error& e) {
            models[kind] = {{"skipped", e.what()}};
            out << kind << " countermodel skipped: " << e.what() << "\n";
            continue;
        }
        if (auto bad = verify(sm, l, h, ref.enumeration, rep)) return fail(kind, *bad);
        models[kind] = {{"model", to_json(sm)}, {"conditions", to_json(rep)}};
        out << kind << " countermodel:\n" << render(sm) << rep.str();
    }
    j["countermodels"] = models;
    out << "falsified at world";
    for (const Component& c : h.comps) out << " " << ref.enumeration.at(c.id);
    out << "\n";
    emit(o, j, out.str());
    return kRefuted;
}

int cmd_check_model(const Options& o, const std::string& file, const std::string& text) {
    LogicSpec l = resolve_logic(o);
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file);
    Json mj;
    try {
        mj = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError(std::string("malformed model file: ") + e.what());
    }
    AnyModel m = model_from_json(mj);
    Formula f = parse_formula(text);
    const WorldSet& worlds = std::visit([](const auto& x) -> const WorldSet& { return x.worlds; }, m);
    Json truth = Json::object();
    std::ostringstream out;
    out << "formula: " << print(f) << "\n";
    for (World w : worlds) {
        bool v = force(m, w, f);
        truth[std::to_string(w)] = v;
        out << "  world " << w << ": " << (v ? "true" : "false") << "\n";
    }
    ConditionReport rep = check_conditions(m, l);
    out << "conditions for " << l.name() << ":\n" << rep.str();
    emit(o, {{"formula", print(f)}, {"truth", truth}, {"conditions", to_json(rep)}, {"logic", l.name()}}, out.str());
    return 0;
}

int cmd_translate(const Options& o, const std::string& text) {
    LogicSpec l = resolve_logic(o);
    if (!l.in_cube()) throw UsageError("translation is defined for the classical cube only, not " + l.name());
    Hypersequent h = parse_input(text);
    if (!o.derive) {
        LSequent s = translate_hypersequent(h, l);
        emit(o, {{"logic", l.name()}, {"labelled", s.str()}}, s.str() + "\n");
        return 0;
    }
    const long budget = o.budget ? *o.budget : default_budget();
    SearchOutcome r = prove(h, l, {budget});
    if (!r.proved()) {
        emit(o, {{"logic", l.name()}, {"result", "refuted"}}, "not derivable in " + l.name() + "; nothing to translate\n");
        return kRefuted;
    }
    LabelledDerivation ld = translate_derivation(r.derivation(), l);
    if (auto c = check_labelled(ld); !c) {
        std::cerr << "internal error: labelled derivation fails at " << c.path << ": " << c.reason << "\n";
        return kInternal;
    }
    emit(o, {{"logic", l.name()}, {"result", "proved"}, {"derivation", to_json(*ld.root)}},
         render_labelled(*ld.root));
    return 0;
}

std::pair<int, int> parse_range(const std::string& s) {
    auto dash = s.find('-');
    try {
        if (dash == std::string::npos) {
            int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
    } catch (const std::exception&) {
        throw UsageError("bad range '" + s + "', expected N or A-B");
    }
}

// Box-conjunction family: []p1 & ... & []pk -> []q, whose blocks multiply
// under C.
Formula boxes_formula(int k) {
    Formula lhs = Formula::box(Formula::atom("p1"));
    for (int i = 2; i <= k; ++i) lhs = Formula::conj(lhs, Formula::box(Formula::atom("p" + std::to_string(i))));
    return Formula::imp(lhs, Formula::box(Formula::atom("q")));
}

int cmd_bench(const Options& o, const std::string& sizes, const std::string& logics, int count,
              const std::string& family) {
    auto [lo, hi] = parse_range(sizes);
    if (lo < 1 || hi < lo) throw UsageError("bad size range");
    if (family != "random" && family != "boxes") throw UsageError("--family is random or boxes");
    std::vector<LogicSpec> ls;
    std::stringstream ss(logics);
    for (std::string name; std::getline(ss, name, ',');)
        if (!name.empty()) ls.push_back(parse_logic_name(name));
    const long budget = o.budget ? *o.budget : default_budget();
    Json rows = Json::array();
    std::ostringstream out;
    out << "logic  size  count  max_comps  max_comp_size  max_blocks  visited  ms_invertible  ms_unkleened  agree\n";
    for (const LogicSpec& l : ls) {
        Rng rng(o.seed);
        for (int n = lo; n <= hi; ++n) {
            int max_comps = 0, max_size = 0, max_blocks = 0, agree = 0, runs = 0;
            long visited = 0;
            double ms_inv = 0, ms_unk = 0;
            const int reps = family == "boxes" ? 1 : count;
            for (int i = 0; i < reps; ++i) {
                Formula f = family == "boxes" ? boxes_formula(n) : random_formula(rng, n, 3, {"p", "q", "r"});
                Hypersequent h = Hypersequent::of_formula(f);
                auto t0 = std::chrono::steady_clock::now();
                bool inv;
                try {
                    SearchOutcome r = prove(h, l, {budget});
                    inv = r.proved();
                    max_comps = std::max(max_comps, r.stats.max_components);
                    max_size = std::max(max_size, r.stats.max_component_size);
                    max_blocks = std::max(max_blocks, r.stats.max_blocks);
                    visited = std::max(visited, r.stats.visited);
                } catch (const BudgetExceeded&) {
                    continue;
                }
                auto t1 = std::chrono::steady_clock::now();
                bool unk = prove_unkleened(h, l);
                auto t2 = std::chrono::steady_clock::now();
                ms_inv += std::chrono::duration<double, std::milli>(t1 - t0).count();
                ms_unk += std::chrono::duration<double, std::milli>(t2 - t1).count();
                agree += inv == unk;
                ++runs;
            }
            rows.push_back({{"logic", l.name()},
                            {"size", n},
                            {"count", runs},
                            {"max_components", max_comps},
                            {"max_component_size", max_size},
                            {"max_blocks", max_blocks},
                            {"max_visited", visited},
                            {"ms_invertible", ms_inv},
                            {"ms_unkleened", ms_unk},
                            {"agree", agree}});
            char line[200];
            std::snprintf(line, sizeof line, "%-6s %4d  %5d  %9d  %13d  %10d  %7ld  %13.2f  %12.2f  %5d\n",
                          l.name().c_str(), n, runs, max_comps, max_size, max_blocks, visited, ms_inv, ms_unk, agree);
            out << line;
        }
    }
    emit(o, {{"seed", o.seed}, {"family", family}, {"rows", rows}}, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proof search, countermodels and labelled translation for non-normal modal logics"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--logic", o.logic, "logic name, e.g. E, MC, K, ECD, ED3+");
        sub->add_option("--axioms", o.axioms, "explicit axioms, e.g. M,C,N")->delimiter(',');
        sub->add_option("--dplus", o.dplus, "add the rule RD_n+ for this n");
        sub->add_option("--output", o.output, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--budget", o.budget, "hypersequents visited before giving up (also NNML_BUDGET)");
    };

    std::string input, model_file, sizes = "1-10", logics = "E,M,EC,MC", family = "random";
    int count = 20;

    auto* prove_cmd = app.add_subcommand("prove", "decide a formula or hypersequent");
    common(prove_cmd);
    prove_cmd->add_option("--mode", o.mode, "invertible or unkleened")
        ->check(CLI::IsMember({"invertible", "unkleened"}));
    prove_cmd->add_option("--model", o.models, "extra countermodels: bi, standard-fine, standard-rough, relational")
        ->check(CLI::IsMember({"bi", "standard-fine", "standard-rough", "relational"}));
    prove_cmd->add_option("--rough-cap", o.rough_cap, "world cap for standard transformations");
    prove_cmd->add_option("input", input, "formula, or hypersequent such as 'p => q | => r'")->required();

    auto* check_cmd = app.add_subcommand("check-model", "evaluate a formula on a JSON model");
    common(check_cmd);
    check_cmd->add_option("model", model_file, "model file")->required();
    check_cmd->add_option("formula", input, "formula")->required();

    auto* translate_cmd = app.add_subcommand("translate", "labelled translation (classical cube)");
    common(translate_cmd);
    translate_cmd->add_flag("--derive", o.derive, "translate a derivation instead of the sequent");
    translate_cmd->add_option("input", input, "formula or hypersequent")->required();

    auto* bench_cmd = app.add_subcommand("bench", "size and time curves on random inputs");
    common(bench_cmd);
    bench_cmd->add_option("--sizes", sizes, "size range, e.g. 1-12");
    bench_cmd->add_option("--logics", logics, "comma separated logic names");
    bench_cmd->add_option("--count", count, "formulas per size");
    bench_cmd->add_option("--seed", o.seed, "random seed");
    bench_cmd->add_option("--family", family, "random or boxes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*prove_cmd) return cmd_prove(o, input);
        if (*check_cmd) return cmd_check_model(o, model_file, input);
        if (*translate_cmd) return cmd_translate(o, input);
        if (*bench_cmd) return cmd_bench(o, sizes, logics, count, family);
    } catch (const BudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return kBudget;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
