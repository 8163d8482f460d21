#include "nnml/json_io.hpp"

namespace nnml {

Json to_json(const Hypersequent& h) {
    Json comps = Json::array();
    for (const Component& c : h.comps) comps.push_back({{"id", c.id}, {"sequent", c.seq.str()}});
    return {{"text", h.str()}, {"components", comps}};
}

Json to_json(const Derivation& d) {
    Json j = {{"conclusion", d.conclusion.str()}, {"rule", d.rule.str()}, {"target", d.target}};
    if (!d.principal.formulas.empty()) {
        Json fs = Json::array();
        for (Formula f : d.principal.formulas) fs.push_back(print(f));
        j["principal_formulas"] = fs;
    }
    if (!d.principal.blocks.empty()) j["principal_blocks"] = d.principal.blocks;
    if (!d.children.empty()) {
        Json cs = Json::array();
        for (const Derivation& c : d.children) cs.push_back(to_json(c));
        j["premisses"] = cs;
    }
    return j;
}

Json to_json(const SearchStats& s) {
    return {{"visited", s.visited},
            {"input_size", s.input_size},
            {"max_components", s.max_components},
            {"max_component_size", s.max_component_size},
            {"max_blocks", s.max_blocks}};
}

Json to_json(const ConditionReport& r) {
    Json items = Json::array();
    for (const ConditionResult& c : r.items) {
        const char* st = c.status == CondStatus::Pass ? "pass" : c.status == CondStatus::Fail ? "fail" : "unchecked";
        Json e = {{"condition", c.name}, {"status", st}};
        if (!c.witness.empty()) e["witness"] = c.witness;
        items.push_back(e);
    }
    return {{"ok", r.ok()}, {"conditions", items}};
}

Json to_json(const LNode& n) {
    Json j = {{"conclusion", n.conclusion.str()}, {"rule", lrule_name(n.step.rule)}};
    if (!n.step.fresh.empty()) j["label"] = n.step.fresh;
    if (!n.children.empty()) {
        Json cs = Json::array();
        for (const LNode& c : n.children) cs.push_back(to_json(c));
        j["premisses"] = cs;
    }
    return j;
}

namespace {

Json valuation_json(const Valuation& v) {
    Json j = Json::object();
    for (auto& [a, ws] : v) j[a] = ws;
    return j;
}

}  // namespace

Json to_json(const BiModel& m) {
    Json n = Json::object();
    for (auto& [w, ps] : m.nbhd) {
        Json arr = Json::array();
        for (const BiPair& p : ps) arr.push_back({{"plus", p.plus}, {"minus", p.minus}});
        n[std::to_string(w)] = arr;
    }
    return {{"worlds", m.worlds}, {"valuation", valuation_json(m.valuation)}, {"bi", n}};
}

Json to_json(const StandardModel& m) {
    Json n = Json::object();
    for (auto& [w, ss] : m.nbhd) {
        Json arr = Json::array();
        for (const WorldSet& s : ss) arr.push_back(s);
        n[std::to_string(w)] = arr;
    }
    return {{"worlds", m.worlds}, {"valuation", valuation_json(m.valuation)}, {"standard", n}};
}

Json to_json(const RelationalModel& m) {
    Json r = Json::object();
    for (auto& [w, s] : m.relation) r[std::to_string(w)] = s;
    return {{"worlds", m.worlds},
            {"valuation", valuation_json(m.valuation)},
            {"relational", {{"non_normal", m.non_normal}, {"edges", r}}}};
}

Json to_json(const AnyModel& m) {
    return std::visit([](const auto& x) { return to_json(x); }, m);
}

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error("malformed model: " + why); }

WorldSet world_set(const Json& j, const WorldSet& worlds, const std::string& where) {
    if (!j.is_array()) malformed(where + " must be an array of worlds");
    WorldSet out;
    for (const Json& w : j) {
        if (!w.is_number_integer()) malformed(where + " must contain integers");
        int v = w.get<int>();
        if (!worlds.empty() && !worlds.count(v)) malformed(where + " mentions unknown world " + std::to_string(v));
        out.insert(v);
    }
    return out;
}

World world_key(const std::string& k, const WorldSet& worlds, const std::string& where) {
    World w;
    try {
        std::size_t used = 0;
        w = std::stoi(k, &used);
        if (used != k.size()) throw std::invalid_argument(k);
    } catch (const std::exception&) {
        malformed(where + " key '" + k + "' is not a world");
    }
    if (!worlds.count(w)) malformed(where + " key '" + k + "' is not a world");
    return w;
}

const Json& field(const Json& j, const char* name) {
    if (!j.contains(name)) malformed(std::string("missing field '") + name + "'");
    return j.at(name);
}

Valuation read_valuation(const Json& j, const WorldSet& worlds) {
    Valuation v;
    if (!j.contains("valuation")) return v;
    const Json& val = j.at("valuation");
    if (!val.is_object()) malformed("valuation must be an object");
    for (auto it = val.begin(); it != val.end(); ++it) {
        try {
            Formula::atom(it.key());
        } catch (const Error&) {
            malformed("'" + it.key() + "' is not an atom name");
        }
        v[it.key()] = world_set(it.value(), worlds, "valuation of " + it.key());
    }
    return v;
}

}  // namespace

AnyModel model_from_json(const Json& j) {
    if (!j.is_object()) malformed("expected an object");
    int kinds = j.contains("bi") + j.contains("standard") + j.contains("relational");
    if (kinds != 1) malformed("exactly one of 'bi', 'standard', 'relational' is required");
    WorldSet worlds = world_set(field(j, "worlds"), {}, "worlds");
    if (worlds.empty()) malformed("a model needs at least one world");
    Valuation val = read_valuation(j, worlds);
    if (j.contains("bi")) {
        BiModel m{worlds, val, {}};
        for (World w : worlds) m.nbhd[w];
        const Json& n = j.at("bi");
        if (!n.is_object()) malformed("'bi' must map worlds to pair lists");
        for (auto it = n.begin(); it != n.end(); ++it) {
            World w = world_key(it.key(), worlds, "bi");
            if (!it.value().is_array()) malformed("neighbourhood of " + it.key() + " must be an array");
            for (const Json& p : it.value()) {
                if (!p.is_object()) malformed("bi-neighbourhood entries are {\"plus\": [...], \"minus\": [...]}");
                m.nbhd[w].insert({world_set(field(p, "plus"), worlds, "plus"),
                                  world_set(field(p, "minus"), worlds, "minus")});
            }
        }
        return m;
    }
    if (j.contains("standard")) {
        StandardModel m{worlds, val, {}};
        for (World w : worlds) m.nbhd[w];
        const Json& n = j.at("standard");
        if (!n.is_object()) malformed("'standard' must map worlds to lists of sets");
        for (auto it = n.begin(); it != n.end(); ++it) {
            World w = world_key(it.key(), worlds, "standard");
            if (!it.value().is_array()) malformed("neighbourhood of " + it.key() + " must be an array");
            for (const Json& s : it.value()) m.nbhd[w].insert(world_set(s, worlds, "neighbourhood"));
        }
        return m;
    }
    const Json& r = j.at("relational");
    if (!r.is_object()) malformed("'relational' must be an object");
    RelationalModel m;
    m.worlds = worlds;
    m.valuation = val;
    if (r.contains("non_normal")) m.non_normal = world_set(r.at("non_normal"), worlds, "non_normal");
    for (World w : worlds)
        if (!m.non_normal.count(w)) m.relation[w];
    if (r.contains("edges")) {
        const Json& e = r.at("edges");
        if (!e.is_object()) malformed("edges must be an object");
        for (auto it = e.begin(); it != e.end(); ++it) {
            World w = world_key(it.key(), worlds, "edges");
            if (m.non_normal.count(w)) malformed("non-normal world " + it.key() + " has edges");
            m.relation[w] = world_set(it.value(), worlds, "edges");
        }
    }
    return m;
}

}  // namespace nnml
