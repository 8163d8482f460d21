#include "nnml/logic.hpp"

#include "nnml/formula.hpp"

#include <algorithm>
#include <cctype>

namespace nnml {

int LogicSpec::d_arity() const {
    int k = 0;
    if (has_p) k = 1;
    if (has_d) k = 2;
    if (dplus) k = std::max(k, *dplus);
    return k;
}

std::string LogicSpec::name() const {
    std::string s;
    if (monotonic && has_c && has_n) s = "K";
    else {
        s = monotonic ? "M" : "E";
        if (has_c) s += 'C';
        if (has_n) s += 'N';
    }
    if (has_t) s += 'T';
    if (has_p) s += 'P';
    if (has_d) s += 'D';
    if (dplus) s += "D" + std::to_string(*dplus) + "+";
    return s;
}

LogicSpec parse_logic_name(std::string_view text) {
    auto spec = [](bool m, bool c, bool n) {
        LogicSpec l;
        l.monotonic = m;
        l.has_c = c;
        l.has_n = n;
        return l;
    };
    const std::pair<const char*, LogicSpec> bases[] = {
        {"MCN", spec(true, true, true)}, {"ECN", spec(false, true, true)}, {"MC", spec(true, true, false)},
        {"MN", spec(true, false, true)}, {"EC", spec(false, true, false)}, {"EN", spec(false, false, true)},
        {"K", spec(true, true, true)},   {"M", spec(true, false, false)},  {"E", spec(false, false, false)},
    };
    std::string t(text);
    LogicSpec l;
    std::size_t i = 0;
    bool found = false;
    for (const auto& [name, base] : bases) {
        std::string_view n(name);
        if (t.compare(0, n.size(), n) == 0) {
            l = base;
            i = n.size();
            found = true;
            break;
        }
    }
    if (!found) throw Error("unknown logic '" + t + "'");
    while (i < t.size()) {
        char c = t[i];
        auto dup = [&](const char* what) { throw Error("duplicate suffix " + std::string(what) + " in '" + t + "'"); };
        if (c == 'T') {
            if (l.has_t) dup("T");
            l.has_t = true;
            ++i;
        } else if (c == 'P') {
            if (l.has_p) dup("P");
            l.has_p = true;
            ++i;
        } else if (c == 'D') {
            std::size_t j = i + 1;
            while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
            if (j > i + 1) {
                if (j >= t.size() || t[j] != '+') throw Error("expected '+' after D" + t.substr(i + 1, j - i - 1));
                if (l.dplus) dup("Dk+");
                int n = std::stoi(t.substr(i + 1, j - i - 1));
                if (n < 1) throw Error("Dk+ needs k >= 1");
                l.dplus = n;
                i = j + 1;
            } else {
                if (l.has_d) dup("D");
                l.has_d = true;
                ++i;
            }
        } else {
            throw Error("unknown logic '" + t + "'");
        }
    }
    return l;
}

LogicSpec logic_from_axioms(const std::vector<std::string>& axioms, std::optional<int> dplus) {
    LogicSpec l;
    for (std::string a : axioms) {
        std::transform(a.begin(), a.end(), a.begin(), [](unsigned char c) { return std::toupper(c); });
        if (a.empty() || a == "E") continue;
        if (a == "M") l.monotonic = true;
        else if (a == "C") l.has_c = true;
        else if (a == "N") l.has_n = true;
        else if (a == "T") l.has_t = true;
        else if (a == "P") l.has_p = true;
        else if (a == "D") l.has_d = true;
        else if (a == "K") l.monotonic = l.has_c = l.has_n = true;
        else throw Error("unknown axiom '" + a + "'");
    }
    if (dplus) {
        if (*dplus < 1) throw Error("--dplus needs a value >= 1");
        l.dplus = dplus;
    }
    return l;
}

std::string RuleId::str() const {
    switch (rule) {
    case Rule::Init: return "init";
    case Rule::BotL: return "botL";
    case Rule::TopR: return "topR";
    case Rule::ImpL: return "impL";
    case Rule::ImpR: return "impR";
    case Rule::AndL: return "andL";
    case Rule::AndR: return "andR";
    case Rule::OrL: return "orL";
    case Rule::OrR: return "orR";
    case Rule::BoxL: return "boxL";
    case Rule::BoxR: return "boxR";
    case Rule::BoxRm: return "boxRm";
    case Rule::N: return "N";
    case Rule::C: return "C";
    case Rule::T: return "T";
    case Rule::P: return "P";
    case Rule::D1: return "D1";
    case Rule::D2: return "D2";
    case Rule::DnPlus: return "D" + std::to_string(arity) + "+";
    }
    return "?";
}

std::optional<RuleId> parse_rule_id(std::string_view s) {
    static const Rule all[] = {Rule::Init, Rule::BotL, Rule::TopR, Rule::ImpL, Rule::ImpR, Rule::AndL,
                               Rule::AndR, Rule::OrL,  Rule::OrR,  Rule::BoxL, Rule::BoxR, Rule::BoxRm,
                               Rule::N,    Rule::C,    Rule::T,    Rule::P,    Rule::D1,   Rule::D2};
    for (Rule r : all)
        if (RuleId{r}.str() == s) return RuleId{r};
    if (s.size() > 2 && s.front() == 'D' && s.back() == '+') {
        std::string digits(s.substr(1, s.size() - 2));
        if (std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
            return RuleId{Rule::DnPlus, std::stoi(digits)};
    }
    return std::nullopt;
}

std::vector<RuleId> rule_set(const LogicSpec& l) {
    std::vector<RuleId> r = {{Rule::AndL}, {Rule::OrL}, {Rule::ImpR}, {Rule::AndR}, {Rule::OrR}, {Rule::ImpL},
                             {Rule::BoxL}};
    if (l.has_t) r.push_back({Rule::T});
    if (l.has_c) r.push_back({Rule::C});
    if (l.has_n) r.push_back({Rule::N});
    r.push_back({l.monotonic ? Rule::BoxRm : Rule::BoxR});
    if (l.has_p) r.push_back({Rule::P});
    if (l.has_d && !l.monotonic) {
        r.push_back({Rule::D1});
        r.push_back({Rule::D2});
    }
    int n = 0;
    if (l.has_d && l.monotonic) n = 2;
    if (l.dplus) n = std::max(n, *l.dplus);
    for (int i = 1; i <= n; ++i) r.push_back({Rule::DnPlus, i});
    return r;
}

bool has_rule(const LogicSpec& l, RuleId id) {
    auto rs = rule_set(l);
    return std::find(rs.begin(), rs.end(), id) != rs.end();
}

}  // namespace nnml
