#include "nnml/json_io.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

Run run(const std::vector<std::string>& args) {
    std::string cmd = NNML_CLI_PATH;
    for (const std::string& a : args) cmd += " " + quote(a);
    cmd += " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = "/tmp/nnml_test_" + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("prove: exit codes") {
    CHECK(run({"prove", "--logic", "K", "box(p->q) -> (box p -> box q)"}).code == 0);
    CHECK(run({"prove", "--logic", "E", "box(p&q) -> box p"}).code == 1);
    CHECK(run({"prove", "--logic", "E", "box(p&"}).code == 2);
    CHECK(run({"prove", "--logic", "XYZ", "p"}).code == 2);
    CHECK(run({"prove", "--bogus", "p"}).code == 2);
    CHECK(run({"prove", "--logic", "EC", "--budget", "2", "box(p->q) -> box p -> box q"}).code == 4);
    CHECK(run({"prove", "--mode", "unkleened", "--model", "bi", "p"}).code == 2);
    CHECK(run({"prove", "--logic", "E", "--model", "relational", "p"}).code == 2);
}

TEST_CASE("prove: the axiom-M countermodel") {
    Run r = run({"prove", "--logic", "E", "box(p&q) -> box p"});
    CHECK(has(r.out, "N(1) = {({}, {2})}"));
    Run j = run({"prove", "--logic", "E", "--output", "json", "box(p&q) -> box p"});
    nnml::Json doc = nnml::Json::parse(j.out);
    CHECK(doc["result"] == "refuted");
    CHECK(doc["countermodels"]["bi"]["model"]["bi"]["1"][0]["minus"] == nnml::Json::array({2}));
}

TEST_CASE("prove: relational countermodel for 4 in MCNT") {
    Run r = run({"prove", "--logic", "MCNT", "--model", "relational", "box p -> box box p"});
    CHECK(r.code == 1);
    CHECK(has(r.out, "R(1) = {1,2}"));
    CHECK(has(r.out, "R(2) = {1,2,3}"));
}

TEST_CASE("prove: standard countermodels are verified") {
    Run r = run({"prove", "--logic", "EC", "--model", "standard-fine", "--model", "standard-rough",
                 "box(p->q) -> box p -> box q"});
    CHECK(r.code == 1);
    CHECK(has(r.out, "standard-fine countermodel"));
    CHECK(has(r.out, "standard-rough countermodel"));
    Run capped = run({"prove", "--logic", "EC", "--model", "standard-rough", "--rough-cap", "2",
                      "box(p->q) -> box p -> box q"});
    CHECK(capped.code == 1);
    CHECK(has(capped.out, "skipped"));
}

TEST_CASE("prove: axioms flag and unkleened mode") {
    CHECK(run({"prove", "--axioms", "M,C,N", "box(p->q) -> (box p -> box q)"}).code == 0);
    CHECK(run({"prove", "--dplus", "3", "~ (box p & box q & box ~(p & q))"}).code == 0);
    CHECK(run({"prove", "--mode", "unkleened", "--logic", "EC", "box p & box q -> box(p&q)"}).code == 0);
    CHECK(run({"prove", "--mode", "unkleened", "--logic", "E", "box p & box q -> box(p&q)"}).code == 1);
}

TEST_CASE("prove: hypersequent input") {
    Run r = run({"prove", "--logic", "E", "p => q | => p -> p"});
    CHECK(r.code == 0);
}

TEST_CASE("check-model") {
    std::string m = write_temp("m.json", R"({"worlds":[1,2],"valuation":{"p":[2],"q":[]},"bi":{"1":[{"plus":[],"minus":[2]}]}})");
    Run r = run({"check-model", m, "box p"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "world 1: false"));
    Run t = run({"check-model", m, "true", "--output", "json"});
    nnml::Json doc = nnml::Json::parse(t.out);
    CHECK(doc["truth"]["1"] == true);
    CHECK(doc["truth"]["2"] == true);

    std::string d = write_temp("d.json", R"({"worlds":[1],"bi":{"1":[{"plus":[],"minus":[]}]}})");
    Run dr = run({"check-model", d, "p", "--logic", "ED"});
    CHECK(has(dr.out, "(D) FAIL"));

    CHECK(run({"check-model", write_temp("bad.json", "{"), "p"}).code == 2);
    CHECK(run({"check-model", write_temp("bad2.json", R"({"worlds":[1]})"), "p"}).code == 2);
    CHECK(run({"check-model", "/nonexistent/file.json", "p"}).code == 2);
}

TEST_CASE("translate") {
    Run s = run({"translate", "p => q"});
    CHECK(s.code == 0);
    CHECK(has(s.out, "x1:p => x1:q"));
    Run d = run({"translate", "--logic", "M", "--derive", "box(p&q) -> box p"});
    CHECK(d.code == 0);
    CHECK(has(d.out, "[M]"));
    CHECK(has(d.out, "[boxL]"));
    CHECK(run({"translate", "--logic", "ET", "p"}).code == 2);
    CHECK(run({"translate", "--logic", "E", "--derive", "box(p&q) -> box p"}).code == 1);
}

TEST_CASE("bench is reproducible") {
    Run a = run({"bench", "--sizes", "1-6", "--logics", "E,EC", "--count", "5", "--seed", "4", "--output", "json"});
    Run b = run({"bench", "--sizes", "1-6", "--logics", "E,EC", "--count", "5", "--seed", "4", "--output", "json"});
    REQUIRE(a.code == 0);
    nnml::Json ja = nnml::Json::parse(a.out), jb = nnml::Json::parse(b.out);
    CHECK(ja["rows"].size() == 12);
    for (std::size_t i = 0; i < ja["rows"].size(); ++i) {
        CHECK(ja["rows"][i]["max_components"] == jb["rows"][i]["max_components"]);
        CHECK(ja["rows"][i]["agree"] == ja["rows"][i]["count"]);
    }
    CHECK(run({"bench", "--sizes", "x"}).code == 2);
    CHECK(run({"bench", "--family", "boxes", "--sizes", "1-4", "--logics", "EC"}).code == 0);
}
