#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "toricm/config.hpp"

using namespace toricm;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(TORICM_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto p = std::filesystem::temp_directory_path() / ("toricm_test_" + std::to_string(::getpid()) + "_" + name);
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST_CASE("config round trip") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        JobConfig c = preset_job(name);
        c.B = {1, 10, 1000};
        c.S = 6;
        JobConfig back = job_from_json(job_to_json(c));
        CHECK(back == c);
        CHECK(job_from_text(job_to_json(c).dump()) == c);
    }
    JobConfig c = preset_job("pn-mfull:4:3");
    CHECK(c.rank == 3);
    CHECK(c.mset.kind == MultKind::WeakCampana);
    CHECK(c.mset.weight == 3);
    for (auto mset : {MultiplicitySet::darmon({2, 3, 5}), MultiplicitySet::campana({2, 0, 3}),
                      MultiplicitySet::integral(3, {1}), MultiplicitySet::custom(3, {IntVec{2, 1, 0}, IntVec{0, 0, 3}}),
                      MultiplicitySet::weak_campana(3, 2, {0, 2})}) {
        JobConfig j = preset_job("p2-full");
        j.mset = mset;
        j.divisor = {Rat(1, 2), Rat(1, 3), Rat(0)};
        CHECK(job_from_json(job_to_json(j)) == j);
    }
}

TEST_CASE("config diagnostics name the field") {
    auto expect = [](const std::string& text, const std::string& fragment) {
        CAPTURE(text);
        try {
            job_from_text(text);
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == "ConfigError");
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    const std::string fan = R"("fan":{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[0,2]]})";
    expect(R"({"version":1,"fan":{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,5],[0,2]]},"multiplicity":{"kind":"full"},"divisor":[1,0,0]})",
           "fan.cones[1][1]");
    expect("{\"version\":1,\n\"fan\": [1,\n", "line 3");
    expect(R"({"version":1,)" + fan + R"(,"multiplicity":{"kind":"full"},"divisor":[1,0]})", "divisor");
    expect(R"({"version":1,)" + fan + R"(,"multiplicity":{"kind":"nope"},"divisor":[1,0,0]})", "multiplicity.kind");
    expect(R"({"version":1,)" + fan + R"(,"multiplicity":{"kind":"full"},"divisor":["1/0",0,0]})", "divisor[0]");
    expect(R"({"version":1,)" + fan + R"(,"multiplicity":{"kind":"full"},"divisor":[1,0,0],"S":0})", "S");
    expect(R"({"version":7,)" + fan + R"(,"multiplicity":{"kind":"full"},"divisor":[1,0,0]})", "version");
    expect(R"({"version":1,)" + fan + R"(,"multiplicity":{"kind":"campana","weights":[2,2]},"divisor":[1,0,0]})", "multiplicity");
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for("BudgetExceeded") == 3);
    CHECK(exit_code_for("ConfigError") == 2);
    CHECK(exit_code_for("NotRigid") == 1);
    CHECK(exit_code_for("NotQuasiProper") == 1);
}

TEST_CASE("invariants command") {
    Run r = run("invariants --preset p2-weak-campana-2");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["a"] == "3/2");
    CHECK(j["b"] == 4);
    CHECK(j["rigidity"] == "AdjointRigid");
    CHECK(j["alpha"] == "3/16");
    Run p4 = run("invariants --preset pn-full:4");
    REQUIRE(p4.status == 0);
    json j4 = json::parse(p4.out);
    CHECK(j4["a"] == "4");
    CHECK(j4["b"] == 1);

    auto bad = temp_file("bad.json",
                         R"({"version":1,"fan":{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,5],[0,2]]},)"
                         R"("multiplicity":{"kind":"full"},"divisor":[1,0,0]})");
    CHECK(run("invariants --config " + bad.string()).status == 2);
    std::filesystem::remove(bad);
    CHECK(run("invariants --preset no-such-preset").status == 2);
    CHECK(run("invariants").status == 2);
}

TEST_CASE("constants command") {
    Run r = run("constants --preset p2-full --prime-limit 100000");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(std::fabs(std::stod(j["leading_C"].get<std::string>()) - 3.3276) < 1e-3);
    CHECK(run("constants --preset p1-gm-integral").status == 1);
    Run w = run("constants --preset p2-weak-campana-2 --prime-limit 100000");
    REQUIRE(w.status == 0);
    json jw = json::parse(w.out);
    CHECK(jw["c_inf"] == "48");
    CHECK(jw["prefactor"] == "1/48");
}

TEST_CASE("count and compare commands") {
    Run c = run("count --preset p1-full --B 2");
    REQUIRE(c.status == 0);
    auto l = lines(c.out);
    REQUIRE(l.size() == 2);
    CHECK(l[0] == "B,N,method,elapsed_ms");
    CHECK(l[1].rfind("2,6,CoxEnumeration,", 0) == 0);

    Run cmp = run("compare --preset p2-full --B 300 --B 50 --B 200 --B 100 --prime-limit 100000");
    REQUIRE(cmp.status == 0);
    auto rows = lines(cmp.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "B,N,predicted,ratio,method,elapsed_ms");
    CHECK(rows[1].rfind("50,", 0) == 0);
    CHECK(rows[4].rfind("300,", 0) == 0);

    Run empty = run("compare --preset p2-full --prime-limit 10000");
    REQUIRE(empty.status == 0);
    CHECK(lines(empty.out) == std::vector<std::string>{"B,N,predicted,ratio,method,elapsed_ms"});

    Run one = run("compare --preset p2-weak-campana-2 --B 1 --prime-limit 10000");
    REQUIRE(one.status == 0);
    auto ol = lines(one.out);
    REQUIRE(ol.size() == 2);
    CHECK(ol[1].find(",n/a,") != std::string::npos);

    CHECK(run("count --preset p2-full --B 100000 --budget 1000").status == 3);

    auto out = std::filesystem::temp_directory_path() / ("toricm_test_out_" + std::to_string(::getpid()) + ".json");
    Run js = run("count --preset p1-full --B 2 --B 3 --format json --out " + out.string());
    REQUIRE(js.status == 0);
    std::ifstream in(out);
    json j = json::parse(in);
    std::filesystem::remove(out);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["N"] == "6");
}

TEST_CASE("selftest command") {
    Run r = run("selftest");
    CHECK(r.status == 0);
    const auto l = lines(r.out);
    CHECK(l.size() == preset_expectations().size());
    for (const auto& line : l) CHECK(line.rfind("PASS ", 0) == 0);
}
