#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>

#include "mirrorcount/verify.hpp"

using namespace mc;

TEST_CASE("verify_equal: n = 2, q = 5 passes for all lambda, with oracle") {
    Engine eng;
    auto rep = verify_equal(eng, 2, 5, 1, 2);
    CHECK(rep.all_ok());
    CHECK(rep.count("pass") == 5);     // k = 1: gcd(3, 4) = 1, 5 lambdas
    CHECK(rep.count("excluded") == 1); // k = 2: 3 | 5^2 - 1
}

TEST_CASE("verify_equal: gcd gate excludes n = 2, q = 7, k = 1") {
    Engine eng;
    auto rep = verify_equal(eng, 2, 7, 1, 2);
    bool saw_excluded_k1 = false;
    for (auto& c : rep.cases)
        if (c.key.find("k=1") != std::string::npos) {
            CHECK(c.status == "excluded");
            saw_excluded_k1 = true;
        }
    CHECK(saw_excluded_k1);
    CHECK(rep.all_ok());
}

TEST_CASE("verify_equal skips beyond the field bound") {
    Engine eng;
    u64 save = field_q_bound();
    field_q_bound() = 100;
    auto rep = verify_equal(eng, 2, 5, 1, 5);
    field_q_bound() = save;
    CHECK(rep.count("skipped") > 0);
    CHECK(rep.all_ok());
}

TEST_CASE("verify_cong: n = 3, q = 5 (d = 4, l = 2): both parts pass") {
    Engine eng;
    auto reps = verify_cong(eng, 3, 5, 1);
    REQUIRE(reps.size() == 3);
    CHECK(reps[0].all_ok()); // d | #X
    CHECK(reps[1].all_ok()); // ld | #X  (holds for n = 3)
    CHECK(reps[2].all_ok()); // #Y mod l = indicator
}

TEST_CASE("verify_cong: n = 2, q = 7: the Y congruence holds, X part fails "
          "exactly at the singular fibers") {
    Engine eng;
    auto reps = verify_cong(eng, 2, 7, 1);
    CHECK(reps[0].all_ok()); // part 1: d | #X does hold for n = 2
    CHECK(reps[2].all_ok()); // Y congruence
    // part 2 X: the three cube roots of unity psi give #X = 21, 9 does not divide 21
    u64 fails = 0;
    for (auto& c : reps[1].cases)
        if (c.status == "fail") {
            ++fails;
            CHECK(c.detail["singular"] == true);
            CHECK(c.detail["X"] == "21");
        }
    CHECK(fails == 3);
}

TEST_CASE("verify_crt: n = 2, q = 7, k = 1") {
    Engine eng;
    auto rep = verify_crt(eng, 2, 7, 1, 1);
    CHECK(rep.all_ok());
    CHECK(rep.count("pass") == 4);     // psi with psi^3 != 1 (0, 3, 5, 6)
    CHECK(rep.count("excluded") == 3); // psi in {1, 2, 4}
}

TEST_CASE("verify_crt over F_4 (m = 2) runs with l = 3") {
    Engine eng;
    auto rep = verify_crt(eng, 2, 2, 2, 1);
    // every nonzero psi in F_4 has psi^3 = 1: only psi = 0 qualifies
    CHECK(rep.count("pass") == 1);
    CHECK(rep.count("excluded") == 3);
    CHECK(rep.all_ok());
}

TEST_CASE("verify_lemma_e1 on gcd = 1 cases") {
    Engine eng;
    for (auto [n, p, m] : std::vector<std::tuple<u32, u64, u32>>{{2, 5, 1}, {2, 2, 3}, {2, 11, 1}}) {
        auto rep = verify_lemma_e1(eng, n, p, m);
        INFO("n=" << n << " p=" << p << " m=" << m);
        CHECK(rep.all_ok());
        CHECK(rep.count("pass") > 0);
    }
}

TEST_CASE("count cache round-trip is byte-stable") {
    std::string dir = "/tmp/mc_cache_test";
    std::filesystem::remove_all(dir);
    {
        Engine eng;
        eng.open_cache(dir);
        auto F = eng.field(7, 1);
        auto a = eng.counts_formula(2, F, 3);
        eng.cache.flush();
        Engine eng2;
        eng2.open_cache(dir);
        eng2.verify_cache = true; // hits must byte-equal recomputation
        auto b = eng2.counts_formula(2, F, 3);
        CHECK(count_record_to_json(a).dump() == count_record_to_json(b).dump());
    }
    std::filesystem::remove_all(dir);
}

// ---- CLI subprocess checks ----

namespace {
struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("MIRRORCOUNT_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int st = pclose(pipe);
    return {WEXITSTATUS(st), out};
}
} // namespace

TEST_CASE("cli: count emits a JSON record pair and exit 0") {
    auto r = run_cli("count --n 2 --p 5 --m 1 --lambda 1 --method both");
    CHECK(r.exit_code == 0);
    auto j = ojson::parse(r.out);
    CHECK(j["command"] == "count");
    REQUIRE(j["results"].size() == 2);
    CHECK(j["results"][0]["method"] == "direct");
    CHECK(j["results"][1]["method"] == "gauss_formula");
    CHECK(j["results"][0]["count_X"] == j["results"][1]["count_X"]);
    CHECK(j["engine_version"] == kEngineVersion);
}

TEST_CASE("cli: composite p is a usage error (exit 2)") {
    auto r = run_cli("count --n 2 --p 4");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: verify-equal reports and exits 0") {
    auto r = run_cli("verify-equal --n 2 --p 5 --kmax 3");
    CHECK(r.exit_code == 0);
    auto j = ojson::parse(r.out);
    CHECK(j["command"] == "verify-equal");
}

TEST_CASE("cli: budget exhaustion returns exit 3") {
    auto r = run_cli("count --n 3 --p 13 --m 1 --lambda zero --method direct --budget 100");
    CHECK(r.exit_code == 3);
}

TEST_CASE("cli: csv output has the documented stable column order") {
    auto r = run_cli("count --n 1 --p 5 --m 1 --lambda zero --method direct --out csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("p,m,n,lambda,method,count_X,count_Nstar,count_Y,err_budget_used\n", 0) == 0);
}

TEST_CASE("cli: factor subcommand") {
    auto r = run_cli("factor 1,-5,6");
    CHECK(r.exit_code == 0);
    auto j = ojson::parse(r.out);
    REQUIRE(j["results"].size() == 2);
}

TEST_CASE("cli: verify-all on a reduced grid is deterministic byte-for-byte") {
    auto a = run_cli("verify-all --qmax 5 --ext-bound 100");
    auto b = run_cli("verify-all --qmax 5 --ext-bound 100");
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("cli: field-info") {
    auto r = run_cli("field-info --p 3 --m 2");
    CHECK(r.exit_code == 0);
    auto j = ojson::parse(r.out);
    CHECK(j["results"][0]["q"] == 9);
    CHECK(j["results"][0]["modulus"] == ojson({1, 0, 1}));
}

TEST_CASE("cli: forced high precision reproduces the dd counts") {
    auto a = run_cli("count --n 2 --p 7 --m 1 --lambda 2 --method formula");
    auto b = run_cli("count --n 2 --p 7 --m 1 --lambda 2 --method formula --precision 256");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    auto ja = ojson::parse(a.out), jb = ojson::parse(b.out);
    CHECK(ja["results"][0]["count_X"] == jb["results"][0]["count_X"]);
    CHECK(ja["results"][0]["count_Nstar"] == jb["results"][0]["count_Nstar"]);
}

TEST_CASE("cli: quotient subcommand emits a structural report") {
    auto r = run_cli("quotient --n 2 --p 5 --m 1 --lambda zero --order 4");
    REQUIRE(r.exit_code == 0);
    auto j = ojson::parse(r.out);
    CHECK(j["results"][0]["detection"] == "polynomial");
    CHECK(j["results"][0]["k"] == 2);
}
