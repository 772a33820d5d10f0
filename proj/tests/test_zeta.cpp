#include <catch2/catch_amalgamated.hpp>

#include "mirrorcount/verify.hpp"

using namespace mc;

TEST_CASE("degree formula values") {
    CHECK(degree_formula(2) == 0);
    CHECK(degree_formula(3) == 18);
    CHECK(degree_formula(4) == 200);
    // quintic decomposition: two quartics with exponents 20 and 30
    CHECK(degree_formula(4) == 4 * 20 + 4 * 30);
}

TEST_CASE("smoothness gate") {
    auto F7 = Field::make(7, 1);
    // psi = 1 <=> lambda = -(n+1): singular
    auto inst = DworkInstance::from_psi(2, F7, 1);
    CHECK_FALSE(is_smooth(2, *F7, inst.lambda));
    CHECK(is_smooth(2, *F7, 0)); // lambda = 0 is smooth when p does not divide n+1

    auto F11 = Field::make(11, 1);
    // n = 4, lambda = 2: 2^5 = 32 = 10 and (-5)^5 = 6^5 = 10 in F_11: singular
    CHECK(F11->pow(2, 5) == F11->pow(F11->neg(5), 5));
    CHECK_FALSE(is_smooth(4, *F11, 2));

    auto F3 = Field::make(3, 1);
    CHECK_THROWS_AS(is_smooth(2, *F3, 1), usage_error); // p | n+1
}

TEST_CASE("n = 2, q = 5 quotient is identically 1 through T^6") {
    Engine eng;
    for (const char* lk : {"zero", "1", "2"}) {
        auto F = eng.field(5, 1);
        fe lam = lambda_from_key(*F, lk);
        if (!is_smooth(2, *F, lam)) continue;
        auto rep = run_quotient(eng, 2, 5, 1, lk, 6);
        INFO("lambda key " << lk);
        CHECK(rep.integer_coeffs);
        CHECK(rep.support.empty()); // quotient = 1 exactly
        CHECK(rep.detection == "polynomial");
        CHECK(rep.detected.is_one());
        CHECK(rep.degree_consistent);
        CHECK(rep.kth_root_ok);
        CHECK(rep.k == 2); // ord of 5 mod 3
    }
}

TEST_CASE("n = 4, p = 2 quotient: support in 4Z, integral, k-th root holds") {
    Engine eng;
    // lambda = 0 is the unique smooth member of the base pencil over F_2
    auto rep = run_quotient(eng, 4, 2, 1, "zero", 8);
    CHECK(rep.k == 4); // ord of 2 mod 5
    CHECK(rep.integer_coeffs);
    CHECK(rep.support_in_kZ);
    CHECK(rep.kth_root_ok);
    CHECK(rep.detection == "partial"); // degree 200 unreachable at order 8

    // lambda = 1 is singular over F_2 ((1:...:1) kills all partials), yet the
    // quotient structure persists: it rests on the equality theorem, which has
    // no smoothness hypothesis.  The gate must refuse, the bypass must agree.
    CHECK_THROWS_AS(run_quotient(eng, 4, 2, 1, "0", 8), usage_error);
    auto rep1 = run_quotient(eng, 4, 2, 1, "0", 8, 1e-6, false);
    CHECK(rep1.integer_coeffs);
    CHECK(rep1.support_in_kZ);
    CHECK(rep1.kth_root_ok);
}

TEST_CASE("singular member is rejected by the gate") {
    Engine eng;
    auto F7 = eng.field(7, 1);
    auto inst = DworkInstance::from_psi(2, F7, 1);
    std::string lk = lambda_key_of(*F7, inst.lambda);
    CHECK_THROWS_AS(run_quotient(eng, 2, 7, 1, lk, 4), usage_error);
}

TEST_CASE("quotient report serializes with stable fields") {
    Engine eng;
    auto rep = run_quotient(eng, 2, 5, 1, "zero", 4);
    auto j = quotient_report_to_json(rep);
    CHECK(j.contains("n"));
    CHECK(j.contains("support"));
    CHECK(j.contains("kth_root_ok"));
    CHECK(j["engine_version"] == kEngineVersion);
    auto j2 = quotient_report_to_json(run_quotient(eng, 2, 5, 1, "zero", 4));
    CHECK(j.dump() == j2.dump()); // deterministic
}
