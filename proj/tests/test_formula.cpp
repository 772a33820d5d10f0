#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "mirrorcount/formula.hpp"

using namespace mc;

TEST_CASE("M matrix shape") {
    auto M = MMatrix::build(2);
    auto rows = M.entries();
    CHECK(rows[0] == std::vector<i64>{1, 1, 1, 1});
    CHECK(rows[1] == std::vector<i64>{3, 0, 0, 1});
    CHECK(rows[2] == std::vector<i64>{0, 3, 0, 1});
    CHECK(rows[3] == std::vector<i64>{0, 0, 3, 1});

    CHECK(M.apply({0, 0, 0, 0}) == std::vector<i64>{0, 0, 0, 0});
    CHECK(M.apply({1, 1, 1, 1}) == std::vector<i64>{4, 4, 4, 4});
    CHECK(count_nonzero(M.apply({1, 1, 1, 1})) == 4);
}

TEST_CASE("|E| = 17 for n = 2, q = 3") {
    auto F3 = Field::make(3, 1);
    CHECK(enumerate_E(2, *F3).size() == 17);
}

TEST_CASE("all-zero and all-(q-1) vectors always belong to E") {
    for (auto [n, p, m] : std::vector<std::tuple<u32, u64, u32>>{{1, 5, 1}, {2, 7, 1}, {3, 3, 2}}) {
        auto F = Field::make(p, m);
        auto E = enumerate_E(n, *F);
        std::vector<u32> zero(n + 2, 0), top(n + 2, (u32)(F->q - 1));
        bool has_zero = false, has_top = false;
        for (auto& ev : E) {
            has_zero |= (ev.k == zero);
            has_top |= (ev.k == top);
        }
        CHECK(has_zero);
        CHECK(has_top);
    }
}

TEST_CASE("fast and exhaustive E enumerations agree as sets (q <= 9, n <= 3)") {
    for (auto [n, p, m] : std::vector<std::tuple<u32, u64, u32>>{
             {1, 3, 1}, {1, 7, 1}, {1, 3, 2}, {2, 5, 1}, {2, 7, 1}, {2, 2, 3},
             {2, 3, 2}, {3, 5, 1}, {3, 7, 1}, {3, 2, 3}, {3, 3, 2}}) {
        auto F = Field::make(p, m);
        auto fast = enumerate_E(n, *F);
        auto scan = enumerate_E_scan(n, *F);
        std::sort(fast.begin(), fast.end());
        REQUIRE(fast.size() == scan.size());
        REQUIRE(fast == scan);
        for (auto& ev : fast) {
            for (i64 r : ev.mk) REQUIRE(r % (i64)(F->q - 1) == 0);
            if (ev.cls == EClass::E2star) REQUIRE(ev.s == n + 2);
        }
    }
}

TEST_CASE("degenerate S_k values match the worked special cases") {
    auto F = Field::make(7, 1);
    auto gt = build_gauss_table<dd>(F, GaussMode::dft);
    u32 n = 2;
    u64 q = 7;
    auto inst = DworkInstance::from_lambda(n, F, 3); // any lambda != 0

    auto term = [&](std::vector<u32> k) {
        auto mk = MMatrix::build(n).apply(k);
        return s_term(k, count_nonzero(mk), inst, gt);
    };
    // k = 0 -> q^{n+1}/(q-1)
    auto t0 = term({0, 0, 0, 0});
    CHECK(t0.fully_exact);
    CHECK(t0.exact == mpq_class(343, 6));
    // k = (0,...,0, q-1) -> -(q-1)^n
    auto t1 = term({0, 0, 0, 6});
    CHECK(t1.exact == mpq_class(-36));
    // k = (q-1,...,q-1, 0) -> (-1)^{n+1} q^n
    auto t2 = term({6, 6, 6, 0});
    CHECK(t2.exact == mpq_class(-49));
    // k = (q-1,...,q-1) -> (-1)^n q^{n+1}/(q-1)
    auto t3 = term({6, 6, 6, 6});
    CHECK(t3.exact == mpq_class(343, 6));
}

TEST_CASE("s_term rejects lambda = 0 with k_{n+2} != 0") {
    auto F = Field::make(7, 1);
    auto gt = build_gauss_table<dd>(F, GaussMode::dft);
    auto inst = DworkInstance::from_lambda(2, F, 0);
    CHECK_THROWS_AS(s_term(std::vector<u32>{0, 0, 0, 6}, 4, inst, gt), math_error);
}

TEST_CASE("master identity: formula counts equal direct counts on the grid") {
    for (auto [n, p, m] : std::vector<std::tuple<u32, u64, u32>>{
             {1, 3, 1}, {1, 5, 1}, {1, 3, 2}, {1, 13, 1},
             {2, 2, 1}, {2, 2, 2}, {2, 5, 1}, {2, 7, 1}, {2, 2, 3}, {2, 11, 1}, {2, 13, 1},
             {3, 3, 1}, {3, 5, 1}, {3, 7, 1}, {3, 3, 2}, {3, 11, 1}, {3, 13, 1}}) {
        auto F = Field::make(p, m);
        auto gt = build_gauss_table<dd>(F, GaussMode::dft);
        for (u64 lam = 0; lam < F->q; ++lam) {
            auto inst = DworkInstance::from_lambda(n, F, (fe)lam);
            auto fc = formula_counts(inst, gt);
            REQUIRE(fc.x == count_X_direct(inst));
            REQUIRE(fc.nstar == count_Nstar_direct(inst));
            REQUIRE(fc.err_used < 0.25);
        }
    }
}

TEST_CASE("n = 1, q = 5, lambda = 0: N* formula gives 2") {
    auto F = Field::make(5, 1);
    auto gt = build_gauss_table<dd>(F, GaussMode::dft);
    auto inst = DworkInstance::from_lambda(1, F, 0);
    CHECK(count_Nstar_formula(inst, gt) == 2);
}

TEST_CASE("assembled counts are invariant under a generator change") {
    auto F = Field::make(7, 1);
    auto F2 = Field::make_variant(*F, F->next_generator(F->generator));
    REQUIRE(F2->generator != F->generator);
    auto gt = build_gauss_table<dd>(F, GaussMode::dft);
    auto gt2 = build_gauss_table<dd>(F2, GaussMode::dft);
    for (u64 lam = 0; lam < 7; ++lam) {
        auto a = formula_counts(DworkInstance::from_lambda(2, F, (fe)lam), gt);
        auto b = formula_counts(DworkInstance::from_lambda(2, F2, (fe)lam), gt2);
        REQUIRE(a.x == b.x);
        REQUIRE(a.nstar == b.nstar);
    }
}

TEST_CASE("E is stable under unit scaling k -> u*k") {
    auto F = Field::make(7, 1);
    u64 n1 = F->q - 1;
    auto E = enumerate_E(2, *F);
    std::set<std::vector<u32>> keys;
    for (auto& ev : E) keys.insert(ev.k);
    for (u64 u : {1ull, 5ull}) { // units mod 6
        for (auto& ev : E) {
            // scale entrywise with the dual-representative convention:
            // 0 and q-1 are the two lifts of the zero residue
            std::vector<u32> scaled(ev.k.size());
            for (size_t i = 0; i < ev.k.size(); ++i) {
                u64 v = ev.k[i];
                u64 r = (v % n1) * u % n1;
                scaled[i] = (v == 0 || v == n1) ? (u32)v : (u32)(r == 0 ? n1 : r);
            }
            REQUIRE(keys.count(scaled) == 1);
        }
    }
}

TEST_CASE("lambda = 0 restriction: only k_{n+2} = 0 terms enter") {
    auto F = Field::make(5, 1);
    auto gt = build_gauss_table<dd>(F, GaussMode::dft);
    auto inst0 = DworkInstance::from_lambda(2, F, 0);
    auto sums = sum_over_E(inst0, gt);
    // compare against a scan-driven restricted accumulation
    u64 count_restricted = 0;
    for (auto& ev : enumerate_E_scan(2, *F))
        if (ev.k[3] == 0 && ev.cls != EClass::E2corner) ++count_restricted;
    CHECK(sums.n_e1 + sums.n_e2star == count_restricted);
}

TEST_CASE("closed form for sum over E1 matches the direct sum (gcd = 1)") {
    // within the gcd(p, n+1) = 1 grid, gcd(n+1, q-1) = 1 only occurs at n = 2
    for (auto [n, p, m] : std::vector<std::tuple<u32, u64, u32>>{
             {2, 2, 1}, {2, 5, 1}, {2, 2, 3}, {2, 11, 1}}) {
        auto F = Field::make(p, m);
        REQUIRE(gcd_u64(n + 1, F->q - 1) == 1);
        auto gt = build_gauss_table<dd>(F, GaussMode::dft);
        for (u64 lam = 0; lam < F->q; ++lam) {
            auto inst = DworkInstance::from_lambda(n, F, (fe)lam);
            auto sums = sum_over_E(inst, gt);
            mpq_class closed = sum_E1_closed_form(n, F->q, lam == 0);
            auto zero = round_count(sums.e1_exact - closed, sums.e1_cplx, nullptr);
            REQUIRE(zero == 0);
        }
    }
    CHECK_THROWS_AS(sum_E1_closed_form(2, 7, false), math_error); // gcd = 3
}

TEST_CASE("round_count enforces the 0.25 budget") {
    ComplexApprox<dd> near_int(dd(0.1), dd(0.0), 0.01);
    CHECK(round_count(mpq_class(5), near_int, nullptr) == 5);
    ComplexApprox<dd> bad(dd(0.4), dd(0.0), 0.01);
    CHECK_THROWS_AS(round_count(mpq_class(5), bad, nullptr), math_error);
    ComplexApprox<dd> huge_err(dd(0.0), dd(0.0), 0.5);
    CHECK_THROWS_AS(round_count(mpq_class(5), huge_err, nullptr), math_error);
    ComplexApprox<dd> imag(dd(0.0), dd(0.3), 0.01);
    CHECK_THROWS_AS(round_count(mpq_class(5), imag, nullptr), math_error);
}

TEST_CASE("Galois-conjugate embeddings of lambda give identical counts") {
    auto F5 = Field::make(5, 1);
    auto F25 = Field::make(5, 2);
    auto gt = build_gauss_table<dd>(F25, GaussMode::dft);
    // two different roots of the source modulus induce conjugate embeddings
    auto E0 = Embedding::make(F5, F25, 0);
    auto E1 = Embedding::make(F5, F25, 1);
    for (fe lam = 0; lam < 5; ++lam) {
        fe a = E0.apply(lam), b = E1.apply(lam);
        if (a == b) continue; // fixed by Galois (prime subfield reality check)
        auto ca = formula_counts(DworkInstance::from_lambda(2, F25, a), gt);
        auto cb = formula_counts(DworkInstance::from_lambda(2, F25, b), gt);
        REQUIRE(ca.x == cb.x);
        REQUIRE(ca.nstar == cb.nstar);
    }
    // F_5 embeds into the prime subfield of F_25, so images must coincide:
    // conjugacy is only visible for larger sources; check F_4 in F_16
    auto F4 = Field::make(2, 2);
    auto F16 = Field::make(2, 4);
    auto gt16 = build_gauss_table<dd>(F16, GaussMode::dft);
    auto G0 = Embedding::make(F4, F16, 0);
    auto G1 = Embedding::make(F4, F16, 1);
    bool saw_conjugate_pair = false;
    for (fe lam = 0; lam < 4; ++lam) {
        fe a = G0.apply(lam), b = G1.apply(lam);
        if (a != b) saw_conjugate_pair = true;
        auto ca = formula_counts(DworkInstance::from_lambda(2, F16, a), gt16);
        auto cb = formula_counts(DworkInstance::from_lambda(2, F16, b), gt16);
        REQUIRE(ca.x == cb.x);
        REQUIRE(ca.nstar == cb.nstar);
    }
    CHECK(saw_conjugate_pair);
}
