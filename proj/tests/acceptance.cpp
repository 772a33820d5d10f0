// Acceptance suite: one criterion per invocation (AC1..AC12) or "all".
// Prints exactly one [PASS]/[FAIL] line per criterion, with witnesses for
// failures, and exits nonzero if the requested criterion fails.
//
// Criteria encode the verification targets literally; where enumeration
// contradicts a stated claim the suite reports the failure with the witness
// instances rather than weakening the check.

#include <cstdio>
#include <cstdlib>
#include <set>

#include "mirrorcount/verify.hpp"

using namespace mc;

namespace {

Engine& engine() {
    static Engine eng;
    static bool init = [] {
        const char* dir = std::getenv("MIRRORCOUNT_ACCEPT_CACHE");
        eng.open_cache(dir ? dir : "acceptance_cache");
        return true;
    }();
    (void)init;
    return eng;
}

struct Criterion {
    bool pass = true;
    std::string detail;
    u64 checked = 0;
    std::vector<std::string> witnesses;

    void fail(const std::string& w) {
        pass = false;
        if (witnesses.size() < 8) witnesses.push_back(w);
    }
};

// grid of AC1: n in {1,2,3} x prime powers q <= 13 with gcd(p, n+1) = 1
std::vector<std::tuple<u32, u64, u32>> base_grid() {
    std::vector<std::tuple<u32, u64, u32>> g;
    for (u32 n : {1, 2, 3})
        for (auto [p, m] : prime_powers_upto(13))
            if ((n + 1) % p != 0) g.push_back({n, p, m});
    return g;
}

Criterion ac1() {
    Criterion c;
    for (auto [n, p, m] : base_grid()) {
        auto F = engine().field(p, m);
        const auto& gt = engine().gauss_dd(F);
        for (u64 lam = 0; lam < F->q; ++lam) {
            auto inst = DworkInstance::from_lambda(n, F, (fe)lam);
            auto fc = formula_counts(inst, gt);
            auto xd = count_X_direct(inst);
            auto nd = count_Nstar_direct(inst);
            ++c.checked;
            if (fc.x != xd || fc.nstar != nd)
                c.fail("n=" + std::to_string(n) + " q=" + std::to_string(F->q) +
                       " lambda=" + std::to_string(lam) + ": formula (" + fc.x.get_str() + "," +
                       fc.nstar.get_str() + ") direct (" + xd.get_str() + "," + nd.get_str() + ")");
        }
    }
    c.detail = std::to_string(c.checked) + " instances, exact equality";
    return c;
}

Criterion ac2() {
    Criterion c;
    auto grid = base_grid();
    grid.push_back({4, 2, 1});
    for (auto [n, p, m] : grid) {
        u64 q = checked_pow(p, m, field_q_bound());
        u32 kmax = 0;
        u64 qk = 1;
        while (qk <= 1'000'000 / q) { qk *= q; ++kmax; }
        if (kmax == 0) continue;
        auto rep = verify_equal(engine(), n, p, m, kmax);
        for (auto& cr : rep.cases) {
            if (cr.status == "pass") ++c.checked;
            if (cr.status == "fail") c.fail(cr.key + " " + cr.detail.dump());
        }
    }
    c.detail = std::to_string(c.checked) + " (n, q^k, lambda) cases with gcd(n+1, q^k-1) = 1";
    return c;
}

Criterion ac3() {
    Criterion c;
    for (auto [n, p, m] : base_grid()) {
        auto F = engine().field(p, m);
        u64 d = gcd_u64(n + 1, F->q - 1);
        if (d <= 1) continue;
        auto sweep = sweep_X_affine(n, *F);
        for (u64 lam = 0; lam < F->q; ++lam) {
            mpz_class X = projective_from_affine(sweep.affine((fe)lam), F->q);
            ++c.checked;
            if (X % (unsigned long)d != 0)
                c.fail("n=" + std::to_string(n) + " q=" + std::to_string(F->q) +
                       " lambda=" + std::to_string(lam) + ": #X=" + X.get_str() +
                       " not divisible by d=" + std::to_string(d));
        }
    }
    c.detail = std::to_string(c.checked) + " cases with d > 1";
    return c;
}

Criterion ac4() {
    Criterion c;
    // suitable q with d > 1 for each prime-power n+1
    std::vector<std::tuple<u32, u64, u32>> cases = {
        {2, 2, 2}, {2, 7, 1}, {2, 13, 1},          // n+1 = 3
        {3, 3, 1}, {3, 5, 1}, {3, 3, 2}, {3, 13, 1}, // n+1 = 4
        {4, 11, 1},                                  // n+1 = 5
        {7, 3, 1}, {7, 5, 1}, {7, 3, 2},             // n+1 = 8
        {8, 2, 2}, {8, 7, 1},                        // n+1 = 9
    };
    for (auto [n, p, m] : cases) {
        auto reps = verify_cong(engine(), n, p, m);
        for (auto& rep : {reps[1], reps[2]}) // part 2 X and Y
            for (auto& cr : rep.cases) {
                if (cr.status == "pass") ++c.checked;
                if (cr.status == "fail")
                    c.fail(rep.theorem + " " + cr.key + " " + cr.detail.dump());
            }
    }
    c.detail = std::to_string(c.checked) + " psi cases across n+1 in {3,4,5,8,9}";
    return c;
}

Criterion ac5() {
    Criterion c;
    for (u64 q : {7, 13}) {
        auto rep = verify_crt(engine(), 2, q, 1, 1);
        for (auto& cr : rep.cases) {
            if (cr.status == "pass") ++c.checked;
            if (cr.status == "fail") c.fail(cr.key + " " + cr.detail.dump());
        }
    }
    c.detail = std::to_string(c.checked) + " psi cases, modulus 3q";
    return c;
}

Criterion ac6() {
    Criterion c;
    for (auto [n, p, m] : base_grid()) {
        u64 q = checked_pow(p, m, field_q_bound());
        if (gcd_u64(n + 1, q - 1) != 1) continue;
        auto rep = verify_lemma_e1(engine(), n, p, m);
        for (auto& cr : rep.cases) {
            if (cr.status == "pass") ++c.checked;
            if (cr.status == "fail") c.fail(cr.key + " " + cr.detail.dump());
        }
    }
    c.detail = std::to_string(c.checked) + " lambda cases with gcd(n+1, q-1) = 1";
    return c;
}

Criterion ac7() {
    Criterion c;
    for (auto [n, p, m] : base_grid()) {
        auto F = engine().field(p, m);
        auto go = group_orders(n, *F);
        ++c.checked;
        if (go.g_formula != go.g_enumerated)
            c.fail("group order mismatch n=" + std::to_string(n) + " q=" + std::to_string(F->q));
        for (size_t i = 0; i < go.gi_formula.size(); ++i)
            if (go.gi_formula[i] != go.gi_enumerated[i])
                c.fail("G_i order mismatch n=" + std::to_string(n) + " q=" + std::to_string(F->q) +
                       " i=" + std::to_string(i + 1));
        u64 d = go.d;
        mpz_class dn = go.g_formula; // d^n
        for (u64 lam = 0; lam < F->q; ++lam) {
            auto inst = DworkInstance::from_lambda(n, F, (fe)lam);
            auto dec = decompose_X(inst);
            ++c.checked;
            if (dec.recomposed != count_X_direct(inst))
                c.fail("recomposition n=" + std::to_string(n) + " q=" + std::to_string(F->q) +
                       " lambda=" + std::to_string(lam));
            if (dn > 1 && dec.m0 % dn != 0)
                c.fail("d^n does not divide M0*: n=" + std::to_string(n) +
                       " q=" + std::to_string(F->q) + " lambda=" + std::to_string(lam) +
                       " M0*=" + dec.m0.get_str() + " d^n=" + dn.get_str());
            for (size_t i = 0; i < dec.mi.size(); ++i) {
                mpz_class dni;
                mpz_ui_pow_ui(dni.get_mpz_t(), d, n - (u32)(i + 1));
                if (dni > 1 && dec.mi[i] % dni != 0)
                    c.fail("d^{n-i} does not divide M_i*: n=" + std::to_string(n) +
                           " q=" + std::to_string(F->q) + " i=" + std::to_string(i + 1));
            }
        }
    }
    c.detail = std::to_string(c.checked) + " group/decomposition checks";
    return c;
}

Criterion ac8() {
    Criterion c;
    c.checked = 4;
    if (degree_formula(2) != 0) c.fail("degree_formula(2) != 0");
    if (degree_formula(3) != 18) c.fail("degree_formula(3) != 18");
    if (degree_formula(4) != 200) c.fail("degree_formula(4) != 200");
    if (degree_formula(4) != 4 * 20 + 4 * 30) c.fail("quintic decomposition 4*20 + 4*30");
    c.detail = "degree values 0, 18, 200 and the quintic split";
    return c;
}

Criterion ac9() {
    Criterion c;
    auto F = engine().field(7, 1);
    for (u64 lam = 0; lam < 7; ++lam) {
        if (!is_smooth(2, *F, (fe)lam)) continue;
        auto rep = run_quotient(engine(), 2, 7, 1, lambda_key_of(*F, (fe)lam), 8);
        ++c.checked;
        bool ok = rep.support.empty() && rep.integer_coeffs && rep.detection == "polynomial" &&
                  rep.detected.is_one();
        if (!ok)
            c.fail("lambda=" + std::to_string(lam) +
                   ": quotient != 1, support size " + std::to_string(rep.support.size()));
    }
    c.detail = std::to_string(c.checked) + " smooth lambda, quotient = 1 through T^8";
    return c;
}

Criterion ac10() {
    Criterion c;
    // The criterion names lambda = 1 and calls it smooth; over F_2 the member
    // lambda = 1 is singular ((1:1:1:1:1) annihilates all partials), so the
    // smoothness gate is bypassed and the three structural claims are tested
    // exactly as stated.  They rest on the equality theorem, which holds for
    // every lambda.
    auto rep = run_quotient(engine(), 4, 2, 1, "0", 8, 1e-6, /*enforce_smooth=*/false);
    c.checked = 3;
    if (!rep.integer_coeffs) c.fail("non-integer quotient coefficient");
    if (!rep.support_in_kZ) c.fail("support not contained in 4Z");
    if (!rep.kth_root_ok) c.fail("kth_root_check against the F_16 quotient failed");
    auto F2 = engine().field(2, 1);
    bool stated_smooth = is_smooth(4, *F2, 1);
    c.detail = "n=4 p=2 lambda=1 through T^8; k=4" +
               std::string(stated_smooth ? "" : " (note: lambda=1 is singular over F_2, "
                                                "contrary to the criterion's annotation)");
    return c;
}

Criterion ac11() {
    Criterion c;
    double rel_budget = std::ldexp(1.0, -20);
    for (auto [p, m] : prime_powers_upto(13)) {
        auto F = engine().field(p, m);
        auto naive = build_gauss_table<dd>(F, GaussMode::naive);
        auto dft = build_gauss_table<dd>(F, GaussMode::dft);
        for (u64 k = 0; k < F->q; ++k) {
            ++c.checked;
            double dre = std::abs((naive.values[k].re - dft.values[k].re).to_double());
            double dim = std::abs((naive.values[k].im - dft.values[k].im).to_double());
            if (dre + dim > naive.values[k].err + dft.values[k].err + 1e-25)
                c.fail("naive/dft disagree at q=" + std::to_string(F->q) +
                       " k=" + std::to_string(k));
            if (k > 0 && k + 1 < F->q) {
                double re = dft.values[k].re.to_double(), im = dft.values[k].im.to_double();
                double mag2 = re * re + im * im;
                if (std::abs(mag2 - (double)F->q) > rel_budget * (double)F->q)
                    c.fail("|G(k)|^2 != q at q=" + std::to_string(F->q) +
                           " k=" + std::to_string(k));
            }
        }
    }
    for (u64 q : {5, 13}) { // q = 1 mod 4: G((q-1)/2)^2 = +q
        auto F = engine().field(q, 1);
        auto gt = build_gauss_table<dd>(F, GaussMode::dft);
        auto g2 = gt.values[(q - 1) / 2] * gt.values[(q - 1) / 2];
        ++c.checked;
        if (std::abs(g2.re.to_double() - (double)q) > rel_budget * q ||
            std::abs(g2.im.to_double()) > rel_budget * q)
            c.fail("quadratic sign law at q=" + std::to_string(q));
    }
    for (u64 q : {7, 11}) { // q = 3 mod 4: G((q-1)/2)^2 = -q
        auto F = engine().field(q, 1);
        auto gt = build_gauss_table<dd>(F, GaussMode::dft);
        auto g2 = gt.values[(q - 1) / 2] * gt.values[(q - 1) / 2];
        ++c.checked;
        if (std::abs(g2.re.to_double() + (double)q) > rel_budget * q ||
            std::abs(g2.im.to_double()) > rel_budget * q)
            c.fail("quadratic sign law at q=" + std::to_string(q));
    }
    c.detail = std::to_string(c.checked) + " entries, relative budget 2^-20";
    return c;
}

Criterion ac12() {
    Criterion c;
    const char* bin = std::getenv("MIRRORCOUNT_BIN");
    if (!bin) {
        c.fail("MIRRORCOUNT_BIN not set");
        return c;
    }
    const char* dir = std::getenv("MIRRORCOUNT_ACCEPT_CACHE");
    std::string cachearg = std::string(" --cache-dir ") + (dir ? dir : "acceptance_cache");
    auto run = [&](const std::string& outfile) {
        std::string cmd = std::string(bin) + " verify-all" + cachearg + " > " + outfile;
        return std::system(cmd.c_str());
    };
    run("/tmp/mc_va_1.json");
    run("/tmp/mc_va_2.json");
    auto slurp = [](const char* path) {
        FILE* f = std::fopen(path, "rb");
        std::string s;
        if (f) {
            char buf[65536];
            size_t n;
            while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, n);
            std::fclose(f);
        }
        return s;
    };
    std::string a = slurp("/tmp/mc_va_1.json"), b = slurp("/tmp/mc_va_2.json");
    c.checked = 1;
    if (a.empty() || a != b) c.fail("verify-all outputs differ or are empty");
    c.detail = "two verify-all runs, " + std::to_string(a.size()) + " bytes each";
    std::remove("/tmp/mc_va_1.json");
    std::remove("/tmp/mc_va_2.json");
    return c;
}

const char* kDescriptions[12] = {
    "formula-oracle equivalence on the full grid",
    "theorem equal across extension towers",
    "congruence part 1: d | #X on the grid",
    "congruence part 2: ld | #X and #Y mod l indicator",
    "CRT corollary: #X = #Y mod 3q for psi^3 != 1",
    "closed forms for the E1 sum and vanishing differences",
    "group orders, divisibility of M_i*, decomposition of #X",
    "degree formula 0/18/200 and quintic split",
    "quotient structure n = 2, q = 7: quotient = 1",
    "quotient structure n = 4, p = 2: support, integrality, k-th root",
    "character-layer identities (naive = dft, |G|^2 = q, sign law)",
    "determinism: byte-identical verify-all runs",
};

int run_one(int idx) {
    Criterion (*fns[12])() = {ac1, ac2, ac3, ac4, ac5, ac6,
                              ac7, ac8, ac9, ac10, ac11, ac12};
    Timer t;
    Criterion c = fns[idx]();
    std::printf("[%s] AC%d: %s — %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", idx + 1,
                kDescriptions[idx], c.detail.c_str(), t.ms() / 1000.0);
    for (auto& w : c.witnesses) std::printf("        witness: %s\n", w.c_str());
    std::fflush(stdout);
    return c.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    std::string which = argc > 1 ? argv[1] : "all";
    try {
        if (which == "all") {
            int rc = 0;
            for (int i = 0; i < 12; ++i) rc |= run_one(i);
            return rc;
        }
        if (which.rfind("AC", 0) == 0) {
            int idx = std::stoi(which.substr(2)) - 1;
            if (idx < 0 || idx >= 12) {
                std::fprintf(stderr, "unknown criterion %s\n", which.c_str());
                return 2;
            }
            return run_one(idx);
        }
    } catch (const std::exception& e) {
        std::printf("[FAIL] %s: exception: %s\n", which.c_str(), e.what());
        return 1;
    }
    std::fprintf(stderr, "usage: acceptance [AC1..AC12|all]\n");
    return 2;
}
