#pragma once

// Zeta-quotient structure checks: the signed quotient (Z_X/Z_Y)^{(-1)^n}
// assembled from formula-engine counts over the extension tower, its support
// pattern, the k-th-root identity against the F_{q^k} quotient, polynomial
// detection, factorization, and weight purity.

#include "mirrorcount/engine.hpp"
#include "mirrorcount/intpoly.hpp"
#include "mirrorcount/series.hpp"

namespace mc {

// n(n^n - (-1)^n)/(n+1) - n, asserted integral
inline mpz_class degree_formula(u32 n) {
    if (n < 1) throw usage_error("degree_formula: n >= 1");
    mpz_class nn;
    mpz_ui_pow_ui(nn.get_mpz_t(), n, n);
    mpz_class num = mpz_class((long)n) * (nn - (n % 2 == 0 ? 1 : -1));
    if (num % (long)(n + 1) != 0) throw math_error("degree formula not integral");
    return num / (long)(n + 1) - (long)n;
}

// lambda^{n+1} != (-(n+1))^{n+1} evaluated in F; requires gcd(n+1, p) = 1
inline bool is_smooth(u32 n, const Field& F, fe lambda) {
    if ((n + 1) % F.p == 0)
        throw usage_error("CharacteristicDividesDegree: p | n+1");
    fe lhs = F.pow(lambda, n + 1);
    fe rhs = F.pow(F.neg(F.from_int(n + 1)), n + 1);
    return lhs != rhs;
}

struct QuotientFactor {
    IntPolynomial q;
    u32 rho = 0;
    bool pure = true;
    std::vector<double> root_abs; // |reciprocal roots|
};

struct QuotientReport {
    u32 n = 0;
    u64 p = 0;
    u32 m = 0;
    std::string lambda_key;
    u32 order = 0;                    // truncation order K
    u64 k = 0;                        // multiplicative order of q mod n+1
    TruncatedSeries quotient;         // the signed quotient series
    std::vector<u32> support;         // exponents with nonzero coefficients (>0)
    bool integer_coeffs = true;
    bool support_in_kZ = true;
    bool kth_root_ok = true;
    std::string detection;            // "polynomial" | "partial" | "violation"
    bool detected_valid = false;
    IntPolynomial detected;
    std::vector<QuotientFactor> factors;
    bool degree_consistent = true;    // deg(detected) == degree_formula(n) when detected
    double purity_tol = 1e-6;
};

inline std::vector<mpz_class> tower_counts(Engine& eng, u32 n, u64 p, u32 m_base, u32 K,
                                           fe lambda_base, bool want_x) {
    auto base = eng.field(p, m_base);
    std::vector<mpz_class> out;
    for (u32 j = 1; j <= K; ++j) {
        checked_pow(p, m_base * j, field_q_bound()); // budget gate
        auto Fj = eng.field(p, m_base * j);
        fe lam = Embedding::make(base, Fj).apply(lambda_base);
        auto rec = eng.counts_formula(n, Fj, lam);
        out.push_back(want_x ? rec.count_X : rec.count_Y);
    }
    return out;
}

inline QuotientReport run_quotient(Engine& eng, u32 n, u64 p, u32 m, const std::string& lambda_key,
                                   u32 K, double purity_tol = 1e-6, bool enforce_smooth = true) {
    auto F = eng.field(p, m);
    fe lambda = lambda_from_key(*F, lambda_key);
    if (enforce_smooth && !is_smooth(n, *F, lambda))
        throw usage_error("SmoothnessGate: lambda^{n+1} = (-(n+1))^{n+1}, singular member");

    QuotientReport rep;
    rep.n = n;
    rep.p = p;
    rep.m = m;
    rep.lambda_key = lambda_key;
    rep.order = K;
    rep.k = mult_order_mod(F->q % (n + 1), n + 1);
    rep.purity_tol = purity_tol;

    auto xs = tower_counts(eng, n, p, m, K, lambda, true);
    auto ys = tower_counts(eng, n, p, m, K, lambda, false);
    auto zx = zeta_from_counts(xs, true);
    auto zy = zeta_from_counts(ys, true);
    rep.quotient = signed_quotient(zx, zy, n);

    for (u32 j = 1; j <= K; ++j) {
        if (rep.quotient.c[j] == 0) continue;
        rep.support.push_back(j);
        if (rep.quotient.c[j].get_den() != 1) rep.integer_coeffs = false;
        if (j % rep.k != 0) rep.support_in_kZ = false;
    }

    // k-th-root identity against the F_{q^k} quotient
    if (rep.k > 1 && K >= rep.k) {
        u32 Kext = K / (u32)rep.k;
        auto xe = tower_counts(eng, n, p, m * (u32)rep.k, Kext, Embedding::make(F, eng.field(p, m * (u32)rep.k)).apply(lambda), true);
        auto ye = tower_counts(eng, n, p, m * (u32)rep.k, Kext, Embedding::make(F, eng.field(p, m * (u32)rep.k)).apply(lambda), false);
        auto qext = signed_quotient(zeta_from_counts(xe, true), zeta_from_counts(ye, true), n);
        rep.kth_root_ok = kth_root_check(rep.quotient, qext, (u32)rep.k);
    } else {
        rep.kth_root_ok = kth_root_check(rep.quotient, rep.quotient, 1);
    }

    // polynomial detection at the theorem degree
    mpz_class D = degree_formula(n);
    u32 max_deg = (u32)D.get_ui();
    try {
        auto det = detect_polynomial(rep.quotient, max_deg);
        if (det.status == DetectionResult::Status::insufficient) {
            rep.detection = "partial";
        } else {
            rep.detection = "polynomial";
            rep.detected_valid = true;
            rep.detected = det.poly;
            rep.degree_consistent = (rep.detected.degree() == max_deg) ||
                                    (rep.detected.is_one() && max_deg == 0);
            if (rep.detected.degree() >= 1 && rep.detected.degree() <= poly::factor_degree_bound()) {
                for (auto& [f, mult] : factor_over_Z(rep.detected)) {
                    QuotientFactor qf;
                    qf.q = f;
                    qf.rho = mult;
                    double qeff = std::pow((double)F->q, (double)rep.k);
                    auto pr = purity_check(f, qeff, (int)n - 3, purity_tol);
                    qf.pure = pr.all_pure;
                    for (auto& rv : pr.roots) qf.root_abs.push_back(rv.abs_value);
                    rep.factors.push_back(std::move(qf));
                }
            }
        }
    } catch (const math_error&) {
        rep.detection = "violation";
    }
    return rep;
}

} // namespace mc
