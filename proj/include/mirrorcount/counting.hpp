#pragma once

// Enumeration oracles for the Dwork family
//
//   X_lambda:  x_1^{n+1} + ... + x_{n+1}^{n+1} + lambda*x_1...x_{n+1} = 0  in P^n
//   N*_lambda: points of x_1+...+x_n + 1/(x_1...x_n) + lambda = 0 with all x_i != 0
//   Y_lambda:  N* - (q-1)^n/q + (-1)^n/q + (q^n-1)/(q-1)
//
// plus the diagonal counts M_i*, the zero-pattern decomposition of #X, and
// the root-of-unity group orders.  Projective counts go through affine
// enumeration and exact division by q-1.  Sweep variants bucket one affine
// pass by the unique lambda solving f(x) = 0, so a full lambda-scan costs one
// enumeration.

#include <gmpxx.h>
#include <optional>

#include "mirrorcount/field.hpp"

namespace mc {

struct DworkInstance {
    u32 n = 1;
    FieldPtr field;
    fe lambda = 0;
    std::optional<fe> psi; // when set, lambda == -(n+1)*psi

    static DworkInstance from_lambda(u32 n, FieldPtr F, fe lambda) {
        return {n, std::move(F), lambda, std::nullopt};
    }
    static DworkInstance from_psi(u32 n, FieldPtr F, fe psi) {
        if ((n + 1) % F->p == 0)
            throw usage_error("psi parametrization needs gcd(n+1, p) = 1");
        fe lam = F->mul(F->neg(F->from_int(n + 1)), psi);
        return {n, std::move(F), lam, psi};
    }
};

struct CountRecord {
    u64 p = 0;
    u32 m = 0, n = 0;
    std::string lambda_key; // discrete-log index or "zero"
    mpz_class count_X, count_Y, count_Nstar;
    std::string method; // "direct" | "gauss_formula"
    double err_budget_used = 0.0;
};

inline std::string lambda_key_of(const Field& F, fe lambda) {
    return lambda == 0 ? "zero" : std::to_string(F.dlog(lambda));
}

inline fe lambda_from_key(const Field& F, const std::string& key) {
    if (key == "zero") return 0;
    return F.exp_of(std::stoull(key));
}

// ---- affine sweep over X: bucket[lam] + all_of_them  ----
struct XSweep {
    std::vector<u64> bucket; // affine solutions with product != 0, by lambda code
    u64 lambda_free = 0;     // affine solutions with product = 0 (every lambda)
    u64 affine(fe lam) const { return bucket[lam] + lambda_free; }
};

inline XSweep sweep_X_affine(u32 n, const Field& F) {
    const u64 q = F.q;
    check_budget(std::pow((double)q, n + 1), "X affine enumeration");
    XSweep sw;
    sw.bucket.assign(q, 0);
    std::vector<fe> pw(q);
    for (u64 x = 0; x < q; ++x) pw[x] = F.pow((fe)x, n + 1);
    // odometer over (n+1) coordinates with running power-sums and products
    std::vector<fe> xs(n + 1, 0), psum(n + 2, 0), pprod(n + 2, 1);
    u32 depth = 0;
    for (;;) {
        if (depth == n + 1) {
            fe S = psum[depth], P = pprod[depth];
            if (P != 0)
                ++sw.bucket[F.mul(F.neg(S), F.inv(P))];
            else if (S == 0)
                ++sw.lambda_free;
            // advance
            while (depth > 0 && xs[depth - 1] == q - 1) { xs[--depth] = 0; }
            if (depth == 0) break;
            ++xs[depth - 1];
            --depth;
        }
        psum[depth + 1] = F.add(psum[depth], pw[xs[depth]]);
        pprod[depth + 1] = F.mul(pprod[depth], xs[depth]);
        ++depth;
    }
    return sw;
}

inline mpz_class projective_from_affine(u64 affine, u64 q) {
    if ((affine - 1) % (q - 1) != 0)
        throw math_error("affine/projective consistency violated: affine=" +
                         std::to_string(affine));
    return mpz_class((unsigned long)((affine - 1) / (q - 1)));
}

inline mpz_class count_X_direct(const DworkInstance& inst) {
    auto sw = sweep_X_affine(inst.n, *inst.field);
    return projective_from_affine(sw.affine(inst.lambda), inst.field->q);
}

// ---- N* sweeps: bucket by -(x_1+...+x_n+1/(x_1...x_n)) ----
inline std::vector<u64> sweep_Nstar(u32 n, const Field& F) {
    const u64 q = F.q;
    check_budget(std::pow((double)(q - 1), n), "toric enumeration");
    std::vector<u64> bucket(q, 0);
    std::vector<fe> xs(n, 1), psum(n + 1, 0), pprod(n + 1, 1);
    u32 depth = 0;
    for (;;) {
        if (depth == n) {
            fe v = F.add(psum[depth], F.inv(pprod[depth]));
            ++bucket[F.neg(v)];
            while (depth > 0 && xs[depth - 1] == q - 1) { xs[--depth] = 1; }
            if (depth == 0) break;
            ++xs[depth - 1];
            --depth;
        }
        psum[depth + 1] = F.add(psum[depth], xs[depth]);
        pprod[depth + 1] = F.mul(pprod[depth], xs[depth]);
        ++depth;
    }
    return bucket;
}

inline mpz_class count_Nstar_direct(const DworkInstance& inst) {
    auto bucket = sweep_Nstar(inst.n, *inst.field);
    return mpz_class((unsigned long)bucket[inst.lambda]);
}

// Same count through the (n+1)-variable system x_1+...+x_{n+1} = -lambda,
// x_1...x_{n+1} = 1; kept as an independent formulation for cross-checks.
inline mpz_class count_Nstar_toric_system(const DworkInstance& inst) {
    const Field& F = *inst.field;
    const u64 q = F.q;
    const u32 n = inst.n;
    check_budget(std::pow((double)(q - 1), n), "toric system enumeration");
    fe target = F.neg(inst.lambda);
    u64 cnt = 0;
    std::vector<fe> xs(n, 1), psum(n + 1, 0), pprod(n + 1, 1);
    u32 depth = 0;
    for (;;) {
        if (depth == n) {
            fe xlast = F.inv(pprod[depth]);
            if (F.add(psum[depth], xlast) == target) ++cnt;
            while (depth > 0 && xs[depth - 1] == q - 1) { xs[--depth] = 1; }
            if (depth == 0) break;
            ++xs[depth - 1];
            --depth;
        }
        psum[depth + 1] = F.add(psum[depth], xs[depth]);
        pprod[depth + 1] = F.mul(pprod[depth], xs[depth]);
        ++depth;
    }
    return mpz_class((unsigned long)cnt);
}

// (E: Y): #Y = N* - (q-1)^n/q + (-1)^n/q + (q^n-1)/(q-1); the correction is
// always an integer, asserted here.
inline mpz_class count_Y_from_Nstar(u32 n, const Field& F, const mpz_class& nstar) {
    mpz_class q((unsigned long)F.q);
    mpq_class val(nstar);
    mpz_class qm1 = q - 1;
    mpz_class qm1n, qn;
    mpz_pow_ui(qm1n.get_mpz_t(), qm1.get_mpz_t(), n);
    mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), n);
    int sgn = (n % 2 == 0) ? 1 : -1;
    val -= mpq_class(qm1n) / mpq_class(q);
    val += mpq_class(mpz_class(sgn)) / mpq_class(q);
    val += mpq_class(qn - 1) / mpq_class(qm1);
    if (val.get_den() != 1)
        throw math_error("NonIntegral: Y-count expression is not an integer");
    if (val.get_num() < 0)
        throw math_error("NonIntegral: negative Y-count");
    return val.get_num();
}

inline mpz_class count_Y_direct(const DworkInstance& inst) {
    return count_Y_from_Nstar(inst.n, *inst.field, count_Nstar_direct(inst));
}

// ---- diagonal counts M_i* and the zero-pattern decomposition ----

// M_i*: points of x_{i+1}^{n+1}+...+x_{n+1}^{n+1} = 0 in P^{n-i} with all
// coordinates nonzero (1 <= i <= n-1)
inline mpz_class count_diagonal(u32 i, u32 n, const Field& F) {
    if (i < 1 || i > n - 1) throw usage_error("count_diagonal: i out of [1, n-1]");
    const u64 q = F.q;
    const u32 vars = n + 1 - i;
    check_budget(std::pow((double)(q - 1), vars), "diagonal enumeration");
    std::vector<fe> pw(q);
    for (u64 x = 0; x < q; ++x) pw[x] = F.pow((fe)x, n + 1);
    u64 cnt = 0;
    std::vector<fe> xs(vars, 1), psum(vars + 1, 0);
    u32 depth = 0;
    for (;;) {
        if (depth == vars) {
            if (psum[depth] == 0) ++cnt;
            while (depth > 0 && xs[depth - 1] == q - 1) { xs[--depth] = 1; }
            if (depth == 0) break;
            ++xs[depth - 1];
            --depth;
        }
        psum[depth + 1] = F.add(psum[depth], pw[xs[depth]]);
        ++depth;
    }
    if (cnt % (q - 1) != 0) throw math_error("diagonal affine count not divisible by q-1");
    return mpz_class((unsigned long)(cnt / (q - 1)));
}

// M_0*: points of X_lambda in the open torus (projective, all coords nonzero)
inline mpz_class count_M0star(const DworkInstance& inst) {
    const Field& F = *inst.field;
    const u64 q = F.q;
    const u32 n = inst.n;
    check_budget(std::pow((double)(q - 1), n + 1), "torus enumeration");
    std::vector<fe> pw(q);
    for (u64 x = 0; x < q; ++x) pw[x] = F.pow((fe)x, n + 1);
    u64 cnt = 0;
    std::vector<fe> xs(n + 1, 1), psum(n + 2, 0), pprod(n + 2, 1);
    u32 depth = 0;
    for (;;) {
        if (depth == n + 1) {
            if (F.add(psum[depth], F.mul(inst.lambda, pprod[depth])) == 0) ++cnt;
            while (depth > 0 && xs[depth - 1] == q - 1) { xs[--depth] = 1; }
            if (depth == 0) break;
            ++xs[depth - 1];
            --depth;
        }
        psum[depth + 1] = F.add(psum[depth], pw[xs[depth]]);
        pprod[depth + 1] = F.mul(pprod[depth], xs[depth]);
        ++depth;
    }
    if (cnt % (q - 1) != 0) throw math_error("torus affine count not divisible by q-1");
    return mpz_class((unsigned long)(cnt / (q - 1)));
}

struct XDecomposition {
    mpz_class m0;
    std::vector<mpz_class> mi; // M_1*..M_{n-1}*
    mpz_class recomposed;
};

// #X = M_0* + sum_i binom(n+1, i) M_i*
inline XDecomposition decompose_X(const DworkInstance& inst) {
    XDecomposition d;
    d.m0 = count_M0star(inst);
    d.recomposed = d.m0;
    for (u32 i = 1; i + 1 <= inst.n; ++i) {
        d.mi.push_back(count_diagonal(i, inst.n, *inst.field));
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), inst.n + 1, i);
        d.recomposed += binom * d.mi.back();
    }
    return d;
}

// ---- root-of-unity groups of the quotient construction ----

inline std::vector<fe> roots_of_unity(u32 order, const Field& F) {
    u64 d = gcd_u64(order, F.q - 1);
    std::vector<fe> mu;
    for (u64 j = 0; j < d; ++j) mu.push_back(F.exp_of(j * ((F.q - 1) / d)));
    std::sort(mu.begin(), mu.end());
    return mu;
}

struct GroupOrders {
    u64 d;                      // gcd(n+1, q-1)
    mpz_class g_formula;        // d^n
    mpz_class g_enumerated;     // #{zeta in mu_{n+1}^{n+1} : prod = 1}
    std::vector<mpz_class> gi_formula;    // d^{n-i}, i = 1..n-1
    std::vector<mpz_class> gi_enumerated; // |mu^{n+1-i}| / d  (free diagonal action)
};

inline GroupOrders group_orders(u32 n, const Field& F) {
    GroupOrders go;
    go.d = gcd_u64(n + 1, F.q - 1);
    mpz_ui_pow_ui(go.g_formula.get_mpz_t(), go.d, n);
    auto mu = roots_of_unity(n + 1, F);
    // enumerate tuples with product 1
    u64 cnt = 0;
    std::vector<u32> idx(n + 1, 0);
    check_budget(std::pow((double)mu.size(), n + 1), "group enumeration");
    for (;;) {
        fe prod = 1;
        for (u32 i = 0; i <= n; ++i) prod = F.mul(prod, mu[idx[i]]);
        if (prod == 1) ++cnt;
        u32 c = 0;
        while (c <= n && ++idx[c] == mu.size()) idx[c++] = 0;
        if (c > n) break;
    }
    go.g_enumerated = mpz_class((unsigned long)cnt);
    for (u32 i = 1; i + 1 <= n; ++i) {
        mpz_class f;
        mpz_ui_pow_ui(f.get_mpz_t(), go.d, n - i);
        go.gi_formula.push_back(f);
        // mu_d^{n+1-i} modulo the free diagonal action: orbit count = d^{n+1-i}/d
        mpz_class total;
        mpz_ui_pow_ui(total.get_mpz_t(), mu.size(), n + 1 - i);
        if (total % (unsigned long)mu.size() != 0)
            throw math_error("diagonal action orbit count not integral");
        go.gi_enumerated.push_back(total / (unsigned long)mu.size());
    }
    return go;
}

} // namespace mc
