#pragma once

// The Gauss-sum counting engine.
//
// M is the (n+2)x(n+2) matrix with first row all ones and row i+1 equal to
// (n+1)e_i + e_{n+2}.  E is the set of integer vectors k in [0, q-1]^{n+2}
// with Mk = 0 mod (q-1); both representatives 0 and q-1 of the zero residue
// are enumerated, since the degenerate term values distinguish them.  With
// s(k) = #nonzero entries of Mk over the integers,
//
//   S_k = q^{n+1-s(k)} / (q-1)^{n+3-s(k)} * prod_j G(k_j) * chi(lambda)^{k_{n+2}}
//
// and the assembled counts are
//
//   #X  = [q^{n+1} + (-1)^n q^n - 1 - (q-1)^{n+1}]/(q-1) + sum_{E1} S_k + sum_{E2*} S_k
//   N*  = (q-1)^n/q + (-1)^n/(q(q-1)) + sum_{E2*} S_k
//
// for lambda != 0, and for lambda = 0 (only k_{n+2} = 0 contributes)
//
//   #X0 = (q^{n+1}-1)/(q-1) + (-1)^{n+1} q^n + sum_{E1,0} S_k + sum_{E2*,0} S_k
//   N0* = (q-1)^n/q + (-1)^{n+1}/q + sum_{E2*,0} S_k.
//
// Terms whose G-factors are all endpoint values are accumulated as exact
// rationals; everything else goes through certified complex arithmetic and a
// final rounding that requires distance-to-integer and error budget < 0.25.

#include <gmpxx.h>
#include <array>
#include <functional>

#include "mirrorcount/characters.hpp"
#include "mirrorcount/counting.hpp"

namespace mc {

// ---------------- M matrix and exponent vectors ----------------

struct MMatrix {
    u32 n;
    static MMatrix build(u32 n) {
        if (n < 1) throw usage_error("build_M: n >= 1 required");
        return {n};
    }
    // Mk over the integers
    std::vector<i64> apply(const std::vector<u32>& k) const {
        std::vector<i64> rows(n + 2);
        i64 total = 0;
        for (u32 j = 0; j < n + 2; ++j) total += k[j];
        rows[0] = total;
        for (u32 i = 0; i < n + 1; ++i) rows[i + 1] = (i64)(n + 1) * k[i] + k[n + 1];
        return rows;
    }
    std::vector<std::vector<i64>> entries() const {
        std::vector<std::vector<i64>> m(n + 2, std::vector<i64>(n + 2, 0));
        for (u32 j = 0; j < n + 2; ++j) m[0][j] = 1;
        for (u32 i = 0; i < n + 1; ++i) { m[i + 1][i] = n + 1; m[i + 1][n + 1] = 1; }
        return m;
    }
};

enum class EClass { E1, E2star, E2corner };

struct ExponentVector {
    std::vector<u32> k;
    std::vector<i64> mk;
    u32 s = 0;
    EClass cls = EClass::E1;

    bool operator<(const ExponentVector& o) const { return k < o.k; }
    bool operator==(const ExponentVector& o) const { return k == o.k; }
};

inline u32 count_nonzero(const std::vector<i64>& v) {
    u32 s = 0;
    for (i64 x : v) s += (x != 0);
    return s;
}

inline EClass classify_E(const std::vector<u32>& k, u32 n, u64 q) {
    bool alleq = true;
    for (u32 i = 1; i < n + 1; ++i) alleq &= (k[i] == k[0]);
    if (!alleq) return EClass::E1;
    return (k[0] == 0 || k[0] == q - 1) ? EClass::E2corner : EClass::E2star;
}

// Fast enumeration: for each value v of k_{n+2}, the coordinate congruence
// (n+1) k_i = -v mod (q-1) fixes d = gcd(n+1, q-1) residue classes, solvable
// iff d | v; representatives in [0, q-1] are the class members, with residue
// 0 contributing both 0 and q-1.  The row-1 sum condition then pins the
// residue of the last coordinate.  Order is deterministic: v ascending, then
// lexicographic in the leading coordinates.
inline void for_each_E_range(u32 n, u64 q, u64 vlo, u64 vhi,
                             const std::function<void(const std::vector<u32>&, u32, EClass)>& visit) {
    const u64 n1 = q - 1;
    const u64 d = gcd_u64(n + 1, n1);
    const u64 step = n1 / d;
    const u64 a = ((n + 1) / d) % (step ? step : 1);
    const u64 ainv = (step <= 1) ? 0 : inv_mod(a, step);
    std::vector<u32> k(n + 2);
    std::vector<u32> reps;
    std::vector<i64> mk(n + 2);

    auto emit = [&](u64 v) {
        i64 total = 0;
        for (u32 j = 0; j < n + 2; ++j) total += k[j];
        mk[0] = total;
        for (u32 i = 0; i < n + 1; ++i) mk[i + 1] = (i64)(n + 1) * k[i] + (i64)v;
        u32 s = count_nonzero(mk);
        EClass cls = classify_E(k, n, q);
        if (cls == EClass::E2star && s != n + 2)
            throw math_error("E2 row argument violated: s(k) != n+2");
        visit(k, s, cls);
    };

    for (u64 v = vlo; v < vhi && v <= n1; ++v) {
        u64 vres = v % n1;
        if (vres % d != 0) continue;
        u64 r = (n1 - vres) % n1;                       // target of (n+1) k_i mod (q-1)
        u64 base = (step <= 1) ? 0 : ((r / d) % step) * ainv % step;
        reps.clear();
        for (u64 j = 0; j < d; ++j) {
            u64 rho = base + j * step;
            reps.push_back((u32)rho);
            if (rho == 0) reps.push_back((u32)n1);
        }
        std::sort(reps.begin(), reps.end());
        k[n + 1] = (u32)v;
        std::vector<u32> idx(n, 0);
        for (;;) {
            u64 partial = v;
            for (u32 i = 0; i < n; ++i) { k[i] = reps[idx[i]]; partial += k[i]; }
            u64 need = (n1 - partial % n1) % n1;        // residue of the last free coord
            if (need % step == base) {
                k[n] = (u32)need;
                emit(v);
                if (need == 0) { k[n] = (u32)n1; emit(v); }
            }
            u32 c = 0;
            while (c < n && ++idx[c] == reps.size()) idx[c++] = 0;
            if (c == n) break;
        }
    }
}

inline void for_each_E(u32 n, u64 q,
                       const std::function<void(const std::vector<u32>&, u32, EClass)>& visit) {
    for_each_E_range(n, q, 0, q, visit);
}

// Materializing variant (small q; used by tests and diagnostics).
inline std::vector<ExponentVector> enumerate_E(u32 n, const Field& F) {
    std::vector<ExponentVector> out;
    MMatrix M = MMatrix::build(n);
    for_each_E(n, F.q, [&](const std::vector<u32>& k, u32 s, EClass cls) {
        ExponentVector ev;
        ev.k = k;
        ev.mk = M.apply(k);
        ev.s = s;
        ev.cls = cls;
        out.push_back(std::move(ev));
    });
    return out;
}

// Exhaustive scan oracle: every vector in [0, q-1]^{n+2} tested against the
// membership condition directly.
inline std::vector<ExponentVector> enumerate_E_scan(u32 n, const Field& F) {
    const u64 q = F.q, n1 = q - 1;
    check_budget(std::pow((double)q, n + 2), "E scan");
    MMatrix M = MMatrix::build(n);
    std::vector<ExponentVector> out;
    std::vector<u32> k(n + 2, 0);
    for (;;) {
        auto mk = M.apply(k);
        bool member = true;
        for (i64 r : mk) member &= (r % (i64)n1 == 0);
        if (member) {
            ExponentVector ev;
            ev.k = k;
            ev.mk = mk;
            ev.s = count_nonzero(mk);
            ev.cls = classify_E(k, n, q);
            out.push_back(std::move(ev));
        }
        u32 c = 0;
        while (c < n + 2 && ++k[c] == q) k[c++] = 0;
        if (c == n + 2) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------- S_k terms ----------------

template <class Real>
struct STerm {
    mpq_class exact;                  // exact rational factor (q-powers and endpoint G's)
    ComplexApprox<Real> cplx;         // product of interior G's and the chi(lambda) factor
    bool fully_exact = true;          // no interior G factor
};

// q^e as exact rational for possibly negative e
inline mpq_class qpow(u64 q, i64 e) {
    mpz_class z;
    mpz_ui_pow_ui(z.get_mpz_t(), q, (unsigned long)(e < 0 ? -e : e));
    return e >= 0 ? mpq_class(z) : mpq_class(1) / mpq_class(z);
}

template <class Real>
STerm<Real> s_term(const std::vector<u32>& k, u32 s, const DworkInstance& inst,
                   const GaussTable<Real>& gt) {
    const u64 q = inst.field->q, n1 = q - 1;
    const u32 n = inst.n;
    if (inst.lambda == 0 && k[n + 1] != 0)
        throw math_error("ZeroLambdaNonzeroK: S_k undefined for lambda = 0, k_{n+2} != 0");
    STerm<Real> t;
    t.exact = qpow(q, (i64)n + 1 - (i64)s) / qpow(n1, (i64)n + 3 - (i64)s);
    t.cplx = ComplexApprox<Real>(Real(1.0), Real(0.0), 0.0);
    for (u32 j = 0; j < n + 2; ++j) {
        if (k[j] == 0) {
            t.exact *= mpq_class((long)n1);
        } else if (k[j] == n1) {
            t.exact *= -mpq_class((long)q);
        } else {
            t.cplx *= gt.values[k[j]];
            t.fully_exact = false;
        }
    }
    if (inst.lambda != 0 && k[n + 1] != 0) {
        // chi(lambda)^{k_{n+2}}
        u64 e = (u64)(((unsigned __int128)inst.field->dlog(inst.lambda) * k[n + 1]) % n1);
        if (e != 0) {
            t.cplx *= gt.chi_root((i64)e);
            t.fully_exact = false;
        }
    }
    return t;
}

// ---------------- assembled sums over E ----------------

template <class Real>
struct EngineSums {
    mpq_class e1_exact = 0, e2_exact = 0;       // exact parts of sum_{E1}, sum_{E2*}
    ComplexApprox<Real> e1_cplx, e2_cplx;       // certified parts
    u64 n_e1 = 0, n_e2star = 0, n_corner = 0;

    EngineSums() {
        e1_cplx = ComplexApprox<Real>(Real(0.0), Real(0.0), 0.0);
        e2_cplx = ComplexApprox<Real>(Real(0.0), Real(0.0), 0.0);
    }
};

// One pass over E computing sum_{E1} S_k and sum_{E2*} S_k (restricted to
// k_{n+2} = 0 for lambda = 0).  Parallel over k_{n+2} values with a fixed
// chunk grid and in-order reduction, so results are bit-reproducible.
template <class Real>
EngineSums<Real> sum_over_E(const DworkInstance& inst, const GaussTable<Real>& gt) {
    const u64 q = inst.field->q;
    const u32 n = inst.n;
    const bool lz = (inst.lambda == 0);

    // Partition: chunk ci covers k_{n+2} values [ci*C, ci*C+C).
    const u64 vspan = lz ? 1 : q;
    const u64 C = std::max<u64>(1, vspan / 64);
    const u64 nchunks = (vspan + C - 1) / C;
    std::vector<EngineSums<Real>> parts(nchunks);

    parallel_chunks(vspan, C, [&](u64 ci, u64 vlo, u64 vhi) {
        EngineSums<Real>& acc = parts[ci];
        for_each_E_range(n, q, vlo, vhi, [&](const std::vector<u32>& k, u32 s, EClass cls) {
            if (lz && k[n + 1] != 0) return;
            if (cls == EClass::E2corner) { ++acc.n_corner; return; }
            auto t = s_term(k, s, inst, gt);
            if (cls == EClass::E1) {
                ++acc.n_e1;
                if (t.fully_exact) acc.e1_exact += t.exact;
                else acc.e1_cplx += t.cplx.scaled(t.exact);
            } else {
                ++acc.n_e2star;
                if (t.fully_exact) acc.e2_exact += t.exact;
                else acc.e2_cplx += t.cplx.scaled(t.exact);
            }
        });
    });

    EngineSums<Real> total;
    for (auto& p : parts) {
        total.e1_exact += p.e1_exact;
        total.e2_exact += p.e2_exact;
        total.e1_cplx += p.e1_cplx;
        total.e2_cplx += p.e2_cplx;
        total.n_e1 += p.n_e1;
        total.n_e2star += p.n_e2star;
        total.n_corner += p.n_corner;
    }
    return total;
}

// rounding: exact + certified complex -> integer, enforcing the 0.25 budget
template <class Real>
mpz_class round_count(const mpq_class& exact, const ComplexApprox<Real>& z, double* err_used) {
    double err = z.err;
    double im = std::abs(to_double(z.im));
    if (!(err < 0.25))
        throw math_error("PrecisionBudgetExceeded: error budget " + std::to_string(err));
    if (im > err + 1e-9)
        throw math_error("NonIntegral: imaginary part " + std::to_string(im) +
                         " exceeds error bound " + std::to_string(err));
    mpq_class re_q;
    if constexpr (std::is_same_v<Real, dd>) {
        re_q = mpq_class(z.re.hi) + mpq_class(z.re.lo);
    } else {
        re_q = z.re.to_mpq();
    }
    mpq_class val = exact + re_q;
    // nearest integer
    mpz_class fl = val.get_num() / val.get_den(); // truncation
    if (val < 0 && mpq_class(fl) != val) fl -= 1; // floor
    mpz_class nearest = fl;
    if (val - mpq_class(fl) >= mpq_class(1, 2)) nearest = fl + 1;
    mpq_class dist = val - mpq_class(nearest);
    double ddist = std::abs(dist.get_d());
    if (err_used) *err_used = err + ddist;
    if (!(ddist < 0.25))
        throw math_error("NonIntegral: distance to nearest integer " + std::to_string(ddist));
    return nearest;
}

template <class Real>
mpz_class count_X_formula(const DworkInstance& inst, const GaussTable<Real>& gt,
                          double* err_used = nullptr) {
    const u64 q = inst.field->q;
    const u32 n = inst.n;
    auto sums = sum_over_E(inst, gt);
    mpq_class constant;
    if (inst.lambda != 0) {
        // [q^{n+1} + (-1)^n q^n - 1 - (q-1)^{n+1}] / (q-1)
        constant = (qpow(q, n + 1) + mpq_class(n % 2 ? -1 : 1) * qpow(q, n) - 1 -
                    qpow(q - 1, n + 1)) /
                   mpq_class((long)(q - 1));
    } else {
        constant = (qpow(q, n + 1) - 1) / mpq_class((long)(q - 1)) +
                   mpq_class(n % 2 ? 1 : -1) * qpow(q, n);
    }
    mpq_class exact = constant + sums.e1_exact + sums.e2_exact;
    auto z = sums.e1_cplx + sums.e2_cplx;
    return round_count(exact, z, err_used);
}

template <class Real>
mpz_class count_Nstar_formula(const DworkInstance& inst, const GaussTable<Real>& gt,
                              double* err_used = nullptr) {
    const u64 q = inst.field->q;
    const u32 n = inst.n;
    auto sums = sum_over_E(inst, gt);
    mpq_class constant = qpow(q - 1, n) / mpq_class((long)q);
    if (inst.lambda != 0)
        constant += mpq_class(n % 2 ? -1 : 1) / (mpq_class((long)q) * mpq_class((long)(q - 1)));
    else
        constant += mpq_class(n % 2 ? 1 : -1) / mpq_class((long)q);
    mpq_class exact = constant + sums.e2_exact;
    return round_count(exact, sums.e2_cplx, err_used);
}

// combined assembly sharing one enumeration pass
struct FormulaCounts {
    mpz_class x, nstar, y;
    double err_used = 0.0;
};

template <class Real>
FormulaCounts formula_counts(const DworkInstance& inst, const GaussTable<Real>& gt) {
    const u64 q = inst.field->q;
    const u32 n = inst.n;
    auto sums = sum_over_E(inst, gt);
    FormulaCounts out;

    mpq_class cx;
    if (inst.lambda != 0)
        cx = (qpow(q, n + 1) + mpq_class(n % 2 ? -1 : 1) * qpow(q, n) - 1 - qpow(q - 1, n + 1)) /
             mpq_class((long)(q - 1));
    else
        cx = (qpow(q, n + 1) - 1) / mpq_class((long)(q - 1)) +
             mpq_class(n % 2 ? 1 : -1) * qpow(q, n);
    double e1 = 0, e2 = 0;
    out.x = round_count(cx + sums.e1_exact + sums.e2_exact, sums.e1_cplx + sums.e2_cplx, &e1);

    mpq_class cn = qpow(q - 1, n) / mpq_class((long)q);
    if (inst.lambda != 0)
        cn += mpq_class(n % 2 ? -1 : 1) / (mpq_class((long)q) * mpq_class((long)(q - 1)));
    else
        cn += mpq_class(n % 2 ? 1 : -1) / mpq_class((long)q);
    out.nstar = round_count(cn + sums.e2_exact, sums.e2_cplx, &e2);
    out.y = count_Y_from_Nstar(n, *inst.field, out.nstar);
    out.err_used = std::max(e1, e2);
    return out;
}

// closed form of sum_{E1} S_k under gcd(n+1, q-1) = 1:
//   A = q^n [(-1)^n - 1]
//   B = [(-1)^n + (-1)^{n+1} q^{n+1} + (q-1)^{n+1}] / (q-1)
// lambda = 0 gives A, otherwise A + B.
inline mpq_class sum_E1_closed_form(u32 n, u64 q, bool lambda_zero) {
    if (gcd_u64(n + 1, q - 1) != 1)
        throw math_error("HypothesisViolated: gcd(n+1, q-1) > 1");
    mpq_class A = qpow(q, n) * mpq_class((n % 2 ? -1 : 1) - 1);
    if (lambda_zero) return A;
    mpq_class B = (mpq_class(n % 2 ? -1 : 1) + mpq_class(n % 2 ? 1 : -1) * qpow(q, n + 1) +
                   qpow(q - 1, n + 1)) /
                  mpq_class((long)(q - 1));
    return A + B;
}

// the X - Y difference expressions used in the equality proof;
// zero exactly when gcd(n+1, q-1) = 1
inline mpq_class xy_difference_constant(u32 n, u64 q, bool lambda_zero) {
    if (!lambda_zero) {
        return -qpow(q - 1, n) +
               (qpow(q, n + 1) + mpq_class(n % 2 ? -1 : 1) * qpow(q, n) +
                mpq_class(n % 2 ? 1 : -1) - qpow(q, n)) /
                   mpq_class((long)(q - 1));
    }
    return qpow(q, n) * mpq_class((n % 2 ? 1 : -1) + 1);
}

} // namespace mc
