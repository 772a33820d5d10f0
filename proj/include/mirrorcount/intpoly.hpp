#pragma once

// Integer polynomials in 1 + T Z[T] and their factorization over Z:
// squarefree split (Yun), Cantor-Zassenhaus mod a good odd prime, linear
// Hensel lifting to a Mignotte-bound modulus, then bounded subset
// recombination.  Inputs have constant term 1, so the reversal is monic and
// every irreducible factor lands back in 1 + T Z[T] with no unit juggling.

#include <gmpxx.h>
#include <complex>
#include <random>
#include <vector>

#include "mirrorcount/series.hpp"
#include "mirrorcount/util.hpp"

namespace mc {

struct IntPolynomial {
    std::vector<mpz_class> c; // constant first; trimmed

    static IntPolynomial from_coeffs(std::vector<mpz_class> v) {
        while (v.size() > 1 && v.back() == 0) v.pop_back();
        if (v.empty()) v.push_back(0);
        return {std::move(v)};
    }
    u32 degree() const { return (u32)c.size() - 1; }
    bool is_one() const { return c.size() == 1 && c[0] == 1; }

    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
        std::vector<mpz_class> r(a.c.size() + b.c.size() - 1, 0);
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return from_coeffs(std::move(r));
    }
    bool operator==(const IntPolynomial& o) const { return c == o.c; }
    bool operator<(const IntPolynomial& o) const {
        if (c.size() != o.c.size()) return c.size() < o.c.size();
        for (size_t i = c.size(); i-- > 0;)
            if (c[i] != o.c[i]) return c[i] < o.c[i];
        return false;
    }
};

namespace poly {

using ZP = std::vector<mpz_class>; // low-to-high, trimmed

inline ZP trim(ZP a) {
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
}
inline u32 deg(const ZP& a) { return (u32)a.size() - 1; }
inline bool is_zero(const ZP& a) { return a.size() == 1 && a[0] == 0; }

inline ZP mul(const ZP& a, const ZP& b) {
    ZP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return trim(std::move(r));
}

inline ZP derivative(const ZP& a) {
    if (a.size() == 1) return {0};
    ZP r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * (long)i;
    return trim(std::move(r));
}

// exact division over Z; returns false if not divisible
inline bool divexact(const ZP& a, const ZP& b, ZP& quot) {
    if (is_zero(b)) return false;
    if (is_zero(a)) { quot = {0}; return true; }
    if (deg(a) < deg(b)) return false;
    ZP r = a;
    const u32 db = deg(b);
    ZP q(deg(a) - db + 1, 0);
    for (i64 pos = deg(a); pos >= (i64)db; --pos) {
        if (r[pos] == 0) continue;
        mpz_class cq, rem;
        mpz_tdiv_qr(cq.get_mpz_t(), rem.get_mpz_t(), r[pos].get_mpz_t(), b[db].get_mpz_t());
        if (rem != 0) return false;
        size_t off = (size_t)pos - db;
        q[off] = cq;
        for (size_t j = 0; j <= db; ++j) r[off + j] -= cq * b[j];
    }
    if (!is_zero(trim(r))) return false;
    quot = trim(std::move(q));
    return true;
}

// monic gcd of integer polynomials via rational Euclid (valid here: inputs
// divide monic polynomials, so the monic gcd has integer coefficients)
inline ZP gcd_monic(const ZP& a0, const ZP& b0) {
    using QV = std::vector<mpq_class>;
    auto qtrim = [](QV& v) { while (v.size() > 1 && v.back() == 0) v.pop_back(); };
    auto qzero = [](const QV& v) { return v.size() == 1 && v[0] == 0; };
    auto qmod = [&](QV a, const QV& b) {
        while (!qzero(a) && a.size() >= b.size()) {
            mpq_class f = a.back() / b.back();
            size_t off = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j) a[off + j] -= f * b[j];
            a.pop_back();
            if (a.empty()) a.assign(1, mpq_class(0));
            qtrim(a);
        }
        return a;
    };
    QV A(a0.begin(), a0.end()), B(b0.begin(), b0.end());
    qtrim(A); qtrim(B);
    while (!qzero(B)) {
        QV R = qmod(std::move(A), B);
        A = std::move(B);
        B = std::move(R);
    }
    mpq_class lead = A.back();
    ZP g(A.size());
    for (size_t i = 0; i < A.size(); ++i) {
        mpq_class v = A[i] / lead;
        if (v.get_den() != 1) throw math_error("gcd_monic: non-integer gcd coefficient");
        g[i] = v.get_num();
    }
    return g;
}

// Yun squarefree decomposition of a monic polynomial: returns (part, mult)
inline std::vector<std::pair<ZP, u32>> squarefree_monic(const ZP& f) {
    std::vector<std::pair<ZP, u32>> out;
    if (deg(f) == 0) return out;
    ZP fp = derivative(f);
    ZP g = gcd_monic(f, fp);
    ZP c, d, t;
    if (!divexact(f, g, c)) throw math_error("yun: division failure");
    ZP w;
    if (!divexact(fp, g, w)) throw math_error("yun: division failure");
    // d = f'/g - c'
    ZP cp = derivative(c);
    d = w;
    d.resize(std::max(d.size(), cp.size()), 0);
    for (size_t i = 0; i < cp.size(); ++i) d[i] -= cp[i];
    d = trim(std::move(d));
    for (u32 i = 1; deg(c) > 0; ++i) {
        ZP a = gcd_monic(c, d);
        if (deg(a) > 0) out.push_back({a, i});
        ZP c2;
        if (!divexact(c, a, c2)) throw math_error("yun: division failure");
        ZP w2;
        if (!divexact(d, a, w2)) throw math_error("yun: division failure");
        ZP c2p = derivative(c2);
        d = w2;
        d.resize(std::max(d.size(), c2p.size()), 0);
        for (size_t i2 = 0; i2 < c2p.size(); ++i2) d[i2] -= c2p[i2];
        d = trim(std::move(d));
        c = c2;
    }
    return out;
}

// ---------- arithmetic mod small odd prime ----------
using PP = std::vector<u64>;

inline PP ptrim(PP a) {
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    return a;
}
inline u32 pdeg(const PP& a) { return (u32)a.size() - 1; }
inline bool pzero(const PP& a) { return a.size() == 1 && a[0] == 0; }

inline PP pmul(const PP& a, const PP& b, u64 p) {
    PP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return ptrim(std::move(r));
}

inline void pdivmod(const PP& a, const PP& b, PP& q, PP& r, u64 p) {
    r = a;
    if (pdeg(a) < pdeg(b)) { q = {0}; r = ptrim(std::move(r)); return; }
    q.assign(pdeg(a) - pdeg(b) + 1, 0);
    u64 il = inv_mod(b.back(), p);
    for (size_t pos = pdeg(a) + 1; pos-- > pdeg(b);) {
        if (pos >= r.size() || r[pos] == 0) continue;
        u64 f = r[pos] * il % p;
        size_t off = pos - pdeg(b);
        q[off] = f;
        for (size_t j = 0; j < b.size(); ++j) r[off + j] = (r[off + j] + p - f * b[j] % p) % p;
    }
    q = ptrim(std::move(q));
    r = ptrim(std::move(r));
}

inline PP pmod(const PP& a, const PP& b, u64 p) {
    PP q, r;
    pdivmod(a, b, q, r, p);
    return r;
}

inline PP pgcd(PP a, PP b, u64 p) {
    while (!pzero(b)) {
        PP r = pmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!pzero(a)) {
        u64 il = inv_mod(a.back(), p);
        for (auto& x : a) x = x * il % p;
    }
    return a;
}

inline PP ppow_mod(PP base, const mpz_class& e, const PP& f, u64 p) {
    PP r{1};
    base = pmod(base, f, p);
    for (size_t bit = mpz_sizeinbase(e.get_mpz_t(), 2); bit-- > 0;) {
        r = pmod(pmul(r, r, p), f, p);
        if (mpz_tstbit(e.get_mpz_t(), bit)) r = pmod(pmul(r, base, p), f, p);
    }
    return r;
}

// distinct-degree then equal-degree (Cantor-Zassenhaus, odd p, fixed seed)
inline void edf(const PP& f, u32 i, u64 p, std::mt19937_64& rng, std::vector<PP>& out) {
    if (pdeg(f) == i) { out.push_back(f); return; }
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), p, i);
    e = (e - 1) / 2;
    for (;;) {
        PP r(pdeg(f), 0); // random of degree < deg f
        for (auto& x : r) x = rng() % p;
        r = ptrim(std::move(r));
        if (pdeg(r) == 0) continue;
        PP h = ppow_mod(r, e, f, p);
        h[0] = (h[0] + p - 1) % p; // r^((p^i-1)/2) - 1
        h = ptrim(std::move(h));
        PP g = pgcd(h, f, p);
        if (pdeg(g) > 0 && pdeg(g) < pdeg(f)) {
            PP q, rem;
            pdivmod(f, g, q, rem, p);
            edf(g, i, p, rng, out);
            edf(q, i, p, rng, out);
            return;
        }
    }
}

inline std::vector<PP> factor_mod_p(PP f, u64 p) {
    std::vector<PP> out;
    std::mt19937_64 rng(0x5eedcafe); // fixed seed: deterministic factorizations
    u64 il = inv_mod(f.back(), p);
    for (auto& x : f) x = x * il % p;
    PP h{0, 1}; // x
    u32 i = 0;
    while (pdeg(f) >= 2 * (i + 1)) {
        ++i;
        h = ppow_mod(h, mpz_class((unsigned long)p), f, p);
        PP hx = h;
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = (hx[1] + p - 1) % p; // h - x
        hx = ptrim(std::move(hx));
        PP g = pgcd(hx, f, p);
        if (pdeg(g) > 0) {
            edf(g, i, p, rng, out);
            PP q, rem;
            pdivmod(f, g, q, rem, p);
            f = q;
            if (pdeg(f) == 0) break;
            h = pmod(h, f, p);
        }
    }
    if (pdeg(f) > 0) out.push_back(f);
    return out;
}

// extended euclid mod p: s*a + t*b = 1 (a, b coprime mod p)
inline void pbezout(const PP& a, const PP& b, PP& s, PP& t, u64 p) {
    PP r0 = a, r1 = b, s0{1}, s1{0}, t0{0}, t1{1};
    while (!pzero(r1)) {
        PP q, r2;
        pdivmod(r0, r1, q, r2, p);
        auto comb = [&](const PP& x0, const PP& x1) {
            PP qx = pmul(q, x1, p);
            PP r(std::max(x0.size(), qx.size()), 0);
            for (size_t i = 0; i < r.size(); ++i) {
                u64 v0 = i < x0.size() ? x0[i] : 0;
                u64 v1 = i < qx.size() ? qx[i] : 0;
                r[i] = (v0 + p - v1) % p;
            }
            return ptrim(std::move(r));
        };
        PP s2 = comb(s0, s1), t2 = comb(t0, t1);
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (pdeg(r0) != 0 || r0[0] == 0) throw math_error("bezout: inputs not coprime");
    u64 il = inv_mod(r0[0], p);
    s = std::move(s0);
    t = std::move(t0);
    for (auto& x : s) x = x * il % p;
    for (auto& x : t) x = x * il % p;
}

// ---------- linear Hensel lifting ----------

// lift monic factors of monic f from mod p to mod p^e (Zassenhaus linear)
inline std::vector<ZP> hensel_lift(const ZP& f, const std::vector<PP>& fac, u64 p, u32 e) {
    size_t r = fac.size();
    // partial-fraction inverses: S_i = (prod_{j != i} g_j)^{-1} mod (g_i, p)
    std::vector<PP> S(r);
    for (size_t i = 0; i < r; ++i) {
        PP c{1};
        for (size_t j = 0; j < r; ++j)
            if (j != i) c = pmod(pmul(c, fac[j], p), fac[i], p);
        PP s, t;
        pbezout(c, fac[i], s, t, p);
        S[i] = pmod(s, fac[i], p);
    }
    std::vector<ZP> g(r);
    for (size_t i = 0; i < r; ++i) {
        g[i].assign(fac[i].size(), 0);
        for (size_t j = 0; j < fac[i].size(); ++j) g[i][j] = (unsigned long)fac[i][j];
    }
    mpz_class M((unsigned long)p);
    for (u32 step = 1; step < e; ++step) {
        // E = (f - prod g) / p^step mod p
        ZP prod{1};
        for (auto& gi : g) prod = mul(prod, gi);
        ZP diff(std::max(f.size(), prod.size()), 0);
        for (size_t i = 0; i < diff.size(); ++i) {
            mpz_class fv = i < f.size() ? f[i] : mpz_class(0);
            mpz_class pv = i < prod.size() ? prod[i] : mpz_class(0);
            diff[i] = fv - pv;
        }
        PP epoly(diff.size(), 0);
        for (size_t i = 0; i < diff.size(); ++i) {
            mpz_class t = diff[i] / M;
            if (t * M != diff[i]) throw math_error("hensel: error term not divisible");
            mpz_class tm = t % (unsigned long)p;
            if (tm < 0) tm += (unsigned long)p;
            epoly[i] = tm.get_ui();
        }
        epoly = ptrim(std::move(epoly));
        for (size_t i = 0; i < r; ++i) {
            PP gi_p(fac[i]); // g_i mod p stays fixed through lifting
            PP delta = pmod(pmul(epoly, S[i], p), gi_p, p);
            for (size_t j = 0; j < delta.size(); ++j)
                if (delta[j]) g[i][j] += M * (unsigned long)delta[j];
        }
        M *= (unsigned long)p;
    }
    return g;
}

// balance coefficients into (-M/2, M/2]
inline void balance(ZP& a, const mpz_class& M) {
    for (auto& x : a) {
        x %= M;
        if (x < 0) x += M;
        if (2 * x > M) x -= M;
    }
}

// ---------- factorization driver ----------

inline u32& factor_degree_bound() {
    static u32 b = 64;
    return b;
}

// factor a monic squarefree integer polynomial into monic irreducibles;
// min_prime selects the first good prime at or above it (used to re-run the
// recombination argument at an independent prime)
inline std::vector<ZP> factor_monic_squarefree(const ZP& f, u64 min_prime = 0) {
    if (deg(f) == 0) return {};
    if (deg(f) == 1) return {f};
    static const u64 primes[] = {127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
                                 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
                                 233, 239, 241, 251, 257, 263, 269, 271, 277, 281};
    u64 p = 0;
    PP fp_;
    for (u64 cand : primes) {
        if (cand < min_prime) continue;
        PP fmod(f.size());
        for (size_t i = 0; i < f.size(); ++i) {
            mpz_class t = f[i] % (unsigned long)cand;
            if (t < 0) t += (unsigned long)cand;
            fmod[i] = t.get_ui();
        }
        fmod = ptrim(std::move(fmod));
        if (pdeg(fmod) != deg(f)) continue; // monic, cannot happen; guard anyway
        PP d(fmod.size() - 1);
        for (size_t i = 1; i < fmod.size(); ++i) d[i - 1] = fmod[i] * (i % cand) % cand;
        d = ptrim(std::move(d));
        if (pzero(d)) continue;
        if (pdeg(pgcd(fmod, d, cand)) == 0) { p = cand; fp_ = fmod; break; }
    }
    if (!p) throw math_error("no good prime found for factorization");

    auto fac = factor_mod_p(fp_, p);
    std::sort(fac.begin(), fac.end());
    if (fac.size() == 1) return {f};

    // Mignotte-style bound: |coeff of any monic factor| <= 2^deg * ||f||_2
    mpz_class norm2 = 0;
    for (const auto& c : f) norm2 += c * c;
    mpz_class B = sqrt(norm2) + 1;
    B <<= deg(f);
    mpz_class need = 2 * B + 1;
    u32 e = 1;
    mpz_class M((unsigned long)p);
    while (M < need) { M *= (unsigned long)p; ++e; }
    auto lifted = hensel_lift(f, fac, p, e);

    // subset recombination: if no subset of size <= |pool|/2 yields a true
    // factor, the remaining product is irreducible over Z
    std::vector<ZP> out;
    ZP rem = f;
    std::vector<ZP> pool = lifted;
    u32 card = 1;
    while (2 * card <= pool.size()) {
        bool found = false;
        std::vector<u32> pick(card);
        for (u32 i = 0; i < card; ++i) pick[i] = i;
        for (;;) {
            ZP cand{1};
            for (u32 i : pick) cand = mul(cand, pool[i]);
            for (auto& x : cand) x %= M;
            balance(cand, M);
            ZP quot;
            if (divexact(rem, cand, quot)) {
                out.push_back(cand);
                std::vector<ZP> np;
                for (u32 i = 0, k = 0; i < pool.size(); ++i) {
                    if (k < card && pick[k] == i) { ++k; continue; }
                    np.push_back(pool[i]);
                }
                pool = std::move(np);
                rem = quot;
                found = true;
                break;
            }
            i64 pos = (i64)card - 1;
            while (pos >= 0 && pick[pos] == pool.size() - card + pos) --pos;
            if (pos < 0) break;
            ++pick[pos];
            for (u32 i = (u32)pos + 1; i < card; ++i) pick[i] = pick[i - 1] + 1;
        }
        if (!found) ++card;
    }
    if (deg(rem) > 0) out.push_back(rem);
    std::sort(out.begin(), out.end(), [](const ZP& a, const ZP& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return out;
}

} // namespace poly

inline IntPolynomial reverse_poly(const IntPolynomial& a) {
    std::vector<mpz_class> r(a.c.rbegin(), a.c.rend());
    return IntPolynomial::from_coeffs(std::move(r));
}

// complete factorization of P in 1 + T Z[T] into irreducibles in 1 + T Z[T]
inline std::vector<std::pair<IntPolynomial, u32>> factor_over_Z(const IntPolynomial& P,
                                                                u64 min_prime = 0) {
    if (P.c.empty() || P.c[0] != 1)
        throw usage_error("factor_over_Z: constant term must be 1");
    if (P.degree() > poly::factor_degree_bound())
        throw budget_error("DegreeBound: degree " + std::to_string(P.degree()));
    std::vector<std::pair<IntPolynomial, u32>> out;
    if (P.degree() == 0) return out;
    // reverse: monic of the same degree (constant term of P is 1)
    poly::ZP R(P.c.rbegin(), P.c.rend());
    auto parts = poly::squarefree_monic(R);
    for (auto& [part, mult] : parts) {
        for (auto& g : poly::factor_monic_squarefree(part, min_prime)) {
            std::vector<mpz_class> rev(g.rbegin(), g.rend());
            out.push_back({IntPolynomial::from_coeffs(std::move(rev)), mult});
        }
    }
    std::sort(out.begin(), out.end());
    // reassembly must be exact
    IntPolynomial check = IntPolynomial::from_coeffs({mpz_class(1)});
    for (auto& [f, mult] : out)
        for (u32 j = 0; j < mult; ++j) check = check * f;
    if (!(check == P)) throw math_error("factorization reassembly failed");
    return out;
}

// true iff the factorization of P at `prime` admits no proper recombination,
// i.e. P is irreducible over Z (used as an independent double-check)
inline bool verify_irreducible(const IntPolynomial& P, u64 prime) {
    auto f = factor_over_Z(P, prime);
    return f.size() == 1 && f[0].second == 1;
}

// ---------- polynomial detection from a truncated series ----------

struct DetectionResult {
    enum class Status { polynomial, insufficient } status;
    IntPolynomial poly;
};

inline DetectionResult detect_polynomial(const TruncatedSeries& s, u32 max_deg) {
    if (s.order() <= max_deg) return {DetectionResult::Status::insufficient, {}};
    std::vector<mpz_class> c;
    for (u32 j = 0; j <= s.order(); ++j) {
        if (s.c[j].get_den() != 1)
            throw math_error("NonIntegerCoefficient at order " + std::to_string(j));
        if (j > max_deg && s.c[j] != 0)
            throw math_error("NonIntegerCoefficient: nonvanishing coefficient at order " +
                             std::to_string(j) + " beyond requested degree");
        if (j <= max_deg) c.push_back(s.c[j].get_num());
    }
    return {DetectionResult::Status::polynomial, IntPolynomial::from_coeffs(std::move(c))};
}

// ---------- weight purity ----------

struct RootVerdict {
    double abs_value;
    bool pure;
};

struct PurityReport {
    std::vector<RootVerdict> roots;
    bool all_pure = true;
};

// reciprocal roots of Q (constant term 1): roots of the monic reversal
inline PurityReport purity_check(const IntPolynomial& Q, double q_eff, int w, double tol) {
    if (Q.degree() < 1) throw usage_error("purity_check: degree >= 1 required");
    u32 d = Q.degree();
    std::vector<std::complex<double>> a(d + 1);
    for (u32 i = 0; i <= d; ++i) a[i] = {mpz_get_d(Q.c[d - i].get_mpz_t()), 0.0}; // reversed
    // normalize monic (leading coeff = Q.c[0] = 1 already)
    // Durand-Kerner
    std::vector<std::complex<double>> r(d);
    std::complex<double> seed(0.4, 0.9);
    r[0] = seed;
    for (u32 i = 1; i < d; ++i) r[i] = r[i - 1] * seed;
    auto eval = [&](std::complex<double> x) {
        std::complex<double> v = a[d];
        for (u32 i = d; i-- > 0;) v = v * x + a[i];
        return v;
    };
    bool converged = false;
    for (u32 it = 0; it < 1000 && !converged; ++it) {
        converged = true;
        for (u32 i = 0; i < d; ++i) {
            std::complex<double> den(1, 0);
            for (u32 j = 0; j < d; ++j)
                if (j != i) den *= (r[i] - r[j]);
            std::complex<double> delta = eval(r[i]) / den;
            r[i] -= delta;
            if (std::abs(delta) > 1e-12 * (1 + std::abs(r[i]))) converged = false;
        }
    }
    if (!converged) throw math_error("RootFindingFailure: Durand-Kerner did not converge");
    PurityReport rep;
    double target = std::pow(q_eff, w / 2.0);
    for (u32 i = 0; i < d; ++i) {
        RootVerdict v{std::abs(r[i]), false};
        v.pure = std::abs(v.abs_value - target) < tol * target;
        rep.all_pure &= v.pure;
        rep.roots.push_back(v);
    }
    return rep;
}

} // namespace mc
