#pragma once

// Table-backed arithmetic for F_{p^m} at enumeration scale.
//
// Elements are codes in [0, q): the base-p packing of the coefficient vector
// in the power basis of the modulus (c0 least significant).  Construction is
// deterministic: the modulus is the irreducible monic of degree m with the
// smallest code, the generator is the primitive element with the smallest
// code, so cached results reproduce across runs and machines.

#include <cassert>
#include <memory>
#include <numeric>
#include <vector>

#include "mirrorcount/util.hpp"

namespace mc {

using fe = u32; // field element code

inline u64& field_q_bound() {
    static u64 b = 20'000'000;
    return b;
}

class Field {
  public:
    u64 p, q;
    u32 m;
    std::vector<u32> modulus;  // monic, degree m, modulus[m] = 1 (m >= 2 only)
    fe generator = 0;

    static std::shared_ptr<const Field> make(u64 p, u32 m);

    // --- arithmetic ---
    fe add(fe a, fe b) const {
        if (m == 1) { u64 s = (u64)a + b; return (fe)(s >= p ? s - p : s); }
        fe r = 0;
        for (u32 i = 0; i < m; ++i) {
            u64 pi = ppow_[i];
            u64 ca = (a / pi) % p, cb = (b / pi) % p;
            u64 s = ca + cb;
            if (s >= p) s -= p;
            r += (fe)(s * pi);
        }
        return r;
    }
    fe neg(fe a) const {
        if (m == 1) return a ? (fe)(p - a) : 0;
        fe r = 0;
        for (u32 i = 0; i < m; ++i) {
            u64 pi = ppow_[i];
            u64 c = (a / pi) % p;
            r += (fe)(((p - c) % p) * pi);
        }
        return r;
    }
    fe sub(fe a, fe b) const { return add(a, neg(b)); }
    fe mul(fe a, fe b) const {
        if (a == 0 || b == 0) return 0;
        u64 t = (u64)log_[a] + log_[b];
        if (t >= q - 1) t -= q - 1;
        return exp_[t];
    }
    fe inv(fe a) const {
        if (a == 0) throw math_error("DivisionByZero: inverse of 0");
        u64 t = log_[a];
        return exp_[t == 0 ? 0 : q - 1 - t];
    }
    fe pow(fe a, u64 e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        return exp_[(u64)(((unsigned __int128)log_[a] * e) % (q - 1))];
    }
    u64 dlog(fe x) const {
        if (x == 0) throw math_error("LogOfZero");
        return log_[x];
    }
    fe exp_of(u64 t) const { return exp_[t % (q - 1)]; }
    fe from_int(u64 v) const { // image of the integer v (prime-subfield element)
        return (fe)(v % p);
    }

    // trace to F_p, returned as a residue in [0, p)
    u32 trace(fe x) const {
        if (m == 1) return (u32)x;
        u64 t = 0;
        fe xx = x;
        for (u32 i = 0; i < m; ++i) {
            u64 c = (xx / ppow_[i]) % p;
            t += c * tr_basis_[i];
        }
        return (u32)(t % p);
    }

    std::vector<u32> coeffs(fe a) const {
        std::vector<u32> c(m);
        for (u32 i = 0; i < m; ++i) c[i] = (u32)((a / ppow_[i]) % p);
        return c;
    }
    fe pack(const std::vector<u32>& c) const {
        fe r = 0;
        for (u32 i = 0; i < m && i < c.size(); ++i) r += (fe)((c[i] % p) * ppow_[i]);
        return r;
    }

    u64 element_order(fe a) const {
        if (a == 0) throw math_error("order of 0");
        u64 t = log_[a];
        return (q - 1) / gcd_u64(t, q - 1);
    }

    // next primitive element after `after` in code order (for convention tests)
    fe next_generator(fe after) const {
        for (fe c = after + 1; c < q; ++c)
            if (c != 0 && element_order(c) == q - 1) return c;
        throw math_error("no further generator");
    }

    // direct polynomial-basis multiply, independent of the log tables
    fe mul_poly(fe a, fe b) const {
        if (m == 1) return (fe)(((u64)a * b) % p);
        std::vector<u32> r = polmulmod(coeffs(a), coeffs(b));
        return pack(r);
    }

    // Variant of an existing field re-based on another primitive element
    // (used by the convention-invariance tests).
    static std::shared_ptr<const Field> make_variant(const Field& base, fe gen) {
        if (base.element_order(gen) != base.q - 1)
            throw usage_error("make_variant: element is not primitive");
        auto F = std::make_shared<Field>(base);
        Field* f = F.get();
        f->generator = gen;
        for (u64 t = 1; t < f->q - 1; ++t)
            f->exp_[t] = base.mul(f->exp_[t - 1], gen);
        f->exp_[0] = 1;
        for (u64 t = 0; t < f->q - 1; ++t) f->log_[f->exp_[t]] = (u32)t;
        return F;
    }

  private:
    std::vector<fe> exp_;   // exp_[t] = generator^t, t in [0, q-1)
    std::vector<u32> log_;  // log_[code] = t for code != 0
    std::vector<u64> ppow_; // p^i
    std::vector<u32> tr_basis_; // Tr(alpha^i) in F_p

    std::vector<u32> polmulmod(const std::vector<u32>& a, const std::vector<u32>& b) const {
        std::vector<u64> res(2 * m - 1, 0);
        for (u32 i = 0; i < m; ++i) {
            if (!a[i]) continue;
            for (u32 j = 0; j < m; ++j)
                if (b[j]) res[i + j] = (res[i + j] + (u64)a[i] * b[j]) % p;
        }
        for (u32 i = 2 * m - 2; i >= m; --i) {
            if (res[i]) {
                u64 c = res[i];
                for (u32 j = 0; j <= m; ++j) {
                    u64 t = (u64)modulus[j] * c % p;
                    u64& slot = res[i - m + j];
                    slot = (slot + p - t) % p;
                }
            }
        }
        return std::vector<u32>(res.begin(), res.begin() + m);
    }

    void build_tables();
};

using FieldPtr = std::shared_ptr<const Field>;

// -------- polynomial helpers over F_p (for modulus search) --------
namespace detail {

using Poly = std::vector<u64>; // coefficients, low to high

inline Poly pmod(Poly a, const Poly& f, u64 p) {
    u32 df = (u32)f.size() - 1;
    while (a.size() > df) {
        u64 c = a.back();
        if (c) {
            u32 off = (u32)a.size() - 1 - df;
            for (u32 j = 0; j <= df; ++j)
                a[off + j] = (a[off + j] + p - (c * f[j]) % p) % p;
        }
        a.pop_back();
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline Poly pmulmod(const Poly& a, const Poly& b, const Poly& f, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j)
                if (b[j]) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    return pmod(std::move(r), f, p);
}

inline Poly ppowmod(Poly base, u64 e, const Poly& f, u64 p) {
    Poly r{1};
    while (e) {
        if (e & 1) r = pmulmod(r, base, f, p);
        base = pmulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

inline Poly pgcd(Poly a, Poly b, u64 p) {
    while (!b.empty()) {
        u64 lc = b.back();
        if (lc != 1) {
            u64 il = inv_mod(lc, p);
            for (auto& c : b) c = c * il % p;
        }
        a = pmod(std::move(a), b, p);
        std::swap(a, b);
    }
    if (!a.empty() && a.back() != 1) {
        u64 il = inv_mod(a.back(), p);
        for (auto& c : a) c = c * il % p;
    }
    return a;
}

// Rabin irreducibility test for a monic polynomial of degree m over F_p
inline bool irreducible(const Poly& f, u64 p) {
    u32 m = (u32)f.size() - 1;
    if (m == 0) return false;
    if (m == 1) return true;
    // iterated Frobenius: x^(p^k) mod f
    std::vector<Poly> frob(m + 1);
    frob[0] = pmod(Poly{0, 1}, f, p);
    for (u32 k = 1; k <= m; ++k) frob[k] = ppowmod(frob[k - 1], p, f, p);
    if (frob[m] != frob[0]) return false;
    for (u64 r : distinct_prime_factors(m)) {
        Poly h = frob[m / r];
        if (h.size() < 2) h.resize(2, 0);
        h[1] = (h[1] + p - 1) % p; // h - x
        while (!h.empty() && h.back() == 0) h.pop_back();
        if (h.empty()) return false;
        if (pgcd(f, h, p).size() != 1) return false;
    }
    return true;
}

} // namespace detail

inline void Field::build_tables() {
    ppow_.resize(m + 1);
    ppow_[0] = 1;
    for (u32 i = 1; i <= m; ++i) ppow_[i] = ppow_[i - 1] * p;

    // generator search: smallest code of multiplicative order q-1
    auto fac = distinct_prime_factors(q - 1);
    auto pow_code = [&](fe a, u64 e) {
        fe r = 1, base = a;
        while (e) {
            if (e & 1) r = (m == 1) ? (fe)((u64)r * base % p) : mul_poly(r, base);
            base = (m == 1) ? (fe)((u64)base * base % p) : mul_poly(base, base);
            e >>= 1;
        }
        return r;
    };
    auto primitive = [&](fe g) {
        for (u64 r : fac)
            if (pow_code(g, (q - 1) / r) == 1) return false;
        return true;
    };
    generator = 0;
    for (fe c = 1; c < q; ++c)
        if (primitive(c)) { generator = c; break; }
    if (!generator) throw math_error("no generator found");

    exp_.assign(q - 1, 1);
    for (u64 t = 1; t < q - 1; ++t)
        exp_[t] = (m == 1) ? (fe)((u64)exp_[t - 1] * generator % p)
                           : mul_poly(exp_[t - 1], generator);
    log_.assign(q, 0);
    for (u64 t = 0; t < q - 1; ++t) log_[exp_[t]] = (u32)t;

    if (m >= 2) {
        // Tr(alpha^i) for the power-basis elements alpha^i (alpha has code p);
        // trace() is then F_p-linear in the coefficients.
        tr_basis_.assign(m, 0);
        for (u32 i = 0; i < m; ++i) {
            fe ai = pow_code((fe)p, i);
            fe acc = 0, x = ai;
            for (u32 j = 0; j < m; ++j) {
                acc = add(acc, x);
                x = (x == 0) ? 0 : exp_[(u64)log_[x] * p % (q - 1)]; // Frobenius
            }
            if (acc >= p) throw math_error("trace not in prime field");
            tr_basis_[i] = (u32)acc;
        }
    }
}

inline std::shared_ptr<const Field> Field::make(u64 p, u32 m) {
    if (!is_prime_u64(p)) throw usage_error("NotPrime: p = " + std::to_string(p));
    if (m < 1) throw usage_error("extension degree must be >= 1");
    u64 q = checked_pow(p, m, field_q_bound());

    auto F = std::make_shared<Field>();
    Field* f = F.get();
    f->p = p; f->m = m; f->q = q;
    if (m >= 2) {
        // smallest monic irreducible by code of the non-leading coefficients
        bool found = false;
        for (u64 code = 0; code < q; ++code) {
            detail::Poly cand(m + 1, 0);
            u64 t = code;
            for (u32 i = 0; i < m; ++i) { cand[i] = t % p; t /= p; }
            cand[m] = 1;
            if (detail::irreducible(cand, p)) {
                f->modulus.assign(cand.begin(), cand.end());
                found = true;
                break;
            }
        }
        if (!found) throw math_error("no irreducible modulus found");
    }
    f->build_tables();
    return F;
}

// -------- embeddings --------

// Homomorphism F_{p^m} -> F_{p^(m*k)} determined by the smallest (code order)
// root of the source modulus in the target field.
struct Embedding {
    FieldPtr source, target;
    fe root = 0;                 // image of alpha (source power-basis element)
    std::vector<fe> root_pows;   // root^i for i < source->m
    fe image_of_source_generator = 0;

    static Embedding make(FieldPtr src, FieldPtr tgt, u32 skip_roots = 0) {
        if (src->p != tgt->p || tgt->m % src->m != 0)
            throw usage_error("IncompatibleDegrees: no embedding F_{p^" +
                              std::to_string(src->m) + "} -> F_{p^" + std::to_string(tgt->m) + "}");
        Embedding E;
        E.source = src; E.target = tgt;
        if (src->m == 1) {
            E.root = 0;
            E.root_pows = {1};
        } else {
            u32 found = 0;
            for (u64 c = 0; c < tgt->q; ++c) {
                // evaluate source modulus at c in the target field
                fe v = 0, xp = 1;
                for (u32 j = 0; j <= src->m; ++j) {
                    v = tgt->add(v, tgt->mul((fe)(src->modulus[j] % src->p), xp));
                    xp = tgt->mul(xp, (fe)c);
                }
                if (v == 0) {
                    if (found == skip_roots) { E.root = (fe)c; break; }
                    ++found;
                }
            }
            if (E.root == 0 && src->m >= 2) throw math_error("no root of source modulus in target");
            E.root_pows.resize(src->m);
            E.root_pows[0] = 1;
            for (u32 i = 1; i < src->m; ++i) E.root_pows[i] = tgt->mul(E.root_pows[i - 1], E.root);
        }
        E.image_of_source_generator = E.apply(src->generator);
        return E;
    }

    fe apply(fe x) const {
        if (source->m == 1) return (fe)(x % target->p);
        fe r = 0;
        auto c = source->coeffs(x);
        for (u32 i = 0; i < source->m; ++i)
            r = target->add(r, target->mul((fe)c[i], root_pows[i]));
        return r;
    }
};

} // namespace mc
