#pragma once

// Truncated power series over exact rationals.  Zeta assembly keeps
// everything in mpq; the quotient's integrality is the property under test,
// so nothing here may round.

#include <gmpxx.h>
#include <vector>

#include "mirrorcount/util.hpp"

namespace mc {

struct TruncatedSeries {
    std::vector<mpq_class> c; // coefficients 0..K

    u32 order() const { return (u32)c.size() - 1; }

    static TruncatedSeries one(u32 K) {
        TruncatedSeries s;
        s.c.assign(K + 1, 0);
        s.c[0] = 1;
        return s;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        u32 K = std::min(a.order(), b.order());
        TruncatedSeries r;
        r.c.assign(K + 1, 0);
        for (u32 i = 0; i <= K; ++i) {
            if (a.c[i] == 0) continue;
            for (u32 j = 0; i + j <= K; ++j)
                if (b.c[j] != 0) r.c[i + j] += a.c[i] * b.c[j];
        }
        return r;
    }

    TruncatedSeries inverse() const {
        if (c[0] == 0) throw math_error("series inverse of zero constant term");
        u32 K = order();
        TruncatedSeries r;
        r.c.assign(K + 1, 0);
        r.c[0] = 1 / c[0];
        for (u32 k = 1; k <= K; ++k) {
            mpq_class acc = 0;
            for (u32 j = 1; j <= k; ++j) acc += c[j] * r.c[k - j];
            r.c[k] = -acc / c[0];
        }
        return r;
    }

    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a * b.inverse();
    }

    TruncatedSeries pow(u64 e) const {
        TruncatedSeries r = one(order());
        TruncatedSeries base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    // substitute T -> T^k, truncated to order K
    TruncatedSeries substitute_power(u32 k, u32 K) const {
        TruncatedSeries r;
        r.c.assign(K + 1, 0);
        for (u32 j = 0; j <= order() && (u64)j * k <= K; ++j) r.c[j * k] = c[j];
        return r;
    }

    bool operator==(const TruncatedSeries& o) const { return c == o.c; }
};

// Z(T) = exp(sum_k N_k T^k / k) to order K = counts.size(), via the
// logarithmic-derivative recurrence k c_k = sum_{j<=k} N_j c_{k-j}.
inline TruncatedSeries zeta_from_counts(const std::vector<mpz_class>& counts,
                                        bool assert_integral_nonneg = false) {
    u32 K = (u32)counts.size();
    if (K < 1) throw usage_error("zeta_from_counts: need at least one count");
    for (const auto& N : counts)
        if (N < 0) throw usage_error("zeta_from_counts: negative count");
    TruncatedSeries z;
    z.c.assign(K + 1, 0);
    z.c[0] = 1;
    for (u32 k = 1; k <= K; ++k) {
        mpq_class acc = 0;
        for (u32 j = 1; j <= k; ++j) acc += mpq_class(counts[j - 1]) * z.c[k - j];
        z.c[k] = acc / (long)k;
    }
    if (assert_integral_nonneg) {
        for (u32 k = 0; k <= K; ++k)
            if (z.c[k].get_den() != 1 || z.c[k] < 0)
                throw math_error("zeta coefficients of a variety must be nonnegative integers");
    }
    return z;
}

// inverse of the above: recover N_k from the series
inline std::vector<mpz_class> counts_from_zeta(const TruncatedSeries& z) {
    u32 K = z.order();
    std::vector<mpq_class> N(K + 1);
    std::vector<mpz_class> out;
    for (u32 k = 1; k <= K; ++k) {
        mpq_class acc = mpq_class((long)k) * z.c[k];
        for (u32 j = 1; j < k; ++j) acc -= N[j] * z.c[k - j];
        N[k] = acc;
        if (N[k].get_den() != 1) throw math_error("counts_from_zeta: non-integer count");
        out.push_back(N[k].get_num());
    }
    return out;
}

// (Z_X / Z_Y)^{(-1)^n}
inline TruncatedSeries signed_quotient(const TruncatedSeries& zx, const TruncatedSeries& zy, u32 n) {
    if (zx.order() != zy.order()) throw usage_error("OrderMismatch: signed_quotient");
    return (n % 2 == 0) ? zx / zy : zy / zx;
}

// checks q_base(T)^k == q_ext(T^k) through the common usable order
inline bool kth_root_check(const TruncatedSeries& q_base, const TruncatedSeries& q_ext, u32 k) {
    if (k < 1) throw usage_error("OrderMismatch: k >= 1 required");
    u64 common = std::min<u64>(q_base.order(), (u64)q_ext.order() * k);
    if (common < k) throw usage_error("OrderMismatch: truncation orders too small");
    TruncatedSeries lhs = q_base.pow(k);
    TruncatedSeries rhs = q_ext.substitute_power(k, (u32)common);
    for (u32 j = 0; j <= (u32)common; ++j)
        if (lhs.c[j] != rhs.c[j]) return false;
    return true;
}

} // namespace mc
