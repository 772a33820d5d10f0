#pragma once

// Certified discrete Fourier transforms of arbitrary length.
//
//   dft(x, dir) = X with X[k] = sum_j x[j] * exp(2*pi*i * dir * j*k / n)
//
// Strategy: recursive Cooley-Tukey over the small prime factors of n, with a
// Bluenstein (chirp-z) leaf for prime factors > 64.  Every value carries its
// absolute error bound (ComplexApprox), so the output certifies itself; the
// unit-root tables are re-anchored from MPFR every few thousand entries to
// keep sequential-power drift out of the budget.

#include <map>
#include <vector>

#include "mirrorcount/complex_approx.hpp"
#include "mirrorcount/util.hpp"

namespace mc {

template <class Real>
Real real_from_mpreal(const MpReal& x) {
    if constexpr (std::is_same_v<Real, dd>) {
        double h = x.to_double();
        MpReal rem = x - MpReal(h);
        return dd(h, rem.to_double());
    } else {
        return x;
    }
}

template <class Real>
struct RootTable {
    u64 n = 0;
    std::vector<ComplexApprox<Real>> w; // w[t] = exp(2*pi*i*t/n)

    ComplexApprox<Real> root(u64 t, int dir) const {
        t %= n;
        if (dir < 0 && t != 0) t = n - t;
        return w[t];
    }

    static RootTable build(u64 n) {
        RootTable rt;
        rt.n = n;
        rt.w.resize(n);
        const u64 anchor = 4096;
        mpfr_prec_t prec = std::is_same_v<Real, dd> ? 160 : MpReal::default_prec() + 16;
        double conv_err = std::is_same_v<Real, dd> ? 0x1p-104 : MpReal::eps_for(MpReal::default_prec());
        auto make_unit = [&](u64 t) {
            auto [c, s] = MpReal::cos_sin_2pi((long)t, (unsigned long)n, prec);
            ComplexApprox<Real> z(real_from_mpreal<Real>(c), real_from_mpreal<Real>(s), 0.0);
            z.err = 2.0 * conv_err + std::ldexp(2.0, -(int)prec);
            return z;
        };
        u64 nseg = (n + anchor - 1) / anchor;
        parallel_chunks(nseg, 1, [&](u64, u64 si, u64) {
            u64 lo = si * anchor, hi = std::min(n, lo + anchor);
            ComplexApprox<Real> base = make_unit(1);
            rt.w[lo] = make_unit(lo);
            for (u64 t = lo + 1; t < hi; ++t) rt.w[t] = rt.w[t - 1] * base;
        });
        return rt;
    }
};

// in-place radix-2 FFT; tw must have size == a.size(), a power of two
template <class Real>
void fft_pow2(std::vector<ComplexApprox<Real>>& a, const RootTable<Real>& tw, int dir) {
    const u64 m = a.size();
    for (u64 i = 1, j = 0; i < m; ++i) { // bit reversal
        u64 bit = m >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (u64 len = 2; len <= m; len <<= 1) {
        u64 step = m / len, half = len / 2;
        auto stage = [&](u64 lo, u64 hi) {
            for (u64 b = lo; b < hi; ++b) {
                u64 i = (b / half) * len, j = b % half;
                auto wv = tw.root(j * step, dir);
                auto u = a[i + j];
                auto v = a[i + j + half] * wv;
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
        };
        if (m >= (1u << 17) && worker_count() > 1)
            parallel_for(m / 2, stage);
        else
            stage(0, m / 2);
    }
}

template <class Real>
struct BluesteinPlan {
    u64 n = 0, m = 0;
    int dir = 1;
    RootTable<Real> chirp; // 2n roots
    RootTable<Real> tw;    // m roots (pow2)
    std::vector<ComplexApprox<Real>> bfft;

    static BluesteinPlan build(u64 n, int dir) {
        BluesteinPlan pl;
        pl.n = n;
        pl.dir = dir;
        pl.m = 1;
        while (pl.m < 2 * n - 1) pl.m <<= 1;
        pl.chirp = RootTable<Real>::build(2 * n);
        pl.tw = RootTable<Real>::build(pl.m);
        std::vector<ComplexApprox<Real>> b(pl.m);
        for (u64 t = 0; t < n; ++t) {
            u64 t2 = (u64)(((unsigned __int128)t * t) % (2 * n));
            auto z = pl.chirp.root(t2, -dir);
            b[t] = z;
            if (t != 0) b[pl.m - t] = z;
        }
        fft_pow2(b, pl.tw, +1);
        pl.bfft = std::move(b);
        return pl;
    }

    std::vector<ComplexApprox<Real>> run(const std::vector<ComplexApprox<Real>>& x) const {
        std::vector<ComplexApprox<Real>> a(m);
        for (u64 j = 0; j < n; ++j) {
            u64 j2 = (u64)(((unsigned __int128)j * j) % (2 * n));
            a[j] = x[j] * chirp.root(j2, dir);
        }
        fft_pow2(a, tw, +1);
        for (u64 t = 0; t < m; ++t) a[t] = a[t] * bfft[t];
        fft_pow2(a, tw, -1);
        int shift = 0;
        for (u64 t = m; t > 1; t >>= 1) ++shift;
        std::vector<ComplexApprox<Real>> out(n);
        for (u64 k = 0; k < n; ++k) {
            u64 k2 = (u64)(((unsigned __int128)k * k) % (2 * n));
            auto c = a[k];
            if constexpr (std::is_same_v<Real, dd>) {
                c.re = ldexp(c.re, -shift);
                c.im = ldexp(c.im, -shift);
            } else {
                MpReal s = MpReal(std::ldexp(1.0, -shift));
                c.re = c.re * s;
                c.im = c.im * s;
            }
            c.err = std::ldexp(c.err, -shift);
            out[k] = c * chirp.root(k2, dir);
        }
        return out;
    }
};

template <class Real>
struct DftContext {
    u64 n0 = 0;
    int dir = -1;
    RootTable<Real> roots; // size n0
    std::map<u64, BluesteinPlan<Real>> plans;

    static DftContext build(u64 n0, int dir) {
        DftContext c;
        c.n0 = n0;
        c.dir = dir;
        c.roots = RootTable<Real>::build(n0);
        // The recursion strips prime factors <= 64 one at a time, so the only
        // Bluestein leaf is the "rough part" of n0 (all small factors removed).
        u64 rough = n0;
        for (u64 d = 2; d <= 64; ++d)
            while (rough % d == 0) rough /= d;
        if (rough > 1) c.plans.emplace(rough, BluesteinPlan<Real>::build(rough, dir));
        return c;
    }
};

template <class Real>
std::vector<ComplexApprox<Real>> dft_rec(std::vector<ComplexApprox<Real>>&& x,
                                         const DftContext<Real>& ctx, int depth) {
    const u64 n = x.size();
    const u64 stride = ctx.n0 / n;
    if (n == 1) return std::move(x);
    if (n <= 64) {
        std::vector<ComplexApprox<Real>> out(n);
        for (u64 k = 0; k < n; ++k) {
            ComplexApprox<Real> acc = x[0];
            for (u64 j = 1; j < n; ++j)
                acc += x[j] * ctx.roots.root((j * k % n) * stride, ctx.dir);
            out[k] = acc;
        }
        return out;
    }
    u64 r = 0;
    for (u64 d = 2; d <= 64; ++d)
        if (n % d == 0) { r = d; break; }
    if (r == 0) {
        // no small factor left: Bluestein leaf on the rough part
        auto it = ctx.plans.find(n);
        if (it == ctx.plans.end()) throw math_error("missing Bluestein plan");
        return it->second.run(x);
    }
    const u64 sub = n / r;
    std::vector<std::vector<ComplexApprox<Real>>> ys(r);
    auto run_branch = [&](u64 s) {
        std::vector<ComplexApprox<Real>> xs(sub);
        for (u64 j = 0; j < sub; ++j) xs[j] = x[j * r + s];
        ys[s] = dft_rec(std::move(xs), ctx, depth + 1);
    };
    if (depth == 0 && sub >= (1u << 14) && worker_count() > 1) {
        parallel_chunks(r, 1, [&](u64, u64 s, u64) { run_branch(s); });
    } else {
        for (u64 s = 0; s < r; ++s) run_branch(s);
    }
    x.clear();
    std::vector<ComplexApprox<Real>> out(n);
    auto combine = [&](u64 lo, u64 hi) {
        for (u64 idx = lo; idx < hi; ++idx) {
            u64 k = idx % sub;
            ComplexApprox<Real> acc = ys[0][k];
            for (u64 s = 1; s < r; ++s) {
                u64 t = (u64)(((unsigned __int128)s * idx) % n);
                acc += ys[s][k] * ctx.roots.root(t * stride, ctx.dir);
            }
            out[idx] = acc;
        }
    };
    if (depth == 0 && n >= (1u << 16))
        parallel_for(n, combine);
    else
        combine(0, n);
    return out;
}

// public entry: arbitrary-length certified DFT
template <class Real>
std::vector<ComplexApprox<Real>> dft(std::vector<ComplexApprox<Real>> x, const DftContext<Real>& ctx) {
    if (x.size() != ctx.n0) throw math_error("dft: length mismatch");
    return dft_rec(std::move(x), ctx, 0);
}

} // namespace mc
