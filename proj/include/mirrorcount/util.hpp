#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>
#include <functional>
#include <algorithm>

namespace mc {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Error taxonomy used across the library.  Exit-code mapping lives in the CLI.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct math_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> f;
    for (u64 d = 2; d * d <= n; ++d)
        while (n % d == 0) { f.push_back(d); n /= d; }
    if (n > 1) f.push_back(n);
    return f;
}

inline std::vector<u64> distinct_prime_factors(u64 n) {
    auto f = prime_factors(n);
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) { u64 t = a % b; a = b; b = t; }
    return a;
}

// a^e mod m, 64-bit safe for m < 2^32
inline u64 pow_mod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = (r * a) % m;
        a = (a * a) % m;
        e >>= 1;
    }
    return r;
}

inline u64 inv_mod(u64 a, u64 m) {
    // extended Euclid; requires gcd(a,m)=1
    i64 t = 0, nt = 1, r = (i64)m, nr = (i64)(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw math_error("inv_mod: not invertible");
    return (u64)(t < 0 ? t + (i64)m : t);
}

// p^m with overflow guard against a caller-supplied bound
inline u64 checked_pow(u64 p, u32 m, u64 bound) {
    u64 q = 1;
    for (u32 i = 0; i < m; ++i) {
        if (q > bound / p) throw budget_error("field cardinality exceeds enumeration bound");
        q *= p;
    }
    return q;
}

// Enumeration budget: operations refuse rather than silently run long.
inline u64& iteration_budget() {
    static u64 b = 1'000'000'000;
    return b;
}

inline void check_budget(double iterations, const char* what) {
    if (iterations > (double)iteration_budget())
        throw budget_error(std::string("BudgetExceeded: ") + what + " needs " +
                           std::to_string((u64)iterations) + " iterations, budget " +
                           std::to_string(iteration_budget()));
}

// Global worker-count knob (CLI --threads); 0 = hardware concurrency.
inline unsigned& thread_limit() {
    static unsigned n = 0;
    return n;
}

inline unsigned worker_count() {
    unsigned hw = thread_limit() ? thread_limit() : std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Parallel map over a fixed chunk grid.  The grid depends only on (n, chunk),
// never on the worker count, so per-chunk partials reduced in chunk order give
// bit-identical results on any machine.
inline void parallel_chunks(u64 n, u64 chunk,
                            const std::function<void(u64 ci, u64 lo, u64 hi)>& body) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    u64 nchunks = (n + chunk - 1) / chunk;
    unsigned hw = worker_count();
    if (hw == 1 || nchunks == 1) {
        for (u64 ci = 0; ci < nchunks; ++ci)
            body(ci, ci * chunk, std::min(n, (ci + 1) * chunk));
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<u64> next{0};
    for (unsigned w = 0; w < hw; ++w)
        pool.emplace_back([&] {
            for (;;) {
                u64 ci = next.fetch_add(1);
                if (ci >= nchunks) return;
                body(ci, ci * chunk, std::min(n, (ci + 1) * chunk));
            }
        });
    for (auto& t : pool) t.join();
}

inline void parallel_for(u64 n, const std::function<void(u64, u64)>& body) {
    u64 chunk = std::max<u64>(1024, n / 256);
    parallel_chunks(n, chunk, [&](u64, u64 lo, u64 hi) { body(lo, hi); });
}

} // namespace mc
