#pragma once

// Double-double arithmetic (~106-bit mantissa) built on error-free transforms.
// Algorithms follow Joldes/Muller/Popescu, "Tight and rigorous error bounds
// for basic building blocks of double-word arithmetic":
//   add: AccurateDWPlusDW, relative error <= 3u^2
//   mul: DWTimesDW with FMA, relative error <= 5u^2
// We quote eps() = 2^-100 as a conservative per-operation relative bound.

#include <cmath>
#include <cstdint>
#include <string>

namespace mc {

struct dd {
    double hi = 0.0, lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    static constexpr double eps() { return 0x1p-100; }

    static dd two_sum(double a, double b) {
        double s = a + b;
        double bb = s - a;
        double err = (a - (s - bb)) + (b - bb);
        return {s, err};
    }
    static dd quick_two_sum(double a, double b) {
        double s = a + b;
        return {s, b - (s - a)};
    }
    static dd two_prod(double a, double b) {
        double p = a * b;
        return {p, std::fma(a, b, -p)};
    }

    friend dd operator+(const dd& x, const dd& y) {
        dd s = two_sum(x.hi, y.hi);
        dd t = two_sum(x.lo, y.lo);
        double c = s.lo + t.hi;
        dd v = quick_two_sum(s.hi, c);
        double w = t.lo + v.lo;
        return quick_two_sum(v.hi, w);
    }
    friend dd operator-(const dd& x, const dd& y) { return x + dd(-y.hi, -y.lo); }
    friend dd operator-(const dd& x) { return {-x.hi, -x.lo}; }

    friend dd operator*(const dd& x, const dd& y) {
        dd p = two_prod(x.hi, y.hi);
        double e = std::fma(x.hi, y.lo, std::fma(x.lo, y.hi, p.lo));
        return quick_two_sum(p.hi, e);
    }

    friend dd operator/(const dd& x, const dd& y) {
        double th = x.hi / y.hi;
        dd r = x - dd(th) * y;
        double tl = r.hi / y.hi;
        r = r - dd(tl) * y;
        double te = r.hi / y.hi;
        dd q = quick_two_sum(th, tl);
        return q + dd(te);
    }

    dd& operator+=(const dd& y) { *this = *this + y; return *this; }
    dd& operator-=(const dd& y) { *this = *this - y; return *this; }
    dd& operator*=(const dd& y) { *this = *this * y; return *this; }

    friend bool operator==(const dd& a, const dd& b) { return a.hi == b.hi && a.lo == b.lo; }
    friend bool operator<(const dd& a, const dd& b) {
        return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
    }

    double to_double() const { return hi + lo; }
    bool is_zero() const { return hi == 0.0 && lo == 0.0; }
};

inline dd abs(const dd& x) { return (x.hi < 0 || (x.hi == 0 && x.lo < 0)) ? -x : x; }

inline dd ldexp(const dd& x, int e) { return {std::ldexp(x.hi, e), std::ldexp(x.lo, e)}; }

inline dd sqrt(const dd& x) {
    if (x.is_zero()) return {};
    double s = std::sqrt(x.hi);
    // one Newton step in dd: s' = s + (x - s^2)/(2s)
    dd e = (x - dd::two_prod(s, s)) ;
    return dd(s) + dd(e.hi / (2 * s), e.lo / (2 * s));
}

} // namespace mc
