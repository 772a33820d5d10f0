#pragma once

// Certified complex arithmetic: a value plus an absolute error bound.
// Error propagation is conservative:
//   err(a+b) <= err(a) + err(b) + rounding
//   err(a*b) <= |a| err(b) + |b| err(a) + err(a) err(b) + rounding
// with |.| bounded by |re| + |im| (cheap and safe).

#include <cmath>
#include <gmpxx.h>

#include "mirrorcount/dd.hpp"
#include "mirrorcount/mpreal.hpp"

namespace mc {

template <class Real>
struct ComplexApprox {
    Real re{}, im{};
    double err = 0.0;

    ComplexApprox() = default;
    ComplexApprox(Real r, Real i, double e = 0.0) : re(std::move(r)), im(std::move(i)), err(e) {}

    static double ulp_of(const Real& x) {
        if constexpr (std::is_same_v<Real, dd>)
            return std::abs(x.to_double()) * dd::eps();
        else
            return std::abs(x.to_double()) * x.eps();
    }

    double mag_bound() const {
        return std::abs(to_double(re)) + std::abs(to_double(im)) + err;
    }

    friend ComplexApprox operator+(const ComplexApprox& a, const ComplexApprox& b) {
        ComplexApprox r(a.re + b.re, a.im + b.im, 0.0);
        r.err = a.err + b.err + ulp_of(r.re) + ulp_of(r.im);
        return r;
    }
    friend ComplexApprox operator-(const ComplexApprox& a, const ComplexApprox& b) {
        ComplexApprox r(a.re - b.re, a.im - b.im, 0.0);
        r.err = a.err + b.err + ulp_of(r.re) + ulp_of(r.im);
        return r;
    }
    friend ComplexApprox operator*(const ComplexApprox& a, const ComplexApprox& b) {
        ComplexApprox r(a.re * b.re - a.im * b.im,
                        a.re * b.im + a.im * b.re, 0.0);
        double ma = std::abs(to_double(a.re)) + std::abs(to_double(a.im));
        double mb = std::abs(to_double(b.re)) + std::abs(to_double(b.im));
        r.err = ma * b.err + mb * a.err + a.err * b.err
              + 4.0 * (ulp_of(r.re) + ulp_of(r.im)) + 2.0 * ma * mb * err_unit();
        return r;
    }
    ComplexApprox& operator+=(const ComplexApprox& b) { *this = *this + b; return *this; }
    ComplexApprox& operator*=(const ComplexApprox& b) { *this = *this * b; return *this; }

    ComplexApprox conj() const { return {re, -im, err}; }

    static double err_unit() {
        if constexpr (std::is_same_v<Real, dd>)
            return dd::eps();
        else
            return MpReal::eps_for(MpReal::default_prec());
    }

    // exact rational scaling (rounding tracked)
    ComplexApprox scaled(const mpq_class& c) const {
        Real rc = real_from_mpq(c);
        double mc_ = std::abs(mpq_get_d(c.get_mpq_t()));
        ComplexApprox r(re * rc, im * rc, 0.0);
        r.err = mc_ * err + 2.0 * (ulp_of(r.re) + ulp_of(r.im))
              + (std::abs(to_double(re)) + std::abs(to_double(im))) * mc_ * err_unit();
        return r;
    }

    static Real real_from_mpq(const mpq_class& c) {
        if constexpr (std::is_same_v<Real, dd>) {
            // two-step conversion keeps ~106 bits of the rational
            double h = mpq_get_d(c.get_mpq_t());
            mpq_class rem = c - mpq_class(h);
            return dd(h, mpq_get_d(rem.get_mpq_t()));
        } else {
            return MpReal::from_mpq(c);
        }
    }
};

using CDD = ComplexApprox<dd>;
using CMP = ComplexApprox<MpReal>;

} // namespace mc
