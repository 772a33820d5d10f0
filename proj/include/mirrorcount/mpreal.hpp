#pragma once

// Thin RAII wrapper over MPFR for the configurable-precision path.
// Each value carries its own precision; binary ops round to the wider operand.

#include <mpfr.h>
#include <gmpxx.h>
#include <string>
#include <utility>

#include "mirrorcount/util.hpp"
#include "mirrorcount/dd.hpp"

namespace mc {

class MpReal {
    mpfr_t v_;

  public:
    // Working precision for newly constructed values (set per computation).
    static mpfr_prec_t& default_prec() {
        static thread_local mpfr_prec_t p = 128;
        return p;
    }

    MpReal() { mpfr_init2(v_, default_prec()); mpfr_set_zero(v_, 1); }
    MpReal(double d) { mpfr_init2(v_, default_prec()); mpfr_set_d(v_, d, MPFR_RNDN); }
    MpReal(const MpReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    MpReal(MpReal&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    ~MpReal() { mpfr_clear(v_); }

    MpReal& operator=(const MpReal& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    MpReal& operator=(MpReal&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }

    static MpReal from_mpq(const mpq_class& q) {
        MpReal r;
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }

    double eps() const { return std::ldexp(1.0, -(int)mpfr_get_prec(v_) + 2); }
    static double eps_for(mpfr_prec_t p) { return std::ldexp(1.0, -(int)p + 2); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    friend MpReal operator+(const MpReal& a, const MpReal& b) {
        MpReal r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend MpReal operator-(const MpReal& a, const MpReal& b) {
        MpReal r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend MpReal operator-(const MpReal& a) {
        MpReal r; mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r;
    }
    friend MpReal operator*(const MpReal& a, const MpReal& b) {
        MpReal r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend MpReal operator/(const MpReal& a, const MpReal& b) {
        MpReal r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    MpReal& operator+=(const MpReal& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
    MpReal& operator-=(const MpReal& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
    MpReal& operator*=(const MpReal& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(v_); }

    // exact conversion to a rational (every float is dyadic)
    mpq_class to_mpq() const {
        if (is_zero()) return mpq_class(0);
        mpz_class num;
        mpfr_exp_t e = mpfr_get_z_2exp(num.get_mpz_t(), v_);
        mpq_class r(num);
        if (e >= 0) {
            mpz_class sh(1); sh <<= (unsigned long)e;
            r *= mpq_class(sh);
        } else {
            mpz_class sh(1); sh <<= (unsigned long)(-e);
            r /= mpq_class(sh);
        }
        return r;
    }

    // cos(2*pi*num/den), sin(2*pi*num/den) at precision `prec`
    static std::pair<MpReal, MpReal> cos_sin_2pi(long num, unsigned long den, mpfr_prec_t prec) {
        mpfr_prec_t save = default_prec();
        default_prec() = prec + 16;
        MpReal c, s, ang;
        mpfr_const_pi(ang.v_, MPFR_RNDN);
        mpfr_mul_si(ang.v_, ang.v_, 2 * num, MPFR_RNDN);
        mpfr_div_ui(ang.v_, ang.v_, den, MPFR_RNDN);
        mpfr_sin_cos(s.v_, c.v_, ang.v_, MPFR_RNDN);
        default_prec() = save;
        return {c, s};
    }
};

inline double to_double(const MpReal& x) { return x.to_double(); }
inline double to_double(const dd& x) { return x.to_double(); }
inline double to_double(double x) { return x; }

} // namespace mc
