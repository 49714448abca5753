#pragma once
// Real and complex interval ("ball") arithmetic on top of MPFR.
// Midpoints are rounded to nearest, radii are accumulated with upward rounding.
#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <string>
#include <utility>

#include "errors.hpp"

namespace hauptwerk {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Mpfr(const Mpfr& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Mpfr(Mpfr&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string str(int digits = 30) const {
        char* buf = nullptr;
        std::string fmt = "%." + std::to_string(digits) + "Rg";
        mpfr_asprintf(&buf, fmt.c_str(), v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

private:
    mpfr_t v_;
};

constexpr mpfr_prec_t kRadPrec = 64;

class RealBall {
public:
    explicit RealBall(mpfr_prec_t prec = 128) : mid_(prec), rad_(kRadPrec) {}

    static RealBall exact(long v, mpfr_prec_t prec) {
        RealBall b(prec);
        int t = mpfr_set_si(b.mid_.get(), v, MPFR_RNDN);
        b.add_ulp(t);
        return b;
    }
    static RealBall from_mpz(const mpz_class& v, mpfr_prec_t prec) {
        RealBall b(prec);
        int t = mpfr_set_z(b.mid_.get(), v.get_mpz_t(), MPFR_RNDN);
        b.add_ulp(t);
        return b;
    }
    static RealBall from_mpq(const mpq_class& v, mpfr_prec_t prec) {
        RealBall b(prec);
        int t = mpfr_set_q(b.mid_.get(), v.get_mpq_t(), MPFR_RNDN);
        b.add_ulp(t);
        return b;
    }
    static RealBall pi(mpfr_prec_t prec) {
        RealBall b(prec);
        int t = mpfr_const_pi(b.mid_.get(), MPFR_RNDN);
        b.add_ulp(t);
        return b;
    }
    static RealBall log_int(long v, mpfr_prec_t prec) {
        return from_mpz(mpz_class(v), prec).log();
    }

    mpfr_prec_t prec() const { return mid_.prec(); }
    const Mpfr& mid() const { return mid_; }
    const Mpfr& rad() const { return rad_; }
    double mid_double() const { return mid_.to_double(); }
    double rad_double() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

    // add a bound on an extra error to the radius
    void inflate(const Mpfr& e) { mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU); }
    void inflate_mpq(const mpq_class& e) {
        Mpfr t(kRadPrec);
        mpfr_set_q(t.get(), e.get_mpq_t(), MPFR_RNDU);
        mpfr_abs(t.get(), t.get(), MPFR_RNDU);
        inflate(t);
    }

    RealBall operator-() const {
        RealBall r(*this);
        mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
        return r;
    }
    friend RealBall operator+(const RealBall& a, const RealBall& b) {
        RealBall r(std::max(a.prec(), b.prec()));
        int t = mpfr_add(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
        r.add_ulp(t);
        return r;
    }
    friend RealBall operator-(const RealBall& a, const RealBall& b) { return a + (-b); }
    friend RealBall operator*(const RealBall& a, const RealBall& b) {
        RealBall r(std::max(a.prec(), b.prec()));
        int t = mpfr_mul(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
        Mpfr am = a.abs_mid_up(), bm = b.abs_mid_up(), x(kRadPrec);
        mpfr_mul(r.rad_.get(), am.get(), b.rad_.get(), MPFR_RNDU);
        mpfr_mul(x.get(), bm.get(), a.rad_.get(), MPFR_RNDU);
        mpfr_add(r.rad_.get(), r.rad_.get(), x.get(), MPFR_RNDU);
        mpfr_mul(x.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
        mpfr_add(r.rad_.get(), r.rad_.get(), x.get(), MPFR_RNDU);
        r.add_ulp(t);
        return r;
    }
    RealBall inverse() const {
        Mpfr lo = abs_lower();
        if (mpfr_sgn(lo.get()) <= 0) throw DivisionByZero("ball contains zero");
        RealBall r(prec());
        int t = mpfr_ui_div(r.mid_.get(), 1, mid_.get(), MPFR_RNDN);
        Mpfr am(kRadPrec);
        mpfr_abs(am.get(), mid_.get(), MPFR_RNDD);
        mpfr_mul(am.get(), am.get(), lo.get(), MPFR_RNDD);
        mpfr_div(r.rad_.get(), rad_.get(), am.get(), MPFR_RNDU);
        r.add_ulp(t);
        return r;
    }
    friend RealBall operator/(const RealBall& a, const RealBall& b) { return a * b.inverse(); }

    RealBall sqrt() const {
        Mpfr lo = lower();
        if (mpfr_sgn(lo.get()) <= 0) throw InvalidArgument("sqrt of ball not contained in (0,inf)");
        RealBall r(prec());
        int t = mpfr_sqrt(r.mid_.get(), mid_.get(), MPFR_RNDN);
        mpfr_sqrt(lo.get(), lo.get(), MPFR_RNDD);
        mpfr_div(r.rad_.get(), rad_.get(), lo.get(), MPFR_RNDU);
        r.add_ulp(t);
        return r;
    }
    RealBall exp() const {
        RealBall r(prec());
        int t = mpfr_exp(r.mid_.get(), mid_.get(), MPFR_RNDN);
        Mpfr e(kRadPrec), m(kRadPrec);
        mpfr_expm1(e.get(), rad_.get(), MPFR_RNDU);
        mpfr_set(m.get(), mid_.get(), MPFR_RNDU);
        mpfr_exp(m.get(), m.get(), MPFR_RNDU);
        mpfr_mul(r.rad_.get(), e.get(), m.get(), MPFR_RNDU);
        r.add_ulp(t);
        return r;
    }
    RealBall log() const {
        Mpfr lo = lower();
        if (mpfr_sgn(lo.get()) <= 0) throw InvalidArgument("log of ball not contained in (0,inf)");
        RealBall r(prec());
        int t = mpfr_log(r.mid_.get(), mid_.get(), MPFR_RNDN);
        mpfr_div(r.rad_.get(), rad_.get(), lo.get(), MPFR_RNDU);
        r.add_ulp(t);
        return r;
    }
    RealBall cos() const {
        RealBall r(prec());
        int t = mpfr_cos(r.mid_.get(), mid_.get(), MPFR_RNDN);
        mpfr_set(r.rad_.get(), rad_.get(), MPFR_RNDU);
        r.add_ulp(t);
        return r;
    }
    RealBall sin() const {
        RealBall r(prec());
        int t = mpfr_sin(r.mid_.get(), mid_.get(), MPFR_RNDN);
        mpfr_set(r.rad_.get(), rad_.get(), MPFR_RNDU);
        r.add_ulp(t);
        return r;
    }
    RealBall abs() const {
        RealBall r(*this);
        mpfr_abs(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
        return r;
    }

    // mid - rad rounded down
    Mpfr lower() const {
        Mpfr l(prec() + 8);
        mpfr_sub(l.get(), mid_.get(), rad_.get(), MPFR_RNDD);
        return l;
    }
    Mpfr upper() const {
        Mpfr u(prec() + 8);
        mpfr_add(u.get(), mid_.get(), rad_.get(), MPFR_RNDU);
        return u;
    }
    // lower bound of |x| over the ball (0 if the ball straddles 0)
    Mpfr abs_lower() const {
        Mpfr a(prec() + 8);
        mpfr_abs(a.get(), mid_.get(), MPFR_RNDD);
        mpfr_sub(a.get(), a.get(), rad_.get(), MPFR_RNDD);
        if (mpfr_sgn(a.get()) < 0) mpfr_set_zero(a.get(), 1);
        return a;
    }
    Mpfr abs_upper() const {
        Mpfr a(kRadPrec);
        mpfr_abs(a.get(), mid_.get(), MPFR_RNDU);
        mpfr_set(a.get(), a.get(), MPFR_RNDU);
        mpfr_add(a.get(), a.get(), rad_.get(), MPFR_RNDU);
        return a;
    }

    bool contains(const mpq_class& x) const {
        Mpfr lo(prec() + 64), hi(prec() + 64);
        mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
        return mpfr_lessequal_p(lower().get(), lo.get()) && mpfr_lessequal_p(hi.get(), upper().get());
    }
    bool contains(const RealBall& inner) const {
        return mpfr_lessequal_p(lower().get(), inner.lower().get()) &&
               mpfr_lessequal_p(inner.upper().get(), upper().get());
    }
    bool overlaps(const RealBall& o) const {
        return mpfr_lessequal_p(lower().get(), o.upper().get()) &&
               mpfr_lessequal_p(o.lower().get(), upper().get());
    }
    bool contains_zero() const { return contains(mpq_class(0)); }
    // true when rad <= 2^e
    bool radius_below_pow2(long e) const {
        Mpfr b(kRadPrec);
        mpfr_set_ui_2exp(b.get(), 1, e, MPFR_RNDN);
        return mpfr_lessequal_p(rad_.get(), b.get());
    }

private:
    Mpfr abs_mid_up() const {
        Mpfr a(kRadPrec);
        mpfr_abs(a.get(), mid_.get(), MPFR_RNDU);
        mpfr_set(a.get(), a.get(), MPFR_RNDU);
        return a;
    }
    void add_ulp(int ternary) {
        if (ternary == 0 || mpfr_zero_p(mid_.get())) return;
        Mpfr u(kRadPrec);
        mpfr_set_ui_2exp(u.get(), 1, mpfr_get_exp(mid_.get()) - mid_.prec(), MPFR_RNDU);
        mpfr_add(rad_.get(), rad_.get(), u.get(), MPFR_RNDU);
    }

    Mpfr mid_;
    Mpfr rad_;
};

class ComplexBall {
public:
    explicit ComplexBall(mpfr_prec_t prec = 128) : re_(prec), im_(prec) {}
    ComplexBall(RealBall re, RealBall im) : re_(std::move(re)), im_(std::move(im)) {}

    const RealBall& re() const { return re_; }
    const RealBall& im() const { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

    // exp(2*pi*i*x) for rational x
    static ComplexBall unit_root(const mpq_class& x, mpfr_prec_t prec) {
        RealBall th = RealBall::pi(prec + 16) * RealBall::from_mpq(2 * x, prec + 16);
        RealBall c = th.cos(), s = th.sin();
        return ComplexBall(c, s);
    }
    // exp(2*pi*i*z)
    static ComplexBall e(const ComplexBall& z) {
        mpfr_prec_t p = z.prec();
        RealBall twopi = RealBall::pi(p) * RealBall::exact(2, p);
        RealBall mod = (-(twopi * z.im_)).exp();
        RealBall th = twopi * z.re_;
        return ComplexBall(mod * th.cos(), mod * th.sin());
    }

    friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
        return ComplexBall(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
        return ComplexBall(a.re_ - b.re_, a.im_ - b.im_);
    }
    ComplexBall operator-() const { return ComplexBall(-re_, -im_); }
    friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
        return ComplexBall(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend ComplexBall operator*(const RealBall& a, const ComplexBall& b) {
        return ComplexBall(a * b.re_, a * b.im_);
    }
    RealBall norm2() const { return re_ * re_ + im_ * im_; }
    ComplexBall inverse() const {
        RealBall n = norm2().inverse();
        return ComplexBall(re_ * n, -(im_ * n));
    }
    friend ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) { return a * b.inverse(); }
    RealBall abs() const { return norm2().sqrt(); }
    RealBall log_abs() const {
        RealBall h = RealBall::from_mpq(mpq_class(1, 2), prec());
        return h * norm2().log();
    }

    bool contains(const mpq_class& re, const mpq_class& im) const {
        return re_.contains(re) && im_.contains(im);
    }
    bool contains(const ComplexBall& o) const { return re_.contains(o.re_) && im_.contains(o.im_); }
    bool overlaps(const ComplexBall& o) const { return re_.overlaps(o.re_) && im_.overlaps(o.im_); }
    bool radius_below_pow2(long e) const { return re_.radius_below_pow2(e) && im_.radius_below_pow2(e); }
    void inflate(const Mpfr& e) { re_.inflate(e); im_.inflate(e); }

private:
    RealBall re_, im_;
};

}  // namespace hauptwerk
