#pragma once
// Truncated Laurent/Puiseux series in q^(1/h) and bivariate series in (q1, q2).
#include <gmpxx.h>

#include <algorithm>
#include <climits>
#include <map>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"

namespace hauptwerk {

class PuiseuxSeries {
public:
    PuiseuxSeries() = default;
    PuiseuxSeries(i64 hden, i64 lowest, i64 prec) : h_(hden), lowest_(lowest), prec_(prec) {
        if (hden < 1) throw InvalidArgument("hden must be positive");
        if (lowest_ > prec_) lowest_ = prec_;
    }

    static PuiseuxSeries zero(i64 hden, i64 prec) { return PuiseuxSeries(hden, prec, prec); }
    static PuiseuxSeries one(i64 hden, i64 prec) { return monomial(Cyclotomic(1), 0, hden, prec); }
    // c * q^(n/hden), known below prec
    static PuiseuxSeries monomial(const Cyclotomic& c, i64 n, i64 hden, i64 prec) {
        PuiseuxSeries s(hden, n, prec);
        s.set(n, c);
        s.normalize();
        return s;
    }

    i64 hden() const { return h_; }
    i64 lowest() const { return lowest_; }
    i64 prec() const { return prec_; }
    const std::map<i64, Cyclotomic>& coeffs() const { return c_; }
    Rational prec_exponent() const { return rat(prec_, h_); }
    Rational lowest_exponent() const { return rat(lowest_, h_); }

    std::string str() const {
        std::string out;
        for (auto& [n, c] : c_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.str() + ")*q^(" + to_string(rat(n, h_)) + ")";
        }
        if (!out.empty()) out += " + ";
        return out + "O(q^(" + to_string(prec_exponent()) + "))";
    }

    // coefficient at q^(n/hden)
    Cyclotomic coefficient(i64 n) const {
        if (n >= prec_) throw OutOfPrecision("coefficient beyond known precision");
        auto it = c_.find(n);
        return it == c_.end() ? Cyclotomic(0) : it->second;
    }
    Cyclotomic coefficient_at(const Rational& e) const {
        Rational x = e * h_;
        if (x.get_den() != 1) {
            if (e >= prec_exponent()) throw OutOfPrecision("coefficient beyond known precision");
            return Cyclotomic(0);
        }
        return coefficient(x.get_num().get_si());
    }
    bool is_known(const Rational& e) const { return e < prec_exponent(); }

    void set(i64 n, const Cyclotomic& c) {
        if (n >= prec_) return;
        if (c.is_zero()) {
            c_.erase(n);
            return;
        }
        if (n < lowest_) lowest_ = n;
        c_[n] = c;
    }
    void add_to(i64 n, const Cyclotomic& c) {
        if (n >= prec_) return;
        auto it = c_.find(n);
        if (it == c_.end()) {
            set(n, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) c_.erase(it);
        }
    }

    // lowest := exponent of the first nonzero coefficient (or prec)
    PuiseuxSeries& normalize() {
        for (auto it = c_.begin(); it != c_.end();) {
            if (it->second.is_zero()) it = c_.erase(it);
            else ++it;
        }
        lowest_ = c_.empty() ? prec_ : c_.begin()->first;
        return *this;
    }

    PuiseuxSeries rescaled(i64 h) const {
        if (h == h_) return *this;
        if (h % h_ != 0) throw InvalidArgument("rescale target must be a multiple of hden");
        i64 f = h / h_;
        PuiseuxSeries r(h, lowest_ * f, prec_ * f);
        for (auto& [n, c] : c_) r.c_[n * f] = c;
        return r;
    }
    // express with the smallest possible denominator
    PuiseuxSeries compacted() const {
        i64 g = h_;
        for (auto& [n, c] : c_) g = std::gcd(g, n);
        // prec rounds up to the next multiple so no unknown coefficient is claimed
        if (g == 1) return *this;
        PuiseuxSeries r(h_ / g, floordiv(lowest_, g), floordiv(prec_, g));
        for (auto& [n, c] : c_)
            if (n < r.prec_ * g) r.c_[n / g] = c;
        return r.normalize();
    }

    PuiseuxSeries truncated(i64 prec) const {
        PuiseuxSeries r(*this);
        if (prec < r.prec_) {
            r.prec_ = prec;
            for (auto it = r.c_.lower_bound(prec); it != r.c_.end();) it = r.c_.erase(it);
        }
        return r.normalize();
    }
    PuiseuxSeries truncated_at(const Rational& e) const {
        Rational x = e * h_;
        Integer c = x.get_num() / x.get_den();
        if (c * x.get_den() < x.get_num()) c += 1;
        return truncated(c.get_si());
    }

    friend PuiseuxSeries operator+(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
        i64 h = std::lcm(a0.h_, b0.h_);
        PuiseuxSeries a = a0.rescaled(h), b = b0.rescaled(h);
        PuiseuxSeries r(h, std::min(a.lowest_, b.lowest_), std::min(a.prec_, b.prec_));
        for (auto& [n, c] : a.c_)
            if (n < r.prec_) r.c_[n] = c;
        for (auto& [n, c] : b.c_) r.add_to(n, c);
        return r.normalize();
    }
    PuiseuxSeries operator-() const {
        PuiseuxSeries r(*this);
        for (auto& [n, c] : r.c_) c = -c;
        return r;
    }
    friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }
    PuiseuxSeries& operator+=(const PuiseuxSeries& o) { return *this = *this + o; }
    PuiseuxSeries& operator-=(const PuiseuxSeries& o) { return *this = *this - o; }

    PuiseuxSeries scaled(const Cyclotomic& k) const {
        if (k.is_zero()) return zero(h_, prec_);
        PuiseuxSeries r(*this);
        for (auto& [n, c] : r.c_) c = c * k;
        return r;
    }
    // multiply by q^(n/hden)
    PuiseuxSeries shifted(i64 n) const {
        PuiseuxSeries r(h_, lowest_ + n, prec_ + n);
        for (auto& [m, c] : c_) r.c_[m + n] = c;
        return r;
    }

    friend PuiseuxSeries operator*(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
        i64 h = std::lcm(a0.h_, b0.h_);
        PuiseuxSeries a = a0.rescaled(h), b = b0.rescaled(h);
        a.normalize();
        b.normalize();
        i64 prec = std::min(a.prec_ + b.lowest_, b.prec_ + a.lowest_);
        PuiseuxSeries r(h, a.lowest_ + b.lowest_, prec);
        std::vector<std::pair<i64, const Cyclotomic*>> bv;
        for (auto& [n, c] : b.c_) bv.emplace_back(n, &c);
        for (auto& [n, c] : a.c_) {
            for (auto& [m, d] : bv) {
                if (n + m >= prec) break;
                r.add_to(n + m, c * *d);
            }
        }
        return r.normalize();
    }
    PuiseuxSeries& operator*=(const PuiseuxSeries& o) { return *this = *this * o; }

    PuiseuxSeries inverse() const {
        PuiseuxSeries a(*this);
        a.normalize();
        if (a.c_.empty()) throw NotAUnit("series is zero to known precision");
        i64 L = a.lowest_, rel = a.prec_ - L;
        Cyclotomic lead_inv = a.c_.begin()->second.inverse();
        std::vector<Cyclotomic> b(rel);
        std::vector<std::pair<i64, const Cyclotomic*>> av;
        for (auto& [n, c] : a.c_)
            if (n > L) av.emplace_back(n - L, &c);
        for (i64 k = 0; k < rel; ++k) {
            if (k == 0) {
                b[0] = lead_inv;
                continue;
            }
            Cyclotomic s(0);
            for (auto& [i, c] : av) {
                if (i > k) break;
                if (!b[k - i].is_zero()) s += *c * b[k - i];
            }
            b[k] = -(s * lead_inv);
        }
        PuiseuxSeries r(h_, -L, -L + rel);
        for (i64 k = 0; k < rel; ++k)
            if (!b[k].is_zero()) r.c_[-L + k] = b[k];
        return r.normalize();
    }

    PuiseuxSeries pow(i64 k) const {
        if (k < 0) return inverse().pow(-k);
        PuiseuxSeries base(*this);
        base.normalize();
        PuiseuxSeries result = one(h_, base.prec_ - base.lowest_);
        while (k > 0) {
            if (k & 1) result = result * base;
            k >>= 1;
            if (k > 0) base = base * base;
        }
        return result;
    }

    // q d/dq
    PuiseuxSeries qderiv() const {
        PuiseuxSeries r(h_, lowest_, prec_);
        for (auto& [n, c] : c_)
            if (n != 0) r.c_[n] = c.scaled(rat(n, h_));
        return r.normalize();
    }

    // tau -> tau + x: coefficient at q^(n/h) times e(n x / h)
    PuiseuxSeries translated(const Rational& x) const {
        PuiseuxSeries r(*this);
        for (auto& [n, c] : r.c_) c = c * Cyclotomic::e(x * n / h_);
        return r;
    }

    // terms with n = t mod m (in units of 1/hden)
    PuiseuxSeries residue_class(i64 t, i64 m) const {
        PuiseuxSeries r(h_, lowest_, prec_);
        for (auto& [n, c] : c_)
            if (pmod(n - t, m) == 0) r.c_[n] = c;
        return r.normalize();
    }

    bool all_rational_integers() const {
        for (auto& [n, c] : c_)
            if (!c.is_integral_rational()) return false;
        return true;
    }

    // exact equality of all coefficients known to both
    friend bool agree(const PuiseuxSeries& a0, const PuiseuxSeries& b0) {
        i64 h = std::lcm(a0.h_, b0.h_);
        PuiseuxSeries a = a0.rescaled(h), b = b0.rescaled(h);
        i64 p = std::min(a.prec_, b.prec_);
        for (auto& [n, c] : a.c_)
            if (n < p && b.coefficient(n) != c) return false;
        for (auto& [n, c] : b.c_)
            if (n < p && a.coefficient(n) != c) return false;
        return true;
    }

private:
    i64 h_ = 1;
    i64 lowest_ = 0;
    i64 prec_ = 0;
    std::map<i64, Cyclotomic> c_;
};

// Integer power series sum f_n x^n, used for eta products before substitution.
inline std::vector<Integer> euler_product_power(i64 r, i64 terms) {
    // F = prod (1-x^n)^r ; n f_n = -r sum_{k=1}^n sigma(k) f_{n-k}
    std::vector<Integer> f(std::max<i64>(terms, 1), 0);
    f[0] = 1;
    if (terms <= 1) return f;
    std::vector<Integer> sigma(terms, 0);
    for (i64 d = 1; d < terms; ++d)
        for (i64 m = d; m < terms; m += d) sigma[m] += d;
    for (i64 n = 1; n < terms; ++n) {
        Integer s = 0;
        for (i64 k = 1; k <= n; ++k) s += sigma[k] * f[n - k];
        s *= -r;
        f[n] = s / n;
    }
    return f;
}

// Series in q1, q2 with integral exponents; exact for exponents below (prec1, prec2).
class BivariateSeries {
public:
    using Key = std::pair<i64, i64>;

    BivariateSeries() = default;
    BivariateSeries(i64 lowest1, i64 lowest2, i64 prec1, i64 prec2)
        : lo1_(lowest1), lo2_(lowest2), p1_(prec1), p2_(prec2) {}

    i64 prec1() const { return p1_; }
    i64 prec2() const { return p2_; }
    i64 lowest1() const { return lo1_; }
    i64 lowest2() const { return lo2_; }
    const std::map<Key, Cyclotomic>& coeffs() const { return c_; }

    Cyclotomic coefficient(i64 m, i64 n) const {
        if (m >= p1_ || n >= p2_) throw OutOfPrecision("bivariate coefficient beyond window");
        auto it = c_.find({m, n});
        return it == c_.end() ? Cyclotomic(0) : it->second;
    }
    void add_to(i64 m, i64 n, const Cyclotomic& c) {
        if (m >= p1_ || n >= p2_ || c.is_zero()) return;
        auto [it, ins] = c_.emplace(Key{m, n}, c);
        if (!ins) {
            it->second += c;
            if (it->second.is_zero()) c_.erase(it);
        }
        lo1_ = std::min(lo1_, m);
        lo2_ = std::min(lo2_, n);
    }

    friend BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b) {
        BivariateSeries r(std::min(a.lo1_, b.lo1_), std::min(a.lo2_, b.lo2_), std::min(a.p1_, b.p1_),
                          std::min(a.p2_, b.p2_));
        for (auto& [k, c] : a.c_) r.add_to(k.first, k.second, c);
        for (auto& [k, c] : b.c_) r.add_to(k.first, k.second, c);
        return r;
    }
    BivariateSeries operator-() const {
        BivariateSeries r(*this);
        for (auto& [k, c] : r.c_) c = -c;
        return r;
    }
    friend BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b) { return a + (-b); }
    friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
        i64 l1a = a.lo1_, l2a = a.lo2_, l1b = b.lo1_, l2b = b.lo2_;
        BivariateSeries r(l1a + l1b, l2a + l2b, std::min(a.p1_ + l1b, b.p1_ + l1a),
                          std::min(a.p2_ + l2b, b.p2_ + l2a));
        for (auto& [ka, ca] : a.c_)
            for (auto& [kb, cb] : b.c_) r.add_to(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    BivariateSeries swapped() const {
        BivariateSeries r(lo2_, lo1_, p2_, p1_);
        for (auto& [k, c] : c_) r.c_[{k.second, k.first}] = c;
        return r;
    }
    // restrict to exponents below (p1, p2)
    BivariateSeries truncated(i64 p1, i64 p2) const {
        BivariateSeries r(lo1_, lo2_, std::min(p1, p1_), std::min(p2, p2_));
        for (auto& [k, c] : c_) r.add_to(k.first, k.second, c);
        return r;
    }

private:
    i64 lo1_ = 0, lo2_ = 0, p1_ = 0, p2_ = 0;
    std::map<Key, Cyclotomic> c_;
};

struct ProductFactor {
    i64 m, n, step;
    Integer exponent;
};

// prod (1 - (q1^m q2^n)^step)^exponent, exact for exponents <= (K1, K2)
inline BivariateSeries biv_product(const std::vector<ProductFactor>& factors, i64 K1, i64 K2) {
    std::vector<std::vector<Integer>> P(K1 + 1, std::vector<Integer>(K2 + 1, 0));
    P[0][0] = 1;
    for (const auto& f : factors) {
        i64 a = f.m * f.step, b = f.n * f.step;
        if (a < 1 || b < 1) throw InvalidFactor("factor with non-positive weight");
        if (f.exponent == 0 || a > K1 || b > K2) continue;
        i64 kmax = std::min(K1 / a, K2 / b);
        // binomial coefficients of (1 - x)^e
        std::vector<Integer> bin(kmax + 1);
        bin[0] = 1;
        const Integer& e = f.exponent;
        for (i64 k = 1; k <= kmax; ++k) bin[k] = -bin[k - 1] * (e - (k - 1)) / k;
        for (i64 i = K1; i >= 0; --i)
            for (i64 j = K2; j >= 0; --j) {
                Integer s = P[i][j];
                for (i64 k = 1; k <= kmax && i - k * a >= 0 && j - k * b >= 0; ++k)
                    s += bin[k] * P[i - k * a][j - k * b];
                P[i][j] = s;
            }
    }
    BivariateSeries r(0, 0, K1 + 1, K2 + 1);
    for (i64 i = 0; i <= K1; ++i)
        for (i64 j = 0; j <= K2; ++j)
            if (P[i][j] != 0) r.add_to(i, j, Cyclotomic(Rational(P[i][j])));
    return r;
}

}  // namespace hauptwerk
