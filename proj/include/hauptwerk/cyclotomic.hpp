#pragma once
// Exact arithmetic in cyclotomic fields Q(zeta_n), power basis modulo Phi_n.
#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "ball.hpp"
#include "errors.hpp"
#include "numtheory.hpp"

namespace hauptwerk {

using Rational = mpq_class;
using Integer = mpz_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational rat(long a, long b = 1) {
    Rational q(a, b);
    q.canonicalize();
    return q;
}

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw InvalidArgument("bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

namespace detail {

// Phi_n coefficients, lowest degree first; cached per order.
inline const std::vector<i64>& cyclotomic_poly(i64 n) {
    static std::mutex mu;
    static std::map<i64, std::shared_ptr<const std::vector<i64>>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return *it->second;
    }
    std::vector<i64> num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (i64 d : divisors(n)) {
        if (d == n) continue;
        const auto& den = cyclotomic_poly(d);
        i64 dd = static_cast<i64>(den.size()) - 1;
        i64 dn = static_cast<i64>(num.size()) - 1;
        std::vector<i64> quo(dn - dd + 1, 0);
        for (i64 k = dn; k >= dd; --k) {
            i64 c = num[k];
            quo[k - dd] = c;
            if (c != 0)
                for (i64 i = 0; i <= dd; ++i) num[k - dd + i] -= c * den[i];
        }
        num = quo;
    }
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const std::vector<i64>>(std::move(num));
    return *slot;
}

// Reduce a polynomial (exponents taken mod n) to length phi(n) modulo Phi_n.
inline std::vector<Rational> reduce_mod_phi(std::vector<Rational> p, i64 n) {
    const auto& phi = cyclotomic_poly(n);
    i64 deg = static_cast<i64>(phi.size()) - 1;
    if (static_cast<i64>(p.size()) > n) {
        for (size_t k = n; k < p.size(); ++k) p[k % n] += p[k];
        p.resize(n);
    }
    for (i64 k = static_cast<i64>(p.size()) - 1; k >= deg; --k) {
        if (sgn(p[k]) == 0) continue;
        Rational c = p[k];
        for (i64 i = 0; i < deg; ++i)
            if (phi[i] != 0) p[k - deg + i] -= c * phi[i];
        p[k] = 0;
    }
    p.resize(deg);
    return p;
}

inline void poly_trim(std::vector<Rational>& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

}  // namespace detail

class Cyclotomic {
public:
    Cyclotomic() : n_(1), c_(1, Rational(0)) {}
    Cyclotomic(const Rational& q) : n_(1), c_(1, q) {}  // NOLINT
    Cyclotomic(long v) : n_(1), c_(1, Rational(v)) {}    // NOLINT
    Cyclotomic(int v) : n_(1), c_(1, Rational(v)) {}     // NOLINT

    // element of order n given by (already reduced) power-basis coordinates
    Cyclotomic(i64 n, std::vector<Rational> coeffs) : n_(n), c_(std::move(coeffs)) {
        if (static_cast<i64>(c_.size()) != euler_phi(n)) c_ = detail::reduce_mod_phi(std::move(c_), n);
    }

    // from a polynomial in zeta_n of arbitrary degree
    static Cyclotomic from_poly(i64 n, std::vector<Rational> p) {
        Cyclotomic r;
        r.n_ = n;
        r.c_ = detail::reduce_mod_phi(std::move(p), n);
        return r;
    }
    // zeta_b^a = e(a/b)
    static Cyclotomic root_of_unity(i64 a, i64 b) {
        if (b < 1) throw InvalidArgument("root_of_unity needs b >= 1");
        std::vector<Rational> p(b, Rational(0));
        p[pmod(a, b)] = 1;
        return from_poly(b, std::move(p));
    }
    static Cyclotomic e(const Rational& x) {
        Integer num = x.get_num(), den = x.get_den();
        Integer r = num % den;
        if (r < 0) r += den;
        return root_of_unity(r.get_si(), den.get_si());
    }

    i64 order() const { return n_; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const {
        for (auto& x : c_)
            if (sgn(x) != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (sgn(c_[i]) != 0) return false;
        return true;
    }
    Rational rational_value() const {
        if (!is_rational()) throw InvalidArgument("cyclotomic number is not rational");
        return c_[0];
    }
    bool is_integral_rational() const { return is_rational() && c_[0].get_den() == 1; }

    Cyclotomic lifted(i64 m) const {
        if (m == n_) return *this;
        if (m % n_ != 0) throw InvalidArgument("lift order must be a multiple");
        if (n_ == 1) {
            std::vector<Rational> p(euler_phi(m), Rational(0));
            p[0] = c_[0];
            Cyclotomic r;
            r.n_ = m;
            r.c_ = std::move(p);
            return r;
        }
        i64 f = m / n_;
        std::vector<Rational> p(m, Rational(0));
        for (size_t i = 0; i < c_.size(); ++i) p[i * f] = c_[i];
        return from_poly(m, std::move(p));
    }

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.n_ == b.n_) {
            Cyclotomic r(a);
            for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
            return r;
        }
        i64 m = std::lcm(a.n_, b.n_);
        return a.lifted(m) + b.lifted(m);
    }
    Cyclotomic operator-() const {
        Cyclotomic r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.n_ == 1) return b.scaled(a.c_[0]);
        if (b.n_ == 1) return a.scaled(b.c_[0]);
        if (a.n_ != b.n_) {
            i64 m = std::lcm(a.n_, b.n_);
            return a.lifted(m) * b.lifted(m);
        }
        size_t k = a.c_.size();
        std::vector<Rational> p(2 * k - 1, Rational(0));
        for (size_t i = 0; i < k; ++i) {
            if (sgn(a.c_[i]) == 0) continue;
            for (size_t j = 0; j < k; ++j)
                if (sgn(b.c_[j]) != 0) p[i + j] += a.c_[i] * b.c_[j];
        }
        return from_poly(a.n_, std::move(p));
    }
    Cyclotomic scaled(const Rational& q) const {
        Cyclotomic r(*this);
        for (auto& x : r.c_) x *= q;
        return r;
    }
    // multiply by zeta_n^e without a general product
    Cyclotomic times_root(i64 e) const {
        if (n_ == 1) return *this;
        std::vector<Rational> p(n_, Rational(0));
        for (size_t i = 0; i < c_.size(); ++i)
            if (sgn(c_[i]) != 0) p[pmod(static_cast<i64>(i) + e, n_)] += c_[i];
        return from_poly(n_, std::move(p));
    }

    Cyclotomic inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero");
        if (n_ == 1) return Cyclotomic(1 / c_[0]);
        // extended Euclid: s*a + t*Phi = 1
        std::vector<Rational> r0 = c_, r1;
        const auto& ph = detail::cyclotomic_poly(n_);
        for (auto v : ph) r1.push_back(Rational(v));
        std::vector<Rational> s0{Rational(1)}, s1{};
        detail::poly_trim(r0);
        while (!r1.empty()) {
            // r0 = q*r1 + rem
            std::vector<Rational> q, rem = r0;
            detail::poly_trim(rem);
            if (rem.size() >= r1.size()) q.assign(rem.size() - r1.size() + 1, Rational(0));
            while (rem.size() >= r1.size() && !rem.empty()) {
                size_t sh = rem.size() - r1.size();
                Rational c = rem.back() / r1.back();
                q[sh] = c;
                for (size_t i = 0; i < r1.size(); ++i) rem[sh + i] -= c * r1[i];
                detail::poly_trim(rem);
            }
            // s2 = s0 - q*s1
            std::vector<Rational> s2 = s0;
            if (!s1.empty() && !q.empty()) {
                if (s2.size() < q.size() + s1.size() - 1) s2.resize(q.size() + s1.size() - 1, Rational(0));
                for (size_t i = 0; i < q.size(); ++i)
                    for (size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
            }
            detail::poly_trim(s2);
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant
        Rational g = r0[0];
        for (auto& x : s0) x /= g;
        return from_poly(n_, std::move(s0));
    }
    friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }

    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.n_ == b.n_) return a.c_ == b.c_;
        i64 m = std::lcm(a.n_, b.n_);
        return a.lifted(m).c_ == b.lifted(m).c_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    // zeta -> zeta^k for k a unit mod n
    Cyclotomic galois(i64 k) const {
        if (n_ == 1) return *this;
        std::vector<Rational> p(n_, Rational(0));
        for (size_t i = 0; i < c_.size(); ++i) p[pmod(static_cast<i64>(i) * k, n_)] += c_[i];
        return from_poly(n_, std::move(p));
    }
    Cyclotomic conj() const { return galois(-1); }

    // Smallest order m | n (or m = n/2 style equivalents) containing the value.
    Cyclotomic reduced() const {
        if (n_ == 1) return *this;
        if (is_rational()) return Cyclotomic(c_[0]);
        for (i64 m : divisors(n_)) {
            if (m == n_) break;
            if (m == 1) continue;
            auto sol = try_express(m);
            if (sol) return *sol;
        }
        return *this;
    }

    ComplexBall embed(mpfr_prec_t bits) const {
        mpfr_prec_t p = bits + 32;
        ComplexBall acc(RealBall::exact(0, p), RealBall::exact(0, p));
        for (size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            ComplexBall z = i == 0 ? ComplexBall(RealBall::exact(1, p), RealBall::exact(0, p))
                                   : ComplexBall::unit_root(rat(static_cast<long>(i), n_), p);
            acc = acc + RealBall::from_mpq(c_[i], p) * z;
        }
        return acc;
    }

    std::string str() const {
        if (is_rational()) return c_[0].get_str();
        std::ostringstream os;
        bool first = true;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << "(" << c_[i].get_str() << ")";
            if (i > 0) os << "*z" << n_ << "^" << i;
        }
        return os.str();
    }

private:
    std::unique_ptr<Cyclotomic> try_express(i64 m) const;

    i64 n_;
    std::vector<Rational> c_;
};

inline std::unique_ptr<Cyclotomic> Cyclotomic::try_express(i64 m) const {
    // solve sum_j y_j lift(zeta_m^j) = this, j < phi(m), by Gaussian elimination
    i64 k = euler_phi(m);
    size_t rows = c_.size();
    std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(k + 1, Rational(0)));
    for (i64 j = 0; j < k; ++j) {
        Cyclotomic b = Cyclotomic::root_of_unity(j, m).lifted(n_);
        for (size_t r = 0; r < rows; ++r) A[r][j] = b.c_[r];
    }
    for (size_t r = 0; r < rows; ++r) A[r][k] = c_[r];
    size_t piv_row = 0;
    std::vector<i64> piv_col;
    for (i64 col = 0; col < k && piv_row < rows; ++col) {
        size_t sel = rows;
        for (size_t r = piv_row; r < rows; ++r)
            if (sgn(A[r][col]) != 0) { sel = r; break; }
        if (sel == rows) continue;
        std::swap(A[sel], A[piv_row]);
        Rational inv = 1 / A[piv_row][col];
        for (auto& x : A[piv_row]) x *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == piv_row || sgn(A[r][col]) == 0) continue;
            Rational f = A[r][col];
            for (i64 c = col; c <= k; ++c) A[r][c] -= f * A[piv_row][c];
        }
        piv_col.push_back(col);
        ++piv_row;
    }
    for (size_t r = piv_row; r < rows; ++r)
        if (sgn(A[r][k]) != 0) return nullptr;
    std::vector<Rational> y(k, Rational(0));
    for (size_t r = 0; r < piv_col.size(); ++r) y[piv_col[r]] = A[r][k];
    return std::make_unique<Cyclotomic>(Cyclotomic::from_poly(m, std::move(y)));
}

inline Cyclotomic root_of_unity(i64 a, i64 b) { return Cyclotomic::root_of_unity(a, b); }

// sqrt of a rational as a cyclotomic number (Gauss sums), null if impossible
inline Cyclotomic sqrt_rational(const Rational& q) {
    if (sgn(q) == 0) return Cyclotomic(0);
    // q = s^2 * m with m squarefree integer
    Integer num = q.get_num() * q.get_den();
    Rational scale = Rational(1) / Rational(q.get_den());
    Integer sign = num < 0 ? -1 : 1;
    Integer a = abs(num);
    Integer sq = 1, sf = 1;
    for (auto [p, e] : factorize(a.get_si())) {
        for (int i = 0; i < e / 2; ++i) sq *= p;
        if (e % 2) sf *= p;
    }
    Cyclotomic r(Rational(sq) * scale);
    if (sign < 0) r = r * root_of_unity(1, 4);
    for (auto [p, e] : factorize(sf.get_si())) {
        (void)e;
        Cyclotomic s;
        if (p == 2) {
            s = root_of_unity(1, 8) + root_of_unity(-1, 8);
        } else {
            // Gauss sum g = sum (a|p) zeta_p^a, g^2 = (-1|p) p
            std::vector<Rational> poly(p, Rational(0));
            for (i64 x = 1; x < p; ++x) poly[x] = kronecker(x, p);
            s = Cyclotomic::from_poly(p, poly);
            if (p % 4 == 3) s = s * root_of_unity(-1, 4);  // i^-1 * (i sqrt p)
        }
        r = r * s;
    }
    return r;
}

inline std::ostream& operator<<(std::ostream& os, const Cyclotomic& c) { return os << c.str(); }

}  // namespace hauptwerk
