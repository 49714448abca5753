#pragma once
// Real quadratic field F = Q(sqrt D) and the biquadratic field E = Q(sqrt d1, sqrt d2):
// prime splitting, valuations, local densities rho and class numbers.
#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclotomic.hpp"
#include "errors.hpp"
#include "numtheory.hpp"

namespace hauptwerk {

// u + v sqrt(D)
struct RealQuadElement {
    i64 D = 5;
    Rational u = 0, v = 0;

    RealQuadElement() = default;
    RealQuadElement(i64 D_, Rational u_, Rational v_) : D(D_), u(std::move(u_)), v(std::move(v_)) {}

    // (2m + D + sqrt D) / 2
    static RealQuadElement from_m(i64 D, i64 m) {
        return RealQuadElement(D, rat(2 * m + D, 2), rat(1, 2));
    }

    RealQuadElement conj() const { return RealQuadElement(D, u, -v); }
    Rational norm() const { return u * u - v * v * D; }
    Rational trace() const { return 2 * u; }
    bool is_zero() const { return u == 0 && v == 0; }
    bool is_integral() const {
        Rational a = 2 * u, b = 2 * v;
        if (a.get_den() != 1 || b.get_den() != 1) return false;
        return norm().get_den() == 1;
    }

    friend RealQuadElement operator+(const RealQuadElement& x, const RealQuadElement& y) {
        return RealQuadElement(x.D, x.u + y.u, x.v + y.v);
    }
    friend RealQuadElement operator-(const RealQuadElement& x, const RealQuadElement& y) {
        return RealQuadElement(x.D, x.u - y.u, x.v - y.v);
    }
    friend RealQuadElement operator*(const RealQuadElement& x, const RealQuadElement& y) {
        return RealQuadElement(x.D, x.u * y.u + x.v * y.v * x.D, x.u * y.v + x.v * y.u);
    }
    friend RealQuadElement operator*(const Rational& c, const RealQuadElement& y) {
        return RealQuadElement(y.D, c * y.u, c * y.v);
    }
    friend bool operator==(const RealQuadElement& x, const RealQuadElement& y) {
        return x.D == y.D && x.u == y.u && x.v == y.v;
    }
    std::string str() const {
        return "(" + u.get_str() + ") + (" + v.get_str() + ")*sqrt(" + std::to_string(D) + ")";
    }
};

enum class SplitKind { Split, Inert, Ramified };

inline const char* to_string(SplitKind k) {
    switch (k) {
        case SplitKind::Split: return "split";
        case SplitKind::Inert: return "inert";
        default: return "ramified";
    }
}

// Prime of F over q. For split q, sign selects sqrt(D) -> +r or -r, r the canonical q-adic root.
struct PrimeIdeal {
    i64 q = 2;
    SplitKind kind = SplitKind::Inert;
    int sign = 1;

    i64 residue_degree() const { return kind == SplitKind::Inert ? 2 : 1; }
    i64 ramification() const { return kind == SplitKind::Ramified ? 2 : 1; }
    // log N(P) = norm_power * log q
    i64 norm_power() const { return residue_degree(); }
    bool operator==(const PrimeIdeal& o) const { return q == o.q && kind == o.kind && sign == o.sign; }
    bool operator<(const PrimeIdeal& o) const {
        if (q != o.q) return q < o.q;
        return sign > o.sign;
    }
    std::string str() const {
        std::string s = "P(" + std::to_string(q) + "," + to_string(kind);
        if (kind == SplitKind::Split) s += sign > 0 ? ",+" : ",-";
        return s + ")";
    }
};

inline i64 ord_p_mpz(const Integer& n, i64 p) {
    if (n == 0) throw InvalidArgument("valuation of zero");
    Integer m = abs(n);
    i64 v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
        m /= p;
        ++v;
    }
    return v;
}

inline std::vector<PrimeIdeal> split_in_F(i64 q, i64 D) {
    if (!is_prime(q)) throw InvalidArgument("split_in_F needs a prime, got " + std::to_string(q));
    int k = kronecker(D, q);
    if (k == 1) return {PrimeIdeal{q, SplitKind::Split, 1}, PrimeIdeal{q, SplitKind::Split, -1}};
    if (k == -1) return {PrimeIdeal{q, SplitKind::Inert, 1}};
    return {PrimeIdeal{q, SplitKind::Ramified, 1}};
}

// E/F is unramified at all finite primes when d1, d2 are coprime fundamental discriminants.
// chi_{E/F}(P) = (d'|q)^f with d' the one of d1, d2 prime to q and f the residue degree.
inline SplitKind split_in_E(const PrimeIdeal& P, i64 d1, i64 d2) {
    i64 dp = (d1 % P.q != 0) ? d1 : d2;
    int k = kronecker(dp, P.q);
    if (k == 0) return SplitKind::Ramified;
    if (P.kind == SplitKind::Inert) return SplitKind::Split;
    return k == 1 ? SplitKind::Split : SplitKind::Inert;
}

namespace detail {

// r with r^2 = D mod q^k (q odd) or mod 2^(k-1) (q = 2); canonical lift of the least residue root.
inline Integer hensel_sqrt(i64 D, i64 q, i64 k) {
    Integer mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(k));
    if (q == 2) {
        if (pmod(D, 8) != 1) throw InvalidArgument("D not a 2-adic square");
        Integer r = 1;
        for (i64 j = 3; j < k; ++j) {
            Integer m2 = Integer(1) << static_cast<unsigned>(j + 1);
            Integer diff = r * r - D;
            if (mpz_divisible_p(diff.get_mpz_t(), m2.get_mpz_t()) == 0) r += Integer(1) << static_cast<unsigned>(j - 1);
        }
        return r;
    }
    i64 r0 = -1;
    for (i64 x = 1; x < q; ++x)
        if (pmod(x * x - pmod(D, q), q) == 0) { r0 = x; break; }
    if (r0 < 0) throw InvalidArgument("D not a square mod q");
    Integer r = r0, m = q;
    while (m < mod) {
        m *= m;
        if (m > mod) m = mod;
        Integer inv, two_r = 2 * r;
        mpz_invert(inv.get_mpz_t(), two_r.get_mpz_t(), m.get_mpz_t());
        r = r - (r * r - D) * inv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    }
    return r;
}

}  // namespace detail

// ord_P(t) for t != 0 (negative for non-integral t).
inline i64 valuation(const RealQuadElement& t, const PrimeIdeal& P, i64 k = 0) {
    if (t.is_zero()) throw InvalidArgument("valuation of zero");
    Integer M;
    mpz_lcm(M.get_mpz_t(), t.u.get_den_mpz_t(), t.v.get_den_mpz_t());
    Integer A = t.u.get_num() * (M / t.u.get_den());
    Integer B = t.v.get_num() * (M / t.v.get_den());
    i64 q = P.q;
    i64 denom = (M == 1 ? 0 : ord_p_mpz(M, q) * P.ramification());
    Integer nX = A * A - B * B * t.D;
    if (P.kind == SplitKind::Inert) return ord_p_mpz(nX, q) / 2 - denom;
    if (P.kind == SplitKind::Ramified) return ord_p_mpz(nX, q) - denom;
    // split: at most ord_q(N) for a nonzero element
    if (k <= 0) k = 2 * (1 + ord_p_mpz(nX, q));
    for (int attempt = 0; attempt < 3; ++attempt, k *= 2) {
        i64 eff = (q == 2) ? k - 1 : k;
        Integer r = detail::hensel_sqrt(t.D, q, k);
        Integer mod;
        mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(eff));
        Integer x = A + P.sign * B * r;
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
        if (x != 0) return ord_p_mpz(x, q) - denom;
    }
    throw PrecisionExhausted("valuation saturated at " + P.str());
}

inline std::optional<i64> valuation_or_inf(const RealQuadElement& t, const PrimeIdeal& P) {
    if (t.is_zero()) return std::nullopt;
    return valuation(t, P);
}

inline i64 rho_local(SplitKind kind_in_E, i64 e) {
    if (e < 0) throw InvalidArgument("rho_local needs e >= 0");
    switch (kind_in_E) {
        case SplitKind::Ramified: return 1;
        case SplitKind::Inert: return (e % 2 == 0) ? 1 : 0;
        default: return 1 + e;
    }
}

// Primes of F dividing the integral element t, with their valuations.
inline std::vector<std::pair<PrimeIdeal, i64>> prime_support(const RealQuadElement& t) {
    if (!t.is_integral()) throw InvalidArgument("prime_support needs an integral element");
    if (t.is_zero()) throw InvalidArgument("prime_support of zero");
    Rational n = t.norm();
    std::vector<std::pair<PrimeIdeal, i64>> out;
    Integer an = abs(n.get_num());
    if (!an.fits_slong_p()) throw InvalidArgument("norm too large to factor");
    for (auto [q, e] : factorize(an.get_si())) {
        for (const auto& P : split_in_F(q, t.D)) {
            i64 v = valuation(t, P);
            if (v > 0) out.emplace_back(P, v);
        }
    }
    return out;
}

inline std::vector<PrimeIdeal> diff_set(const RealQuadElement& t, i64 d1, i64 d2) {
    std::vector<PrimeIdeal> out;
    for (auto& [P, v] : prime_support(t))
        if (split_in_E(P, d1, d2) == SplitKind::Inert && v % 2 == 1) out.push_back(P);
    return out;
}

// Product of rho_q over primes outside `skip_q` of the ideal t * P^-shift.
inline i64 rho_product(const RealQuadElement& t, i64 d1, i64 d2, const std::optional<PrimeIdeal>& shift,
                       i64 skip_q = 0) {
    i64 r = 1;
    for (auto& [P, v] : prime_support(t)) {
        if (P.q == skip_q) continue;
        i64 e = v - ((shift && *shift == P) ? 1 : 0);
        r *= rho_local(split_in_E(P, d1, d2), e);
        if (r == 0) return 0;
    }
    return r;
}

struct ReducedForm {
    i64 a, b, c;
    bool operator==(const ReducedForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const ReducedForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

// All SL2(Z)-reduced primitive positive definite forms of discriminant disc.
inline std::vector<ReducedForm> reduced_forms(i64 disc) {
    if (disc >= 0 || (pmod(disc, 4) != 0 && pmod(disc, 4) != 1))
        throw InvalidArgument("bad discriminant " + std::to_string(disc));
    std::vector<ReducedForm> out;
    for (i64 a = 1; 3 * a * a <= -disc; ++a)
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b - disc;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1) continue;
            out.push_back({a, b, c});
        }
    return out;
}

inline i64 class_number(i64 disc) { return static_cast<i64>(reduced_forms(disc).size()); }

inline i64 unit_count(i64 d) { return d == -3 ? 6 : (d == -4 ? 4 : 2); }

inline void check_disc_pair(i64 d1, i64 d2) {
    if (d1 >= 0 || d2 >= 0) throw InvalidArgument("discriminants must be negative");
    if (!is_fundamental_discriminant(d1) || !is_fundamental_discriminant(d2))
        throw InvalidArgument("discriminants must be fundamental");
    if (std::gcd(d1, d2) != 1) throw NotCoprime("discriminants must be coprime");
}

}  // namespace hauptwerk
