#pragma once
// Gamma0(p)-classes of binary quadratic forms, the pair set, CM points and
// ball evaluation of Hauptmoduln at CM points.
#include <gmpxx.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ball.hpp"
#include "eta.hpp"
#include "parallel.hpp"
#include "quadfield.hpp"

namespace hauptwerk {

struct BinaryQuadraticForm {
    i64 a = 1, b = 0, c = 1;
    i64 disc() const { return b * b - 4 * a * c; }
    i64 eval(i64 x, i64 y) const { return a * x * x + b * x * y + c * y * y; }
    bool operator==(const BinaryQuadraticForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const BinaryQuadraticForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
    std::string str() const {
        return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
    }
};

// Q(alpha X + beta Y, gamma X + delta Y)
inline BinaryQuadraticForm act(const BinaryQuadraticForm& Q, const Mat2& g) {
    i64 al = g.a, be = g.b, ga = g.c, de = g.d;
    return {Q.eval(al, ga), 2 * Q.a * al * be + Q.b * (al * de + be * ga) + 2 * Q.c * ga * de, Q.eval(be, de)};
}

inline BinaryQuadraticForm reduce_form(BinaryQuadraticForm Q) {
    if (Q.disc() >= 0 || Q.a <= 0) throw InvalidArgument("form must be positive definite: " + Q.str());
    for (;;) {
        // translate b into (-a, a]
        i64 k = floordiv(Q.a - Q.b, 2 * Q.a);
        if (k != 0) {
            Q = {Q.a, Q.b + 2 * k * Q.a, Q.a * k * k + Q.b * k + Q.c};
        }
        if (Q.a > Q.c) {
            Q = {Q.c, -Q.b, Q.a};
            continue;
        }
        if (Q.a == Q.c && Q.b < 0) Q.b = -Q.b;
        return Q;
    }
}

inline bool is_primitive(const BinaryQuadraticForm& Q) {
    return std::gcd(std::gcd(std::llabs(Q.a), std::llabs(Q.b)), std::llabs(Q.c)) == 1;
}

// Reduced form of discriminant d p^2 attached to the ideal [a, p(-b + sqrt d)/2].
inline BinaryQuadraticForm canonical_invariant(const BinaryQuadraticForm& Q, i64 p) {
    if (std::gcd(Q.a, p) != 1) throw NotCoprime("leading coefficient not prime to " + std::to_string(p));
    if (!is_primitive(Q)) throw NotPrimitive(Q.str());
    return reduce_form({Q.a, -p * Q.b, p * p * Q.c});
}

struct FormClass {
    BinaryQuadraticForm representative;
    BinaryQuadraticForm invariant;
};

// Gamma0(p)-classes of primitive forms of discriminant d with leading coefficient prime to p.
inline std::vector<FormClass> enumerate_form_classes(i64 d, i64 p, i64 max_bound = 1 << 16) {
    if (d >= 0) throw InvalidArgument("discriminant must be negative");
    if (!is_prime(p)) throw InvalidArgument("level must be prime");
    if (d % p == 0) throw InvalidArgument("p must not divide d");
    const i64 expected = class_number(d * p * p);
    std::map<BinaryQuadraticForm, BinaryQuadraticForm> found;  // invariant -> smallest representative
    for (i64 a = 1; a <= max_bound; ++a) {
        if (a % p == 0) continue;
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b - d;
            if (num % (4 * a) != 0) continue;
            BinaryQuadraticForm Q{a, b, num / (4 * a)};
            if (!is_primitive(Q)) continue;
            found.emplace(canonical_invariant(Q, p), Q);
        }
        if (static_cast<i64>(found.size()) == expected) {
            std::vector<FormClass> out;
            for (auto& [inv, rep] : found) out.push_back({rep, inv});
            return out;
        }
    }
    throw EnumerationIncomplete("found " + std::to_string(found.size()) + " of " + std::to_string(expected) +
                                " classes for d=" + std::to_string(d) + ", p=" + std::to_string(p));
}

// Values n <= bound with gcd(n, p) = 1 properly represented by Q along Gamma0(p):
// n = Q(x, y), gcd(x, y) = 1, p | y. All of them lie in the square class of a mod p.
inline std::set<i64> class_values(const BinaryQuadraticForm& Q, i64 p, i64 bound) {
    std::set<i64> out;
    i64 D = -Q.disc();
    i64 ymax = static_cast<i64>(std::sqrt(4.0 * Q.a * bound / D)) + 1;
    for (i64 y = 0; y <= ymax; y += p) {
        // a x^2 + b y x + c y^2 <= bound
        double disc = static_cast<double>(Q.b * y) * (Q.b * y) - 4.0 * Q.a * (Q.c * y * y - bound);
        if (disc < 0) continue;
        double s = std::sqrt(disc);
        i64 lo = static_cast<i64>(std::floor((-Q.b * y - s) / (2.0 * Q.a))) - 1;
        i64 hi = static_cast<i64>(std::ceil((-Q.b * y + s) / (2.0 * Q.a))) + 1;
        for (i64 x = lo; x <= hi; ++x) {
            if (std::gcd(std::llabs(x), y) != 1) continue;
            i64 n = Q.eval(x, y);
            if (n > 0 && n <= bound && n % p != 0) out.insert(n);
        }
    }
    return out;
}

// Pair invariant: a1 a2 is congruent to a square or to minus a square mod p.
inline bool pair_admissible(const BinaryQuadraticForm& Q1, const BinaryQuadraticForm& Q2, i64 p) {
    int c = kronecker(Q1.a, p) * kronecker(Q2.a, p);
    return c == 1 || c == kronecker(-1, p);
}

struct ClassPair {
    std::size_t i1 = 0, i2 = 0;
    bool matched = false;
    bool excluded = false;    // ruled out by the pair invariant
    i64 witness1 = 0, witness2 = 0;  // values with witness1 = +-witness2 mod p
};

struct PairSet {
    i64 p = 3, d1 = -8, d2 = -11, value_bound = 0;
    std::vector<FormClass> classes1, classes2;
    std::vector<ClassPair> pairs;  // every element of the product
    bool exhaustive = false;       // every pair matched or excluded

    std::size_t matched_count() const {
        std::size_t n = 0;
        for (const auto& c : pairs) n += c.matched ? 1 : 0;
        return n;
    }
    bool full_product() const { return matched_count() == classes1.size() * classes2.size(); }
};

inline i64 default_value_bound(i64 d1, i64 d2) { return 20 * std::max(std::llabs(d1), std::llabs(d2)); }

// Pairs of classes with values n1, n2 prime to p, n1 = +-n2 mod p. The bound is raised up to
// 16 times its initial value while admissible pairs lack a witness; those stay undecided.
inline PairSet s_pairs(i64 p, i64 d1, i64 d2, i64 value_bound = 0) {
    check_disc_pair(d1, d2);
    if (value_bound <= 0) value_bound = default_value_bound(d1, d2);
    PairSet S;
    S.p = p;
    S.d1 = d1;
    S.d2 = d2;
    S.classes1 = enumerate_form_classes(d1, p);
    S.classes2 = enumerate_form_classes(d2, p);
    i64 bound = value_bound;
    for (int round = 0; round < 5; ++round, bound *= 2) {
        std::vector<std::map<i64, i64>> r1, r2;  // residue mod p -> least value
        auto residues = [&](const FormClass& c) {
            std::map<i64, i64> m;
            for (i64 n : class_values(c.representative, p, bound)) m.emplace(n % p, n);
            return m;
        };
        for (auto& c : S.classes1) r1.push_back(residues(c));
        for (auto& c : S.classes2) r2.push_back(residues(c));
        S.pairs.clear();
        bool all = true;
        for (std::size_t i = 0; i < r1.size(); ++i)
            for (std::size_t j = 0; j < r2.size(); ++j) {
                ClassPair cp{i, j};
                if (!pair_admissible(S.classes1[i].representative, S.classes2[j].representative, p)) {
                    cp.excluded = true;
                } else {
                    for (auto& [res, n] : r1[i]) {
                        auto it = r2[j].find(res);
                        if (it == r2[j].end()) it = r2[j].find((p - res) % p);
                        if (it != r2[j].end()) {
                            cp.matched = true;
                            cp.witness1 = n;
                            cp.witness2 = it->second;
                            break;
                        }
                    }
                }
                all = all && (cp.matched || cp.excluded);
                S.pairs.push_back(cp);
            }
        S.value_bound = bound;
        if (all) { S.exhaustive = true; break; }
    }
    return S;
}

// tau = (-b + i sqrt|d|) / (2a)
struct CMPoint {
    i64 a = 1, b = 0, d = -4;
    ComplexBall tau(mpfr_prec_t bits) const {
        RealBall two_a = RealBall::exact(2 * a, bits);
        RealBall re = RealBall::exact(-b, bits) / two_a;
        RealBall im = RealBall::exact(-d, bits).sqrt() / two_a;
        return ComplexBall(re, im);
    }
};

inline CMPoint cm_point(const BinaryQuadraticForm& Q) {
    if (Q.a <= 0 || Q.disc() >= 0) throw InvalidArgument("form must be positive definite");
    return {Q.a, Q.b, Q.disc()};
}

// Eta quotient (weight 0) at a point of the upper half plane, with rigorous tail bound.
inline ComplexBall eval_eta_quotient(const EtaQuotient& f, const ComplexBall& tau, mpfr_prec_t bits,
                                     i64 max_terms = 200000) {
    mpfr_prec_t wp = bits + 32;
    double im = tau.im().mid_double() - tau.im().rad_double();
    if (!(im > 0)) throw InvalidArgument("tau must lie in the upper half plane");
    // |q| = exp(-2 pi Im tau)
    double log2q = -2.0 * M_PI * im / std::log(2.0);
    i64 T = static_cast<i64>(std::ceil((wp + 16.0) / -log2q)) + 1;
    if (T > max_terms) throw PrecisionUnreachable("Im(tau) too small for the configured term ceiling");
    ComplexBall tw(RealBall(tau.re()), RealBall(tau.im()));
    ComplexBall q = ComplexBall::e(tw);
    RealBall qabs = ((-(RealBall::pi(wp) * RealBall::exact(2, wp) * tau.im()))).exp();
    ComplexBall head(RealBall::exact(1, wp), RealBall::exact(0, wp));
    Mpfr delta(kRadPrec);
    for (auto [m, r] : f.exps) {
        // prod_{n <= Tm} (1 - q^{m n})
        i64 Tm = T / m + 1;
        ComplexBall qm = q;
        for (i64 i = 1; i < m; ++i) qm = qm * q;
        ComplexBall prod(RealBall::exact(1, wp), RealBall::exact(0, wp));
        ComplexBall pw = qm;
        ComplexBall one(RealBall::exact(1, wp), RealBall::exact(0, wp));
        for (i64 n = 1; n <= Tm; ++n) {
            prod = prod * (one - pw);
            pw = pw * qm;
        }
        ComplexBall pr = one;
        i64 ar = std::llabs(r);
        for (i64 i = 0; i < ar; ++i) pr = pr * prod;
        head = r > 0 ? head * pr : head / pr;
        // |log prod_{n > Tm}(1 - x^n)| <= |x|^{Tm+1} / (1 - |x|)^2, |x| = |q|^m
        Mpfr x(kRadPrec), e(kRadPrec), den(kRadPrec);
        mpfr_set(x.get(), qabs.upper().get(), MPFR_RNDU);
        mpfr_pow_ui(x.get(), x.get(), static_cast<unsigned long>(m), MPFR_RNDU);
        mpfr_pow_ui(e.get(), x.get(), static_cast<unsigned long>(Tm + 1), MPFR_RNDU);
        mpfr_ui_sub(den.get(), 1, x.get(), MPFR_RNDD);
        mpfr_sqr(den.get(), den.get(), MPFR_RNDD);
        mpfr_div(e.get(), e.get(), den.get(), MPFR_RNDU);
        mpfr_mul_ui(e.get(), e.get(), static_cast<unsigned long>(ar), MPFR_RNDU);
        mpfr_add(delta.get(), delta.get(), e.get(), MPFR_RNDU);
    }
    // q^{ord at infinity}
    Rational ord = f.order_at_infinity();
    if (ord.get_den() != 1) throw InvalidArgument("eta quotient with fractional order at infinity");
    long o = ord.get_num().get_si();
    ComplexBall pref(RealBall::exact(1, wp), RealBall::exact(0, wp));
    ComplexBall base = o < 0 ? q.inverse() : q;
    for (long i = 0; i < std::labs(o); ++i) pref = pref * base;
    ComplexBall val = pref * head;
    // multiplicative tail factor exp(z), |z| <= delta: |exp(z) - 1| <= delta e^delta
    Mpfr ed(kRadPrec), bound(kRadPrec);
    mpfr_exp(ed.get(), delta.get(), MPFR_RNDU);
    mpfr_mul(ed.get(), ed.get(), delta.get(), MPFR_RNDU);
    Mpfr absv = val.norm2().abs_upper();
    mpfr_sqrt(absv.get(), absv.get(), MPFR_RNDU);
    mpfr_mul(bound.get(), absv.get(), ed.get(), MPFR_RNDU);
    val.inflate(bound);
    return val;
}

inline ComplexBall eval_pi(i64 N, const CMPoint& P, mpfr_prec_t bits) {
    return eval_eta_quotient(hauptmodul(N), P.tau(bits + 32), bits);
}

inline ComplexBall eval_pi_at(i64 N, const ComplexBall& tau, mpfr_prec_t bits) {
    return eval_eta_quotient(hauptmodul(N), tau, bits);
}

// Klein j from the exact q-expansion, with tail bound |c(n)| <= exp(4 pi sqrt n).
inline ComplexBall eval_j(const ComplexBall& tau, mpfr_prec_t bits) {
    mpfr_prec_t wp = bits + 32;
    double im = tau.im().mid_double() - tau.im().rad_double();
    if (!(im > 0.5)) throw PrecisionUnreachable("eval_j expects Im(tau) > 1/2");
    double lq = -2.0 * M_PI * im;
    i64 T = 8;
    while (4 * M_PI * std::sqrt(static_cast<double>(T)) + lq * T > -(wp + 40.0) * std::log(2.0) ||
           2 * M_PI / std::sqrt(static_cast<double>(T)) + lq > -0.5)
        ++T;
    PuiseuxSeries js = j_series(T);
    ComplexBall q = ComplexBall::e(tau);
    ComplexBall acc = q.inverse();
    ComplexBall pw(RealBall::exact(1, wp), RealBall::exact(0, wp));
    for (i64 n = 0; n < T; ++n) {
        Rational c = js.coefficient_at(Rational(n)).rational_value();
        if (c != 0) acc = acc + RealBall::from_mpq(c, wp) * pw;
        pw = pw * q;
    }
    // sum_{n >= T} exp(4 pi sqrt n) |q|^n <= term_T / (1 - ratio), ratio = exp(2 pi / sqrt T) |q|
    Mpfr term(kRadPrec), ratio(kRadPrec), tmp(kRadPrec);
    RealBall lqb = -(RealBall::pi(wp) * RealBall::exact(2, wp) * tau.im());
    RealBall t = RealBall::pi(wp) * RealBall::exact(4, wp) * RealBall::exact(T, wp).sqrt() +
                 RealBall::exact(T, wp) * lqb;
    mpfr_exp(term.get(), t.upper().get(), MPFR_RNDU);
    RealBall r = RealBall::pi(wp) * RealBall::exact(2, wp) / RealBall::exact(T, wp).sqrt() + lqb;
    mpfr_exp(ratio.get(), r.upper().get(), MPFR_RNDU);
    mpfr_ui_sub(tmp.get(), 1, ratio.get(), MPFR_RNDD);
    mpfr_div(term.get(), term.get(), tmp.get(), MPFR_RNDU);
    acc.inflate(term);
    return acc;
}

struct PairTerm {
    std::size_t i1 = 0, i2 = 0;
    BinaryQuadraticForm q1, q2;
    RealBall log_abs;
};

struct LhsResult {
    PairSet pairs;
    std::vector<PairTerm> terms;
    RealBall sum;
};

// Sum of log|pi_p(tau_Q1) - pi_p(tau_Q2)| over the pair set.
inline LhsResult lhs_sum_detail(i64 p, i64 d1, i64 d2, mpfr_prec_t bits, i64 value_bound = 0) {
    LhsResult R;
    R.pairs = s_pairs(p, d1, d2, value_bound);
    if (!R.pairs.exhaustive) throw EnumerationIncomplete("pair set not decided below the value bound");
    std::vector<ComplexBall> v1, v2;
    for (auto& c : R.pairs.classes1) v1.push_back(eval_pi(p, cm_point(c.representative), bits));
    for (auto& c : R.pairs.classes2) v2.push_back(eval_pi(p, cm_point(c.representative), bits));
    std::vector<const ClassPair*> members;
    for (auto& cp : R.pairs.pairs)
        if (cp.matched) members.push_back(&cp);
    R.terms.resize(members.size());
    parallel_for(members.size(), [&](std::size_t k) {
        const ClassPair& cp = *members[k];
        PairTerm t;
        t.i1 = cp.i1;
        t.i2 = cp.i2;
        t.q1 = R.pairs.classes1[cp.i1].representative;
        t.q2 = R.pairs.classes2[cp.i2].representative;
        t.log_abs = (v1[cp.i1] - v2[cp.i2]).log_abs();
        R.terms[k] = std::move(t);
    });
    R.sum = RealBall::exact(0, bits + 32);
    for (auto& t : R.terms) R.sum = R.sum + t.log_abs;
    return R;
}

inline RealBall lhs_sum(i64 p, i64 d1, i64 d2, mpfr_prec_t bits) { return lhs_sum_detail(p, d1, d2, bits).sum; }

}  // namespace hauptwerk
