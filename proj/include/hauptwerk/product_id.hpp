#pragma once
// Coefficient-exact check of the product expansion of pi_N(z1) - pi_N(z2),
// and Faber polynomials of pi_N.
#include <map>
#include <string>
#include <vector>

#include "weilrep.hpp"

namespace hauptwerk {

// pi_N at infinity, exponents below prec
inline PuiseuxSeries hauptmodul_at_infinity(i64 N, i64 prec) {
    return expand_eta_quotient(hauptmodul(N), Mat2{1, 0, 0, 1}, Rational(prec));
}

// sum c(n)(q1^n - q2^n), exponents -1..K in each variable
inline BivariateSeries lhs_difference(i64 N, i64 K) {
    if (K < 0) throw InvalidArgument("window must be nonnegative");
    PuiseuxSeries pi = hauptmodul_at_infinity(N, K + 1);
    BivariateSeries r(-1, -1, K + 1, K + 1);
    for (auto& [n, c] : pi.coeffs()) {
        if (n == 0) continue;
        r.add_to(n, 0, c);
        r.add_to(0, n, -c);
    }
    return r;
}

// A(l, d) for every d | N, as integers, l below the bound each window needs
struct ExponentTable {
    i64 N = 1;
    std::map<i64, std::vector<Integer>> A;  // A[d][l + 1] = A(l, d)
    Integer get(i64 l, i64 d) const {
        const auto& v = A.at(d);
        if (l + 1 >= static_cast<i64>(v.size())) throw OutOfPrecision("A(l,d) beyond computed range");
        return v[l + 1];
    }
};

// largest mn used by a factor in window K for divisor d
inline i64 exponent_bound(i64 N, i64 d, i64 K) {
    i64 step = N / d, mx = (K + 1) / step;
    return mx * mx;
}

inline ExponentTable product_exponent_table(i64 N, i64 K) {
    if (!in_catalog(N)) throw UnsupportedLevel("unsupported level " + std::to_string(N));
    ExponentTable T;
    T.N = N;
    auto ds = divisors(N);
    std::vector<PuiseuxSeries> ser(ds.size());
    for (size_t i = 0; i < ds.size(); ++i) {
        i64 prec = std::max<i64>(exponent_bound(N, ds[i], K) + 1, 1);
        ser[i] = product_exponents_from(level_expansions(N, Rational(prec), ds[i]), ds[i], prec);
    }
    for (size_t i = 0; i < ds.size(); ++i) {
        std::vector<Integer> v(ser[i].prec() + 1, 0);
        for (auto& [n, c] : ser[i].coeffs()) v[n + 1] = c.rational_value().get_num();
        T.A[ds[i]] = std::move(v);
    }
    return T;
}

// (q1^-1 - q2^-1) prod_{m,n>0} prod_{d|N} (1 - (q1^m q2^n)^(N/d))^A(mn,d), exponents -1..K
inline BivariateSeries rhs_product(const ExponentTable& T, i64 K) {
    i64 N = T.N;
    std::vector<ProductFactor> fs;
    for (auto& [d, v] : T.A) {
        i64 step = N / d;
        for (i64 m = 1; m * step <= K + 1; ++m)
            for (i64 n = 1; n * step <= K + 1; ++n) {
                Integer e = T.get(m * n, d);
                if (e == 0) continue;
                fs.push_back({m, n, step, e});
            }
    }
    BivariateSeries prod = biv_product(fs, K + 1, K + 1);
    BivariateSeries pre(-1, -1, K + 2, K + 2);
    pre.add_to(-1, 0, Cyclotomic(1));
    pre.add_to(0, -1, Cyclotomic(-1));
    return (pre * prod).truncated(K + 1, K + 1);
}

inline BivariateSeries rhs_product(i64 N, i64 K) {
    if (K < 0) throw InvalidArgument("window must be nonnegative");
    return rhs_product(product_exponent_table(N, K), K);
}

struct Mismatch {
    i64 e1, e2;
    Cyclotomic lhs, rhs;
};

struct VerificationReport {
    i64 N = 1;
    i64 K = 0;
    bool verified = false;
    std::vector<Mismatch> mismatches;
    size_t coefficients_compared = 0;
    size_t factors = 0;
};

inline VerificationReport compare_sides(i64 N, i64 K, const BivariateSeries& lhs, const BivariateSeries& rhs) {
    VerificationReport rep;
    rep.N = N;
    rep.K = K;
    for (i64 i = -1; i <= K; ++i)
        for (i64 j = -1; j <= K; ++j) {
            Cyclotomic a = lhs.coefficient(i, j), b = rhs.coefficient(i, j);
            ++rep.coefficients_compared;
            if (a != b) rep.mismatches.push_back({i, j, a, b});
        }
    rep.verified = rep.mismatches.empty();
    return rep;
}

inline VerificationReport verify_product(const ExponentTable& T, i64 K) {
    auto rep = compare_sides(T.N, K, lhs_difference(T.N, K), rhs_product(T, K));
    for (auto& [d, v] : T.A) {
        i64 step = T.N / d, mx = (K + 1) / step;
        rep.factors += static_cast<size_t>(mx * mx);
    }
    return rep;
}

inline VerificationReport verify_product(i64 N, i64 K) { return verify_product(product_exponent_table(N, K), K); }

struct FaberResult {
    i64 N = 1, n = 1;
    std::vector<Cyclotomic> poly;  // poly[k] = coefficient of x^k, k = 0..n
    bool normalized = false;       // P(pi_N) = q^-n + O(q)
};

// Coefficient of q1^n in -q1 d/dq1 pi(z1) / (pi(z1) - pi(z2)), as a q2-series.
inline std::vector<PuiseuxSeries> faber_generating_coefficients(i64 N, i64 n, i64 prec) {
    PuiseuxSeries pi = hauptmodul_at_infinity(N, prec + 2 * n + 2);
    std::vector<Cyclotomic> c(n + 1, Cyclotomic(0));  // c[k] = coefficient of q^k in pi
    for (i64 k = 0; k <= n; ++k) c[k] = pi.coefficient(k);
    i64 P = pi.prec();
    std::vector<PuiseuxSeries> f(n + 1);
    f[0] = PuiseuxSeries::one(1, P);
    for (i64 j = 1; j <= n; ++j) {
        // numerator 1 - sum_k k c(k) q1^(k+1); denominator 1 - q1 X + sum_k c(k) q1^(k+1)
        PuiseuxSeries s = pi * f[j - 1];
        if (j >= 2) s = s + PuiseuxSeries::monomial(c[j - 1].scaled(Rational(-(j - 1))), 0, 1, P);
        for (i64 k = 0; k <= j - 1; ++k)
            if (!c[k].is_zero()) s = s - f[j - 1 - k].scaled(c[k]);
        f[j] = s;
    }
    return f;
}

inline FaberResult faber_check(i64 N, i64 n, i64 prec) {
    if (n < 1) throw InvalidArgument("n must be positive");
    if (n > prec - 1) throw InvalidArgument("need n <= prec - 1");
    if (!in_catalog(N)) throw UnsupportedLevel("unsupported level " + std::to_string(N));
    auto f = faber_generating_coefficients(N, n, prec);
    PuiseuxSeries G = f[n];
    PuiseuxSeries pi = hauptmodul_at_infinity(N, prec + 2 * n + 2);
    std::vector<PuiseuxSeries> pw(n + 1);
    pw[0] = PuiseuxSeries::one(1, pi.prec());
    for (i64 k = 1; k <= n; ++k) pw[k] = pw[k - 1] * pi;
    FaberResult R;
    R.N = N;
    R.n = n;
    R.poly.assign(n + 1, Cyclotomic(0));
    PuiseuxSeries rest = G;
    for (i64 k = n; k >= 0; --k) {
        Cyclotomic a = rest.coefficient(-k);
        R.poly[k] = a;
        if (!a.is_zero()) rest = rest - pw[k].scaled(a);
    }
    rest = rest.truncated(std::min<i64>(rest.prec(), prec));
    for (auto& [e, c] : rest.coeffs())
        if (!c.is_zero()) throw DegreeMismatch("q1^" + std::to_string(n) + " coefficient is not a polynomial of degree n in pi_N");
    // P(pi) = q^-n + 0 + O(q)
    PuiseuxSeries val = PuiseuxSeries::zero(1, pi.prec());
    for (i64 k = 0; k <= n; ++k)
        if (!R.poly[k].is_zero()) val = val + pw[k].scaled(R.poly[k]);
    bool ok = R.poly[n] == Cyclotomic(1) && val.coefficient(-n) == Cyclotomic(1) && val.coefficient(0).is_zero();
    for (i64 e = -n + 1; e < 0; ++e)
        if (!val.coefficient(e).is_zero()) ok = false;
    R.normalized = ok;
    return R;
}

}  // namespace hauptwerk
