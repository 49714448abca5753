#pragma once
// Dedekind eta, eta quotients, cusps of Gamma0(N)/Gamma1(N), expansions at cusps.
#include <gmpxx.h>

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "puiseux.hpp"

namespace hauptwerk {

struct Mat2 {
    i64 a = 1, b = 0, c = 0, d = 1;
    i64 det() const { return a * d - b * c; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    Mat2 inverse() const { return {d, -b, -c, a}; }  // det 1 only
    bool operator==(const Mat2&) const = default;
    static Mat2 T(i64 k = 1) { return {1, k, 0, 1}; }
    static Mat2 S() { return {0, -1, 1, 0}; }
};

// q^(1/24) prod (1 - q^n), exponents below prec
inline PuiseuxSeries eta_series(const Rational& prec) {
    if (prec <= rat(1, 24)) throw InvalidArgument("eta_series needs prec > 1/24");
    Rational x = prec * 24;
    Integer cz = x.get_num() / x.get_den();
    if (cz * x.get_den() < x.get_num()) cz += 1;
    i64 P = cz.get_si();
    PuiseuxSeries s(24, 1, P);
    for (i64 j = 0;; ++j) {
        bool any = false;
        for (i64 jj : {j, -j}) {
            if (j == 0 && jj != 0) continue;
            i64 e = (6 * jj - 1) * (6 * jj - 1);
            if (e < P) {
                s.set(e, Cyclotomic(jj % 2 == 0 ? 1 : -1));
                any = true;
            }
        }
        if (!any && j > 0) break;
    }
    return s;
}

inline Rational dedekind_sum(i64 d, i64 c) {
    if (c < 1) throw InvalidArgument("dedekind_sum needs c >= 1");
    if (gcd64(d, c) != 1) throw NotCoprime("dedekind_sum arguments not coprime");
    Integer acc = 0;
    i64 dm = pmod(d, c);
    for (i64 i = 1; i < c; ++i) {
        i64 r = static_cast<i64>((static_cast<__int128>(dm) * i) % c);
        acc += Integer(2 * i - c) * Integer(2 * r - c);
    }
    Rational s(acc, Integer(4) * c * c);
    s.canonicalize();
    return s;
}

// For c > 0: eta(g tau) = e(x) (c tau + d)^(1/2) eta(tau), principal branch.
inline Rational eta_multiplier_exponent(const Mat2& g) {
    if (g.c <= 0) throw InvalidArgument("multiplier exponent needs c > 0");
    Rational x = rat(g.a + g.d, 12 * g.c) - dedekind_sum(g.d, g.c) - rat(1, 4);
    x /= 2;
    return x;
}

struct EtaQuotient {
    i64 level = 1;
    std::map<i64, i64> exps;  // m -> r_m
    Rational weight() const {
        i64 s = 0;
        for (auto [m, r] : exps) s += r;
        return rat(s, 2);
    }
    Rational order_at_infinity() const {
        i64 s = 0;
        for (auto [m, r] : exps) s += m * r;
        return rat(s, 24);
    }
    std::string str() const {
        std::string s;
        for (auto [m, r] : exps) {
            if (!s.empty()) s += " ";
            s += "eta(" + std::to_string(m) + "t)^" + std::to_string(r);
        }
        return s;
    }
};

// Expansion of a weight-0 eta quotient f at f|M, exponents below prec.
// The result is a series in q^(1/H) with H chosen as needed.
inline PuiseuxSeries expand_eta_quotient(const EtaQuotient& f, Mat2 M, const Rational& prec) {
    if (M.det() != 1) throw InvalidArgument("matrix must have determinant 1");
    if (f.weight() != 0) throw WeightNotZero(f.str());
    if (M.c < 0 || (M.c == 0 && M.d < 0)) M = -M;
    struct Piece {
        i64 r, g, D, B;
        Rational x;
    };
    std::vector<Piece> pieces;
    Rational E0 = 0, phase = 0, sq = 1;  // constant: e(phase) * sqrt(sq)
    for (auto [m, r] : f.exps) {
        if (r == 0) continue;
        if (M.c == 0) {
            // m*(tau + b): eta(m tau + m b) = e(m b / 24) eta(m tau)
            pieces.push_back({r, m, 1, 0, 0});
            phase += rat(m * M.b * r, 24);
            E0 += rat(m * r, 24);
            continue;
        }
        i64 ma = m * M.a, mb = m * M.b;
        i64 g = gcd64(std::llabs(ma), M.c);
        i64 alpha = ma / g, gam = M.c / g;
        i64 x, y;
        egcd(alpha, gam, x, y);
        i64 delta = x, beta = -y;
        i64 D = m / g;
        i64 B0 = delta * mb - beta * M.d;
        i64 k = floordiv(B0, D);
        i64 B = B0 - k * D;
        delta += k * gam;
        beta += k * alpha;
        Mat2 gm{alpha, beta, gam, delta};
        if (gm.det() != 1 || gam * B + delta * D != M.d || gam * g != M.c)
            throw MultiplierMismatch("eta decomposition failed");
        if (gam <= 0) throw MultiplierMismatch("automorphy branch mismatch");
        Rational xm = eta_multiplier_exponent(gm);
        pieces.push_back({r, g, D, B, xm});
        phase += xm * r + rat(r * B, 24 * D);
        // D^(-r/2)
        for (i64 i = 0; i < std::llabs(r); ++i) sq = r > 0 ? Rational(sq / D) : Rational(sq * D);
        E0 += rat(r * g, 24 * D);
    }
    // all (c tau + d)^(1/2) factors share one branch; total power sum r_m / 2 = 0
    Cyclotomic C = Cyclotomic::e(phase) * sqrt_rational(sq);
    C = C.reduced();

    Rational span = prec - E0;
    i64 L = 1;
    for (auto& p : pieces) L = std::lcm(L, p.D);
    Rational xl = span * L;
    Integer cz = xl.get_num() / xl.get_den();
    if (cz * xl.get_den() < xl.get_num()) cz += 1;
    i64 PL = std::max<i64>(cz.get_si(), 0);  // exponents k/L with k < PL
    PuiseuxSeries prod = PuiseuxSeries::one(L, PL);
    for (auto& p : pieces) {
        i64 step = p.g * (L / p.D);  // exponent of x in units 1/L
        i64 terms = step > 0 ? (PL + step - 1) / step : 1;
        auto fz = euler_product_power(p.r, std::max<i64>(terms, 1));
        PuiseuxSeries s(L, 0, PL);
        for (i64 n = 0; n < static_cast<i64>(fz.size()); ++n) {
            if (fz[n] == 0) continue;
            Cyclotomic c = p.D == 1 ? Cyclotomic(Rational(fz[n]))
                                    : root_of_unity(p.B * n, p.D).scaled(Rational(fz[n]));
            s.set(n * step, c);
        }
        prod = prod * s;
    }
    prod = prod.scaled(C);
    // shift by E0
    i64 H = std::lcm(L, E0.get_den().get_si());
    prod = prod.rescaled(H);
    Rational sh = E0 * H;
    return prod.shifted(sh.get_num().get_si()).normalize();
}

enum class CuspGroup { Gamma0, Gamma1 };

struct CuspDatum {
    i64 a = 1, c = 0;
    Mat2 M;
    i64 m = 1;       // gcd(c, N)
    i64 h = 1;       // N / m
    i64 htilde = 1;  // exponent denominator of the expansion
    i64 width = 1;   // width in the chosen group
    bool regular = true;
    std::string label() const {
        if (c == 0) return "Infinity";
        return std::to_string(a) + "/" + std::to_string(c);
    }
};

inline CuspDatum make_cusp(i64 N, i64 a, i64 c, CuspGroup grp) {
    CuspDatum s;
    s.a = a;
    s.c = c;
    i64 x, y;
    if (egcd(a, c, x, y) != 1) throw NotCoprime("cusp a/c not reduced");
    s.M = {a, -y, c, x};
    s.m = gcd64(c, N);
    s.h = N / s.m;
    s.regular = !(grp == CuspGroup::Gamma1 && N == 4 && pmod(c, 4) == 2);
    s.htilde = s.regular ? s.h : 1;
    s.width = grp == CuspGroup::Gamma1 ? s.h : N / gcd64(c * c, N);
    return s;
}

inline i64 gamma1_cusp_count(i64 N) {
    if (N <= 2) return N;
    if (N == 3) return 2;
    if (N == 4) return 3;
    i64 s = 0;
    for (i64 d : divisors(N)) s += euler_phi(d) * euler_phi(N / d);
    return s / 2;
}
inline i64 gamma0_cusp_count(i64 N) {
    i64 s = 0;
    for (i64 d : divisors(N)) s += euler_phi(gcd64(d, N / d));
    return s;
}

inline std::vector<CuspDatum> cusp_representatives(CuspGroup grp, i64 N) {
    if (N < 1) throw InvalidArgument("level must be positive");
    std::vector<CuspDatum> out;
    auto pick_a = [](i64 a0, i64 g, i64 c) {
        for (i64 a = a0;; a += g)
            if (gcd64(a, c) == 1) return a;
    };
    if (grp == CuspGroup::Gamma0) {
        for (i64 c : divisors(N)) {
            i64 g = gcd64(c, N / c);
            for (i64 a0 = 0; a0 < g; ++a0) {
                if (gcd64(a0, g) != 1) continue;
                if (c == N) {
                    out.push_back(make_cusp(N, 1, 0, grp));
                } else {
                    out.push_back(make_cusp(N, pick_a(a0, g, c), c, grp));
                }
            }
        }
        std::stable_sort(out.begin(), out.end(), [](auto& x, auto& y) { return (x.c == 0) > (y.c == 0); });
        if (static_cast<i64>(out.size()) != gamma0_cusp_count(N))
            throw IdentityViolation("Gamma0 cusp count mismatch");
        return out;
    }
    // Gamma1: classes (c mod N, a mod gcd(c,N)) up to sign
    std::map<std::pair<i64, i64>, bool> seen;
    for (i64 c0 = 0; c0 < N; ++c0) {
        i64 g = gcd64(c0, N);
        for (i64 a0 = 0; a0 < g; ++a0) {
            if (gcd64(a0, g) != 1) continue;
            std::pair<i64, i64> key{c0, a0}, neg{pmod(-c0, N), pmod(-a0, g)};
            if (seen.count(key) || seen.count(neg)) continue;
            seen[key] = true;
            // canonical member of {key, neg}
            auto cval = [N](i64 c) { return c == 0 ? N : c; };
            std::pair<i64, i64> best = key;
            if (std::make_pair(cval(neg.first), neg.second) < std::make_pair(cval(key.first), key.second))
                best = neg;
            i64 c = cval(best.first);
            if (c == N && (best.second == 1 % N || N <= 2)) {
                out.push_back(make_cusp(N, 1, 0, grp));
                continue;
            }
            i64 a = pick_a(best.second, g, c);
            out.push_back(make_cusp(N, a, c, grp));
        }
    }
    std::stable_sort(out.begin(), out.end(), [N](auto& x, auto& y) {
        auto kx = std::make_tuple(x.c != 0, x.c, x.a), ky = std::make_tuple(y.c != 0, y.c, y.a);
        return kx < ky;
    });
    if (static_cast<i64>(out.size()) != gamma1_cusp_count(N))
        throw IdentityViolation("Gamma1 cusp count mismatch");
    return out;
}

struct CuspExpansion {
    CuspDatum cusp;
    PuiseuxSeries series;  // in q^(1/htilde)
    // exponents n/htilde with n = t mod htilde
    PuiseuxSeries slice(i64 t) const { return series.residue_class(t, cusp.htilde); }
    // A_s(n): coefficient of q^(n/htilde)
    Cyclotomic A(i64 n) const { return series.coefficient(n); }
};

inline PuiseuxSeries to_denominator(const PuiseuxSeries& s, i64 h) {
    PuiseuxSeries c = s.compacted();
    if (h % c.hden() != 0) throw IdentityViolation("expansion not supported on (1/" + std::to_string(h) + ")Z");
    return c.rescaled(h);
}

inline CuspExpansion expand_at_cusp(const EtaQuotient& f, const CuspDatum& s, const Rational& prec) {
    CuspExpansion e;
    e.cusp = s;
    e.series = to_denominator(expand_eta_quotient(f, s.M, prec), s.htilde);
    return e;
}

// ---------------------------------------------------------------- catalog

inline const char* hauptmodul_catalog_json() {
    return R"([
  {"level": 2,  "exps": {"1": 24, "2": -24}},
  {"level": 3,  "exps": {"1": 12, "3": -12}},
  {"level": 4,  "exps": {"1": 8, "4": -8}},
  {"level": 5,  "exps": {"1": 6, "5": -6}},
  {"level": 6,  "exps": {"1": 5, "2": -1, "3": 1, "6": -5}},
  {"level": 7,  "exps": {"1": 4, "7": -4}},
  {"level": 8,  "exps": {"1": 4, "2": -2, "4": 2, "8": -4}},
  {"level": 9,  "exps": {"1": 3, "9": -3}},
  {"level": 10, "exps": {"1": 3, "2": -1, "5": 1, "10": -3}},
  {"level": 12, "exps": {"1": -1, "3": 3, "4": 1, "12": -3}},
  {"level": 13, "exps": {"1": 2, "13": -2}},
  {"level": 16, "exps": {"1": 2, "2": -1, "8": 1, "16": -2}},
  {"level": 18, "exps": {"1": -1, "2": 2, "9": 1, "18": -2}},
  {"level": 25, "exps": {"1": 1, "25": -1}}
]
)";
}

inline std::map<i64, EtaQuotient> parse_catalog(const std::string& text) {
    std::map<i64, EtaQuotient> out;
    auto j = nlohmann::json::parse(text);
    for (auto& e : j) {
        EtaQuotient q;
        q.level = e.at("level").get<i64>();
        for (auto& [k, v] : e.at("exps").items()) q.exps[std::stoll(k)] = v.get<i64>();
        out[q.level] = q;
    }
    return out;
}

inline const std::vector<i64>& catalog_levels() {
    static const std::vector<i64> lv{2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25};
    return lv;
}

inline bool in_catalog(i64 N) {
    for (i64 n : catalog_levels())
        if (n == N) return true;
    return false;
}

// Checks weight 0, q^-1 + O(1) at infinity, holomorphy at the other cusps.
inline void validate_hauptmodul(const EtaQuotient& f) {
    i64 N = f.level;
    if (f.weight() != 0) throw WeightNotZero("catalog entry for level " + std::to_string(N));
    for (auto [m, r] : f.exps)
        if (N % m != 0) throw IdentityViolation("eta index does not divide level");
    for (const auto& s : cusp_representatives(CuspGroup::Gamma0, N)) {
        PuiseuxSeries e = expand_eta_quotient(f, s.M, Rational(1));
        if (s.c == 0) {
            if (e.lowest_exponent() != -1 || e.coefficient_at(Rational(-1)) != Cyclotomic(1))
                throw IdentityViolation("catalog entry " + std::to_string(N) + " is not q^-1 + O(1)");
            for (auto& [n, c] : e.coeffs())
                if (rat(n, e.hden()) < 0 && rat(n, e.hden()) != -1)
                    throw IdentityViolation("catalog entry has extra polar terms");
        } else if (e.lowest_exponent() < 0) {
            throw IdentityViolation("catalog entry " + std::to_string(N) + " has a pole at " + s.label());
        }
    }
}

inline const EtaQuotient& hauptmodul(i64 N) {
    static std::mutex mu;
    static std::map<i64, EtaQuotient> validated;
    static const std::map<i64, EtaQuotient> catalog = parse_catalog(hauptmodul_catalog_json());
    auto it = catalog.find(N);
    if (it == catalog.end()) throw UnsupportedLevel("unsupported level " + std::to_string(N));
    std::lock_guard<std::mutex> lock(mu);
    auto v = validated.find(N);
    if (v != validated.end()) return v->second;
    validate_hauptmodul(it->second);
    return validated.emplace(N, it->second).first->second;
}

inline i64 lambda2(i64 N) { return N == 2 ? 2 : 1; }
inline i64 gamma_index(i64 N) { return N <= 2 ? 1 : euler_phi(N); }
// 2 / (lambda_{2,N} [Gamma0(N):Gamma1(N)])
inline Rational induction_prefactor(i64 N) { return rat(2, lambda2(N) * gamma_index(N)); }

// Klein j = E4^3 / Delta, exponents below prec
inline PuiseuxSeries j_series(i64 prec) {
    if (prec < 1) throw InvalidArgument("j_series needs prec >= 1");
    i64 T = prec + 1;
    std::vector<Integer> e4(T, 0);
    e4[0] = 1;
    for (i64 n = 1; n < T; ++n) {
        Integer s = 0;
        for (i64 d = 1; d <= n; ++d)
            if (n % d == 0) s += Integer(d) * d * d;
        e4[n] = 240 * s;
    }
    auto mul = [T](const std::vector<Integer>& a, const std::vector<Integer>& b) {
        std::vector<Integer> r(T, 0);
        for (i64 i = 0; i < T; ++i)
            for (i64 k = 0; i + k < T; ++k) r[i + k] += a[i] * b[k];
        return r;
    };
    auto e43 = mul(mul(e4, e4), e4);
    auto inv = euler_product_power(-24, T);
    auto jj = mul(e43, inv);  // times q^-1
    PuiseuxSeries s(1, -1, prec);
    for (i64 n = 0; n < T; ++n)
        if (jj[n] != 0) s.set(n - 1, Cyclotomic(Rational(jj[n])));
    return s.normalize();
}

}  // namespace hauptwerk
