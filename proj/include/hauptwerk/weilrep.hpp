#pragma once
// Discriminant form of L_N, Weil representation, induced vector-valued forms.
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eta.hpp"
#include "parallel.hpp"

namespace hauptwerk {

using MuKey = std::pair<i64, i64>;

struct WeilVector {
    i64 N = 1;
    std::map<MuKey, Cyclotomic> c;

    void add(i64 j, i64 k, const Cyclotomic& v) {
        if (v.is_zero()) return;
        MuKey key{pmod(j, N), pmod(k, N)};
        auto [it, ins] = c.emplace(key, v);
        if (!ins) {
            it->second += v;
            if (it->second.is_zero()) c.erase(it);
        }
    }
    Cyclotomic at(i64 j, i64 k) const {
        auto it = c.find({pmod(j, N), pmod(k, N)});
        return it == c.end() ? Cyclotomic(0) : it->second;
    }
    friend bool operator==(const WeilVector& a, const WeilVector& b) {
        for (auto& [k, v] : a.c)
            if (b.at(k.first, k.second) != v) return false;
        for (auto& [k, v] : b.c)
            if (a.at(k.first, k.second) != v) return false;
        return true;
    }
};

inline WeilVector basis_vector(i64 N, i64 j, i64 k) {
    WeilVector v{N, {}};
    v.add(j, k, Cyclotomic(1));
    return v;
}

// Q(mu_{j,k}) = -jk/N mod 1
inline Rational disc_quadratic(i64 N, i64 j, i64 k) { return rat(pmod(-j * k, N), N); }
// (mu_{j,k}, mu_{j',k'}) = -(jk' + j'k)/N mod 1
inline Rational disc_bilinear(i64 N, i64 j, i64 k, i64 j2, i64 k2) { return rat(pmod(-(j * k2 + j2 * k), N), N); }

// N * Q(mu_{j,k}) mod N is -jk; e(-Q(mu)) = zeta_N^{jk}
inline i64 weil_T_exponent(i64 N, i64 j, i64 k) { return pmod(j * k, N); }
// e((gamma, mu)) = zeta_N^{-(j k' + j' k)}
inline i64 weil_S_exponent(i64 N, i64 j, i64 k, i64 j2, i64 k2) { return pmod(-(j * k2 + j2 * k), N); }

namespace detail {

// Vector over Z[zeta_N] stored densely as integer polynomials of degree < N, with a rational scale.
struct GroupRingVector {
    i64 N;
    std::vector<Integer> a;  // index ((j*N + k)*N + r)
    Rational scale = 1;

    explicit GroupRingVector(i64 n) : N(n), a(n * n * n, 0) {}
    Integer& at(i64 j, i64 k, i64 r) { return a[(j * N + k) * N + r]; }

    static GroupRingVector from(const WeilVector& v) {
        GroupRingVector g(v.N);
        // common denominator of all coordinates
        Integer den = 1;
        for (auto& [key, c] : v.c) {
            Cyclotomic x = c.lifted(std::lcm(c.order(), v.N) == v.N ? v.N : c.order());
            (void)x;
            for (auto& q : c.coeffs()) den = lcm(den, Integer(q.get_den()));
        }
        g.scale = Rational(1) / Rational(den);
        for (auto& [key, c] : v.c) {
            if (v.N % c.order() != 0) throw InvalidArgument("coefficient outside Q(zeta_N)");
            i64 f = v.N / c.order();
            for (size_t i = 0; i < c.coeffs().size(); ++i) {
                Rational q = c.coeffs()[i] * den;
                g.at(key.first, key.second, pmod(static_cast<i64>(i) * f, v.N)) += q.get_num();
            }
        }
        return g;
    }
    WeilVector to_vector() const {
        WeilVector v{N, {}};
        for (i64 j = 0; j < N; ++j)
            for (i64 k = 0; k < N; ++k) {
                std::vector<Rational> p(N);
                bool nz = false;
                for (i64 r = 0; r < N; ++r) {
                    const Integer& x = a[(j * N + k) * N + r];
                    if (x != 0) nz = true;
                    p[r] = Rational(x) * scale;
                }
                if (nz) v.add(j, k, Cyclotomic::from_poly(N, std::move(p)));
            }
        return v;
    }
    GroupRingVector apply_T(i64 power) const {
        GroupRingVector o(N);
        o.scale = scale;
        for (i64 j = 0; j < N; ++j)
            for (i64 k = 0; k < N; ++k) {
                i64 sh = pmod(weil_T_exponent(N, j, k) * power, N);
                for (i64 r = 0; r < N; ++r) o.at(j, k, (r + sh) % N) = a[(j * N + k) * N + r];
            }
        return o;
    }
    // separable transform: out(j',k') = (1/N) sum v(j,k) zeta^{-(j k' + j' k)}
    GroupRingVector apply_S() const {
        std::vector<Integer> w(N * N * N, 0);  // w[(k*N + k')*N + r] = sum_j v(j,k) zeta^{-j k'}
        for (i64 j = 0; j < N; ++j)
            for (i64 k = 0; k < N; ++k) {
                const Integer* src = &a[(j * N + k) * N];
                bool nz = false;
                for (i64 r = 0; r < N; ++r)
                    if (src[r] != 0) { nz = true; break; }
                if (!nz) continue;
                for (i64 k2 = 0; k2 < N; ++k2) {
                    i64 sh = pmod(-j * k2, N);
                    Integer* dst = &w[(k * N + k2) * N];
                    for (i64 r = 0; r < N; ++r)
                        if (src[r] != 0) dst[(r + sh) % N] += src[r];
                }
            }
        GroupRingVector o(N);
        o.scale = scale / N;
        for (i64 k = 0; k < N; ++k)
            for (i64 k2 = 0; k2 < N; ++k2) {
                const Integer* src = &w[(k * N + k2) * N];
                bool nz = false;
                for (i64 r = 0; r < N; ++r)
                    if (src[r] != 0) { nz = true; break; }
                if (!nz) continue;
                for (i64 j2 = 0; j2 < N; ++j2) {
                    i64 sh = pmod(-j2 * k, N);
                    for (i64 r = 0; r < N; ++r)
                        if (src[r] != 0) o.at(j2, k2, (r + sh) % N) += src[r];
                }
            }
        return o;
    }
};

inline std::vector<i64> reduce_int_mod_phi(std::vector<i64> p, i64 n) {
    const auto& phi = cyclotomic_poly(n);
    i64 deg = static_cast<i64>(phi.size()) - 1;
    for (i64 k = static_cast<i64>(p.size()) - 1; k >= deg; --k) {
        i64 c = p[k];
        if (c == 0) continue;
        for (i64 i = 0; i < deg; ++i) p[k - deg + i] -= c * phi[i];
        p[k] = 0;
    }
    p.resize(deg);
    return p;
}

}  // namespace detail

enum class WeilGen { T, S };

// Structured matrix of rho(T) or rho(S) in the phi_{j,k} basis.
struct WeilMatrix {
    WeilGen gen;
    i64 N;
    // entry (gamma, mu) = scale * zeta_N^{exponent}, or zero
    Cyclotomic entry(i64 gj, i64 gk, i64 mj, i64 mk) const {
        if (gen == WeilGen::T) {
            if (gj != mj || gk != mk) return Cyclotomic(0);
            return root_of_unity(weil_T_exponent(N, mj, mk), N);
        }
        return root_of_unity(weil_S_exponent(N, gj, gk, mj, mk), N).scaled(rat(1, N));
    }
    WeilVector apply(const WeilVector& v) const {
        auto g = detail::GroupRingVector::from(v);
        return (gen == WeilGen::T ? g.apply_T(1) : g.apply_S()).to_vector();
    }
    // dense form, rows/cols indexed by j*N + k
    std::vector<std::vector<Cyclotomic>> dense() const {
        std::vector<std::vector<Cyclotomic>> m(N * N, std::vector<Cyclotomic>(N * N));
        for (i64 a = 0; a < N * N; ++a)
            for (i64 b = 0; b < N * N; ++b) m[a][b] = entry(a / N, a % N, b / N, b % N);
        return m;
    }
};

inline WeilMatrix weil_action(WeilGen gen, i64 N) {
    if (N < 2) throw InvalidArgument("Weil representation needs N >= 2");
    return WeilMatrix{gen, N};
}

// rho(M) for M in SL2(Z), through an S/T word
inline WeilVector weil_apply(const Mat2& M0, const WeilVector& v) {
    // M = T^{k1} S T^{k2} S ... (+-)T^{x}
    std::vector<std::pair<char, i64>> word;
    Mat2 M = M0;
    while (M.c != 0) {
        i64 k = floordiv(2 * M.a + M.c, 2 * M.c);  // nearest integer to a/c
        if (k != 0) word.push_back({'T', k});
        Mat2 Mp{M.a - k * M.c, M.b - k * M.d, M.c, M.d};
        word.push_back({'S', 1});
        M = {Mp.c, Mp.d, -Mp.a, -Mp.b};
    }
    bool neg = M.a == -1;
    i64 x = neg ? -M.b : M.b;
    auto g = detail::GroupRingVector::from(v);
    if (x != 0) g = g.apply_T(x);
    if (neg) g = g.apply_S().apply_S();
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        g = it->first == 'T' ? g.apply_T(it->second) : g.apply_S();
    return g.to_vector();
}

struct WeilRelationReport {
    bool s2_negation = false;   // rho(S)^2 phi_mu = phi_{-mu}
    bool s4_identity = false;   // rho(S)^4 = I
    bool st3_equals_s2 = false; // (rho(S) rho(T))^3 = rho(S)^2
    bool ok() const { return s2_negation && s4_identity && st3_equals_s2; }
};

// Entrywise exact check. S^2 and S T S are computed as exponent histograms;
// (ST)^3 = S^2 is checked in the equivalent form S T S = T^-1 S T^-1.
inline WeilRelationReport check_weil_relations(i64 N) {
    WeilRelationReport rep;
    i64 n2 = N * N;
    i64 phi = euler_phi(N);
    std::vector<i64> J(n2), K(n2), neg(n2);
    for (i64 i = 0; i < n2; ++i) {
        J[i] = i / N;
        K[i] = i % N;
        neg[i] = pmod(-J[i], N) * N + pmod(-K[i], N);
    }
    auto sexp = [&](i64 g, i64 m) { return pmod(-(J[g] * K[m] + J[m] * K[g]), N); };
    bool s2 = true, sts = true;
    std::vector<i64> h2(N), h3(N);
    for (i64 g = 0; g < n2 && (s2 || sts); ++g)
        for (i64 m = 0; m < n2; ++m) {
            std::fill(h2.begin(), h2.end(), 0);
            std::fill(h3.begin(), h3.end(), 0);
            for (i64 b = 0; b < n2; ++b) {
                i64 e = sexp(g, b) + sexp(b, m);
                ++h2[e % N];
                ++h3[(e + J[b] * K[b]) % N];
            }
            // S^2: N^2 * delta(g, -m)
            if (m == neg[g]) h2[0] -= n2;
            auto r2 = detail::reduce_int_mod_phi(h2, N);
            for (i64 i = 0; i < phi; ++i)
                if (r2[i] != 0) s2 = false;
            // S T S vs T^-1 S T^-1, both scaled by N^2
            i64 e = pmod(-J[g] * K[g] + sexp(g, m) - J[m] * K[m], N);
            h3[e] -= N;
            auto r3 = detail::reduce_int_mod_phi(h3, N);
            for (i64 i = 0; i < phi; ++i)
                if (r3[i] != 0) sts = false;
        }
    rep.s2_negation = s2;
    // S^2 is the permutation mu -> -mu, whose square is the identity
    bool inv = true;
    for (i64 i = 0; i < n2; ++i)
        if (neg[neg[i]] != i) inv = false;
    rep.s4_identity = s2 && inv;
    rep.st3_equals_s2 = sts;
    return rep;
}

inline std::vector<WeilVector> invariant_constant_basis(i64 N) {
    std::vector<WeilVector> out;
    if (N == 4) {
        WeilVector a{4, {}}, b{4, {}}, c{4, {}};
        for (i64 j = 0; j < 4; ++j) a.add(j, 0, Cyclotomic(1));
        for (i64 k = 0; k < 4; ++k) b.add(0, k, Cyclotomic(1));
        c.add(2, 0, Cyclotomic(1));
        c.add(0, 1, Cyclotomic(-1));
        c.add(2, 2, Cyclotomic(1));
        c.add(0, 3, Cyclotomic(-1));
        out = {a, b, c};
    } else {
        for (i64 d : divisors(N)) {
            WeilVector v{N, {}};
            for (i64 k = 0; k < d; ++k)
                for (i64 j = 0; j < N / d; ++j) v.add(j * d, k * (N / d), Cyclotomic(1));
            out.push_back(v);
        }
    }
    auto T = weil_action(WeilGen::T, N), S = weil_action(WeilGen::S, N);
    for (auto& v : out)
        if (!(T.apply(v) == v) || !(S.apply(v) == v))
            throw IdentityViolation("constant vector not invariant");
    return out;
}

struct WeilFormSeries {
    i64 N = 1;
    std::map<MuKey, PuiseuxSeries> comp;
    i64 prec = 0;  // components known for exponents < prec

    PuiseuxSeries component(i64 j, i64 k) const {
        auto it = comp.find({pmod(j, N), pmod(k, N)});
        if (it == comp.end()) return PuiseuxSeries::zero(1, prec);
        return it->second;
    }
    void add(i64 j, i64 k, const PuiseuxSeries& s) {
        MuKey key{pmod(j, N), pmod(k, N)};
        auto it = comp.find(key);
        if (it == comp.end()) comp.emplace(key, s);
        else it->second = it->second + s;
    }
    Cyclotomic c(const Rational& m, i64 j, i64 k) const { return component(j, k).coefficient_at(m); }
};

struct LevelExpansions {
    i64 N = 1;
    std::vector<CuspDatum> cusps;  // Gamma1(N) representatives
    std::vector<CuspExpansion> exp;
};

// Expansions of the level-N Hauptmodul at all Gamma1(N) cusps, exponents below prec;
// if only_m > 0 restrict to cusps with m_s = only_m.
inline LevelExpansions level_expansions(i64 N, const Rational& prec, i64 only_m = 0) {
    const EtaQuotient& f = hauptmodul(N);
    LevelExpansions L;
    L.N = N;
    for (auto& s : cusp_representatives(CuspGroup::Gamma1, N))
        if (only_m <= 0 || s.m == only_m) L.cusps.push_back(s);
    L.exp.resize(L.cusps.size());
    parallel_for(L.cusps.size(), [&](size_t i) { L.exp[i] = expand_at_cusp(f, L.cusps[i], prec); });
    return L;
}

// (f|M_s)_t with exponents (n h + t)/h, as a series in q^(1/h)
inline PuiseuxSeries cusp_slice(const CuspExpansion& e, i64 t) { return e.slice(t); }

// Phase on the (j m_s, k m_s) slice terms of a regular cusp with m_s != N.
// Reduced: e(-d_s (c_s/m_s)^-1 jk / h_s), inverse mod h_s.
// AsPrinted: e(-d_s c^-1 m_s^2 jk / N) with c^-1 = c_s^-1 mod N if m_s = 1, else m_s.
enum class PhaseConvention { Reduced, AsPrinted };

// Closed-form induction, summed cusp by cusp.
inline WeilFormSeries induce_fN_from(const LevelExpansions& L, i64 prec,
                                     PhaseConvention conv = PhaseConvention::Reduced) {
    i64 N = L.N;
    WeilFormSeries F;
    F.N = N;
    F.prec = prec;
    Rational P = induction_prefactor(N);
    for (size_t i = 0; i < L.cusps.size(); ++i) {
        const auto& s = L.cusps[i];
        const auto& E = L.exp[i];
        i64 m = s.m, h = s.h;
        if (s.regular) {
            PuiseuxSeries sl0 = E.slice(0).truncated_at(Rational(prec));
            F.add(0, 0, sl0);
            if (m != N) {
                for (i64 j = 1; j < h; ++j) F.add(j * m, 0, sl0);
                for (i64 k = 1; k < h; ++k) F.add(0, k * m, sl0);
                i64 cinv = m == 1 ? invmod(pmod(s.c, N), N) : m;
                i64 cred = invmod(pmod(s.c / m, h), h);
                for (i64 j = 1; j < h; ++j)
                    for (i64 k = 1; k < h; ++k) {
                        i64 t = pmod(j * k * m, h);
                        Cyclotomic ph = conv == PhaseConvention::AsPrinted
                                            ? Cyclotomic::e(rat(-pmod(s.M.d * cinv * m * m * j * k, N), N))
                                            : Cyclotomic::e(rat(-pmod(s.M.d * cred * j * k, h), h));
                        F.add(j * m, k * m, E.slice(t).truncated_at(Rational(prec)).scaled(ph));
                    }
            }
        } else {
            PuiseuxSeries all = E.series.truncated_at(Rational(prec));
            for (i64 j = 0; j < h; ++j)
                for (i64 k = 0; k < h; ++k) {
                    Cyclotomic ph = Cyclotomic::e(rat(-pmod(s.M.d * m * j * k, N), N)).scaled(rat(1, h));
                    F.add(j * m, k * m, all.scaled(ph));
                }
        }
    }
    for (auto& [k, s] : F.comp) s = s.scaled(Cyclotomic(P)).compacted();
    return F;
}

inline WeilFormSeries induce_fN(i64 N, i64 prec) {
    if (!in_catalog(N)) throw UnsupportedLevel("unsupported level " + std::to_string(N));
    return induce_fN_from(level_expansions(N, Rational(prec)), prec);
}

// Coset representatives of Gamma0(N) \ SL2(Z), one per point of P^1(Z/N).
inline std::vector<Mat2> gamma0_coset_reps(i64 N) {
    std::vector<Mat2> out;
    std::map<std::pair<i64, i64>, bool> seen;
    for (i64 c = 0; c < N; ++c)
        for (i64 d = 0; d < N; ++d) {
            if (gcd64(gcd64(c, d), N) != 1) continue;
            // normalize (c:d) up to units
            std::pair<i64, i64> best{N, N};
            for (i64 u = 1; u < N || (N == 1 && u == 1); ++u) {
                if (gcd64(u, N) != 1) continue;
                best = std::min(best, std::make_pair(pmod(u * c, N), pmod(u * d, N)));
            }
            if (seen.count(best)) continue;
            seen[best] = true;
            // lift (c, d) to a coprime pair of integers
            i64 cc = c, dd = d;
            if (cc == 0) cc = N;
            while (gcd64(cc, dd) != 1) dd += N;
            i64 x, y;
            egcd(cc, dd, x, y);  // x cc + y dd = 1 -> a = y, b = -x
            out.push_back({y, -x, cc, dd});
        }
    return out;
}

// Induction computed directly as a sum over Gamma0(N)\SL2(Z).
inline WeilFormSeries induce_fN_direct(i64 N, i64 prec) {
    const EtaQuotient& f = hauptmodul(N);
    WeilFormSeries F;
    F.N = N;
    F.prec = prec;
    WeilVector phi00 = basis_vector(N, 0, 0);
    for (const Mat2& M : gamma0_coset_reps(N)) {
        PuiseuxSeries s = expand_eta_quotient(f, M, Rational(prec));
        WeilVector v = weil_apply(M.inverse(), phi00);
        for (auto& [key, c] : v.c) F.add(key.first, key.second, s.scaled(c));
    }
    for (auto& [k, s] : F.comp) s = s.truncated_at(Rational(prec)).normalize().compacted();
    for (auto it = F.comp.begin(); it != F.comp.end();)
        it = it->second.coeffs().empty() ? F.comp.erase(it) : std::next(it);
    return F;
}

inline bool weil_forms_agree(const WeilFormSeries& a, const WeilFormSeries& b) {
    std::map<MuKey, bool> keys;
    for (auto& [k, s] : a.comp) keys[k] = true;
    for (auto& [k, s] : b.comp) keys[k] = true;
    for (auto& [k, _] : keys)
        if (!agree(a.component(k.first, k.second), b.component(k.first, k.second))) return false;
    return true;
}

struct FNResult {
    WeilFormSeries F;
    WeilVector correction;
    std::vector<std::string> failures;  // empty when all four assertions hold
};

// Solve sum x_i v_i = w over cyclotomic numbers; true if solvable.
inline bool in_span(const std::vector<WeilVector>& basis, const WeilVector& w) {
    std::map<MuKey, size_t> rowidx;
    for (auto& v : basis)
        for (auto& [k, c] : v.c) rowidx.emplace(k, rowidx.size());
    for (auto& [k, c] : w.c) rowidx.emplace(k, rowidx.size());
    size_t n = basis.size(), rows = rowidx.size();
    std::vector<std::vector<Cyclotomic>> A(rows, std::vector<Cyclotomic>(n + 1, Cyclotomic(0)));
    for (size_t i = 0; i < n; ++i)
        for (auto& [k, c] : basis[i].c) A[rowidx[k]][i] = c;
    for (auto& [k, c] : w.c) A[rowidx[k]][n] = c;
    size_t pr = 0;
    for (size_t col = 0; col < n && pr < rows; ++col) {
        size_t sel = rows;
        for (size_t r = pr; r < rows; ++r)
            if (!A[r][col].is_zero()) { sel = r; break; }
        if (sel == rows) continue;
        std::swap(A[sel], A[pr]);
        Cyclotomic inv = A[pr][col].inverse();
        for (auto& x : A[pr]) x = x * inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == pr || A[r][col].is_zero()) continue;
            Cyclotomic fct = A[r][col];
            for (size_t c = col; c <= n; ++c) A[r][c] -= fct * A[pr][c];
        }
        ++pr;
    }
    for (size_t r = pr; r < rows; ++r)
        if (!A[r][n].is_zero()) return false;
    return true;
}

inline FNResult build_FN_from(const LevelExpansions& L, i64 prec,
                              PhaseConvention conv = PhaseConvention::Reduced) {
    i64 N = L.N;
    FNResult R;
    R.F = induce_fN_from(L, prec, conv);
    Rational P = induction_prefactor(N);
    WeilVector corr{N, {}};
    auto A0 = [&](size_t i) { return L.exp[i].series.coefficient(0); };
    if (N != 4) {
        for (size_t i = 0; i < L.cusps.size(); ++i) {
            const auto& s = L.cusps[i];
            Cyclotomic a = A0(i).scaled(P);
            for (i64 k = 0; k < N; ++k) corr.add(0, k, a);
            if (s.m != N) {
                for (i64 k = 0; k < s.m; ++k)
                    for (i64 j = 0; j < s.h; ++j) corr.add(j * s.m, k * s.h, a);
                for (i64 k = 0; k < N; ++k) corr.add(0, k, -a);
            }
        }
    } else {
        Cyclotomic a14, a01, a12;
        for (size_t i = 0; i < L.cusps.size(); ++i) {
            const auto& s = L.cusps[i];
            if (!s.regular) a12 = A0(i);
            else if (s.m == 1) a01 = A0(i);
            else a14 = A0(i);  // the infinity class
        }
        Cyclotomic half = Cyclotomic(rat(1, 2));
        Cyclotomic t1 = a14 + a01 + half * a12;
        for (i64 k = 0; k < 4; ++k) corr.add(0, k, t1);
        for (i64 k = 1; k < 4; ++k) {
            corr.add(k, 0, a01);
            corr.add(0, k, -a01);
        }
        Cyclotomic t3 = half * a12;
        corr.add(2, 0, t3);
        corr.add(0, 1, -t3);
        corr.add(2, 2, t3);
        corr.add(0, 3, -t3);
    }
    R.correction = corr;
    for (auto& [k, c] : corr.c) R.F.add(k.first, k.second, PuiseuxSeries::monomial(-c, 0, 1, prec));
    for (auto it = R.F.comp.begin(); it != R.F.comp.end();)
        it = it->second.normalize().coeffs().empty() ? R.F.comp.erase(it) : std::next(it);

    // (1) correction in the invariant span
    if (!in_span(invariant_constant_basis(N), corr)) R.failures.push_back("(1) correction outside invariant span");
    // (2) phi_{0,0} component
    PuiseuxSeries expect = PuiseuxSeries::monomial(Cyclotomic(1), -1, 1, prec);
    for (size_t i = 0; i < L.cusps.size(); ++i) {
        const auto& s = L.cusps[i];
        const auto& ser = L.exp[i].series;
        i64 step = s.regular ? s.h : 1;
        Rational w = s.regular ? Rational(1) : rat(1, s.h);
        for (auto& [n, c] : ser.coeffs())
            if (n > 0 && n % step == 0 && n / step < prec)
                expect.add_to(n / step, c.scaled(w * P));
    }
    PuiseuxSeries c00 = R.F.component(0, 0);
    if (!c00.is_known(0) || !c00.coefficient(0).is_zero()) R.failures.push_back("(2) c(0, mu_00) != 0");
    if (!agree(c00, expect)) R.failures.push_back("(2) phi_00 component expansion");
    // (3)
    for (i64 j = 0; j < N; ++j)
        if (!R.F.c(0, j, 0).is_zero()) {
            R.failures.push_back("(3) c(0, mu_" + std::to_string(j) + ",0) != 0");
            break;
        }
    // (4)
    for (i64 d : divisors(N)) {
        if (d == N) continue;
        Cyclotomic s(0);
        for (i64 k = 0; k < N / d; ++k)
            for (i64 j = 0; j < d; ++j) s += R.F.c(0, j * (N / d), k * d);
        if (s != Cyclotomic(24)) R.failures.push_back("(4) block sum for d=" + std::to_string(d) + " is " + s.str());
    }
    return R;
}

inline FNResult build_FN(i64 N, i64 prec) {
    if (!in_catalog(N)) throw UnsupportedLevel("unsupported level " + std::to_string(N));
    FNResult R = build_FN_from(level_expansions(N, Rational(std::max<i64>(prec, 1))), std::max<i64>(prec, 1));
    if (!R.failures.empty()) {
        std::string msg;
        for (auto& f : R.failures) msg += f + "; ";
        throw IdentityViolation(msg);
    }
    return R;
}

// Generating series of the product exponents A(l, d), l < prec.
inline PuiseuxSeries product_exponents_from(const LevelExpansions& L, i64 d, i64 prec) {
    i64 N = L.N;
    if (N % d != 0) throw InvalidArgument("d must divide N");
    Rational P = induction_prefactor(N);
    PuiseuxSeries acc = PuiseuxSeries::zero(1, prec);
    for (size_t i = 0; i < L.cusps.size(); ++i) {
        const auto& s = L.cusps[i];
        if (s.m != d) continue;
        const auto& ser = L.exp[i].series;
        i64 step = s.regular ? s.h : 1;
        Rational w = s.regular ? Rational(1) : rat(1, s.h);
        PuiseuxSeries part(1, -1, prec);
        for (auto& [n, c] : ser.coeffs())
            if (n != 0 && n % step == 0 && n / step < prec) part.add_to(n / step, c.scaled(w));
        if (ser.prec() < prec * step) throw OutOfPrecision("cusp expansion too short");
        acc = acc + part;
    }
    acc = acc.scaled(Cyclotomic(P)).normalize();
    for (auto& [n, c] : acc.coeffs())
        if (!c.is_integral_rational())
            throw NonIntegralExponent("A(" + std::to_string(n) + "," + std::to_string(d) + ") = " + c.str());
    return acc;
}

inline PuiseuxSeries product_exponents(i64 N, i64 d, i64 prec) {
    if (!in_catalog(N)) throw UnsupportedLevel("unsupported level " + std::to_string(N));
    if (N % d != 0) throw InvalidArgument("d must divide N");
    return product_exponents_from(level_expansions(N, Rational(prec), d), d, prec);
}

inline Rational serre_duality_residue_from(const LevelExpansions& L, i64 d) {
    i64 N = L.N;
    // q-coefficient of N/d E2(N/d tau) - E2(tau) is 24, or 0 when d = N
    i64 c1 = d == N ? 0 : 24;
    Cyclotomic acc(rat(c1 * lambda2(N) * gamma_index(N), 2));
    for (size_t i = 0; i < L.cusps.size(); ++i) {
        const auto& s = L.cusps[i];
        i64 g = gcd64(s.m, N / d);
        Rational w = rat(d * g * g - N, s.m);
        if (!s.regular) w /= s.h;
        acc += L.exp[i].series.coefficient(0).scaled(w);
    }
    if (!acc.is_rational()) throw IdentityViolation("Serre residue is not rational");
    return acc.rational_value();
}

inline Rational serre_duality_residue(i64 N, i64 d) {
    if (!in_catalog(N)) throw UnsupportedLevel("unsupported level " + std::to_string(N));
    if (N % d != 0) throw InvalidArgument("d must divide N");
    return serre_duality_residue_from(level_expansions(N, Rational(1)), d);
}

}  // namespace hauptwerk
