#include <gtest/gtest.h>

#include <random>

#include "hauptwerk/weilrep.hpp"

using namespace hauptwerk;

namespace {

using Dense = std::vector<std::vector<Cyclotomic>>;

Dense matmul(const Dense& a, const Dense& b) {
    size_t n = a.size();
    Dense r(n, std::vector<Cyclotomic>(n, Cyclotomic(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (size_t j = 0; j < n; ++j)
                if (!b[k][j].is_zero()) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

bool dense_equal(const Dense& a, const Dense& b) {
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a.size(); ++j)
            if (a[i][j] != b[i][j]) return false;
    return true;
}

// prod_n (1 - (zeta q)^(m n))^r with zeta = e(twist), as a series in q below prec
PuiseuxSeries euler_factor(i64 m, i64 r, i64 prec, const Rational& twist = 0) {
    auto f = euler_product_power(r, prec / m + 1);
    PuiseuxSeries s(1, 0, prec);
    for (i64 k = 0; k < static_cast<i64>(f.size()) && k * m < prec; ++k)
        if (f[k] != 0) s.set(k * m, Cyclotomic::e(twist * k * m).scaled(Rational(f[k])));
    return s;
}

PuiseuxSeries constant(long c, i64 prec) { return PuiseuxSeries::monomial(Cyclotomic(c), 0, 1, prec); }

// sub-series a(step * l) re-indexed by l
PuiseuxSeries every(const PuiseuxSeries& a, i64 step, i64 prec) {
    PuiseuxSeries r(1, -1, prec);
    for (auto& [n, c] : a.coeffs())
        if (n % step == 0 && n / step < prec) r.set(n / step, c);
    return r.normalize();
}

void expect_series_eq(const PuiseuxSeries& got, const PuiseuxSeries& want, i64 lo, i64 hi, const std::string& tag) {
    for (i64 l = lo; l < hi; ++l) EXPECT_EQ(got.coefficient(l), want.coefficient(l)) << tag << " l=" << l;
}

}  // namespace

TEST(DiscriminantForm, PolarizationIdentity) {
    for (i64 N : {2, 5, 8, 12})
        for (i64 a = 0; a < N * N; ++a)
            for (i64 b = 0; b < N * N; ++b) {
                i64 j = a / N, k = a % N, j2 = b / N, k2 = b % N;
                Rational lhs = disc_quadratic(N, j + j2, k + k2) - disc_quadratic(N, j, k) - disc_quadratic(N, j2, k2);
                Rational diff = lhs - disc_bilinear(N, j, k, j2, k2);
                EXPECT_EQ(diff.get_den(), 1);
            }
}

TEST(Weil, GeneratorsOnBasisVectors) {
    auto T = weil_action(WeilGen::T, 2), S = weil_action(WeilGen::S, 2);
    auto t = T.apply(basis_vector(2, 1, 1));
    EXPECT_EQ(t.at(1, 1), Cyclotomic(-1));
    auto s = S.apply(basis_vector(2, 0, 0));
    for (i64 j = 0; j < 2; ++j)
        for (i64 k = 0; k < 2; ++k) EXPECT_EQ(s.at(j, k), Cyclotomic(rat(1, 2)));
    for (i64 N : {3, 7, 12})
        for (i64 j = 0; j < N; j += 2)
            for (i64 k = 1; k < N; k += 3) {
                auto v = weil_action(WeilGen::S, N);
                auto w = v.apply(v.apply(basis_vector(N, j, k)));
                EXPECT_TRUE(w == basis_vector(N, -j, -k));
            }
    EXPECT_THROW(weil_action(WeilGen::S, 1), InvalidArgument);
}

TEST(Weil, RelationsAllCatalogLevels) {
    for (i64 N : catalog_levels()) {
        auto r = check_weil_relations(N);
        EXPECT_TRUE(r.s2_negation) << N;
        EXPECT_TRUE(r.s4_identity) << N;
        EXPECT_TRUE(r.st3_equals_s2) << N;
    }
}

TEST(Weil, DenseRelationsSmallLevels) {
    for (i64 N : {2, 3, 4, 5}) {
        auto S = weil_action(WeilGen::S, N).dense(), T = weil_action(WeilGen::T, N).dense();
        auto S2 = matmul(S, S), ST = matmul(S, T);
        auto ST3 = matmul(matmul(ST, ST), ST);
        EXPECT_TRUE(dense_equal(ST3, S2)) << N;
        auto S4 = matmul(S2, S2);
        for (size_t i = 0; i < S4.size(); ++i)
            for (size_t j = 0; j < S4.size(); ++j) EXPECT_EQ(S4[i][j], Cyclotomic(i == j ? 1 : 0));
    }
}

TEST(Weil, MatrixActionIsHomomorphism) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> g(0, 3), t(-3, 3);
    auto rnd = [&]() {
        Mat2 m{1, 0, 0, 1};
        for (int i = 0; i < 5; ++i) m = m * (g(rng) == 0 ? Mat2::S() : Mat2::T(t(rng)));
        return m;
    };
    for (i64 N : {4, 6, 9}) {
        WeilVector v = basis_vector(N, 1, 2);
        v.add(3, 0, Cyclotomic(rat(2, 3)));
        for (int it = 0; it < 5; ++it) {
            Mat2 A = rnd(), B = rnd();
            EXPECT_TRUE(weil_apply(A * B, v) == weil_apply(A, weil_apply(B, v))) << N;
        }
    }
}

TEST(Weil, Gamma0FixesOrigin) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> t(-2, 2);
    for (i64 N : {5, 8, 12}) {
        Mat2 g{1, 0, 0, 1};
        for (int i = 0; i < 6; ++i) g = g * Mat2{1, t(rng), 0, 1} * Mat2{1, 0, N * t(rng), 1};
        EXPECT_TRUE(weil_apply(g, basis_vector(N, 0, 0)) == basis_vector(N, 0, 0)) << N;
    }
}

TEST(Weil, InvariantConstantBasis) {
    EXPECT_EQ(invariant_constant_basis(2).size(), 2u);
    auto b4 = invariant_constant_basis(4);
    ASSERT_EQ(b4.size(), 3u);
    EXPECT_EQ(b4[2].at(2, 0), Cyclotomic(1));
    EXPECT_EQ(b4[2].at(0, 1), Cyclotomic(-1));
    EXPECT_EQ(b4[2].at(2, 2), Cyclotomic(1));
    EXPECT_EQ(b4[2].at(0, 3), Cyclotomic(-1));
    for (i64 N : catalog_levels()) {
        auto basis = invariant_constant_basis(N);
        EXPECT_EQ(basis.size(), N == 4 ? 3u : divisors(N).size());
        auto T = weil_action(WeilGen::T, N), S = weil_action(WeilGen::S, N);
        for (auto& v : basis) {
            EXPECT_TRUE(T.apply(v) == v);
            EXPECT_TRUE(S.apply(v) == v);
        }
    }
}

TEST(Induction, ClosedFormMatchesCosetSum) {
    for (i64 N : catalog_levels()) {
        auto L = level_expansions(N, Rational(2));
        EXPECT_TRUE(weil_forms_agree(induce_fN_from(L, 2), induce_fN_direct(N, 2))) << N;
    }
}

TEST(Induction, PrintedPhaseRuleBreaksAtComposite) {
    auto L5 = level_expansions(5, Rational(2));
    EXPECT_TRUE(weil_forms_agree(induce_fN_from(L5, 2, PhaseConvention::AsPrinted), induce_fN_direct(5, 2)));
    auto L10 = level_expansions(10, Rational(2));
    EXPECT_FALSE(weil_forms_agree(induce_fN_from(L10, 2, PhaseConvention::AsPrinted), induce_fN_direct(10, 2)));
    auto L8 = level_expansions(8, Rational(2));
    EXPECT_FALSE(build_FN_from(L8, 2, PhaseConvention::AsPrinted).failures.empty());
}

TEST(Induction, ExponentCongruence) {
    for (i64 N : {5, 8, 12}) {
        auto F = induce_fN(N, 3);
        for (auto& [mu, s] : F.comp)
            for (auto& [n, c] : s.coeffs()) {
                Rational e = rat(n, s.hden()) - rat(mu.first * mu.second, N);
                EXPECT_EQ(e.get_den(), 1) << N << " (" << mu.first << "," << mu.second << ")";
            }
    }
}

TEST(Induction, OriginComponentLevelFive) {
    auto F = induce_fN(5, 6);
    auto L = level_expansions(5, Rational(6));
    auto c = F.component(0, 0);
    EXPECT_EQ(c.coefficient_at(Rational(-1)), Cyclotomic(1));
    // q^-1 + (1/2)[sum_s A_s(0) + sum_s sum_n A_s(5n or n) q^n]
    for (i64 n = 0; n < 6; ++n) {
        Cyclotomic want(0);
        for (size_t i = 0; i < L.cusps.size(); ++i) want += L.exp[i].A(n * L.cusps[i].h);
        EXPECT_EQ(c.coefficient_at(Rational(n)), want.scaled(rat(1, 2))) << n;
    }
}

TEST(CorrectedForm, IdentitiesAllLevels) {
    for (i64 N : catalog_levels()) {
        auto R = build_FN_from(level_expansions(N, Rational(2)), 2);
        EXPECT_TRUE(R.failures.empty()) << N << ": " << (R.failures.empty() ? "" : R.failures[0]);
    }
    EXPECT_NO_THROW(build_FN(12, 2));
    EXPECT_THROW(build_FN(11, 2), UnsupportedLevel);
}

TEST(CorrectedForm, GoldenConstantTerms) {
    auto F5 = build_FN(5, 2).F;
    Cyclotomic s(0);
    for (i64 k = 0; k < 5; ++k) s += F5.c(0, 0, k);
    EXPECT_EQ(s, Cyclotomic(24));
    auto F8 = build_FN(8, 2).F;
    for (i64 j = 0; j < 8; ++j) EXPECT_TRUE(F8.c(0, j, 0).is_zero()) << j;
    auto R4 = build_FN(4, 2);
    EXPECT_FALSE(R4.correction.at(2, 2).is_zero());
    EXPECT_TRUE(R4.F.c(0, 0, 0).is_zero());
}

TEST(ProductExponents, LevelFive) {
    i64 P = 12;
    auto A5 = product_exponents(5, 5, P);
    auto pi5 = expand_at_cusp(hauptmodul(5), cusp_representatives(CuspGroup::Gamma1, 5)[0], Rational(P)).series;
    expect_series_eq(A5, pi5 + constant(6, P), -1, P, "d=5");
    auto A1 = product_exponents(5, 1, P);
    // a(l): 125 (eta(5t)/eta(t))^6 = 125 q prod (1-q^5n)^6 (1-q^n)^-6
    i64 Q = 5 * P + 1;
    auto a = (euler_factor(5, 6, Q) * euler_factor(1, -6, Q)).shifted(1).scaled(Cyclotomic(125)).truncated(Q);
    expect_series_eq(A1, every(a, 5, P), -1, P, "d=1");
}

TEST(ProductExponents, LevelEight) {
    i64 P = 10;
    auto A8 = product_exponents(8, 8, P);
    auto pi8 = expand_at_cusp(hauptmodul(8), cusp_representatives(CuspGroup::Gamma1, 8)[0], Rational(P)).series;
    expect_series_eq(A8, pi8 + constant(4, P), -1, P, "d=8");

    auto A4 = product_exponents(8, 4, P);
    auto r4 = constant(2, P) - (euler_factor(1, 4, P) * euler_factor(8, 4, P) * euler_factor(2, 2, P) *
                                euler_factor(4, -10, P)).scaled(Cyclotomic(2));
    expect_series_eq(A4, r4, -1, P, "d=4");

    i64 Q2 = 2 * P + 1;
    auto a = constant(4, Q2) - (euler_factor(2, 2, Q2) * euler_factor(4, 4, Q2) * euler_factor(8, -2, Q2) *
                                euler_factor(1, -4, Q2, rat(1, 4))).scaled(Cyclotomic(4));
    expect_series_eq(product_exponents(8, 2, P), every(a, 2, P), -1, P, "d=2");

    i64 Q1 = 8 * P + 1;
    auto b = (euler_factor(8, 4, Q1) * euler_factor(2, 2, Q1) * euler_factor(4, -2, Q1) * euler_factor(1, -4, Q1))
                 .shifted(1)
                 .scaled(Cyclotomic(32))
                 .truncated(Q1);
    expect_series_eq(product_exponents(8, 1, P), every(b, 8, P), -1, P, "d=1");
}

TEST(ProductExponents, IntegralPolesAndRowRelation) {
    i64 P = 4;
    for (i64 N : catalog_levels()) {
        auto L = level_expansions(N, Rational(P));
        auto F = build_FN_from(L, P).F;
        std::map<i64, PuiseuxSeries> A;
        for (i64 d : divisors(N)) {
            A[d] = product_exponents_from(L, d, P);
            EXPECT_TRUE(A[d].all_rational_integers());
            EXPECT_EQ(A[d].coefficient(-1), Cyclotomic(d == N ? 1 : 0)) << N << " " << d;
        }
        for (i64 j = 0; j < N; ++j)
            for (i64 l = -1; l < P; ++l) {
                Cyclotomic want(0);
                for (i64 d : divisors(N))
                    if (j % d == 0) want += A[d].coefficient(l);
                EXPECT_EQ(F.c(Rational(l), j, 0), want) << N << " j=" << j << " l=" << l;
            }
    }
}

TEST(ProductExponents, NonIntegralDetected) {
    auto L = level_expansions(5, Rational(3), 5);
    L.exp[0].series.add_to(2, Cyclotomic(1));
    EXPECT_THROW(product_exponents_from(L, 5, 3), NonIntegralExponent);
}

TEST(SerreDuality, ResidueVanishes) {
    for (i64 N : catalog_levels())
        for (i64 d : divisors(N)) EXPECT_EQ(serre_duality_residue(N, d), Rational(0)) << N << " " << d;
    EXPECT_THROW(serre_duality_residue(6, 4), InvalidArgument);
}
