#include <gtest/gtest.h>

#include <random>

#include "hauptwerk/quadfield.hpp"

using namespace hauptwerk;

TEST(Kronecker, SmallTable) {
    EXPECT_EQ(kronecker(-8, 3), 1);
    EXPECT_EQ(kronecker(-11, 3), 1);
    EXPECT_EQ(kronecker(-4, 3), -1);
    EXPECT_EQ(kronecker(-7, 2), 1);
    EXPECT_EQ(kronecker(-3, 2), -1);
    EXPECT_EQ(kronecker(5, 5), 0);
    EXPECT_EQ(kronecker(88, 7), kronecker(4, 7));
}

TEST(Kronecker, MultiplicativeInTop) {
    for (i64 q : {3, 5, 7, 11, 13, 29})
        for (i64 a = -30; a <= 30; ++a)
            for (i64 b = -30; b <= 30; ++b) EXPECT_EQ(kronecker(a * b, q), kronecker(a, q) * kronecker(b, q));
}

TEST(Kronecker, EulerCriterionOracle) {
    for (i64 q : {3, 5, 7, 11, 13, 101})
        for (i64 a = 1; a < q; ++a) {
            i64 e = powmod(a, (q - 1) / 2, q);
            EXPECT_EQ(kronecker(a, q), e == 1 ? 1 : -1) << a << " " << q;
        }
}

TEST(SplitInF, Examples) {
    // D = 88
    EXPECT_EQ(split_in_F(3, 88).size(), 2u);
    EXPECT_EQ(split_in_F(3, 88)[0].kind, SplitKind::Split);
    EXPECT_EQ(split_in_F(5, 88)[0].kind, SplitKind::Inert);
    EXPECT_EQ(split_in_F(2, 88)[0].kind, SplitKind::Ramified);
    EXPECT_EQ(split_in_F(11, 88)[0].kind, SplitKind::Ramified);
    EXPECT_EQ(split_in_F(7, 88)[0].kind, SplitKind::Split);
    EXPECT_THROW(split_in_F(9, 88), InvalidArgument);
}

TEST(SplitInF, DegreeSum) {
    for (i64 D : {12, 28, 33, 44, 56, 88, 105, 209})
        for (i64 q : {2, 3, 5, 7, 11, 13, 17, 19}) {
            i64 s = 0;
            for (auto& P : split_in_F(q, D)) s += P.ramification() * P.residue_degree();
            EXPECT_EQ(s, 2) << D << " " << q;
        }
}

// An element of F_q (or F_{q^2}) is a square iff it has a square root in the residue field.
static bool residue_square(i64 a, i64 q, bool quadratic_ext) {
    a = pmod(a, q);
    if (a == 0) return true;
    if (quadratic_ext) return true;  // every F_q-unit is a square in F_{q^2}
    for (i64 x = 1; x < q; ++x)
        if (x * x % q == a) return true;
    return false;
}

TEST(SplitInE, ResidueSquareOracle) {
    std::vector<std::pair<i64, i64>> pairs = {{-3, -4}, {-3, -8}, {-8, -11}, {-4, -7}, {-7, -8}, {-11, -19}, {-4, -23}};
    for (auto [d1, d2] : pairs)
        for (i64 q : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
            if (q == 2) continue;
            i64 D = d1 * d2;
            for (auto& P : split_in_F(q, D)) {
                i64 dp = (d1 % q != 0) ? d1 : d2;
                bool sq = residue_square(dp, q, P.kind == SplitKind::Inert);
                EXPECT_EQ(split_in_E(P, d1, d2), sq ? SplitKind::Split : SplitKind::Inert)
                    << d1 << " " << d2 << " " << P.str();
            }
        }
}

TEST(Valuation, Examples) {
    // D = 88, t = (2m + D + sqrt D)/2
    RealQuadElement t = RealQuadElement::from_m(88, -44);  // sqrt(88)/2 = sqrt 22, N = -22
    EXPECT_EQ(t.norm(), Rational(-22));
    auto P2 = split_in_F(2, 88)[0];
    auto P11 = split_in_F(11, 88)[0];
    EXPECT_EQ(valuation(t, P2), 1);
    EXPECT_EQ(valuation(t, P11), 1);
    // 3 splits; N = -22 is prime to 3
    for (auto& P : split_in_F(3, 88)) EXPECT_EQ(valuation(t, P), 0);
    // inert prime 5: ord_5(N(5)) / 2 = 1
    RealQuadElement five(88, 5, 0);
    EXPECT_EQ(valuation(five, split_in_F(5, 88)[0]), 1);
    EXPECT_THROW(valuation(RealQuadElement(88, 0, 0), P2), InvalidArgument);
}

TEST(Valuation, ConjugatePrimesSumToNorm) {
    std::mt19937_64 rng(7);
    for (i64 D : {33, 44, 77, 88, 105})
        for (int it = 0; it < 200; ++it) {
            i64 u = static_cast<i64>(rng() % 2001) - 1000, v = static_cast<i64>(rng() % 201) - 100;
            if (u == 0 && v == 0) continue;
            RealQuadElement t(D, u, v);
            Integer n = t.norm().get_num();
            for (i64 q : {3, 5, 7, 11, 13}) {
                auto Ps = split_in_F(q, D);
                if (Ps[0].kind != SplitKind::Split) continue;
                EXPECT_EQ(valuation(t, Ps[0]) + valuation(t, Ps[1]), ord_p_mpz(n, q)) << D << " " << u << " " << v;
            }
        }
}

TEST(Valuation, Additive) {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 300; ++it) {
        i64 D = 88;
        RealQuadElement a(D, static_cast<i64>(rng() % 401) - 200, static_cast<i64>(rng() % 41) - 20);
        RealQuadElement b(D, static_cast<i64>(rng() % 401) - 200, static_cast<i64>(rng() % 41) - 20);
        if (a.is_zero() || b.is_zero()) continue;
        for (i64 q : {3, 7, 13, 2, 11, 5})
            for (auto& P : split_in_F(q, D)) EXPECT_EQ(valuation(a * b, P), valuation(a, P) + valuation(b, P));
    }
}

TEST(Rho, LocalValues) {
    EXPECT_EQ(rho_local(SplitKind::Split, 3), 4);
    EXPECT_EQ(rho_local(SplitKind::Inert, 2), 1);
    EXPECT_EQ(rho_local(SplitKind::Inert, 1), 0);
    EXPECT_EQ(rho_local(SplitKind::Ramified, 5), 1);
    EXPECT_EQ(rho_local(SplitKind::Split, 0), 1);
}

TEST(DiffSet, SingleInertPrime) {
    // D = 12, t = (k + sqrt 12)/2 with k = 0: N = -3, 3 ramified in F, inert in E = Q(sqrt -3, i)
    RealQuadElement t = RealQuadElement::from_m(12, -6);
    auto diff = diff_set(t, -3, -4);
    ASSERT_EQ(diff.size(), 1u);
    EXPECT_EQ(diff[0].q, 3);
}

TEST(ClassNumber, Small) {
    EXPECT_EQ(class_number(-3), 1);
    EXPECT_EQ(class_number(-4), 1);
    EXPECT_EQ(class_number(-8), 1);
    EXPECT_EQ(class_number(-11), 1);
    EXPECT_EQ(class_number(-20), 2);
    EXPECT_EQ(class_number(-23), 3);
    EXPECT_EQ(class_number(-72), 2);
    EXPECT_EQ(class_number(-99), 2);
    EXPECT_EQ(class_number(-163), 1);
    EXPECT_EQ(unit_count(-3), 6);
    EXPECT_EQ(unit_count(-4), 4);
    EXPECT_EQ(unit_count(-8), 2);
}

TEST(ClassNumber, RingClassLaw) {
    for (i64 d : {-7, -8, -11, -15, -19, -20, -23, -24, -31, -35, -39, -40})
        for (i64 p : {3, 5, 7, 13}) {
            if (d % p == 0) continue;
            EXPECT_EQ(class_number(d * p * p), class_number(d) * (p - kronecker(d, p))) << d << " " << p;
        }
}

TEST(DiscPair, Checks) {
    EXPECT_NO_THROW(check_disc_pair(-8, -11));
    EXPECT_THROW(check_disc_pair(-8, -20), NotCoprime);
    EXPECT_THROW(check_disc_pair(-12, -11), InvalidArgument);
    EXPECT_THROW(check_disc_pair(5, -11), InvalidArgument);
}
