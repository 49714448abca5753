#include <gtest/gtest.h>

#include <random>

#include "hauptwerk/cm_side.hpp"

using namespace hauptwerk;

static ComplexBall moebius(const Mat2& g, const ComplexBall& tau, mpfr_prec_t bits) {
    auto ex = [&](i64 v) { return ComplexBall(RealBall::exact(v, bits), RealBall::exact(0, bits)); };
    return (ex(g.a) * tau + ex(g.b)) * (ex(g.c) * tau + ex(g.d)).inverse();
}

static bool near(const ComplexBall& a, const ComplexBall& b, double tol) {
    ComplexBall d = a - b;
    RealBall n = d.norm2();
    return n.mid_double() + n.rad_double() < tol * tol;
}

TEST(Forms, ReduceAndPrimitive) {
    EXPECT_EQ(reduce_form({3, 8, 6}), (BinaryQuadraticForm{1, 0, 2}));
    EXPECT_EQ(reduce_form({2, 0, 1}), (BinaryQuadraticForm{1, 0, 2}));
    EXPECT_TRUE(is_primitive({1, 1, 3}));
    EXPECT_FALSE(is_primitive({2, 2, 6}));
}

TEST(Forms, CanonicalInvariantExamples) {
    EXPECT_EQ(canonical_invariant({1, 0, 2}, 3), (BinaryQuadraticForm{1, 0, 18}));
    EXPECT_EQ(canonical_invariant({2, 0, 1}, 3), (BinaryQuadraticForm{2, 0, 9}));
    EXPECT_NE(canonical_invariant({1, 0, 2}, 3), canonical_invariant({2, 0, 1}, 3));
}

TEST(Forms, InvariantUnderGamma0) {
    std::mt19937_64 rng(5);
    std::vector<BinaryQuadraticForm> forms = {{1, 0, 2}, {2, 0, 1}, {1, 1, 3}, {3, 1, 1}, {2, 2, 3}, {1, 0, 5}};
    for (i64 p : {3, 5, 7, 13})
        for (auto& Q : forms) {
            if (Q.a % p == 0) continue;
            for (int it = 0; it < 50; ++it) {
                // gamma = T^k1 * [[1,0],[p k2,1]] * T^k3
                i64 k1 = static_cast<i64>(rng() % 7) - 3, k2 = static_cast<i64>(rng() % 5) - 2,
                    k3 = static_cast<i64>(rng() % 7) - 3;
                Mat2 g = Mat2::T(k1) * Mat2{1, 0, p * k2, 1} * Mat2::T(k3);
                ASSERT_EQ(g.c % p, 0);
                BinaryQuadraticForm R = act(Q, g);
                EXPECT_EQ(R.disc(), Q.disc());
                EXPECT_EQ(canonical_invariant(R, p), canonical_invariant(Q, p)) << Q.str() << " " << p;
            }
        }
}

TEST(Forms, ClassCountsMatchRingClassLaw) {
    for (i64 p : {3, 5, 7, 13})
        for (i64 d : {-3, -4, -7, -8, -11, -19, -20, -23}) {
            if (d % p == 0) continue;
            EXPECT_EQ(static_cast<i64>(enumerate_form_classes(d, p).size()), class_number(d) * (p - kronecker(d, p)) * 2 / unit_count(d))
                << d << " " << p;
        }
    EXPECT_THROW(enumerate_form_classes(-3, 3), InvalidArgument);
    EXPECT_THROW(enumerate_form_classes(-8, 4), InvalidArgument);
}

TEST(PairSet, HeadlineFullProduct) {
    PairSet S = s_pairs(3, -8, -11, 50);
    EXPECT_TRUE(S.exhaustive);
    EXPECT_EQ(S.pairs.size(), 4u);
    EXPECT_TRUE(S.full_product());
    for (auto& cp : S.pairs) {
        EXPECT_EQ(cp.witness1 % 3 == 0, false);
        EXPECT_TRUE((cp.witness1 - cp.witness2) % 3 == 0 || (cp.witness1 + cp.witness2) % 3 == 0);
    }
}

TEST(PairSet, HalfProductForPOneModFour) {
    PairSet S = s_pairs(5, -4, -11);
    EXPECT_TRUE(S.exhaustive);
    EXPECT_EQ(S.pairs.size(), 8u);
    std::size_t excluded = 0;
    for (auto& cp : S.pairs) excluded += cp.excluded ? 1 : 0;
    EXPECT_EQ(S.matched_count(), 4u);
    EXPECT_EQ(excluded, 4u);
    EXPECT_FALSE(S.full_product());
}

TEST(PairSet, WitnessesAreValuesOfTheClasses) {
    PairSet S = s_pairs(7, -3, -19);
    ASSERT_TRUE(S.exhaustive);
    for (auto& cp : S.pairs) {
        if (!cp.matched) continue;
        auto v1 = class_values(S.classes1[cp.i1].representative, 7, S.value_bound);
        auto v2 = class_values(S.classes2[cp.i2].representative, 7, S.value_bound);
        EXPECT_TRUE(v1.count(cp.witness1));
        EXPECT_TRUE(v2.count(cp.witness2));
    }
}

TEST(CMPoints, RootOfForm) {
    const mpfr_prec_t bits = 128;
    for (BinaryQuadraticForm Q : std::vector<BinaryQuadraticForm>{{1, 0, 2}, {3, 1, 1}, {2, 2, 3}, {9, 6, 3}}) {
        if (Q.disc() >= 0) continue;
        ComplexBall t = cm_point(Q).tau(bits);
        auto ex = [&](i64 v) { return ComplexBall(RealBall::exact(v, bits), RealBall::exact(0, bits)); };
        ComplexBall r = ex(Q.a) * t * t + ex(Q.b) * t + ex(Q.c);
        EXPECT_TRUE(r.contains(0, 0)) << Q.str();
    }
    EXPECT_THROW(cm_point({-1, 0, -2}), InvalidArgument);
}

TEST(Hauptmodul, Periodic) {
    const mpfr_prec_t bits = 160;
    ComplexBall tau(RealBall::from_mpq(mpq_class(1, 7), bits), RealBall::from_mpq(mpq_class(4, 5), bits));
    ComplexBall tau1(RealBall::from_mpq(mpq_class(8, 7), bits), RealBall::from_mpq(mpq_class(4, 5), bits));
    for (i64 N : {2, 3, 5, 7, 13}) EXPECT_TRUE(near(eval_pi_at(N, tau, bits), eval_pi_at(N, tau1, bits), 1e-40));
}

TEST(Hauptmodul, Gamma0Invariant) {
    const mpfr_prec_t bits = 160;
    for (i64 N : {2, 3, 5, 7, 13}) {
        // N tau + 1 = 3i/5, so tau and its image both have imaginary part of order 1/N
        ComplexBall tau(RealBall::from_mpq(mpq_class(-1, N), bits), RealBall::from_mpq(mpq_class(3, 5 * N), bits));
        Mat2 g{1, 0, N, 1};
        ComplexBall gt = moebius(g, tau, bits);
        EXPECT_TRUE(near(eval_pi_at(N, tau, bits), eval_pi_at(N, gt, bits), 1e-30)) << N;
    }
}

TEST(Hauptmodul, LeadingBehaviour) {
    // pi_N(tau) - 1/q is bounded for large Im tau
    const mpfr_prec_t bits = 128;
    ComplexBall tau(RealBall::exact(0, bits), RealBall::exact(6, bits));
    for (i64 N : {2, 3, 5, 7, 13}) {
        ComplexBall d = eval_pi_at(N, tau, bits) - ComplexBall::e(tau).inverse();
        EXPECT_LT(d.abs().mid_double(), 30.0) << N;
    }
}

TEST(JInvariant, ClassNumberOneValues) {
    const mpfr_prec_t bits = 128;
    EXPECT_TRUE(eval_j(cm_point({1, 0, 1}).tau(bits), bits).contains(1728, 0));
    EXPECT_TRUE(eval_j(cm_point({1, 0, 2}).tau(bits), bits).contains(8000, 0));
    EXPECT_TRUE(eval_j(cm_point({1, 1, 3}).tau(bits), bits).contains(-32768, 0));
    EXPECT_TRUE(eval_j(cm_point({1, 1, 1}).tau(bits), bits).contains(0, 0));
}

TEST(LhsSum, SymmetricInDiscriminants) {
    const mpfr_prec_t bits = 128;
    RealBall a = lhs_sum(3, -8, -11, bits), b = lhs_sum(3, -11, -8, bits);
    EXPECT_TRUE(a.overlaps(b));
}

TEST(LhsSum, HeadlineValue) {
    const mpfr_prec_t bits = 256;
    LhsResult R = lhs_sum_detail(3, -8, -11, bits);
    EXPECT_EQ(R.terms.size(), 4u);
    // log(2^6 3^24 7^2)
    RealBall expect = RealBall::exact(6, bits) * RealBall::log_int(2, bits) +
                      RealBall::exact(24, bits) * RealBall::log_int(3, bits) +
                      RealBall::exact(2, bits) * RealBall::log_int(7, bits);
    EXPECT_TRUE(R.sum.overlaps(expect));
    EXPECT_LT(R.sum.rad_double(), 1e-60);
}

TEST(LhsSum, RejectsDivisibleDiscriminant) {
    EXPECT_THROW(lhs_sum(3, -3, -8, 128), InvalidArgument);
    EXPECT_THROW(lhs_sum(3, -8, -20, 128), NotCoprime);
}
