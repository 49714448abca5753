#include <gtest/gtest.h>

#include "hauptwerk/cm_side.hpp"
#include "hauptwerk/eisenstein.hpp"

using namespace hauptwerk;

TEST(Jet, DerivativeRules) {
    Jet x = Jet::x();
    Jet p = Jet::constant(3);
    // d/ds (p^-s)^2 at 0 = -2 log p
    EXPECT_EQ((x * x).d, Rational(-2));
    // d/ds 3 / (3 - x) at 0 = 3 * (-1) / 4 ... with dx = -1: 3 * dx / (3 - 1)^2 = -3/4
    Jet q = p / (p - x);
    EXPECT_EQ(q.v, rat(3, 2));
    EXPECT_EQ(q.d, rat(-3, 4));
    EXPECT_THROW(p / (p - Jet::constant(3)), DivisionByZero);
}

TEST(XPoly, JetAndProduct) {
    XPoly a, b;
    a.add(0, 1);
    a.add(1, -1);  // 1 - x
    b.add(0, 1);
    b.add(1, 1);  // 1 + x
    XPoly c = a * b;
    XPoly e;
    e.add(0, 1);
    e.add(2, -1);
    EXPECT_EQ(c, e);
    EXPECT_EQ(c.at_s0(), Rational(0));
    EXPECT_EQ(c.jet().d, Rational(2));
}

TEST(LogLinear, ArithmeticAndEval) {
    LogLinearValue v = log_term(2, 3) + log_term(3, 1);
    v += log_term(2, -3);
    EXPECT_EQ(v, log_term(3, 1));
    EXPECT_TRUE((Rational(0) * v).is_zero());
    RealBall b = (log_term(2, 2) + log_term(3, 1)).eval(128);
    EXPECT_TRUE(b.overlaps(RealBall::log_int(12, 128)));
}

TEST(Whittaker, SplitMatchesCountingOracle) {
    for (i64 p : {3, 5, 7, 13}) {
        i64 mismatches = 0;
        for (i64 t = -3 * p * p; t <= 3 * p * p; ++t) {
            if (t == 0) continue;
            for (i64 i = 0; i < p; ++i) {
                Rational w = whittaker_split(p, PadicResidue::of(t, p), i).at_s0();
                if (w != whittaker_oracle(t, i, p)) ++mismatches;
            }
        }
        EXPECT_EQ(mismatches, 0) << p;
    }
}

TEST(Whittaker, DeepValuationsMatchOracle) {
    for (i64 p : {3, 5})
        for (i64 e = 1; e <= 4; ++e)
            for (i64 u : {1, 2, -1}) {
                i64 t = u;
                for (i64 k = 0; k < e; ++k) t *= p;
                for (i64 i = 0; i < p; ++i)
                    EXPECT_EQ(whittaker_split(p, PadicResidue::of(t, p), i).at_s0(), whittaker_oracle(t, i, p))
                        << p << " " << t << " " << i;
            }
}

TEST(Whittaker, SplitPairAgreesWithLocalFunction) {
    // At the prime where sqrt D = d, t = m + (d^2 + d)/2 mod p; at the other, t = that minus d.
    struct Sample { i64 p, d1, d2; };
    for (Sample s : {Sample{3, -8, -11}, Sample{5, -4, -11}, Sample{7, -3, -19}, Sample{13, -3, -4}}) {
        i64 p = s.p, D = s.d1 * s.d2;
        for (i64 d : sqrt_residues(D, p))
            for (i64 m = -D; m <= 0; ++m)
                for (i64 i = 0; i < p; ++i) {
                    RealQuadElement t = RealQuadElement::from_m(D, m);
                    if (t.is_zero()) continue;
                    auto [w1, w2] = evalw_pair(p, s.d1, s.d2, m, i, d);
                    PrimeIdeal P1 = prime_for_root(p, D, d), P2 = prime_for_root(p, D, p - d);
                    i64 dt = pmod((d * d + d) * invmod(2, p), p);
                    auto datum = [&](i64 res, const PrimeIdeal& P) {
                        res = pmod(res, p);
                        if (res != 0) return PadicResidue{false, res, 0};
                        return PadicResidue{true, 0, valuation(t, P)};
                    };
                    EXPECT_EQ(w1, whittaker_split(p, datum(m + dt, P1), i).at_s0()) << p << " " << m << " " << i;
                    EXPECT_EQ(w2, whittaker_split(p, datum(m + dt - d, P2), i).at_s0()) << p << " " << m << " " << i;
                }
    }
}

TEST(Cases, Classification) {
    EXPECT_EQ(classify_case(3, -8, -11).id, 1);
    EXPECT_EQ(classify_case(3, -7, -4).id, 2);
    EXPECT_EQ(classify_case(3, -8, -7).id, 3);
    EXPECT_EQ(classify_case(3, -3, -8).id, 4);
    EXPECT_EQ(classify_case(3, -3, -4).id, 5);
    RamificationCase c = classify_case(3, -8, -3);
    EXPECT_TRUE(c.swapped);
    EXPECT_EQ(c.d1, -3);
    EXPECT_EQ(classify_case(3, -3, -8).id, classify_case(3, -8, -3).id);
}

TEST(ValueFormula, HeadlineExact) {
    LogLinearValue v = rhs_value(3, -8, -11);
    EXPECT_EQ(v, log_term(2, 6) + log_term(3, 24) + log_term(7, 2));
    EXPECT_EQ(rhs_value(3, -8, -11, FormulaSet::Printed), v);
}

TEST(ValueFormula, IndependentOfRootChoice) {
    for (auto [p, d1, d2] : std::vector<std::tuple<i64, i64, i64>>{{3, -8, -11}, {5, -11, -19}, {7, -3, -19}})
        EXPECT_EQ(rhs_detail(p, d1, d2, FormulaSet::Calibrated, -1, 0).value,
                  rhs_detail(p, d1, d2, FormulaSet::Calibrated, -1, 1).value);
}

TEST(ValueFormula, RejectsOtherLevels) {
    EXPECT_THROW(rhs_value(11, -8, -3), UnsupportedLevel);
    EXPECT_THROW(rhs_value(2, -3, -7), UnsupportedLevel);
}

static void expect_bridged(i64 p, i64 d1, i64 d2) {
    const mpfr_prec_t bits = 256;
    RealBall lhs = lhs_sum(p, d1, d2, bits);
    RealBall rhs = rhs_value(p, d1, d2).eval(bits);
    EXPECT_TRUE(lhs.overlaps(rhs)) << p << " " << d1 << " " << d2 << ": " << lhs.mid().str(30) << " vs "
                                   << rhs.mid().str(30);
    EXPECT_LT((lhs - rhs).abs().mid_double(), 1e-60);
}

TEST(Bridging, SplitSplitCase) {
    for (auto [p, d1, d2] : std::vector<std::tuple<i64, i64, i64>>{{3, -8, -11}, {3, -11, -20}, {3, -8, -23},
                                                                   {5, -4, -11}, {5, -11, -19}, {5, -4, -19},
                                                                   {7, -3, -19}, {7, -3, -20}, {13, -3, -4},
                                                                   {13, -4, -23}}) {
        ASSERT_EQ(classify_case(p, d1, d2).id, 1);
        expect_bridged(p, d1, d2);
    }
}

TEST(Bridging, MixedCase) {
    for (auto [p, d1, d2] : std::vector<std::tuple<i64, i64, i64>>{{3, -8, -7}, {3, -11, -4}, {5, -7, -4},
                                                                   {5, -11, -7}, {7, -19, -4}, {7, -19, -8},
                                                                   {13, -7, -4}, {13, -11, -4}}) {
        ASSERT_EQ(classify_case(p, d1, d2).id, 3);
        expect_bridged(p, d1, d2);
    }
}

TEST(Bridging, PrintedMixedCaseOffByPSquared) {
    for (auto [p, d1, d2] : std::vector<std::tuple<i64, i64, i64>>{{3, -8, -7}, {5, -7, -4}, {7, -19, -4}}) {
        RhsResult a = rhs_detail(p, d1, d2, FormulaSet::Printed);
        RhsResult b = rhs_detail(p, d1, d2, FormulaSet::Calibrated);
        EXPECT_EQ(a.a_sum, ppow(p, 2) * b.a_sum);
    }
}

TEST(Bridging, ReportedCases) {
    EXPECT_TRUE(case_bridged(1, FormulaSet::Calibrated));
    EXPECT_TRUE(case_bridged(3, FormulaSet::Calibrated));
    EXPECT_FALSE(case_bridged(2, FormulaSet::Calibrated));
    EXPECT_FALSE(case_bridged(4, FormulaSet::Calibrated));
    EXPECT_FALSE(case_bridged(5, FormulaSet::Calibrated));
    EXPECT_FALSE(case_bridged(1, FormulaSet::Printed));
}

TEST(Classical, SmallValues) {
    EXPECT_EQ(classical_gz_rhs(-3, -4), log_term(2, 2) + log_term(3, 1));
    EXPECT_EQ(classical_gz_rhs(-3, -8), log_term(2, 4) + log_term(5, 2));
    EXPECT_EQ(classical_gz_rhs(-8, -11), classical_gz_rhs(-11, -8));
}

TEST(Classical, MatchesSingularModuli) {
    // class number one: (8 / (w1 w2)) log |j(d1) - j(d2)|
    const mpfr_prec_t bits = 256;
    std::vector<std::pair<i64, BinaryQuadraticForm>> reps = {
        {-3, {1, 1, 1}}, {-4, {1, 0, 1}}, {-7, {1, 1, 2}}, {-8, {1, 0, 2}}, {-11, {1, 1, 3}}, {-19, {1, 1, 5}}, {-43, {1, 1, 11}}};
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
            auto [d1, Q1] = reps[a];
            auto [d2, Q2] = reps[b];
            if (std::gcd(d1, d2) != 1) continue;
            ComplexBall j1 = eval_j(cm_point(Q1).tau(bits), bits), j2 = eval_j(cm_point(Q2).tau(bits), bits);
            RealBall direct = RealBall::from_mpq(rat(8, unit_count(d1) * unit_count(d2)), bits) * (j1 - j2).log_abs();
            EXPECT_TRUE(classical_gz_rhs(d1, d2).eval(bits).overlaps(direct)) << d1 << " " << d2;
        }
}
