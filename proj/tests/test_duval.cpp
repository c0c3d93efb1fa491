#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace densops;
using oracle::E;
using oracle::Gen;
using oracle::Q;

namespace {

Rational admissible_weight(Gen& g) {
    while (true) {
        const Rational m = g.rational(3, 3);
        if (m != 0 && m != -1 && m != Q(-1, 2)) return m;
    }
}

WeightedOp2 random_source(Gen& g, const Rational& mu) {
    return {g.polynomial(g.integer(0, 3)), g.polynomial(g.integer(0, 3)), g.polynomial(g.integer(0, 3)), mu};
}

bool same_coefficients(const WeightedOp2& a, const WeightedOp2& b) {
    return a.weight == b.weight && equal_probabilistic(a.a2, b.a2) && equal_probabilistic(a.a1, b.a1) &&
           equal_probabilistic(a.a0, b.a0);
}

}  // namespace

TEST(DuvalMap, IdentityAtSourceWeight) {
    Gen g(71);
    for (int i = 0; i < 20; ++i) {
        const Rational mu = admissible_weight(g);
        const WeightedOp2 src = random_source(g, mu);
        const WeightedOp2 out = duval_ovsienko_map(src, mu);
        EXPECT_TRUE(identical(out.a2, simplify(src.a2)));
        EXPECT_TRUE(identical(out.a1, simplify(src.a1)));
        EXPECT_TRUE(identical(out.a0, simplify(src.a0)));
        EXPECT_EQ(out.weight, mu);
    }
}

TEST(DuvalMap, PureSecondDerivativeUnchanged) {
    for (const Rational& mu : {Q(1), Q(2), Q(-3, 2), Q(1, 3)}) {
        const WeightedOp2 out = duval_ovsienko_map({Expr(1), Expr(0), Expr(0), mu}, Q(7, 5));
        EXPECT_TRUE(out.a2.is_one());
        EXPECT_TRUE(out.a1.is_zero());
        EXPECT_TRUE(out.a0.is_zero());
    }
}

TEST(DuvalMap, WorkedValue) {
    const WeightedOp2 out = duval_ovsienko_map({Expr(1), x_var, Expr(0), Q(1)}, Q(2));
    EXPECT_EQ(to_string(out.a1), "5*x/3");
    EXPECT_TRUE(out.a0.is_constant(Q(-1, 3)));
    EXPECT_EQ(out.weight, Q(2));
}

TEST(DuvalMap, HandComputedCoefficients) {
    // a2 = x^2, a1 = 1, a0 = x, mu = 1, lambda = 3:
    // a1~ = 7/3 + 2(-2)/3 * 2x, a0~ = 6 x + 3(-2)/(3*2) * (0 - 2) = 6x + 2.
    const WeightedOp2 out = duval_ovsienko_map({E("x^2"), Expr(1), x_var, Q(1)}, Q(3));
    EXPECT_TRUE(identical(out.a2, E("x^2")));
    EXPECT_TRUE(equal_probabilistic(out.a1, E("7/3 - 8*x/3")));
    EXPECT_TRUE(equal_probabilistic(out.a0, E("6*x + 2")));
}

TEST(DuvalMap, SingularWeights) {
    const WeightedOp2 src{Expr(1), x_var, Expr(0), Q(0)};
    for (const Rational& mu : {Q(0), Q(-1), Q(-1, 2)}) {
        WeightedOp2 s = src;
        s.weight = mu;
        EXPECT_THROW(duval_ovsienko_map(s, Q(2)), SingularWeight);
        EXPECT_THROW(pencil_from_duval(s), SingularWeight);
    }
    try {
        duval_ovsienko_map({Expr(1), Expr(0), Expr(0), Q(-1, 2)}, Q(1));
        FAIL();
    } catch (const SingularWeight& e) {
        EXPECT_NE(std::string(e.what()).find("2mu+1"), std::string::npos);
    }
}

TEST(DuvalMap, CompositionLaw) {
    Gen g(72);
    for (int i = 0; i < 30; ++i) {
        const Rational mu = admissible_weight(g), kappa = admissible_weight(g), lambda = g.rational(3, 3);
        const WeightedOp2 src = random_source(g, mu);
        const WeightedOp2 two_step = duval_ovsienko_map(duval_ovsienko_map(src, kappa), lambda);
        EXPECT_TRUE(same_coefficients(two_step, duval_ovsienko_map(src, lambda)))
            << "mu=" << mu << " kappa=" << kappa << " lambda=" << lambda;
    }
}

TEST(DuvalMap, PrincipalSymbolPreserved) {
    Gen g(73);
    for (int i = 0; i < 10; ++i) {
        const WeightedOp2 src = random_source(g, admissible_weight(g));
        EXPECT_TRUE(equal_probabilistic(duval_ovsienko_map(src, g.rational()).a2, src.a2));
    }
}

TEST(DuvalPencil, AffineFirstCoefficient) {
    const auto pencil = pencil_from_duval({Expr(1), x_var, Expr(0), Q(1)});
    for (const Rational& l : {Q(0), Q(1), Q(2), Q(-5, 2)})
        EXPECT_TRUE(equal_probabilistic(pencil(l).a1, Expr((2 * l + 1) / 3) * x_var)) << l;
    EXPECT_TRUE(identical(pencil(1).a1, x_var));
}

TEST(DuvalPencil, ConstantFamilyForPureSecondDerivative) {
    const auto pencil = pencil_from_duval({Expr(1), Expr(0), Expr(0), Q(2)});
    for (const Rational& l : {Q(-3), Q(0), Q(4, 3)}) {
        const WeightedOp2 w = pencil(l);
        EXPECT_TRUE(w.a2.is_one() && w.a1.is_zero() && w.a0.is_zero());
    }
}

TEST(DuvalPencil, DegreeBoundsByInterpolation) {
    // Sample each coefficient at a fixed x over four weights; the cubic term of the
    // interpolant bounds the degree, the leading kept term shows it is attained.
    Gen g(74);
    const std::vector<double> ls{2, 3, 4, 5};
    int quadratic_seen = 0;
    for (int i = 0; i < 20; ++i) {
        const WeightedOp2 src = random_source(g, admissible_weight(g));
        const auto pencil = pencil_from_duval(src);
        for (double x0 : {0.7, 2.3}) {
            std::vector<double> y2, y1, y0;
            for (double l : ls) {
                const WeightedOp2 w = pencil(Rational(static_cast<int>(l)));
                y2.push_back(*evaluate(w.a2, x0));
                y1.push_back(*evaluate(w.a1, x0));
                y0.push_back(*evaluate(w.a0, x0));
            }
            const auto c2 = oracle::lagrange_coefficients(ls, y2);
            const auto c1 = oracle::lagrange_coefficients(ls, y1);
            const auto c0 = oracle::lagrange_coefficients(ls, y0);
            const double scale = 1 + std::abs(y0[3]) + std::abs(y1[3]) + std::abs(y2[3]);
            EXPECT_LT(std::abs(c2[1]) + std::abs(c2[2]) + std::abs(c2[3]), 1e-9 * scale);
            EXPECT_LT(std::abs(c1[2]) + std::abs(c1[3]), 1e-9 * scale);
            EXPECT_LT(std::abs(c0[3]), 1e-9 * scale);
            if (std::abs(c0[2]) > 1e-6) ++quadratic_seen;
        }
    }
    EXPECT_GT(quadratic_seen, 0);
}
