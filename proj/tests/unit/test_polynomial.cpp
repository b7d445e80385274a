#include "adcert/error.hpp"
#include "adcert/polynomial.hpp"

#include <gtest/gtest.h>

#include <random>

using adcert::Poly;
using adcert::Rational;

namespace {

Poly from_roots(const std::vector<Rational>& roots) {
    Poly p = Poly::constant(1);
    for (const auto& r : roots) p = p * Poly::linear(-r, 1);
    return p;
}

} // namespace

TEST(Poly, EvalDerivativeCompose) {
    Poly p({Rational(1), Rational(-2), Rational(3)});  // 3x^2 - 2x + 1
    EXPECT_EQ(p.eval(Rational(2)), Rational(9));
    EXPECT_EQ(p.derivative_at(Rational(2)), Rational(10));
    EXPECT_EQ(p.derivative(), Poly({Rational(-2), Rational(6)}));
    Poly inner = Poly::linear(Rational(1), Rational(1));  // t + 1
    Poly c = p.compose(inner);                            // 3t^2 + 4t + 2
    EXPECT_EQ(c, Poly({Rational(2), Rational(4), Rational(3)}));
}

TEST(Poly, DivmodAndGcd) {
    Poly a = from_roots({Rational(1), Rational(2), Rational(3)});
    Poly b = from_roots({Rational(2), Rational(5)});
    Poly q, r;
    Poly::divmod(a, b, q, r);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
    EXPECT_EQ(Poly::gcd(a, b), Poly::linear(Rational(-2), Rational(1)));
}

TEST(Poly, SquarefreeDropsMultiplicity) {
    Poly p = from_roots({Rational(1), Rational(1), Rational(1), Rational(-2)});
    EXPECT_EQ(p.squarefree(), from_roots({Rational(1), Rational(-2)}));
}

TEST(Poly, RationalRootsExact) {
    Poly p = from_roots({Rational(-3, 2), Rational(0), Rational(7, 5), Rational(7, 5)});
    auto roots = adcert::real_roots(p);
    ASSERT_EQ(roots.size(), 3u);
    EXPECT_TRUE(roots[0].rational && roots[0].value == Rational(-3, 2));
    EXPECT_TRUE(roots[1].rational && roots[1].value == Rational(0));
    EXPECT_TRUE(roots[2].rational && roots[2].value == Rational(7, 5));
}

TEST(Poly, IrrationalRootsIsolated) {
    Poly p({Rational(-2), Rational(0), Rational(1)});  // x^2 - 2
    auto roots = adcert::real_roots(p);
    ASSERT_EQ(roots.size(), 2u);
    for (auto& r : roots) {
        EXPECT_FALSE(r.rational);
        r.refine(Rational(1, 1000000));
        double mid = ((r.lo + r.hi) / Rational(2)).to_double();
        EXPECT_NEAR(mid * mid, 2.0, 1e-5);
        EXPECT_NE(p.eval(r.lo).sign(), p.eval(r.hi).sign());
    }
    EXPECT_EQ(roots[0].compare(Rational(0)), -1);
    EXPECT_EQ(roots[1].compare(Rational(1)), 1);
    EXPECT_EQ(roots[1].compare(Rational(3, 2)), -1);
}

TEST(Poly, NoRealRoots) {
    Poly p({Rational(1), Rational(0), Rational(1)});
    EXPECT_TRUE(adcert::real_roots(p).empty());
    EXPECT_EQ(adcert::count_roots_open(p, std::nullopt, std::nullopt), 0);
}

TEST(Poly, CountRootsOpenInterval) {
    Poly p = from_roots({Rational(-1), Rational(0), Rational(2)}) * Poly({Rational(-3), Rational(0), Rational(1)});
    EXPECT_EQ(adcert::count_roots_open(p, std::nullopt, std::nullopt), 5);
    EXPECT_EQ(adcert::count_roots_open(p, Rational(-1), Rational(2)), 2);  // 0 and sqrt(3)
    EXPECT_EQ(adcert::count_roots_open(p, Rational(0), std::nullopt), 2);  // sqrt(3), 2
}

// Property: a random product of linear factors has exactly its distinct roots.
TEST(Poly, RandomRootsRecovered) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5), cnt(1, 5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> roots;
        int k = cnt(rng);
        for (int i = 0; i < k; ++i) roots.push_back(Rational(num(rng), den(rng)));
        Poly p = from_roots(roots).scaled(Rational(num(rng) == 0 ? 3 : 7, 2));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        auto got = adcert::real_roots(p);
        ASSERT_EQ(got.size(), roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i) {
            ASSERT_TRUE(got[i].rational);
            EXPECT_EQ(got[i].value, roots[i]);
        }
    }
}

TEST(Poly, SimplestBetween) {
    EXPECT_EQ(adcert::simplest_between(Rational(1, 3), Rational(1, 2)), Rational(2, 5));
    EXPECT_EQ(adcert::simplest_between(Rational(-1, 2), Rational(1, 2)), Rational(0));
    EXPECT_EQ(adcert::simplest_between(Rational(-5, 2), Rational(-9, 4)), Rational(-7, 3));
    EXPECT_EQ(adcert::simplest_between(Rational(2), Rational(7, 2)), Rational(3));
}

TEST(Poly, RootFreeRadius) {
    Poly q({Rational(1), Rational(-3), Rational(2)});  // roots 1/2 and 1
    Rational r = adcert::root_free_radius(q);
    EXPECT_GT(r, Rational(0));
    EXPECT_LE(r, Rational(1, 2));
    EXPECT_THROW(adcert::root_free_radius(Poly::x()), adcert::Error);
}
