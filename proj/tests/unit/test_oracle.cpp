#include "adcert/certify.hpp"
#include "adcert/error.hpp"
#include "adcert/fixtures.hpp"
#include "adcert/oracle.hpp"
#include "random_nets.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace adcert;

namespace {

Matrix scalar(const Rational& x) {
    Matrix m(1, 1);
    m(0, 0) = x;
    return m;
}

std::vector<Rational> mat_vec(const Matrix& J, const std::vector<Rational>& d) {
    std::vector<Rational> out(J.rows);
    for (std::size_t r = 0; r < J.rows; ++r)
        for (std::size_t c = 0; c < J.cols; ++c) out[r] += J(r, c) * d[c];
    return out;
}

std::vector<Rational> random_dir(std::mt19937_64& rng, std::size_t W) {
    std::uniform_int_distribution<int> dist(-5, 5);
    std::vector<Rational> d(W);
    for (auto& x : d) x = Rational(dist(rng), 1 + (dist(rng) + 5) % 3);
    return d;
}

Network x_squared_left() {
    // x^2 on (-inf, 0], 0 on (0, inf)
    Piece a{Interval{std::nullopt, Rational(0), false, true}, Poly({Rational(0), Rational(0), Rational(1)})};
    Piece b{Interval{Rational(0), std::nullopt, false, false}, Poly()};
    return gen::bias_only_net(PiecewiseFn({a, b}));
}

} // namespace

TEST(Oracle, IntroIdentityIsDifferentiable) {
    OracleVerdict v = oracle_differentiability(fixture("intro_identity").net, {Rational(0)});
    ASSERT_EQ(v.status, OracleStatus::Differentiable);
    EXPECT_EQ(v.gradient, scalar(Rational(1)));
}

TEST(Oracle, ReluKink) {
    OracleVerdict v = oracle_differentiability(gen::bias_only_net(relu()), {Rational(0)});
    ASSERT_EQ(v.status, OracleStatus::NonDifferentiable);
    ASSERT_TRUE(v.witness);
    EXPECT_EQ(v.witness->kind, OracleWitness::Kind::Opposed);
    EXPECT_EQ(v.witness->d, std::vector<Rational>{Rational(1)});
    EXPECT_EQ(v.witness->plus, std::vector<Rational>{Rational(1)});
    EXPECT_EQ(v.witness->minus, std::vector<Rational>{Rational(0)});
}

TEST(Oracle, IntroHalf) {
    OracleVerdict v = oracle_differentiability(fixture("intro_half").net, {Rational(0)});
    ASSERT_EQ(v.status, OracleStatus::NonDifferentiable);
    ASSERT_TRUE(v.witness);
    // slope 1 to the right, slope 1/2 seen from the left
    EXPECT_EQ(v.witness->plus[0], Rational(1));
    EXPECT_EQ(v.witness->minus[0], Rational(-1, 2));
}

TEST(Oracle, ClosureDisagreementButDifferentiable) {
    // ReLU(w1 * w2) at the origin: the two closure pieces have equal derivatives there,
    // ReLU(w1) * w2 needs the cell step.
    MultiPoly f = MultiPoly::variable(3, 1) * MultiPoly::variable(3, 2);
    Layer l;
    l.pre = PreActivationLayer::general(1, 1, 2, {f});
    l.act = {relu()};
    Network net({Rational(1)}, {l});
    OracleVerdict v = oracle_differentiability(net, {Rational(0), Rational(0)});
    ASSERT_EQ(v.status, OracleStatus::Differentiable);
    EXPECT_TRUE(v.gradient.is_zero());
}

TEST(Oracle, ClarkeLimitExamples) {
    EXPECT_TRUE(oracle_clarke_limit(fixture("intro_identity").net, {Rational(0)}, scalar(Rational(1))));
    EXPECT_TRUE(oracle_clarke_limit(gen::bias_only_net(relu()), {Rational(0)}, scalar(Rational(0))));
    EXPECT_TRUE(oracle_clarke_limit(gen::bias_only_net(relu()), {Rational(0)}, scalar(Rational(1))));
    EXPECT_FALSE(oracle_clarke_limit(gen::bias_only_net(relu()), {Rational(0)}, scalar(Rational(1, 2))));
    EXPECT_FALSE(oracle_clarke_limit(fixture("intro_half").net, {Rational(0)}, scalar(Rational(0))));
    EXPECT_TRUE(oracle_clarke_limit(fixture("intro_half").net, {Rational(0)}, scalar(Rational(1, 2))));
}

TEST(Oracle, FiniteDifferences) {
    EXPECT_NEAR(fd_grad(gen::bias_only_net(relu()), {Rational(1)}, 1e-6)[0][0], 1.0, 1e-6);
    EXPECT_NEAR(fd_grad(x_squared_left(), {Rational(-2)}, 1e-6)[0][0], -4.0, 4e-5);
    EXPECT_NEAR(fd_grad(fixture("intro_identity").net, {Rational(3)}, 1e-6)[0][0], 1.0, 1e-6);
}

TEST(RayGerm, SegmentStaysInRegion) {
    std::mt19937_64 rng(21);
    std::vector<Rational> M = {Rational(-1), Rational(0), Rational(1)};
    for (int k = 0; k < 40; ++k) {
        Network net = k % 2 ? gen::random_bias_net(rng, M) : gen::random_mixed_net(rng, M);
        std::vector<Rational> w;
        for (std::size_t p = 0; p < net.W(); ++p) w.push_back(M[rng() % 3]);
        auto d = random_dir(rng, net.W());
        RayGerm g = ray_germ(net, w, d);
        ASSERT_TRUE(g.t_star > Rational(0));
        for (const Rational& frac : {Rational(1, 2), Rational(1, 7), Rational(99, 100)}) {
            std::vector<Rational> x = w;
            for (std::size_t p = 0; p < x.size(); ++p) x[p] += frac * g.t_star * d[p];
            EXPECT_EQ(active_assignment(net, x), g.gamma);
        }
    }
}

TEST(ConePoint, SolutionsAreStrict) {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> dist(-3, 3);
    int feasible = 0, infeasible = 0;
    for (int k = 0; k < 400; ++k) {
        const std::size_t dim = 1 + k % 4, m = 1 + k % 6;
        std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(dim));
        for (auto& r : rows)
            for (auto& x : r) x = dist(rng);
        auto pt = strict_cone_point(rows, dim);
        if (pt) {
            ++feasible;
            for (const auto& r : rows) {
                Rational s;
                for (std::size_t j = 0; j < dim; ++j) s += r[j] * (*pt)[j];
                EXPECT_GT(s, Rational(0));
            }
        } else {
            ++infeasible;
            // No integer direction in a box may satisfy the system.
            std::vector<int> d(dim, -4);
            while (true) {
                bool all = true;
                for (const auto& r : rows) {
                    Rational s;
                    for (std::size_t j = 0; j < dim; ++j) s += r[j] * Rational(d[j]);
                    all = all && s > Rational(0);
                }
                EXPECT_FALSE(all);
                std::size_t j = 0;
                while (j < dim && d[j] == 4) d[j++] = -4;
                if (j == dim) break;
                ++d[j];
            }
        }
    }
    EXPECT_GT(feasible, 50);
    EXPECT_GT(infeasible, 50);
}

TEST(Oracle, VerdictsConsistentWithRays) {
    // Differentiable: every ray slope is G d. NonDifferentiable: the witness replays.
    std::mt19937_64 rng(31);
    std::vector<Rational> M = {Rational(-1), Rational(0), Rational(1)};
    for (int k = 0; k < 60; ++k) {
        Network net = k % 2 ? gen::random_bias_net(rng, M) : gen::random_mixed_net(rng, M);
        for (const auto& w : gen::all_points(M, net.W())) {
            OracleVerdict v = oracle_differentiability(net, w);
            ASSERT_NE(v.status, OracleStatus::Inconclusive);
            if (v.status == OracleStatus::Differentiable) {
                for (int r = 0; r < 3; ++r) {
                    auto d = random_dir(rng, net.W());
                    EXPECT_EQ(ray_germ(net, w, d).slope, mat_vec(v.gradient, d));
                }
            } else {
                ASSERT_TRUE(v.witness);
                const auto& wi = *v.witness;
                if (wi.kind == OracleWitness::Kind::Opposed) {
                    std::vector<Rational> nd = wi.d;
                    for (auto& x : nd) x = -x;
                    EXPECT_EQ(ray_germ(net, w, wi.d).slope, wi.plus);
                    EXPECT_EQ(ray_germ(net, w, nd).slope, wi.minus);
                    std::vector<Rational> neg = wi.minus;
                    for (auto& x : neg) x = -x;
                    EXPECT_NE(wi.plus, neg);
                }
            }
        }
    }
}

TEST(Oracle, NeverInconclusiveOnSmallPwlNets) {
    std::mt19937_64 rng(41);
    std::vector<Rational> M = {Rational(-1), Rational(0), Rational(1)};
    for (int k = 0; k < 40; ++k) {
        Network net = gen::random_mixed_net(rng, M, 3);
        OracleBudget b;
        b.directions = 2 * net.W() + 8;
        for (const auto& w : gen::all_points(M, net.W()))
            EXPECT_NE(oracle_differentiability(net, w, b).status, OracleStatus::Inconclusive);
    }
}

TEST(Oracle, FiniteDifferencesAgreeOffGrid) {
    std::mt19937_64 rng(51);
    std::vector<Rational> M = {Rational(-1), Rational(0), Rational(1)};
    const std::vector<Rational> off = {Rational(-7, 13), Rational(5, 11), Rational(17, 19), Rational(-3, 23)};
    for (int k = 0; k < 40; ++k) {
        Network net = k % 2 ? gen::random_bias_net(rng, M) : gen::random_mixed_net(rng, M);
        std::vector<Rational> w(off.begin(), off.begin() + static_cast<long>(net.W()));
        OracleVerdict v = oracle_differentiability(net, w);
        if (v.status != OracleStatus::Differentiable) continue;
        auto fd = fd_grad(net, w, 1e-7);
        for (std::size_t p = 0; p < net.W(); ++p) {
            double exact = v.gradient(0, p).to_double();
            EXPECT_NEAR(fd[0][p], exact, 1e-5 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST(Oracle, LengthMismatch) {
    EXPECT_THROW(oracle_differentiability(gen::relu_sum_net(), {Rational(0)}), Error);
}
