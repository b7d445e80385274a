#include "adcert/ad.hpp"
#include "adcert/error.hpp"
#include "adcert/fixtures.hpp"
#include "random_nets.hpp"

#include <gtest/gtest.h>

using namespace adcert;

namespace {

Matrix scalar(const Rational& x) {
    Matrix m(1, 1);
    m(0, 0) = x;
    return m;
}

std::vector<Rational> random_point(std::mt19937_64& rng, const std::vector<Rational>& M, std::size_t W) {
    std::vector<Rational> w;
    for (std::size_t p = 0; p < W; ++p) w.push_back(M[std::uniform_int_distribution<std::size_t>(0, M.size() - 1)(rng)]);
    return w;
}

} // namespace

TEST(ReverseAd, IntroIdentityAtZero) {
    Network net = fixture("intro_identity").net;
    EXPECT_EQ(reverse_ad(net, {Rational(0)}).jacobian, scalar(Rational(0)));
    EXPECT_EQ(forward_ad(net, {Rational(0)}), scalar(Rational(0)));
}

TEST(ReverseAd, ReluExamples) {
    Network net = gen::bias_only_net(relu());
    EXPECT_EQ(reverse_ad(net, {Rational(1)}).jacobian, scalar(Rational(1)));
    EXPECT_EQ(forward_ad(net, {Rational(-1)}), scalar(Rational(0)));
}

TEST(ReverseAd, GridAdversary) {
    Fixture f = fixture_from_spec("intro_grid_adversary,M=-1;0;1,lambda=7");
    for (int x : {-1, 0, 1}) EXPECT_EQ(reverse_ad(f.net, {Rational(x)}).jacobian, scalar(Rational(7)));
}

TEST(ReverseAd, OutputPartialsAreUnitVectors) {
    std::mt19937_64 rng(3);
    std::vector<Rational> M = {Rational(-1), Rational(0), Rational(1)};
    for (int k = 0; k < 30; ++k) {
        Network net = gen::random_mixed_net(rng, M);
        ADReport r = reverse_ad(net, random_point(rng, M, net.W()));
        for (std::size_t i = 0; i < net.out_dim(); ++i) {
            std::vector<Rational> e(net.out_dim());
            e[i] = 1;
            EXPECT_EQ(r.hidden_partial({net.L(), i}), e);
        }
    }
}

TEST(ReverseAd, ModesAgree) {
    std::mt19937_64 rng(4);
    std::vector<Rational> M = {Rational(-1), Rational(0), Rational(1, 2), Rational(1)};
    for (int k = 0; k < 60; ++k) {
        Network net = k % 2 ? gen::random_bias_net(rng, M) : gen::random_mixed_net(rng, M);
        auto w = random_point(rng, M, net.W());
        EXPECT_EQ(reverse_ad(net, w).jacobian, forward_ad(net, w));
    }
    for (const char* spec : {"thm7_ndf_lb_zeros,M=8eq,n=4,a=2", "thm9_inc_lb_kinks,M=8eq,n=4,a=2"}) {
        Network net = fixture_from_spec(spec).net;
        for (int k = 0; k < 20; ++k) {
            auto w = random_point(rng, parse_grid("8eq").M, net.W());
            EXPECT_EQ(reverse_ad(net, w).jacobian, forward_ad(net, w)) << spec;
        }
    }
}

TEST(ReverseAd, LengthMismatch) {
    Network net = gen::relu_sum_net();
    EXPECT_THROW(reverse_ad(net, {Rational(1)}), Error);
    EXPECT_THROW(forward_ad(net, {}), Error);
}

TEST(Assignments, ActiveAndClosure) {
    Network net = gen::bias_only_net(relu());
    const auto& pieces = net.layer(1).act[0].pieces();
    auto owner_of = [&](const Rational& x) { return active_assignment(net, {x}).gamma[0][0]; };
    EXPECT_FALSE(pieces[owner_of(Rational(1))].interval.hi.has_value());
    EXPECT_TRUE(pieces[owner_of(Rational(0))].interval.hi_closed);  // left-owned kink
    EXPECT_EQ(active_assignment(net, {Rational(0)}), active_assignment(net, {Rational(0)}));
    EXPECT_EQ(closure_assignments(net, {Rational(0)}).size(), 2u);
    EXPECT_EQ(closure_assignments(net, {Rational(1)}).size(), 1u);
    EXPECT_EQ(closure_assignments(fixture("intro_identity").net, {Rational(0)}).size(), 4u);
    EXPECT_THROW(closure_assignments(fixture("intro_identity").net, {Rational(0)}, 3), Error);
}

TEST(PieceJacobian, ReluPieces) {
    Network net = gen::bias_only_net(relu());
    PieceAssignment g = active_assignment(net, {Rational(0)});
    const auto& pieces = net.layer(1).act[0].pieces();
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        g.gamma[0][0] = k;
        Rational expect = pieces[k].interval.hi ? Rational(0) : Rational(1);
        EXPECT_EQ(piece_jacobian(net, g, {Rational(0)}), scalar(expect));
    }
}

TEST(PieceJacobian, MatchesAdWithoutOverrides) {
    std::mt19937_64 rng(8);
    std::vector<Rational> M = {Rational(-1), Rational(0), Rational(1)};
    for (int k = 0; k < 60; ++k) {
        Network net = k % 2 ? gen::random_bias_net(rng, M) : gen::random_mixed_net(rng, M);
        auto w = random_point(rng, M, net.W());
        EXPECT_EQ(reverse_ad(net, w).jacobian, piece_jacobian(net, active_assignment(net, w), w));
    }
}

TEST(PieceJacobian, OverrideShiftsAd) {
    // adf(0) = 5 on ReLU: AD differs from the owner piece's derivative by exactly 5.
    Network net = gen::bias_only_net(PiecewiseFn(relu().pieces(), {{Rational(0), Rational(5)}}));
    const std::vector<Rational> w = {Rational(0)};
    Matrix ad = reverse_ad(net, w).jacobian;
    Matrix pj = piece_jacobian(net, active_assignment(net, w), w);
    EXPECT_EQ(ad(0, 0) - pj(0, 0), Rational(5));
}

TEST(PieceJacobian, InteriorPointsHaveOneAssignment) {
    std::mt19937_64 rng(9);
    std::vector<Rational> M = {Rational(-1), Rational(0), Rational(1)};
    const std::vector<Rational> off = {Rational(-7, 13), Rational(5, 11), Rational(17, 19), Rational(-3, 23)};
    for (int k = 0; k < 30; ++k) {
        Network net = gen::random_mixed_net(rng, M);
        std::vector<Rational> w(off.begin(), off.begin() + static_cast<long>(net.W()));
        ADReport r = reverse_ad(net, w);
        bool interior = true;
        for (const auto& id : net.neurons())
            interior = interior && !net.layer(id.l).act[id.i].in_ndf(r.trace.y[id.l][id.i]);
        if (!interior) continue;
        for (const auto& g : closure_assignments(net, w)) EXPECT_EQ(piece_jacobian(net, g, w), r.jacobian);
    }
}
