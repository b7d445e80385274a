#include "adcert/certify.hpp"
#include "adcert/error.hpp"
#include "adcert/fixtures.hpp"
#include "random_nets.hpp"

#include <gtest/gtest.h>

using namespace adcert;

namespace {

Matrix row(std::vector<Rational> v) {
    Matrix m(1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
    return m;
}

// z(v1, u, v2) = ReLU(v1) * u + v2
Network relu_times_u() {
    Layer a;
    a.pre = PreActivationLayer::affine_with_bias(1, 1, 0, {MultiPoly(1)});
    a.act = {relu()};
    Layer b;
    b.pre = PreActivationLayer::affine_with_bias(1, 1, 1, {MultiPoly::variable(2, 0) * MultiPoly::variable(2, 1)});
    b.act = {identity_fn()};
    return Network({Rational(1)}, {a, b});
}

Network relu_override5() { return gen::bias_only_net(PiecewiseFn(relu().pieces(), {{Rational(0), Rational(5)}})); }

const std::vector<Rational> kM3 = {Rational(-1), Rational(0), Rational(1)};
const std::vector<Rational> kM5 = {Rational(-2), Rational(-1), Rational(0), Rational(1), Rational(2)};

std::vector<Network> bias_suite() {
    std::mt19937_64 rng(20240611);
    std::vector<Network> out;
    for (int k = 0; k < 24; ++k) out.push_back(gen::random_bias_net(rng, k % 2 ? kM5 : kM3, 4));
    return out;
}

std::vector<Network> mixed_suite() {
    std::mt19937_64 rng(77);
    std::vector<Network> out;
    for (int k = 0; k < 16; ++k) out.push_back(gen::random_mixed_net(rng, kM3, 4));
    return out;
}

} // namespace

TEST(DecideBias, ReluAtKink) {
    BiasDecision d = decide_bias(gen::bias_only_net(relu()), {Rational(0)});
    EXPECT_FALSE(d.differentiable);
    ASSERT_TRUE(d.witness);
    EXPECT_EQ(*d.witness, (NeuronId{1, 0}));
}

TEST(DecideBias, ReluAwayFromKink) {
    BiasDecision d = decide_bias(gen::bias_only_net(relu()), {Rational(1)});
    EXPECT_TRUE(d.differentiable);
    EXPECT_EQ(d.gradient, row({Rational(1)}));
}

TEST(DecideBias, ZeroDownstreamPartial) {
    BiasDecision d = decide_bias(relu_times_u(), {Rational(0), Rational(0), Rational(0)});
    EXPECT_TRUE(d.differentiable);
    EXPECT_EQ(d.gradient, row({Rational(0), Rational(0), Rational(1)}));
}

TEST(DecideBias, RequiresBias) {
    try {
        decide_bias(fixture("intro_identity").net, {Rational(0)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RequiresBias);
    }
}

TEST(SufficientStd, Examples) {
    const Network id = fixture("intro_identity").net;
    EXPECT_EQ(sufficient_std(id, {Rational(1)}), Certificate::SuffStd);
    EXPECT_FALSE(sufficient_std(id, {Rational(0)}));
    EXPECT_TRUE(sufficient_std(relu_times_u(), {Rational(0), Rational(0), Rational(0)}));
}

TEST(SufficientClarke, Examples) {
    for (const auto& net : bias_suite())
        if (net.all_consistent()) EXPECT_TRUE(sufficient_clarke(net, std::vector<Rational>(net.W(), Rational(0))));
    EXPECT_FALSE(sufficient_clarke(fixture("intro_identity").net, {Rational(0)}));
    EXPECT_FALSE(sufficient_clarke(relu_override5(), {Rational(0)}));
}

TEST(Classify, IntroIdentity) {
    Classification c = classify(fixture("intro_identity").net, {Rational(0)});
    EXPECT_EQ(c.verdict, Verdict::DiffIncorrect);
    EXPECT_EQ(c.certificate, Certificate::Oracle);
    EXPECT_EQ(c.ad, row({Rational(0)}));
    ASSERT_TRUE(c.derivative_claim);
    EXPECT_EQ(*c.derivative_claim, row({Rational(1)}));
}

TEST(Classify, IntroHalf) {
    Classification c = classify(fixture("intro_half").net, {Rational(0)});
    EXPECT_EQ(c.verdict, Verdict::NonDiffNotClarke);
}

TEST(Classify, BiasReluKink) {
    Classification c = classify(gen::bias_only_net(relu()), {Rational(0)});
    EXPECT_EQ(c.verdict, Verdict::NonDiffClarke);
    EXPECT_EQ(c.certificate, Certificate::ThmBiasClarke);
    EXPECT_EQ(c.witness, "(1,1)");
}

TEST(Classify, InconsistentOverrideFallsToOracle) {
    Classification c = classify(relu_override5(), {Rational(0)});
    EXPECT_EQ(c.certificate, Certificate::Oracle);
    EXPECT_EQ(c.verdict, Verdict::NonDiffNotClarke);
}

TEST(Classify, DiffCorrectCarriesAd) {
    for (const auto& net : bias_suite())
        for (const auto& w : gen::all_points(kM3, net.W())) {
            Classification c = classify(net, w);
            if (c.verdict != Verdict::DiffCorrect) continue;
            ASSERT_TRUE(c.derivative_claim);
            EXPECT_EQ(*c.derivative_claim, c.ad);
        }
}

TEST(Properties, BiasEquivalenceMatchesOracle) {
    for (const auto& net : bias_suite())
        for (const auto& w : gen::all_points(kM3, net.W())) {
            BiasDecision d = decide_bias(net, w);
            OracleVerdict o = oracle_differentiability(net, w);
            ASSERT_NE(o.status, OracleStatus::Inconclusive);
            EXPECT_EQ(d.differentiable, o.status == OracleStatus::Differentiable);
            if (d.differentiable) EXPECT_EQ(d.gradient, o.gradient);
        }
}

TEST(Properties, WitnessConjunctsHoldExactly) {
    for (const auto& net : bias_suite())
        for (const auto& w : gen::all_points(kM3, net.W())) {
            ADReport rep = reverse_ad(net, w);
            BiasDecision d = decide_bias(net, rep);
            if (!d.witness) continue;
            const NeuronId id = *d.witness;
            EXPECT_TRUE(net.layer(id.l).act[id.i].in_ndf(rep.trace.y[id.l][id.i]));
            bool nonzero = false;
            for (const auto& x : rep.hidden_partial(id)) nonzero = nonzero || x != 0;
            EXPECT_TRUE(nonzero);
        }
}

TEST(Properties, BiasNetsNeverIncorrect) {
    for (const auto& net : bias_suite())
        for (const auto& w : gen::all_points(kM5, net.W())) EXPECT_NE(classify(net, w).verdict, Verdict::DiffIncorrect);
}

TEST(Properties, SufficientStdSound) {
    auto nets = mixed_suite();
    for (const auto& n : bias_suite()) nets.push_back(n);
    for (const auto& net : nets)
        for (const auto& w : gen::all_points(kM3, net.W())) {
            if (!sufficient_std(net, w)) continue;
            OracleVerdict o = oracle_differentiability(net, w);
            ASSERT_EQ(o.status, OracleStatus::Differentiable);
            EXPECT_EQ(o.gradient, reverse_ad(net, w).jacobian);
        }
}

TEST(Properties, SufficientClarkeSound) {
    for (const auto& net : mixed_suite())
        for (const auto& w : gen::all_points(kM3, net.W())) {
            if (!sufficient_clarke(net, w)) continue;
            const Matrix ad = reverse_ad(net, w).jacobian;
            OracleVerdict o = oracle_differentiability(net, w);
            if (o.status == OracleStatus::Differentiable) EXPECT_EQ(o.gradient, ad);
            else EXPECT_TRUE(oracle_clarke_limit(net, w, ad));
        }
}

TEST(Properties, PrecedencePathsAgree) {
    // Wherever a theorem path decides, the oracle path reaches the same verdict class.
    for (const auto& net : bias_suite())
        for (const auto& w : gen::all_points(kM3, net.W())) {
            Classification c = classify(net, w);
            OracleVerdict o = oracle_differentiability(net, w);
            EXPECT_EQ(is_nondiff(c.verdict), o.status == OracleStatus::NonDifferentiable);
            if (c.verdict == Verdict::NonDiffClarke) EXPECT_TRUE(oracle_clarke_limit(net, w, c.ad));
        }
}

TEST(Properties, OverrideNegativeControl) {
    const Network net = relu_override5();
    const Matrix ad = reverse_ad(net, {Rational(0)}).jacobian;
    EXPECT_EQ(ad, row({Rational(5)}));
    EXPECT_FALSE(oracle_clarke_limit(net, {Rational(0)}, ad));
}

TEST(Names, RoundTrip) {
    EXPECT_EQ(to_string(Verdict::NonDiffNotClarke), "NonDiffNotClarke");
    EXPECT_EQ(to_string(Certificate::ThmBiasEquivalence), "ThmBiasEquivalence");
    EXPECT_TRUE(is_nondiff(Verdict::NonDiffClarke));
    EXPECT_FALSE(is_nondiff(Verdict::DiffIncorrect));
}
