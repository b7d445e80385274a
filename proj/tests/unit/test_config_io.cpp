#include "adcert/config_io.hpp"
#include "adcert/error.hpp"
#include "random_nets.hpp"

#include <gtest/gtest.h>

using namespace adcert;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Io;
}

} // namespace

TEST(ConfigIo, FixturesRoundTrip) {
    for (const char* spec : {"intro_identity", "intro_half", "intro_grid_adversary,M=-1;0;1", "thm3_bias_lb,M=16eq,n=3,a=2",
                             "thm7_ndf_lb_kinks,M=16eq,n=4,a=2", "thm7_ndf_lb_zeros,M=16eq,n=4,a=1",
                             "thm9_inc_lb_kinks,M=16eq,n=4,a=2", "thm9_inc_lb_zeros,M=16eq,n=4,a=1"}) {
        Network net = fixture_from_spec(spec).net;
        json j = network_to_json(net);
        Network back = network_from_json(json::parse(j.dump()));
        EXPECT_TRUE(back == net) << spec;
        EXPECT_EQ(network_to_json(back).dump(), j.dump()) << spec;
    }
}

TEST(ConfigIo, RandomNetsRoundTrip) {
    std::mt19937_64 rng(5);
    std::vector<Rational> M = {Rational(-1), Rational(1, 2), Rational(3)};
    for (int k = 0; k < 30; ++k) {
        Network net = k % 2 ? gen::random_bias_net(rng, M) : gen::random_mixed_net(rng, M);
        EXPECT_TRUE(network_from_json(network_to_json(net)) == net);
    }
}

TEST(ConfigIo, OverridesRoundTrip) {
    PiecewiseFn f(relu().pieces(), {{Rational(0), Rational(5)}});
    PiecewiseFn back = activation_from_json(activation_to_json(f));
    EXPECT_TRUE(back == f);
    EXPECT_EQ(back.adf_eval(Rational(0)), Rational(5));
}

TEST(ConfigIo, RationalsAsStrings) {
    EXPECT_EQ(rational_to_json(Rational(-3, 4)).get<std::string>(), "-3/4");
    EXPECT_EQ(rational_from_json(json("6/8")), Rational(3, 4));
    EXPECT_EQ(rational_from_json(json(2)), Rational(2));
}

TEST(ConfigIo, CatalogShorthand) {
    json j = json::parse(R"({
      "input": ["1"],
      "layers": [
        {"kind": "affine_bias", "in": 1, "out": 1, "weights": 1,
         "f": [[{"coef": "1", "vars": [[0, 1], [1, 1]]}]],
         "activations": ["relu"]}
      ]})");
    Network net = network_from_json(j);
    EXPECT_TRUE(net == gen::relu_sum_net());
    json k = json::parse(R"({"catalog": "leaky_relu", "slope": "1/10", "owner": "right"})");
    PiecewiseFn f = activation_from_json(k);
    EXPECT_EQ(f.eval(Rational(-10)), Rational(-1));
    EXPECT_EQ(f.adf_eval(Rational(0)), Rational(1));
}

TEST(ConfigIo, Errors) {
    EXPECT_EQ(code_of([] { network_from_json(json::parse(R"({"input": ["1"]})")); }), ErrorCode::BadConfig);
    EXPECT_EQ(code_of([] { network_from_json(json::parse(R"({"input": ["1"], "layers": [{"kind": "conv", "in": 1, "out": 1}]})")); }),
              ErrorCode::BadConfig);
    EXPECT_EQ(code_of([] { load_network("/nonexistent/net.json"); }), ErrorCode::Io);
}
