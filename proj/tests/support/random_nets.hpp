#pragma once

#include "adcert/catalog.hpp"
#include "adcert/grid.hpp"
#include "adcert/network.hpp"

#include <random>

namespace adcert::gen {

// Continuous PWL with at most max_kinks knots drawn from M; random owner.
PiecewiseFn random_pwl(std::mt19937_64& rng, const std::vector<Rational>& M, int max_kinks);

// All layers AffineWithBias, L <= 3, N_l <= 3, W <= max_w, one datum.
Network random_bias_net(std::mt19937_64& rng, const std::vector<Rational>& M, std::size_t max_w = 4);

// Layers drawn from {AffineWithBias, WellStructuredBiaffine}; last layer has bias.
Network random_mixed_net(std::mt19937_64& rng, const std::vector<Rational>& M, std::size_t max_w = 4);

// z = ReLU(1 * w1 + w2): one AffineWithBias layer, weight w1, bias w2.
Network relu_sum_net(Ownership owner = Ownership::Left);

// z = sigma(v): one neuron whose only parameter is its bias.
Network bias_only_net(const PiecewiseFn& sigma);

// Same as `net` with activation (l,i) replaced.
Network with_activation(const Network& net, NeuronId id, PiecewiseFn sigma);

// Every point of M^W in lexicographic order.
std::vector<std::vector<Rational>> all_points(const std::vector<Rational>& M, std::size_t W);

} // namespace adcert::gen
