#pragma once

#include "adcert/matrix.hpp"
#include "adcert/multipoly.hpp"
#include "adcert/piecewise.hpp"

#include <vector>

namespace adcert {

// General: an arbitrary polynomial map with no structural guarantee; it has
// neither bias parameters nor the well-structured biaffine form.
enum class LayerKind { AffineWithBias, WellStructuredBiaffine, General };

std::string_view to_string(LayerKind k);

// Pre-activation map tau_l. Every neuron's full map tau_{l,i} is kept as a
// polynomial over (x_1..x_{N_{l-1}}, p_1..p_{W_l}); x-variables come first.
struct PreActivationLayer {
    LayerKind kind = LayerKind::General;
    std::size_t in_dim = 0, out_dim = 0, param_count = 0;

    std::vector<MultiPoly> f;  // AffineWithBias: f_i(x,u), |u| = W_l - N_l. General: tau_i(x,u).
    std::vector<Matrix> M;     // WellStructuredBiaffine: N_{l-1} x W_l per neuron
    std::vector<Rational> c;   // WellStructuredBiaffine constants

    std::vector<MultiPoly> tau;  // derived

    static PreActivationLayer affine_with_bias(std::size_t in, std::size_t out, std::size_t weights,
                                               std::vector<MultiPoly> f);
    static PreActivationLayer wsb(std::size_t in, std::size_t out, std::size_t params, std::vector<Matrix> M,
                                  std::vector<Rational> c);
    static PreActivationLayer general(std::size_t in, std::size_t out, std::size_t params, std::vector<MultiPoly> tau);

    bool has_bias() const { return kind == LayerKind::AffineWithBias; }
    // Local index of the bias parameter v_i.
    std::size_t bias_param(std::size_t i) const { return param_count - out_dim + i; }
};

struct Layer {
    PreActivationLayer pre;
    std::vector<PiecewiseFn> act;
};

struct NetworkMeta {
    bool has_bias = false;
    bool wsb_ok = false;               // every layer has bias or is well-structured biaffine
    std::vector<bool> S_full;          // index l in 1..L+1; S_full[0] unused
};

struct NeuronId {
    std::size_t l = 0;  // 1-based layer
    std::size_t i = 0;  // 0-based neuron
    friend bool operator==(const NeuronId&, const NeuronId&) = default;
    friend auto operator<=>(const NeuronId&, const NeuronId&) = default;
};

class Network {
public:
    Network(std::vector<Rational> input, std::vector<Layer> layers);

    const std::vector<Rational>& input() const { return input_; }
    const std::vector<Layer>& layers() const { return layers_; }
    const Layer& layer(std::size_t l) const { return layers_[l - 1]; }  // 1-based

    std::size_t L() const { return layers_.size(); }
    std::size_t N() const { return neuron_count_; }
    std::size_t W() const { return param_offset_.back(); }
    std::size_t out_dim() const { return layers_.back().pre.out_dim; }
    std::size_t param_offset(std::size_t l) const { return param_offset_[l - 1]; }
    // Flat index among all N neurons, layer by layer.
    std::size_t flat(NeuronId id) const { return neuron_offset_[id.l - 1] + id.i; }
    const std::vector<NeuronId>& neurons() const { return ids_; }

    const NetworkMeta& meta() const { return meta_; }
    bool has_bias() const { return meta_.has_bias; }
    bool all_consistent() const;
    bool has_overrides() const;

    friend bool operator==(const Network& a, const Network& b);

private:
    std::vector<Rational> input_;
    std::vector<Layer> layers_;
    std::vector<std::size_t> param_offset_;
    std::vector<std::size_t> neuron_offset_;
    std::size_t neuron_count_ = 0;
    std::vector<NeuronId> ids_;
    NetworkMeta meta_;
};

// Structural checks (dimension chaining, biaffine pattern, bias layout) and metadata.
NetworkMeta validate(const Network& net);

struct ForwardTrace {
    std::vector<std::vector<Rational>> y;  // y[l], l = 1..L; y[0] empty
    std::vector<std::vector<Rational>> z;  // z[0] = c
    const std::vector<Rational>& output() const { return z.back(); }
};

ForwardTrace forward(const Network& net, const std::vector<Rational>& w);
std::vector<double> forward_double(const Network& net, const std::vector<double>& w);

// z_{l-1} followed by layer l's slice of w: the variable order of tau_{l,i}.
std::vector<Rational> tau_point(const Network& net, std::size_t l, const std::vector<Rational>& z_prev,
                                const std::vector<Rational>& w);

} // namespace adcert
