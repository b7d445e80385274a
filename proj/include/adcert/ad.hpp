#pragma once

#include "adcert/matrix.hpp"
#include "adcert/network.hpp"

#include <string>
#include <vector>

namespace adcert {

// gamma[l-1][i] = index of the piece chosen for neuron (l,i).
struct PieceAssignment {
    std::vector<std::vector<std::size_t>> gamma;

    std::size_t operator()(NeuronId id) const { return gamma[id.l - 1][id.i]; }
    friend bool operator==(const PieceAssignment&, const PieceAssignment&) = default;
    friend auto operator<=>(const PieceAssignment&, const PieceAssignment&) = default;
    std::string str() const;
};

struct ADReport {
    Matrix jacobian;  // N_L x W
    // hidden[l][i] = dA z_L / dz_{l,i}, a vector of length N_L; hidden[0] unused.
    std::vector<std::vector<std::vector<Rational>>> hidden;
    PieceAssignment active;
    ForwardTrace trace;

    const std::vector<Rational>& hidden_partial(NeuronId id) const { return hidden[id.l][id.i]; }
};

ADReport reverse_ad(const Network& net, const std::vector<Rational>& w);
Matrix forward_ad(const Network& net, const std::vector<Rational>& w);

PieceAssignment active_assignment(const Network& net, const std::vector<Rational>& w);
PieceAssignment active_assignment(const Network& net, const ForwardTrace& trace);

inline constexpr std::size_t kDefaultClosureCap = std::size_t{1} << 20;
std::vector<PieceAssignment> closure_assignments(const Network& net, const std::vector<Rational>& w,
                                                 std::size_t cap = kDefaultClosureCap);
std::vector<PieceAssignment> closure_assignments(const Network& net, const ForwardTrace& trace,
                                                 std::size_t cap = kDefaultClosureCap);

// Exact derivative of the smooth selection z_L^gamma at w.
Matrix piece_jacobian(const Network& net, const PieceAssignment& gamma, const std::vector<Rational>& w);

// Sparse gradients of tau_{l,i} at the trace point, one list per neuron of layer l.
std::vector<std::vector<std::pair<std::uint32_t, Rational>>> tau_gradients(const Network& net, std::size_t l,
                                                                           const std::vector<Rational>& z_prev,
                                                                           const std::vector<Rational>& w);

} // namespace adcert
