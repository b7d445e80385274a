#include "adcert/network.hpp"

#include "adcert/error.hpp"

namespace adcert {

std::string_view to_string(LayerKind k) {
    switch (k) {
    case LayerKind::AffineWithBias: return "affine_bias";
    case LayerKind::WellStructuredBiaffine: return "wsb";
    case LayerKind::General: return "general";
    }
    return "?";
}

PreActivationLayer PreActivationLayer::affine_with_bias(std::size_t in, std::size_t out, std::size_t weights,
                                                        std::vector<MultiPoly> f) {
    PreActivationLayer L;
    L.kind = LayerKind::AffineWithBias;
    L.in_dim = in;
    L.out_dim = out;
    L.param_count = weights + out;
    if (f.size() != out) throw Error(ErrorCode::DimMismatch, "affine_bias: need one f_i per output");
    std::size_t nv = in + L.param_count;
    std::vector<std::uint32_t> map(in + weights);
    for (std::size_t k = 0; k < map.size(); ++k) map[k] = static_cast<std::uint32_t>(k);
    for (std::size_t i = 0; i < out; ++i) {
        if (f[i].nvars() != in + weights)
            throw Error(ErrorCode::DimMismatch, "affine_bias: f_i must have in + weights variables");
        if (!f[i].is_multilinear()) throw Error(ErrorCode::BadParams, "affine_bias: f_i must be multilinear");
        L.tau.push_back(f[i].renamed(map, nv) + MultiPoly::variable(nv, in + weights + i));
    }
    L.f = std::move(f);
    return L;
}

PreActivationLayer PreActivationLayer::wsb(std::size_t in, std::size_t out, std::size_t params, std::vector<Matrix> M,
                                           std::vector<Rational> c) {
    PreActivationLayer L;
    L.kind = LayerKind::WellStructuredBiaffine;
    L.in_dim = in;
    L.out_dim = out;
    L.param_count = params;
    if (M.size() != out || c.size() != out) throw Error(ErrorCode::DimMismatch, "wsb: need M_i and c_i per output");
    std::size_t nv = in + params;
    for (std::size_t i = 0; i < out; ++i) {
        if (M[i].rows != in || M[i].cols != params) throw Error(ErrorCode::DimMismatch, "wsb: M_i must be in x params");
        MultiPoly t = MultiPoly::constant(nv, c[i]);
        for (std::size_t j = 0; j < in; ++j)
            for (std::size_t k = 0; k < params; ++k)
                if (!M[i](j, k).is_zero())
                    t.add_term(M[i](j, k), {{static_cast<std::uint32_t>(j), 1u}, {static_cast<std::uint32_t>(in + k), 1u}});
        L.tau.push_back(std::move(t));
    }
    L.M = std::move(M);
    L.c = std::move(c);
    return L;
}

PreActivationLayer PreActivationLayer::general(std::size_t in, std::size_t out, std::size_t params,
                                               std::vector<MultiPoly> tau) {
    PreActivationLayer L;
    L.kind = LayerKind::General;
    L.in_dim = in;
    L.out_dim = out;
    L.param_count = params;
    if (tau.size() != out) throw Error(ErrorCode::DimMismatch, "general: need one map per output");
    for (const auto& t : tau)
        if (t.nvars() != in + params) throw Error(ErrorCode::DimMismatch, "general: map must have in + params variables");
    L.f = tau;
    L.tau = std::move(tau);
    return L;
}

Network::Network(std::vector<Rational> input, std::vector<Layer> layers)
    : input_(std::move(input)), layers_(std::move(layers)) {
    param_offset_.push_back(0);
    neuron_offset_.push_back(0);
    for (const auto& ly : layers_) {
        param_offset_.push_back(param_offset_.back() + ly.pre.param_count);
        neuron_offset_.push_back(neuron_offset_.back() + ly.pre.out_dim);
    }
    neuron_count_ = neuron_offset_.back();
    for (std::size_t l = 1; l <= L(); ++l)
        for (std::size_t i = 0; i < layer(l).pre.out_dim; ++i) ids_.push_back({l, i});
    meta_ = validate(*this);
}


bool Network::all_consistent() const {
    for (const auto& ly : layers_)
        for (const auto& a : ly.act)
            if (!a.is_consistent()) return false;
    return true;
}

bool Network::has_overrides() const {
    for (const auto& ly : layers_)
        for (const auto& a : ly.act)
            if (a.has_overrides()) return true;
    return false;
}

bool operator==(const Network& a, const Network& b) {
    if (a.input_ != b.input_ || a.layers_.size() != b.layers_.size()) return false;
    for (std::size_t l = 0; l < a.layers_.size(); ++l) {
        const auto& x = a.layers_[l];
        const auto& y = b.layers_[l];
        if (x.pre.kind != y.pre.kind || x.pre.in_dim != y.pre.in_dim || x.pre.out_dim != y.pre.out_dim ||
            x.pre.param_count != y.pre.param_count || x.pre.tau != y.pre.tau || x.act != y.act)
            return false;
    }
    return true;
}

NetworkMeta validate(const Network& net) {
    if (net.L() == 0) throw Error(ErrorCode::DimMismatch, "network has no layers");
    NetworkMeta meta;
    meta.has_bias = true;
    meta.wsb_ok = true;
    meta.S_full.assign(net.L() + 2, false);
    std::size_t prev = net.input().size();
    for (std::size_t l = 1; l <= net.L(); ++l) {
        const Layer& ly = net.layer(l);
        const PreActivationLayer& p = ly.pre;
        if (p.in_dim != prev)
            throw Error(ErrorCode::DimMismatch, "layer " + std::to_string(l) + " expects input dimension " +
                                                    std::to_string(p.in_dim) + ", gets " + std::to_string(prev));
        if (ly.act.size() != p.out_dim || p.tau.size() != p.out_dim)
            throw Error(ErrorCode::DimMismatch, "layer " + std::to_string(l) + ": activation count differs from N_l");
        for (const auto& t : p.tau)
            if (t.nvars() != p.in_dim + p.param_count)
                throw Error(ErrorCode::DimMismatch, "layer " + std::to_string(l) + ": map arity");
        switch (p.kind) {
        case LayerKind::AffineWithBias:
            if (p.param_count < p.out_dim)
                throw Error(ErrorCode::DimMismatch, "layer " + std::to_string(l) + ": W_l < N_l with bias");
            break;
        case LayerKind::WellStructuredBiaffine:
            for (const auto& Mi : p.M)
                for (std::size_t k = 0; k < Mi.cols; ++k) {
                    int nz = 0;
                    for (std::size_t j = 0; j < Mi.rows; ++j) nz += Mi(j, k).is_zero() ? 0 : 1;
                    if (nz > 1)
                        throw Error(ErrorCode::BadBiaffinePattern,
                                    "layer " + std::to_string(l) + ": column " + std::to_string(k) + " has " +
                                        std::to_string(nz) + " non-zero entries");
                }
            meta.has_bias = false;
            break;
        case LayerKind::General:
            meta.has_bias = false;
            meta.wsb_ok = false;
            break;
        }
        meta.S_full[l] = !p.has_bias();
        prev = p.out_dim;
    }
    meta.S_full[net.L() + 1] = false;
    return meta;
}

std::vector<Rational> tau_point(const Network& net, std::size_t l, const std::vector<Rational>& z_prev,
                                const std::vector<Rational>& w) {
    const auto& p = net.layer(l).pre;
    std::vector<Rational> pt;
    pt.reserve(p.in_dim + p.param_count);
    pt.insert(pt.end(), z_prev.begin(), z_prev.end());
    std::size_t off = net.param_offset(l);
    pt.insert(pt.end(), w.begin() + static_cast<long>(off), w.begin() + static_cast<long>(off + p.param_count));
    return pt;
}

ForwardTrace forward(const Network& net, const std::vector<Rational>& w) {
    if (w.size() != net.W())
        throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(net.W()) + " parameters, got " +
                                                   std::to_string(w.size()));
    ForwardTrace tr;
    tr.y.resize(net.L() + 1);
    tr.z.resize(net.L() + 1);
    tr.z[0] = net.input();
    for (std::size_t l = 1; l <= net.L(); ++l) {
        const Layer& ly = net.layer(l);
        std::vector<Rational> pt = tau_point(net, l, tr.z[l - 1], w);
        tr.y[l].reserve(ly.pre.out_dim);
        tr.z[l].reserve(ly.pre.out_dim);
        for (std::size_t i = 0; i < ly.pre.out_dim; ++i) {
            tr.y[l].push_back(ly.pre.tau[i].eval(pt));
            tr.z[l].push_back(ly.act[i].eval(tr.y[l].back()));
        }
    }
    return tr;
}

std::vector<double> forward_double(const Network& net, const std::vector<double>& w) {
    if (w.size() != net.W()) throw Error(ErrorCode::LengthMismatch, "parameter length");
    std::vector<double> z;
    for (const auto& c : net.input()) z.push_back(c.to_double());
    for (std::size_t l = 1; l <= net.L(); ++l) {
        const Layer& ly = net.layer(l);
        std::vector<double> pt = z;
        std::size_t off = net.param_offset(l);
        pt.insert(pt.end(), w.begin() + static_cast<long>(off),
                  w.begin() + static_cast<long>(off + ly.pre.param_count));
        std::vector<double> next;
        for (std::size_t i = 0; i < ly.pre.out_dim; ++i) next.push_back(ly.act[i].eval_double(ly.pre.tau[i].eval_double(pt)));
        z = std::move(next);
    }
    return z;
}

} // namespace adcert
