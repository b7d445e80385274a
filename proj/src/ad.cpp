#include "adcert/ad.hpp"

#include "adcert/error.hpp"

namespace adcert {

std::string PieceAssignment::str() const {
    std::string s;
    for (std::size_t l = 0; l < gamma.size(); ++l) {
        if (l) s += " | ";
        for (std::size_t i = 0; i < gamma[l].size(); ++i) {
            if (i) s += ",";
            s += std::to_string(gamma[l][i]);
        }
    }
    return s;
}

std::vector<std::vector<std::pair<std::uint32_t, Rational>>> tau_gradients(const Network& net, std::size_t l,
                                                                           const std::vector<Rational>& z_prev,
                                                                           const std::vector<Rational>& w) {
    std::vector<Rational> pt = tau_point(net, l, z_prev, w);
    const auto& pre = net.layer(l).pre;
    std::vector<std::vector<std::pair<std::uint32_t, Rational>>> out;
    out.reserve(pre.out_dim);
    for (const auto& t : pre.tau) out.push_back(t.gradient(pt));
    return out;
}

namespace {

void check_len(const Network& net, const std::vector<Rational>& w) {
    if (w.size() != net.W())
        throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(net.W()) + " parameters, got " +
                                                   std::to_string(w.size()));
}

// Forward tangent propagation with a caller-chosen slope per neuron.
template <typename Slope>
Matrix tangent_jacobian(const Network& net, const std::vector<Rational>& w,
                        const std::vector<std::vector<Rational>>& zs, Slope slope) {
    const std::size_t W = net.W();
    std::vector<std::vector<Rational>> dz_prev(net.input().size(), std::vector<Rational>(W));
    for (std::size_t l = 1; l <= net.L(); ++l) {
        const auto& pre = net.layer(l).pre;
        auto grads = tau_gradients(net, l, zs[l - 1], w);
        std::vector<std::vector<Rational>> dz(pre.out_dim, std::vector<Rational>(W));
        const std::size_t off = net.param_offset(l);
        for (std::size_t i = 0; i < pre.out_dim; ++i) {
            std::vector<mpq_class> dy(W);
            for (const auto& [v, g] : grads[i]) {
                if (g.is_zero()) continue;
                if (v < pre.in_dim) {
                    const auto& src = dz_prev[v];
                    for (std::size_t p = 0; p < W; ++p)
                        if (!src[p].is_zero()) dy[p] += g.raw() * src[p].raw();
                } else {
                    dy[off + (v - pre.in_dim)] += g.raw();
                }
            }
            Rational s = slope(NeuronId{l, i});
            for (std::size_t p = 0; p < W; ++p) dz[i][p] = Rational(mpq_class(dy[p] * s.raw()));
        }
        dz_prev = std::move(dz);
    }
    Matrix J(net.out_dim(), W);
    for (std::size_t i = 0; i < net.out_dim(); ++i)
        for (std::size_t p = 0; p < W; ++p) J(i, p) = dz_prev[i][p];
    return J;
}

} // namespace

ADReport reverse_ad(const Network& net, const std::vector<Rational>& w) {
    check_len(net, w);
    ADReport rep;
    rep.trace = forward(net, w);
    rep.active = active_assignment(net, rep.trace);
    const std::size_t L = net.L(), NL = net.out_dim(), W = net.W();
    rep.jacobian = Matrix(NL, W);
    rep.hidden.resize(L + 1);
    // bar[i] = dA z_L / dz_{l,i}
    std::vector<std::vector<mpq_class>> bar(NL, std::vector<mpq_class>(NL));
    for (std::size_t i = 0; i < NL; ++i) bar[i][i] = 1;
    for (std::size_t l = L; l >= 1; --l) {
        const Layer& ly = net.layer(l);
        const auto& pre = ly.pre;
        rep.hidden[l].resize(pre.out_dim);
        for (std::size_t i = 0; i < pre.out_dim; ++i) {
            rep.hidden[l][i].reserve(NL);
            for (const auto& x : bar[i]) rep.hidden[l][i].emplace_back(x);
        }
        auto grads = tau_gradients(net, l, rep.trace.z[l - 1], w);
        std::vector<std::vector<mpq_class>> next(pre.in_dim, std::vector<mpq_class>(NL));
        const std::size_t off = net.param_offset(l);
        std::vector<mpq_class> bar_y(NL);
        for (std::size_t i = 0; i < pre.out_dim; ++i) {
            Rational d = ly.act[i].adf_eval(rep.trace.y[l][i]);
            bool any = false;
            for (std::size_t r = 0; r < NL; ++r) {
                bar_y[r] = bar[i][r] * d.raw();
                any = any || sgn(bar_y[r]) != 0;
            }
            if (!any) continue;
            for (const auto& [v, g] : grads[i]) {
                if (g.is_zero()) continue;
                if (v < pre.in_dim) {
                    for (std::size_t r = 0; r < NL; ++r) next[v][r] += g.raw() * bar_y[r];
                } else {
                    std::size_t p = off + (v - pre.in_dim);
                    for (std::size_t r = 0; r < NL; ++r) rep.jacobian(r, p) += Rational(mpq_class(g.raw() * bar_y[r]));
                }
            }
        }
        bar = std::move(next);
    }
    return rep;
}

Matrix forward_ad(const Network& net, const std::vector<Rational>& w) {
    check_len(net, w);
    ForwardTrace tr = forward(net, w);
    return tangent_jacobian(net, w, tr.z, [&](NeuronId id) { return net.layer(id.l).act[id.i].adf_eval(tr.y[id.l][id.i]); });
}

PieceAssignment active_assignment(const Network& net, const ForwardTrace& tr) {
    PieceAssignment g;
    g.gamma.resize(net.L());
    for (std::size_t l = 1; l <= net.L(); ++l) {
        const Layer& ly = net.layer(l);
        for (std::size_t i = 0; i < ly.pre.out_dim; ++i) g.gamma[l - 1].push_back(ly.act[i].owner(tr.y[l][i]));
    }
    return g;
}

PieceAssignment active_assignment(const Network& net, const std::vector<Rational>& w) {
    return active_assignment(net, forward(net, w));
}

std::vector<PieceAssignment> closure_assignments(const Network& net, const ForwardTrace& tr, std::size_t cap) {
    std::vector<std::vector<std::size_t>> options;
    std::vector<NeuronId> ids = net.neurons();
    std::size_t total = 1;
    for (const auto& id : ids) {
        options.push_back(net.layer(id.l).act[id.i].closure_owners(tr.y[id.l][id.i]));
        total *= options.back().size();
        if (total > cap)
            throw Error(ErrorCode::ExplosionGuard, "more than " + std::to_string(cap) + " closure assignments");
    }
    std::vector<PieceAssignment> out;
    out.reserve(total);
    std::vector<std::size_t> pick(ids.size(), 0);
    while (true) {
        PieceAssignment g;
        g.gamma.resize(net.L());
        for (std::size_t k = 0; k < ids.size(); ++k) g.gamma[ids[k].l - 1].push_back(options[k][pick[k]]);
        out.push_back(std::move(g));
        std::size_t k = ids.size();
        while (k > 0) {
            --k;
            if (++pick[k] < options[k].size()) break;
            pick[k] = 0;
            if (k == 0) return out;
        }
        if (ids.empty()) return out;
    }
}

std::vector<PieceAssignment> closure_assignments(const Network& net, const std::vector<Rational>& w, std::size_t cap) {
    check_len(net, w);
    return closure_assignments(net, forward(net, w), cap);
}

Matrix piece_jacobian(const Network& net, const PieceAssignment& gamma, const std::vector<Rational>& w) {
    check_len(net, w);
    // Forward values of the smooth selection itself.
    std::vector<std::vector<Rational>> zs(net.L() + 1), ys(net.L() + 1);
    zs[0] = net.input();
    for (std::size_t l = 1; l <= net.L(); ++l) {
        const Layer& ly = net.layer(l);
        std::vector<Rational> pt = tau_point(net, l, zs[l - 1], w);
        for (std::size_t i = 0; i < ly.pre.out_dim; ++i) {
            ys[l].push_back(ly.pre.tau[i].eval(pt));
            zs[l].push_back(ly.act[i].pieces()[gamma.gamma[l - 1][i]].poly.eval(ys[l].back()));
        }
    }
    return tangent_jacobian(net, w, zs, [&](NeuronId id) {
        return net.layer(id.l).act[id.i].pieces()[gamma(id)].poly.derivative_at(ys[id.l][id.i]);
    });
}

} // namespace adcert
