#include "random_nets.hpp"

#include <algorithm>

namespace adcert::gen {

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

MultiPoly random_f(std::mt19937_64& rng, std::size_t in, std::size_t weights) {
    // Multilinear: sum_j a_j x_j + sum_k (b_k + c_k x_{j_k}) u_k with small integer coefficients.
    const std::size_t nv = in + weights;
    MultiPoly f(nv);
    for (std::size_t j = 0; j < in; ++j) {
        int a = pick(rng, -2, 2);
        if (a) f = f + MultiPoly::variable(nv, j).scaled(Rational(a));
    }
    for (std::size_t k = 0; k < weights; ++k) {
        const auto u = MultiPoly::variable(nv, in + k);
        int b = pick(rng, -1, 2);
        if (b == 0) b = 1;
        if (in > 0 && pick(rng, 0, 1)) {
            const auto x = MultiPoly::variable(nv, static_cast<std::size_t>(pick(rng, 0, static_cast<int>(in) - 1)));
            f = f + (x * u).scaled(Rational(b));
        } else {
            f = f + u.scaled(Rational(b));
        }
    }
    return f;
}

} // namespace

PiecewiseFn random_pwl(std::mt19937_64& rng, const std::vector<Rational>& M, int max_kinks) {
    std::vector<Rational> pts = M;
    std::shuffle(pts.begin(), pts.end(), rng);
    const int k = pick(rng, 0, std::min<int>(max_kinks, static_cast<int>(pts.size())));
    pts.resize(k);
    std::sort(pts.begin(), pts.end());
    const Ownership owner = pick(rng, 0, 1) ? Ownership::Left : Ownership::Right;
    if (pts.empty()) return polynomial_fn({Rational(pick(rng, -1, 1)), Rational(pick(rng, -2, 2))});
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < pts.size(); ++i) vals.push_back(Rational(pick(rng, -2, 2)));
    return pwl(pts, vals, Rational(pick(rng, -1, 2)), Rational(pick(rng, -1, 2)), owner);
}

Network random_bias_net(std::mt19937_64& rng, const std::vector<Rational>& M, std::size_t max_w) {
    while (true) {
        const std::size_t L = static_cast<std::size_t>(pick(rng, 1, 3));
        std::vector<std::size_t> widths(L);
        std::size_t bias = 0;
        for (std::size_t l = 0; l < L; ++l) {
            widths[l] = l + 1 == L ? 1 : static_cast<std::size_t>(pick(rng, 1, 3));
            bias += widths[l];
        }
        if (bias > max_w) continue;
        std::vector<std::size_t> weights(L, 0);
        for (std::size_t extra = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(max_w - bias))); extra > 0; --extra)
            ++weights[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(L) - 1))];
        std::vector<Layer> layers;
        std::size_t in = 1;
        for (std::size_t l = 0; l < L; ++l) {
            std::vector<MultiPoly> f;
            for (std::size_t i = 0; i < widths[l]; ++i) f.push_back(random_f(rng, in, weights[l]));
            Layer ly;
            ly.pre = PreActivationLayer::affine_with_bias(in, widths[l], weights[l], std::move(f));
            for (std::size_t i = 0; i < widths[l]; ++i) ly.act.push_back(random_pwl(rng, M, 3));
            layers.push_back(std::move(ly));
            in = widths[l];
        }
        return Network({Rational(pick(rng, 0, 1) ? 1 : -1)}, std::move(layers));
    }
}

Network random_mixed_net(std::mt19937_64& rng, const std::vector<Rational>& M, std::size_t max_w) {
    while (true) {
        const std::size_t L = static_cast<std::size_t>(pick(rng, 2, 3));
        std::vector<Layer> layers;
        std::size_t in = 1, used = 0;
        bool ok = true;
        for (std::size_t l = 0; l < L && ok; ++l) {
            const bool last = l + 1 == L;
            const std::size_t out = last ? 1 : static_cast<std::size_t>(pick(rng, 1, 2));
            Layer ly;
            if (last || pick(rng, 0, 1)) {
                const std::size_t w = static_cast<std::size_t>(pick(rng, 0, 1));
                used += w + out;
                std::vector<MultiPoly> f;
                for (std::size_t i = 0; i < out; ++i) f.push_back(random_f(rng, in, w));
                ly.pre = PreActivationLayer::affine_with_bias(in, out, w, std::move(f));
            } else {
                const std::size_t P = static_cast<std::size_t>(pick(rng, 1, 2));
                used += P;
                std::vector<Matrix> Ms;
                std::vector<Rational> cs;
                for (std::size_t i = 0; i < out; ++i) {
                    // at most one non-zero entry per column
                    Matrix m(in, P);
                    for (std::size_t k = 0; k < P; ++k)
                        m(static_cast<std::size_t>(pick(rng, 0, static_cast<int>(in) - 1)), k) = Rational(pick(rng, -1, 1));
                    if (m.is_zero()) m(0, 0) = 1;
                    Ms.push_back(std::move(m));
                    cs.push_back(Rational(pick(rng, -1, 1)));
                }
                ly.pre = PreActivationLayer::wsb(in, out, P, std::move(Ms), std::move(cs));
            }
            for (std::size_t i = 0; i < out; ++i) ly.act.push_back(random_pwl(rng, M, 2));
            layers.push_back(std::move(ly));
            in = out;
            ok = used <= max_w;
        }
        if (!ok) continue;
        return Network({Rational(1)}, std::move(layers));
    }
}

Network relu_sum_net(Ownership owner) {
    MultiPoly f = MultiPoly::variable(2, 0) * MultiPoly::variable(2, 1);
    Layer ly;
    ly.pre = PreActivationLayer::affine_with_bias(1, 1, 1, {f});
    ly.act = {relu(owner)};
    return Network({Rational(1)}, {ly});
}

Network bias_only_net(const PiecewiseFn& sigma) {
    Layer ly;
    ly.pre = PreActivationLayer::affine_with_bias(1, 1, 0, {MultiPoly(1)});
    ly.act = {sigma};
    return Network({Rational(1)}, {ly});
}

Network with_activation(const Network& net, NeuronId id, PiecewiseFn sigma) {
    std::vector<Layer> layers = net.layers();
    layers[id.l - 1].act[id.i] = std::move(sigma);
    return Network(net.input(), std::move(layers));
}

std::vector<std::vector<Rational>> all_points(const std::vector<Rational>& M, std::size_t W) {
    std::vector<std::vector<Rational>> out;
    std::vector<std::size_t> idx(W, 0);
    while (true) {
        std::vector<Rational> w;
        for (auto i : idx) w.push_back(M[i]);
        out.push_back(std::move(w));
        std::size_t p = W;
        while (p > 0 && idx[p - 1] + 1 == M.size()) idx[--p] = 0;
        if (p == 0) break;
        ++idx[p - 1];
    }
    return out;
}

} // namespace adcert::gen
