#include "adcert/fixtures.hpp"

#include "adcert/catalog.hpp"
#include "adcert/error.hpp"

#include <algorithm>
#include <string>

namespace adcert {

Grid::Grid(std::vector<Rational> values) : M(std::move(values)) {
    if (M.empty()) throw Error(ErrorCode::BadParams, "empty grid");
    std::sort(M.begin(), M.end());
    if (std::adjacent_find(M.begin(), M.end()) != M.end()) throw Error(ErrorCode::BadParams, "grid values repeat");
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

long parse_count(const std::string& s) {
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size()) throw Error(ErrorCode::Parse, "bad integer '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::Parse, "bad integer '" + s + "'");
    }
}

} // namespace

Grid parse_grid(std::string_view text) {
    std::string t(text);
    if (t.size() > 2 && t.substr(t.size() - 2) == "eq") {
        long n = parse_count(t.substr(0, t.size() - 2));
        if (n < 1) throw Error(ErrorCode::BadParams, "grid count must be positive");
        std::vector<Rational> v;
        for (long k = -(n / 2); k < n - n / 2; ++k) v.emplace_back(k);
        return Grid(std::move(v));
    }
    if (t.rfind("equispaced:", 0) == 0) {
        auto parts = split(std::string_view(t).substr(11), ':');
        if (parts.size() != 3) throw Error(ErrorCode::Parse, "expected equispaced:lo:hi:count");
        Rational lo = Rational::parse(parts[0]), hi = Rational::parse(parts[1]);
        long n = parse_count(parts[2]);
        if (n < 1) throw Error(ErrorCode::BadParams, "grid count must be positive");
        if (n == 1) return Grid({lo});
        std::vector<Rational> v;
        for (long k = 0; k < n; ++k) v.push_back(lo + (hi - lo) * Rational(k, n - 1));
        return Grid(std::move(v));
    }
    char sep = t.find(';') != std::string::npos ? ';' : ',';
    std::vector<Rational> v;
    for (const auto& part : split(t, sep)) v.push_back(Rational::parse(part));
    return Grid(std::move(v));
}

namespace {

Matrix unit_row(std::size_t rows, std::size_t cols, std::size_t r, std::size_t c, const Rational& v) {
    Matrix m(rows, cols);
    m(r, c) = v;
    return m;
}

// Sum of signed inputs as a polynomial in `nvars` variables.
MultiPoly signed_sum(std::size_t nvars, const std::vector<std::pair<std::size_t, Rational>>& terms) {
    MultiPoly p(nvars);
    for (const auto& [v, c] : terms) p.add_term(c, {{static_cast<std::uint32_t>(v), 1u}});
    return p;
}

std::string str_of(std::size_t v) { return std::to_string(v); }

Fixture intro_pair(const Rational& second_coef, const char* name) {
    std::vector<Layer> layers;
    Layer l1;
    l1.pre = PreActivationLayer::wsb(1, 2, 1, {unit_row(1, 1, 0, 0, 1), unit_row(1, 1, 0, 0, -1)}, {0, 0});
    l1.act = {relu(), relu()};
    Layer l2;
    l2.pre = PreActivationLayer::general(2, 1, 0, {signed_sum(2, {{0, Rational(1)}, {1, -second_coef}})});
    l2.act = {identity_fn()};
    layers.push_back(std::move(l1));
    layers.push_back(std::move(l2));
    Fixture f{Network({Rational(1)}, std::move(layers)), {}};
    f.answers.fixture = name;
    return f;
}

void check_lower_bound_params(const FixtureParams& p, int min_n) {
    if (p.M.empty()) throw Error(ErrorCode::PreconditionViolated, "grid M is required");
    if (p.n < min_n) throw Error(ErrorCode::PreconditionViolated, "n must be at least " + std::to_string(min_n));
    if (p.alpha < 1) throw Error(ErrorCode::PreconditionViolated, "alpha must be at least 1");
    if (Rational(p.alpha) * Rational(p.n - 1) > Rational(static_cast<long>(p.M.size())))
        throw Error(ErrorCode::PreconditionViolated, "alpha > |M|/(n-1)");
}

std::vector<Rational> first_points(const std::vector<Rational>& M, int alpha) {
    std::vector<Rational> s = M;
    std::sort(s.begin(), s.end());
    return std::vector<Rational>(s.begin(), s.begin() + alpha);
}

void put_lower(AnswerSheet& a, LowerBoundClaim::Set set, Rational factor, std::size_t sum) {
    a.lower = LowerBoundClaim{set, std::move(factor), sum};
}

// Layer 1 shared by the mixed fixtures: y_i = 1 * w_i with activation h.
Layer identity_weights_layer(std::size_t n, const PiecewiseFn& h) {
    Layer l;
    std::vector<Matrix> M;
    for (std::size_t i = 0; i < n; ++i) M.push_back(unit_row(1, n, 0, i, 1));
    l.pre = PreActivationLayer::wsb(1, n, n, std::move(M), std::vector<Rational>(n, Rational(0)));
    l.act.assign(n, h);
    return l;
}

Layer bias_sum_layer(std::size_t in, const std::vector<std::pair<std::size_t, Rational>>& terms) {
    Layer l;
    l.pre = PreActivationLayer::affine_with_bias(in, 1, 0, {signed_sum(in, terms)});
    l.act = {identity_fn()};
    return l;
}

Rational one_minus_power(const Rational& q, int n) {
    Rational p(1);
    for (int k = 0; k < n; ++k) p *= q;
    return Rational(1) - p;
}

} // namespace

Fixture fixture(std::string_view name, const FixtureParams& p) {
    if (name == "intro_identity") {
        Fixture f = intro_pair(Rational(1), "intro_identity");
        f.answers.facts = {{"function", "w"}, {"ad_at_0", "0/1"}, {"true_gradient_at_0", "1/1"}};
        return f;
    }
    if (name == "intro_half") {
        Fixture f = intro_pair(Rational(1, 2), "intro_half");
        f.answers.facts = {{"function", "ReLU(w) - 1/2 ReLU(-w)"},
                           {"ad_at_0", "0/1"},
                           {"accumulating_gradients_at_0", "1/2, 1/1"}};
        return f;
    }
    if (name == "intro_grid_adversary") {
        if (p.M.empty()) throw Error(ErrorCode::PreconditionViolated, "grid M is required");
        Grid g(p.M);
        const std::size_t m = g.size();
        const Rational inv_m(1, static_cast<long>(m));
        // mu x + (1/|M| - mu)(ReLU(x - c) - ReLU(c - x)) per grid value c. AD at a
        // grid point sees mu from every summand plus 1/|M| - mu from the |M| - 1
        // summands away from their kink, i.e. mu + 1 - 1/|M|; mu is chosen so this is lambda.
        Rational mu = p.x_coef ? *p.x_coef : p.lambda - Rational(1) + inv_m;
        std::size_t width = 2 * m + 1;
        std::vector<Matrix> M;
        std::vector<Rational> c;
        std::vector<PiecewiseFn> act;
        M.push_back(unit_row(1, 1, 0, 0, 1));
        c.push_back(0);
        act.push_back(identity_fn());
        for (const auto& v : g.M) {
            M.push_back(unit_row(1, 1, 0, 0, 1));
            c.push_back(-v);
            act.push_back(relu());
            M.push_back(unit_row(1, 1, 0, 0, -1));
            c.push_back(v);
            act.push_back(relu());
        }
        Layer l1;
        l1.pre = PreActivationLayer::wsb(1, width, 1, std::move(M), std::move(c));
        l1.act = std::move(act);
        std::vector<std::pair<std::size_t, Rational>> terms{{0, mu * Rational(static_cast<long>(m))}};
        for (std::size_t k = 0; k < m; ++k) {
            terms.emplace_back(1 + 2 * k, inv_m - mu);
            terms.emplace_back(2 + 2 * k, mu - inv_m);
        }
        Layer l2;
        l2.pre = PreActivationLayer::general(width, 1, 0, {signed_sum(width, terms)});
        l2.act = {identity_fn()};
        std::vector<Layer> layers;
        layers.push_back(std::move(l1));
        layers.push_back(std::move(l2));
        Fixture f{Network({Rational(1)}, std::move(layers)), {}};
        Rational sum(0);
        for (const auto& v : g.M) sum += v;
        f.answers.fixture = "intro_grid_adversary";
        f.answers.grid = g.M;
        f.answers.facts = {{"x_coef", mu.str()},
                           {"offset", ((mu - inv_m) * sum).str()},
                           {"ad_on_grid", (mu + Rational(1) - inv_m).str()},
                           {"true_gradient", "1/1"},
                           {"inc_count", str_of(m)}};
        return f;
    }
    if (name == "thm3_bias_lb") {
        check_lower_bound_params(p, 2);
        const std::size_t n = static_cast<std::size_t>(p.n);
        PiecewiseFn h = ramp_kinks(first_points(p.M, p.alpha));
        Layer l1;
        std::vector<MultiPoly> f(n, MultiPoly::variable(1, 0));
        l1.pre = PreActivationLayer::affine_with_bias(1, n, 0, std::move(f));
        l1.act.assign(n, h);
        std::vector<std::pair<std::size_t, Rational>> terms;
        for (std::size_t i = 0; i < n; ++i) terms.emplace_back(i, Rational(1));
        std::vector<Layer> layers;
        layers.push_back(std::move(l1));
        layers.push_back(bias_sum_layer(n, terms));
        Fixture fx{Network({Rational(0)}, std::move(layers)), {}};
        fx.answers.fixture = "thm3_bias_lb";
        fx.answers.grid = Grid(p.M).M;
        put_lower(fx.answers, LowerBoundClaim::Set::NonDiff, Rational(1, 2), n * static_cast<std::size_t>(p.alpha));
        Rational q = Rational(1) - Rational(p.alpha) / Rational(static_cast<long>(p.M.size()));
        fx.answers.facts = {{"nd_density", one_minus_power(q, p.n).str()}};
        return fx;
    }
    if (name == "thm7_ndf_lb_kinks") {
        check_lower_bound_params(p, 4);
        const std::size_t n = static_cast<std::size_t>(p.n);
        std::vector<std::pair<std::size_t, Rational>> terms;
        for (std::size_t i = 0; i < n; ++i) terms.emplace_back(i, Rational(1));
        std::vector<Layer> layers;
        layers.push_back(identity_weights_layer(n, ramp_kinks(first_points(p.M, p.alpha))));
        layers.push_back(bias_sum_layer(n, terms));
        Fixture fx{Network({Rational(1)}, std::move(layers)), {}};
        fx.answers.fixture = "thm7_ndf_lb_kinks";
        fx.answers.grid = Grid(p.M).M;
        put_lower(fx.answers, LowerBoundClaim::Set::NonDiff, Rational(1, 9), n * static_cast<std::size_t>(p.alpha) + 1);
        Rational q = Rational(1) - Rational(p.alpha) / Rational(static_cast<long>(p.M.size()));
        fx.answers.facts = {{"nd_density", one_minus_power(q, p.n).str()}};
        return fx;
    }
    if (name == "thm7_ndf_lb_zeros") {
        check_lower_bound_params(p, 4);
        const std::size_t n = static_cast<std::size_t>(p.n);
        Layer l2;
        std::vector<Matrix> M;
        for (std::size_t i = 0; i < n; ++i) M.push_back(unit_row(n, 1, i, 0, 1));
        l2.pre = PreActivationLayer::wsb(n, n, 1, std::move(M), std::vector<Rational>(n, Rational(0)));
        l2.act.assign(n, relu());
        std::vector<std::pair<std::size_t, Rational>> terms;
        for (std::size_t i = 0; i < n; ++i) terms.emplace_back(i, Rational(1));
        std::vector<Layer> layers;
        layers.push_back(identity_weights_layer(n, simple_zeros(first_points(p.M, p.alpha))));
        layers.push_back(std::move(l2));
        layers.push_back(bias_sum_layer(n, terms));
        Fixture fx{Network({Rational(1)}, std::move(layers)), {}};
        fx.answers.fixture = "thm7_ndf_lb_zeros";
        fx.answers.grid = Grid(p.M).M;
        put_lower(fx.answers, LowerBoundClaim::Set::NonDiff, Rational(1, 9),
                  n * static_cast<std::size_t>(p.alpha) + n + 1);
        return fx;
    }
    if (name == "thm9_inc_lb_kinks") {
        check_lower_bound_params(p, 4);
        const std::size_t n = static_cast<std::size_t>(p.n);
        std::vector<Rational> pos;
        for (const auto& v : Grid(p.M).M)
            if (v.sign() > 0) pos.push_back(v);
        const std::size_t k = static_cast<std::size_t>(p.alpha) / 2;
        const bool odd = p.alpha % 2 == 1;
        if (pos.size() < k) throw Error(ErrorCode::PreconditionViolated, "not enough positive grid values for the kinks");
        if (odd && !std::binary_search(p.M.begin(), p.M.end(), Rational(0)) &&
            std::find(p.M.begin(), p.M.end(), Rational(0)) == p.M.end())
            throw Error(ErrorCode::PreconditionViolated, "odd alpha needs 0 in the grid");
        std::vector<Rational> pts(pos.begin(), pos.begin() + static_cast<long>(k));
        PiecewiseFn h = [&] {
            if (!odd && k >= 2) {
                std::vector<Rational> vals;
                for (std::size_t j = 0; j < k; ++j) vals.emplace_back(j % 2 == 0 ? 1 : 2);
                return sawtooth_kinks(pts, vals);
            }
            return even_ramp_kinks(pts, odd);
        }();
        Layer l1;
        std::vector<Matrix> M;
        for (std::size_t i = 0; i < n; ++i) {
            M.push_back(unit_row(1, n, 0, i, 1));
            M.push_back(unit_row(1, n, 0, i, -1));
        }
        l1.pre = PreActivationLayer::wsb(1, 2 * n, n, std::move(M), std::vector<Rational>(2 * n, Rational(0)));
        l1.act.assign(2 * n, h);
        std::vector<std::pair<std::size_t, Rational>> terms;
        for (std::size_t i = 0; i < n; ++i) {
            terms.emplace_back(2 * i, Rational(1));
            terms.emplace_back(2 * i + 1, Rational(-1));
        }
        std::vector<Layer> layers;
        layers.push_back(std::move(l1));
        layers.push_back(bias_sum_layer(2 * n, terms));
        Fixture fx{Network({Rational(1)}, std::move(layers)), {}};
        fx.answers.fixture = "thm9_inc_lb_kinks";
        fx.answers.grid = Grid(p.M).M;
        put_lower(fx.answers, LowerBoundClaim::Set::Incorrect, Rational(1, 13),
                  2 * n * static_cast<std::size_t>(p.alpha) + 1);
        return fx;
    }
    if (name == "thm9_inc_lb_zeros") {
        check_lower_bound_params(p, 4);
        const std::size_t n = static_cast<std::size_t>(p.n);
        Layer l2;
        std::vector<Matrix> M;
        for (std::size_t i = 0; i < n; ++i) {
            M.push_back(unit_row(n, 1, i, 0, 1));
            M.push_back(unit_row(n, 1, i, 0, -1));
        }
        l2.pre = PreActivationLayer::wsb(n, 2 * n, 1, std::move(M), std::vector<Rational>(2 * n, Rational(0)));
        l2.act.assign(2 * n, relu());
        std::vector<std::pair<std::size_t, Rational>> terms;
        for (std::size_t i = 0; i < n; ++i) {
            terms.emplace_back(2 * i, Rational(1));
            terms.emplace_back(2 * i + 1, Rational(-1));
        }
        std::vector<Layer> layers;
        layers.push_back(identity_weights_layer(n, simple_zeros(first_points(p.M, p.alpha))));
        layers.push_back(std::move(l2));
        layers.push_back(bias_sum_layer(2 * n, terms));
        Fixture fx{Network({Rational(1)}, std::move(layers)), {}};
        fx.answers.fixture = "thm9_inc_lb_zeros";
        fx.answers.grid = Grid(p.M).M;
        put_lower(fx.answers, LowerBoundClaim::Set::Incorrect, Rational(1, 13),
                  n * static_cast<std::size_t>(p.alpha) + 2 * n + 1);
        return fx;
    }
    throw Error(ErrorCode::BadParams, "unknown fixture '" + std::string(name) + "'");
}

Fixture fixture_from_spec(std::string_view spec) {
    auto parts = split(spec, ',');
    FixtureParams p;
    for (std::size_t k = 1; k < parts.size(); ++k) {
        const std::string& kv = parts[k];
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::Parse, "fixture parameter '" + kv + "' lacks '='");
        std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
        if (key == "M") p.M = parse_grid(val).M;
        else if (key == "n") p.n = static_cast<int>(parse_count(val));
        else if (key == "a" || key == "alpha") p.alpha = static_cast<int>(parse_count(val));
        else if (key == "lambda") p.lambda = Rational::parse(val);
        else if (key == "x_coef") p.x_coef = Rational::parse(val);
        else throw Error(ErrorCode::Parse, "unknown fixture parameter '" + key + "'");
    }
    return fixture(parts[0], p);
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{"intro_identity",    "intro_half",        "intro_grid_adversary",
                                                "thm3_bias_lb",      "thm7_ndf_lb_kinks", "thm7_ndf_lb_zeros",
                                                "thm9_inc_lb_kinks", "thm9_inc_lb_zeros"};
    return names;
}

} // namespace adcert
