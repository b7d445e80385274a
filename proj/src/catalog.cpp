#include "adcert/catalog.hpp"

#include "adcert/error.hpp"

#include <algorithm>
#include <string>

namespace adcert {

namespace {

Interval make_interval(std::optional<Rational> lo, std::optional<Rational> hi, Ownership owner) {
    Interval iv;
    iv.lo = std::move(lo);
    iv.hi = std::move(hi);
    iv.lo_closed = iv.lo && owner == Ownership::Right;
    iv.hi_closed = iv.hi && owner == Ownership::Left;
    return iv;
}

void require_distinct_sorted(std::vector<Rational>& pts, const char* what) {
    if (pts.empty()) throw Error(ErrorCode::BadParams, std::string(what) + ": no points");
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
        throw Error(ErrorCode::BadParams, std::string(what) + ": duplicate points");
}

} // namespace

PiecewiseFn identity_fn() { return PiecewiseFn({Piece{Interval::all(), Poly::x()}}); }

PiecewiseFn relu(Ownership owner) {
    return PiecewiseFn({Piece{make_interval(std::nullopt, Rational(0), owner), Poly()},
                        Piece{make_interval(Rational(0), std::nullopt, owner), Poly::x()}});
}

PiecewiseFn leaky_relu(const Rational& slope, Ownership owner) {
    return PiecewiseFn({Piece{make_interval(std::nullopt, Rational(0), owner), Poly::linear(0, slope)},
                        Piece{make_interval(Rational(0), std::nullopt, owner), Poly::x()}});
}

PiecewiseFn hard_sigmoid(Ownership owner) {
    return PiecewiseFn({Piece{make_interval(std::nullopt, Rational(-3), owner), Poly()},
                        Piece{make_interval(Rational(-3), Rational(3), owner), Poly::linear(Rational(1, 2), Rational(1, 6))},
                        Piece{make_interval(Rational(3), std::nullopt, owner), Poly::constant(1)}});
}

PiecewiseFn polynomial_fn(std::vector<Rational> coeffs) {
    return PiecewiseFn({Piece{Interval::all(), Poly(std::move(coeffs))}});
}

PiecewiseFn pwl(const std::vector<Rational>& knots, const std::vector<Rational>& values, const Rational& slope_left,
                const Rational& slope_right, Ownership owner) {
    if (knots.empty() || knots.size() != values.size()) throw Error(ErrorCode::BadParams, "pwl: knots/values mismatch");
    for (std::size_t k = 0; k + 1 < knots.size(); ++k)
        if (!(knots[k] < knots[k + 1])) throw Error(ErrorCode::BadParams, "pwl: knots must increase");
    auto line = [](const Rational& x0, const Rational& y0, const Rational& m) {
        return Poly::linear(y0 - m * x0, m);
    };
    std::vector<Piece> pieces;
    pieces.push_back({make_interval(std::nullopt, knots.front(), owner), line(knots.front(), values.front(), slope_left)});
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        Rational m = (values[k + 1] - values[k]) / (knots[k + 1] - knots[k]);
        pieces.push_back({make_interval(knots[k], knots[k + 1], owner), line(knots[k], values[k], m)});
    }
    pieces.push_back({make_interval(knots.back(), std::nullopt, owner), line(knots.back(), values.back(), slope_right)});
    return PiecewiseFn(std::move(pieces));
}

PiecewiseFn sawtooth_kinks(const std::vector<Rational>& points, const std::vector<Rational>& values) {
    std::vector<Rational> pts = points;
    if (pts.size() != values.size()) throw Error(ErrorCode::BadParams, "sawtooth_kinks: points/values mismatch");
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (pts[k].sign() <= 0) throw Error(ErrorCode::BadParams, "sawtooth_kinks: points must be positive");
        if (k > 0 && !(pts[k - 1] < pts[k])) throw Error(ErrorCode::BadParams, "sawtooth_kinks: points must increase");
    }
    if (pts.empty()) throw Error(ErrorCode::BadParams, "sawtooth_kinks: no points");
    std::vector<Rational> knots, vals;
    for (std::size_t k = pts.size(); k-- > 0;) {
        knots.push_back(-pts[k]);
        vals.push_back(values[k]);
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
        knots.push_back(pts[k]);
        vals.push_back(values[k]);
    }
    PiecewiseFn f = pwl(knots, vals, Rational(0), Rational(0), Ownership::Right);
    if (f.breakpoints().ndf.size() != knots.size())
        throw Error(ErrorCode::BadParams, "sawtooth_kinks: values leave some point without a kink");
    return f;
}

PiecewiseFn ramp_kinks(const std::vector<Rational>& points, Ownership owner) {
    std::vector<Rational> pts = points;
    require_distinct_sorted(pts, "ramp_kinks");
    std::vector<Rational> vals;
    Rational v(1);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k > 0) v += Rational(static_cast<long>(k)) * (pts[k] - pts[k - 1]);
        vals.push_back(v);
    }
    return pwl(pts, vals, Rational(0), Rational(static_cast<long>(pts.size())), owner);
}

PiecewiseFn even_ramp_kinks(const std::vector<Rational>& points, bool with_zero) {
    std::vector<Rational> pts = points;
    if (!pts.empty()) require_distinct_sorted(pts, "even_ramp_kinks");
    for (const auto& p : pts)
        if (p.sign() <= 0) throw Error(ErrorCode::BadParams, "even_ramp_kinks: points must be positive");
    if (pts.empty() && !with_zero) throw Error(ErrorCode::BadParams, "even_ramp_kinks: no kinks requested");
    auto h = [&](const Rational& x) {
        Rational a = x.abs();
        Rational v(1);
        if (with_zero) v += a;
        for (const auto& p : pts)
            if (a > p) v += a - p;
        return v;
    };
    std::vector<Rational> knots;
    for (std::size_t k = pts.size(); k-- > 0;) knots.push_back(-pts[k]);
    if (with_zero) knots.push_back(Rational(0));
    for (const auto& p : pts) knots.push_back(p);
    std::vector<Rational> vals;
    for (const auto& x : knots) vals.push_back(h(x));
    Rational outer(static_cast<long>(pts.size()) + (with_zero ? 1 : 0));
    return pwl(knots, vals, -outer, outer, Ownership::Right);
}

PiecewiseFn hermite_zero_slopes(const std::vector<Rational>& points, const std::vector<Rational>& slopes) {
    std::vector<Rational> pts = points;
    require_distinct_sorted(pts, "hermite");
    if (slopes.size() != points.size()) throw Error(ErrorCode::BadParams, "hermite: slopes/points mismatch");
    // Pair the slopes with the sorted points.
    std::vector<std::pair<Rational, Rational>> ps;
    for (std::size_t k = 0; k < points.size(); ++k) ps.emplace_back(points[k], slopes[k]);
    std::sort(ps.begin(), ps.end());
    for (const auto& [x, s] : ps)
        if (s.is_zero()) throw Error(ErrorCode::BadParams, "hermite: zero slope at a prescribed zero");

    Poly P = Poly::constant(1);
    for (const auto& [x, s] : ps) P = P * Poly::linear(-x, 1);
    Poly dP = P.derivative();
    // q with q(x_j) = s_j / P'(x_j), by Lagrange interpolation.
    Poly q;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        Poly basis = Poly::constant(1);
        for (std::size_t k = 0; k < ps.size(); ++k) {
            if (k == j) continue;
            basis = basis * Poly::linear(-ps[k].first, 1).scaled(Rational(1) / (ps[j].first - ps[k].first));
        }
        q = q + basis.scaled(ps[j].second / dP.eval(ps[j].first));
    }
    Poly h = P * q;
    std::size_t zeros = real_roots(h).size();
    if (zeros != ps.size())
        throw Error(ErrorCode::BadParams, "hermite interpolant has " + std::to_string(zeros - ps.size()) +
                                              " real zero(s) besides the prescribed points");
    return PiecewiseFn({Piece{Interval::all(), h}});
}

PiecewiseFn hermite_zero_slope1(const std::vector<Rational>& points) {
    return hermite_zero_slopes(points, std::vector<Rational>(points.size(), Rational(1)));
}

PiecewiseFn simple_zeros(const std::vector<Rational>& points) {
    std::vector<Rational> pts = points;
    require_distinct_sorted(pts, "simple_zeros");
    Poly P = Poly::constant(1);
    for (const auto& x : pts) P = P * Poly::linear(-x, 1);
    return PiecewiseFn({Piece{Interval::all(), P}});
}

PiecewiseFn catalog(std::string_view name, const CatalogParams& p) {
    if (name == "identity") return identity_fn();
    if (name == "relu") return relu(p.owner);
    if (name == "leaky_relu") return leaky_relu(p.slope, p.owner);
    if (name == "hard_sigmoid") return hard_sigmoid(p.owner);
    if (name == "polynomial") return polynomial_fn(p.coeffs);
    if (name == "sawtooth_kinks") return sawtooth_kinks(p.points, p.values);
    if (name == "ramp_kinks") return ramp_kinks(p.points, p.owner);
    if (name == "even_ramp_kinks") return even_ramp_kinks(p.points, p.with_zero);
    if (name == "hermite_zero_slope1") return hermite_zero_slope1(p.points);
    if (name == "simple_zeros") return simple_zeros(p.points);
    throw Error(ErrorCode::BadParams, "unknown activation '" + std::string(name) + "'");
}

} // namespace adcert
