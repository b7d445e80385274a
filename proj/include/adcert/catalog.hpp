#pragma once

#include "adcert/piecewise.hpp"

#include <string_view>
#include <vector>

namespace adcert {

// Which side owns each breakpoint; this fixes adf at the kinks.
enum class Ownership { Left, Right };

struct CatalogParams {
    std::vector<Rational> points;
    std::vector<Rational> values;
    std::vector<Rational> coeffs;
    Rational slope{1, 100};
    Ownership owner = Ownership::Left;
    bool with_zero = false;
};

PiecewiseFn identity_fn();
PiecewiseFn relu(Ownership owner = Ownership::Left);
PiecewiseFn leaky_relu(const Rational& slope, Ownership owner = Ownership::Left);
// clamp(x/6 + 1/2, 0, 1)
PiecewiseFn hard_sigmoid(Ownership owner = Ownership::Left);
PiecewiseFn polynomial_fn(std::vector<Rational> coeffs);

// Continuous PWL through (knots[j], values[j]) with the given outer slopes.
PiecewiseFn pwl(const std::vector<Rational>& knots, const std::vector<Rational>& values, const Rational& slope_left,
                const Rational& slope_right, Ownership owner);

// Even PWL: constant values[0] on [-p1, p1], linear between consecutive
// points, constant values.back() beyond pk; breakpoints owned by the right piece.
PiecewiseFn sawtooth_kinks(const std::vector<Rational>& points, const std::vector<Rational>& values);

// 1 + sum_j ReLU(x - p_j): positive, kinks exactly at the p_j.
PiecewiseFn ramp_kinks(const std::vector<Rational>& points, Ownership owner = Ownership::Left);

// 1 + [with_zero]|x| + sum_j ReLU(|x| - p_j) for positive p_j: even, positive,
// kinks at +-p_j (and 0); breakpoints owned by the right piece.
PiecewiseFn even_ramp_kinks(const std::vector<Rational>& points, bool with_zero);

// Minimal-degree h with h(x_j) = 0, h'(x_j) = slopes[j]; rejects interpolants
// with real zeros other than the x_j.
PiecewiseFn hermite_zero_slopes(const std::vector<Rational>& points, const std::vector<Rational>& slopes);
PiecewiseFn hermite_zero_slope1(const std::vector<Rational>& points);
// prod_j (x - x_j): simple zeros exactly at the x_j and nowhere else.
PiecewiseFn simple_zeros(const std::vector<Rational>& points);

PiecewiseFn catalog(std::string_view name, const CatalogParams& params = {});

} // namespace adcert
