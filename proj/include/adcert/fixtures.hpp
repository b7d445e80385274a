#pragma once

#include "adcert/grid.hpp"
#include "adcert/network.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace adcert {

// A lower bound a fixture is built to attain:
// |S| / |Omega| >= factor * sum / |M| with S the non-differentiable or incorrect set.
struct LowerBoundClaim {
    enum class Set { NonDiff, Incorrect };
    Set set = Set::NonDiff;
    Rational factor;
    std::size_t sum = 0;  // sum over neurons of |ndf| (bias case) or |ndf u bdz|
    Rational value(std::size_t grid_size) const { return factor * Rational(static_cast<long>(sum)) / Rational(static_cast<long>(grid_size)); }
};

struct AnswerSheet {
    std::string fixture;
    std::vector<Rational> grid;
    std::optional<LowerBoundClaim> lower;
    std::vector<std::pair<std::string, std::string>> facts;  // reference values as text
};

struct Fixture {
    Network net;
    AnswerSheet answers;
};

struct FixtureParams {
    std::vector<Rational> M;
    int n = 0;
    int alpha = 0;
    Rational lambda{7};
    std::optional<Rational> x_coef;  // intro_grid_adversary: coefficient of x in each summand
};

Fixture fixture(std::string_view name, const FixtureParams& params = {});
// "name,key=value,..." with keys M (grid text, ';'-separated lists), n, a|alpha, lambda, x_coef.
Fixture fixture_from_spec(std::string_view spec);
const std::vector<std::string>& fixture_names();

} // namespace adcert
