#pragma once

#include "adcert/rational.hpp"

#include <string_view>
#include <vector>

namespace adcert {

// Finite set of machine-representable values; Omega = M^W.
struct Grid {
    std::vector<Rational> M;  // ascending, distinct

    explicit Grid(std::vector<Rational> values);
    std::size_t size() const { return M.size(); }
};

// Grid text forms:
//   "-1,0,1" or "-1;0;1"      explicit values
//   "equispaced:lo:hi:count"  count evenly spaced values from lo to hi
//   "16eq"                    the integers -8..7 (count n: -floor(n/2) .. ceil(n/2)-1)
Grid parse_grid(std::string_view text);

} // namespace adcert
