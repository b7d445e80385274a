#pragma once

#include "adcert/polynomial.hpp"
#include "adcert/rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace adcert {

// Interval with optional (infinite) endpoints. An infinite side is always open.
struct Interval {
    std::optional<Rational> lo, hi;
    bool lo_closed = false;
    bool hi_closed = false;

    static Interval all() { return {}; }
    bool contains(const Rational& x) const;
    bool closure_contains(const Rational& x) const;
    bool is_singleton() const { return lo && hi && *lo == *hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Piece {
    Interval interval;
    Poly poly;
    friend bool operator==(const Piece&, const Piece&) = default;
};

// Boundary of the zero set may contain irrational points; they are kept as
// isolating intervals.
struct ZeroBoundary {
    std::vector<Rational> rational;
    std::vector<RealRoot> irrational;
    std::size_t size() const { return rational.size() + irrational.size(); }
};

struct BreakpointSets {
    std::vector<Rational> ndf;   // ascending
    ZeroBoundary bdz;
    std::vector<Rational> ncdf;  // ascending
};

class PiecewiseFn {
public:
    // Validates a partition of the real line by `pieces` (any order) with
    // continuity at every joint. `overrides` maps breakpoints to adf values and
    // is only accepted at points of non-differentiability.
    PiecewiseFn(std::vector<Piece> pieces, std::map<Rational, Rational> overrides = {});

    const std::vector<Piece>& pieces() const { return pieces_; }
    const std::map<Rational, Rational>& overrides() const { return overrides_; }
    std::size_t size() const { return pieces_.size(); }

    std::size_t owner(const Rational& x) const;
    // Indices k with x in the closure of piece k (one or two, three with a singleton).
    std::vector<std::size_t> closure_owners(const Rational& x) const;
    // Pieces holding (x - e, x) and (x, x + e) for small e.
    std::size_t left_of(const Rational& x) const;
    std::size_t right_of(const Rational& x) const;

    Rational eval(const Rational& x) const;
    double eval_double(double x) const;
    Rational adf_eval(const Rational& x) const;

    // True if x is a finite endpoint of some piece.
    bool is_joint(const Rational& x) const;
    bool in_ndf(const Rational& x) const;
    bool in_ncdf(const Rational& x) const { return in_ndf(x); }

    const BreakpointSets& breakpoints() const { return sets_; }
    bool is_consistent() const { return consistent_; }
    bool has_overrides() const { return !overrides_.empty(); }

    // Single polynomial piece of degree <= 1.
    bool is_affine() const { return pieces_.size() == 1 && pieces_[0].poly.degree() <= 1; }

    friend bool operator==(const PiecewiseFn& a, const PiecewiseFn& b) {
        return a.pieces_ == b.pieces_ && a.overrides_ == b.overrides_;
    }

private:
    void validate();
    void compute_sets();

    std::vector<Piece> pieces_;
    std::map<Rational, Rational> overrides_;
    std::vector<Rational> joints_;  // distinct finite endpoints, ascending
    BreakpointSets sets_;
    bool consistent_ = true;
};

inline PiecewiseFn make_piecewise(std::vector<Piece> pieces, std::map<Rational, Rational> overrides = {}) {
    return PiecewiseFn(std::move(pieces), std::move(overrides));
}

} // namespace adcert
