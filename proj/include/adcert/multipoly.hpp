#pragma once

#include "adcert/polynomial.hpp"
#include "adcert/rational.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace adcert {

// Sparse multivariate polynomial over Rational in a fixed number of variables.
class MultiPoly {
public:
    using Powers = std::vector<std::pair<std::uint32_t, std::uint32_t>>;  // (variable, exponent), sorted by variable
    struct Term {
        Rational coef;
        Powers powers;
    };

    MultiPoly() = default;
    explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {}
    static MultiPoly variable(std::size_t nvars, std::size_t i);
    static MultiPoly constant(std::size_t nvars, const Rational& c);

    std::size_t nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Rational& coef, Powers powers);

    Rational eval(std::span<const Rational> point) const;
    double eval_double(std::span<const double> point) const;
    // Sparse gradient at a point: (variable, partial) for every variable the
    // polynomial involves; entries may be zero.
    std::vector<std::pair<std::uint32_t, Rational>> gradient(std::span<const Rational> point) const;

    // Replace variable i by the univariate polynomial subs[i].
    Poly substitute(std::span<const Poly> subs) const;
    // Variable i becomes variable map[i] in a polynomial with `nvars` variables.
    MultiPoly renamed(std::span<const std::uint32_t> map, std::size_t nvars) const;

    bool involves(std::size_t var) const;
    bool is_multilinear() const;

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly scaled(const Rational& s) const;
    friend bool operator==(const MultiPoly& a, const MultiPoly& b);

    std::string str() const;

private:
    void canonicalize();
    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

} // namespace adcert
