#pragma once

#include "adcert/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace adcert {

// Dense univariate polynomial over Rational, coefficients from degree 0 up.
// The zero polynomial has no coefficients and degree -1.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    static Poly constant(const Rational& c);
    static Poly x();
    static Poly linear(const Rational& c0, const Rational& c1);  // c0 + c1 x

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int k) const;
    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    Rational eval(const Rational& x) const;
    double eval_double(double x) const;
    Poly derivative() const;
    Rational derivative_at(const Rational& x) const;

    // this(inner(t))
    Poly compose(const Poly& inner) const;
    Poly scaled(const Rational& s) const;

    friend Poly operator+(const Poly& a, const Poly& b);
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly operator-() const { return scaled(Rational(-1)); }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    // Polynomial long division; divisor must be non-zero.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    static Poly gcd(Poly a, Poly b);  // monic, or zero if both zero
    Poly monic() const;
    Poly squarefree() const;          // p / gcd(p, p'), monic

    // Lowest power with a non-zero coefficient; -1 for the zero polynomial.
    int order() const;

    std::string str(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Rational> c_;
};

// A real root of a polynomial: exact if rational, otherwise an open isolating
// interval (lo, hi) with rational endpoints together with a square-free
// polynomial that has exactly one root there.
struct RealRoot {
    bool rational = true;
    Rational value;  // valid when rational
    Rational lo, hi; // valid when irrational
    Poly poly;       // square-free carrier, valid when irrational

    // Narrow an irrational root's interval until its width is below `width`.
    void refine(const Rational& width);
    // Narrow until `x` lies outside the open interval (x must differ from the root).
    void separate_from(const Rational& x);
    // Sign of (root - x): -1, 0, or 1.
    int compare(const Rational& x);
};

// Distinct real roots of p (p non-zero), ascending.
std::vector<RealRoot> real_roots(const Poly& p);

// Number of distinct real roots of p in the open interval (lo, hi); a missing
// bound stands for infinity.
int count_roots_open(const Poly& p, const std::optional<Rational>& lo, const std::optional<Rational>& hi);

// Simplest rational (smallest denominator) strictly inside (a, b), a < b.
Rational simplest_between(const Rational& a, const Rational& b);

// For q with q(0) != 0: a rational r > 0 such that q has no root with |t| < r.
Rational root_free_radius(const Poly& q);

} // namespace adcert
