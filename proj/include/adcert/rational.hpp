#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace adcert {

// Exact rational in lowest terms with positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}            // NOLINT(implicit)
    Rational(int v) : q_(v) {}             // NOLINT(implicit)
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    // Accepts "p/q", "p", and finite decimals such as "-0.25".
    static Rational parse(std::string_view text);

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    double to_double() const { return q_.get_d(); }

    // Always "p/q", including "0/1" and "3/1".
    std::string str() const;
    std::string decimal(int digits = 6) const;

    Rational abs() const { return Rational(::abs(q_)); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_), Raw{}); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_), Raw{}); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_), Raw{}); }
    friend Rational operator/(const Rational& a, const Rational& b) { Rational r = a; r /= b; return r; }
    Rational operator-() const { return Rational(mpq_class(-q_), Raw{}); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    std::size_t hash() const;

private:
    struct Raw {};
    Rational(mpq_class&& q, Raw) : q_(std::move(q)) {}

    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Canonical text used for unreduced ratios such as census densities.
std::string ratio_string(std::uint64_t num, std::uint64_t den);

} // namespace adcert

template <>
struct std::hash<adcert::Rational> {
    std::size_t operator()(const adcert::Rational& r) const noexcept { return r.hash(); }
};
