#include "adcert/rational.hpp"

#include "adcert/error.hpp"

#include <ostream>

namespace adcert {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::GapOrOverlap: return "GapOrOverlap";
    case ErrorCode::Discontinuous: return "Discontinuous";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NotExtendedDerivative: return "NotExtendedDerivative";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::BadBiaffinePattern: return "BadBiaffinePattern";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ExplosionGuard: return "ExplosionGuard";
    case ErrorCode::RequiresBias: return "RequiresBias";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::IncompleteReport: return "IncompleteReport";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Rational::Rational(long num, long den) {
    if (den == 0) throw Error(ErrorCode::BadParams, "zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw Error(ErrorCode::BadParams, "division by zero");
    q_ /= o.q_;
    return *this;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

mpz_class parse_int(std::string_view s, std::string_view whole) {
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw Error(ErrorCode::Parse, "not a rational: '" + std::string(whole) + "'");
    mpz_class z(std::string(s), 10);
    return neg ? mpz_class(-z) : z;
}

} // namespace

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        mpz_class n = parse_int(s.substr(0, slash), text);
        std::string_view ds = s.substr(slash + 1);
        if (!all_digits(ds)) throw Error(ErrorCode::Parse, "bad denominator in '" + std::string(text) + "'");
        mpz_class d(std::string(ds), 10);
        if (d == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
        return Rational(mpq_class(n, d));
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        std::string_view digits = ip;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
        if ((!digits.empty() && !all_digits(digits)) || (!fp.empty() && !all_digits(fp)) || (digits.empty() && fp.empty()))
            throw Error(ErrorCode::Parse, "not a rational: '" + std::string(text) + "'");
        mpz_class n(std::string(digits.empty() ? "0" : digits) + std::string(fp), 10);
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, fp.size());
        mpq_class q(neg ? mpz_class(-n) : n, d);
        return Rational(q);
    }
    return Rational(mpq_class(parse_int(s, text)));
}

std::string Rational::str() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
    mpf_class f(q_, 256);
    mp_exp_t exp = 0;
    std::string mant = f.get_str(exp, 10, digits);
    if (mant.empty()) return "0";
    bool neg = mant[0] == '-';
    if (neg) mant.erase(0, 1);
    std::string out;
    if (exp <= 0) {
        out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
    } else if (static_cast<std::size_t>(exp) >= mant.size()) {
        out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
    } else {
        out = mant.substr(0, exp) + "." + mant.substr(exp);
    }
    return neg ? "-" + out : out;
}

std::size_t Rational::hash() const {
    std::size_t h1 = mpz_get_ui(q_.get_num_mpz_t()) + static_cast<std::size_t>(sgn(q_) + 1);
    std::size_t h2 = mpz_get_ui(q_.get_den_mpz_t());
    return (h1 * 0x9e3779b97f4a7c15ULL) ^ (h2 + 0x7f4a7c15ULL + (h1 << 6));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::string ratio_string(std::uint64_t num, std::uint64_t den) {
    return std::to_string(num) + "/" + std::to_string(den);
}

} // namespace adcert
