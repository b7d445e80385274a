#include "adcert/multipoly.hpp"

#include "adcert/error.hpp"

#include <algorithm>
#include <sstream>

namespace adcert {

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t i) {
    MultiPoly p(nvars);
    p.add_term(Rational(1), {{static_cast<std::uint32_t>(i), 1u}});
    return p;
}

MultiPoly MultiPoly::constant(std::size_t nvars, const Rational& c) {
    MultiPoly p(nvars);
    p.add_term(c, {});
    return p;
}

void MultiPoly::add_term(const Rational& coef, Powers powers) {
    for (const auto& [v, e] : powers)
        if (v >= nvars_) throw Error(ErrorCode::DimMismatch, "monomial variable out of range");
    terms_.push_back({coef, std::move(powers)});
    canonicalize();
}

void MultiPoly::canonicalize() {
    for (auto& t : terms_) {
        std::sort(t.powers.begin(), t.powers.end());
        Powers merged;
        for (const auto& ve : t.powers) {
            if (ve.second == 0) continue;
            if (!merged.empty() && merged.back().first == ve.first) merged.back().second += ve.second;
            else merged.push_back(ve);
        }
        t.powers = std::move(merged);
    }
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.powers < b.powers; });
    std::vector<Term> out;
    for (auto& t : terms_) {
        if (!out.empty() && out.back().powers == t.powers) out.back().coef += t.coef;
        else out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coef.is_zero(); }), out.end());
    terms_ = std::move(out);
}

namespace {

void mul_pow(mpq_class& acc, const mpq_class& x, std::uint32_t e) {
    for (std::uint32_t k = 0; k < e; ++k) acc *= x;
}

} // namespace

Rational MultiPoly::eval(std::span<const Rational> point) const {
    mpq_class sum(0), prod;
    for (const auto& t : terms_) {
        prod = t.coef.raw();
        for (const auto& [v, e] : t.powers) mul_pow(prod, point[v].raw(), e);
        sum += prod;
    }
    return Rational(sum);
}

double MultiPoly::eval_double(std::span<const double> point) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        double prod = t.coef.to_double();
        for (const auto& [v, e] : t.powers)
            for (std::uint32_t k = 0; k < e; ++k) prod *= point[v];
        sum += prod;
    }
    return sum;
}

std::vector<std::pair<std::uint32_t, Rational>> MultiPoly::gradient(std::span<const Rational> point) const {
    std::vector<std::pair<std::uint32_t, mpq_class>> acc;
    auto slot = [&acc](std::uint32_t v) -> mpq_class& {
        for (auto& [k, val] : acc)
            if (k == v) return val;
        acc.emplace_back(v, mpq_class(0));
        return acc.back().second;
    };
    mpq_class prod;
    for (const auto& t : terms_) {
        for (std::size_t j = 0; j < t.powers.size(); ++j) {
            prod = t.coef.raw();
            prod *= t.powers[j].second;
            for (std::size_t k = 0; k < t.powers.size(); ++k) {
                std::uint32_t e = t.powers[k].second - (k == j ? 1u : 0u);
                mul_pow(prod, point[t.powers[k].first].raw(), e);
            }
            slot(t.powers[j].first) += prod;
        }
    }
    std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::uint32_t, Rational>> out;
    out.reserve(acc.size());
    for (auto& [v, val] : acc) out.emplace_back(v, Rational(val));
    return out;
}

Poly MultiPoly::substitute(std::span<const Poly> subs) const {
    Poly sum;
    for (const auto& t : terms_) {
        Poly prod = Poly::constant(t.coef);
        for (const auto& [v, e] : t.powers)
            for (std::uint32_t k = 0; k < e; ++k) prod = prod * subs[v];
        sum = sum + prod;
    }
    return sum;
}

MultiPoly MultiPoly::renamed(std::span<const std::uint32_t> map, std::size_t nvars) const {
    MultiPoly out(nvars);
    for (const auto& t : terms_) {
        Powers p;
        for (const auto& [v, e] : t.powers) p.emplace_back(map[v], e);
        out.terms_.push_back({t.coef, std::move(p)});
    }
    out.canonicalize();
    return out;
}

bool MultiPoly::involves(std::size_t var) const {
    for (const auto& t : terms_)
        for (const auto& ve : t.powers)
            if (ve.first == var) return true;
    return false;
}

bool MultiPoly::is_multilinear() const {
    for (const auto& t : terms_)
        for (const auto& ve : t.powers)
            if (ve.second > 1) return false;
    return true;
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out(std::max(a.nvars_, b.nvars_));
    out.terms_ = a.terms_;
    out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
    out.canonicalize();
    return out;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out(std::max(a.nvars_, b.nvars_));
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) {
            MultiPoly::Powers p = s.powers;
            p.insert(p.end(), t.powers.begin(), t.powers.end());
            out.terms_.push_back({s.coef * t.coef, std::move(p)});
        }
    out.canonicalize();
    return out;
}

MultiPoly MultiPoly::scaled(const Rational& s) const {
    MultiPoly out = *this;
    for (auto& t : out.terms_) t.coef *= s;
    out.canonicalize();
    return out;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
        if (a.terms_[k].coef != b.terms_[k].coef || a.terms_[k].powers != b.terms_[k].powers) return false;
    return true;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        if (k) os << " + ";
        os << terms_[k].coef.str();
        for (const auto& [v, e] : terms_[k].powers) {
            os << "*v" << v;
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

} // namespace adcert
