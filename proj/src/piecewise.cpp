#include "adcert/piecewise.hpp"

#include "adcert/error.hpp"

#include <algorithm>

namespace adcert {

bool Interval::contains(const Rational& x) const {
    if (lo && (x < *lo || (x == *lo && !lo_closed))) return false;
    if (hi && (x > *hi || (x == *hi && !hi_closed))) return false;
    return true;
}

bool Interval::closure_contains(const Rational& x) const {
    if (lo && x < *lo) return false;
    if (hi && x > *hi) return false;
    return true;
}

namespace {

// Orders intervals by where they start on the line.
bool starts_before(const Interval& a, const Interval& b) {
    if (!a.lo) return static_cast<bool>(b.lo);
    if (!b.lo) return false;
    if (*a.lo != *b.lo) return *a.lo < *b.lo;
    return a.lo_closed && !b.lo_closed;
}

} // namespace

PiecewiseFn::PiecewiseFn(std::vector<Piece> pieces, std::map<Rational, Rational> overrides)
    : pieces_(std::move(pieces)), overrides_(std::move(overrides)) {
    validate();
    compute_sets();
}

void PiecewiseFn::validate() {
    if (pieces_.empty()) throw Error(ErrorCode::GapOrOverlap, "no pieces");
    for (auto& p : pieces_) {
        Interval& iv = p.interval;
        if (!iv.lo) iv.lo_closed = false;
        if (!iv.hi) iv.hi_closed = false;
        if (iv.lo && iv.hi) {
            if (*iv.lo > *iv.hi) throw Error(ErrorCode::GapOrOverlap, "interval with lower > upper");
            if (*iv.lo == *iv.hi && !(iv.lo_closed && iv.hi_closed))
                throw Error(ErrorCode::GapOrOverlap, "empty degenerate interval");
        }
    }
    std::stable_sort(pieces_.begin(), pieces_.end(),
                     [](const Piece& a, const Piece& b) { return starts_before(a.interval, b.interval); });
    if (pieces_.front().interval.lo) throw Error(ErrorCode::GapOrOverlap, "pieces do not reach -inf");
    if (pieces_.back().interval.hi) throw Error(ErrorCode::GapOrOverlap, "pieces do not reach +inf");
    for (std::size_t k = 0; k + 1 < pieces_.size(); ++k) {
        const Interval& a = pieces_[k].interval;
        const Interval& b = pieces_[k + 1].interval;
        if (!a.hi || !b.lo || *a.hi != *b.lo || a.hi_closed == b.lo_closed)
            throw Error(ErrorCode::GapOrOverlap, "pieces " + std::to_string(k) + " and " + std::to_string(k + 1) +
                                                     " do not meet in exactly one point");
        const Rational& x = *a.hi;
        if (pieces_[k].poly.eval(x) != pieces_[k + 1].poly.eval(x))
            throw Error(ErrorCode::Discontinuous, "value jump at " + x.str());
        if (joints_.empty() || joints_.back() != x) joints_.push_back(x);
    }
}

std::size_t PiecewiseFn::owner(const Rational& x) const {
    // Pieces are few; a linear scan from the left is fastest in practice.
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const Interval& iv = pieces_[k].interval;
        if (!iv.hi || x < *iv.hi || (x == *iv.hi && iv.hi_closed)) return k;
    }
    return pieces_.size() - 1;
}

std::vector<std::size_t> PiecewiseFn::closure_owners(const Rational& x) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < pieces_.size(); ++k)
        if (pieces_[k].interval.closure_contains(x)) out.push_back(k);
    return out;
}

std::size_t PiecewiseFn::left_of(const Rational& x) const {
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const Interval& iv = pieces_[k].interval;
        if (!iv.hi || x <= *iv.hi) {
            if (iv.is_singleton()) continue;
            return k;
        }
    }
    return pieces_.size() - 1;
}

std::size_t PiecewiseFn::right_of(const Rational& x) const {
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const Interval& iv = pieces_[k].interval;
        if (!iv.hi || x < *iv.hi) return k;
    }
    return pieces_.size() - 1;
}

Rational PiecewiseFn::eval(const Rational& x) const { return pieces_[owner(x)].poly.eval(x); }

double PiecewiseFn::eval_double(double x) const {
    for (const auto& p : pieces_) {
        const Interval& iv = p.interval;
        if (!iv.hi) return p.poly.eval_double(x);
        double h = iv.hi->to_double();
        if (x < h || (x == h && iv.hi_closed)) return p.poly.eval_double(x);
    }
    return pieces_.back().poly.eval_double(x);
}

Rational PiecewiseFn::adf_eval(const Rational& x) const {
    if (!overrides_.empty()) {
        auto it = overrides_.find(x);
        if (it != overrides_.end()) return it->second;
    }
    return pieces_[owner(x)].poly.derivative_at(x);
}

bool PiecewiseFn::is_joint(const Rational& x) const {
    return std::binary_search(joints_.begin(), joints_.end(), x);
}

bool PiecewiseFn::in_ndf(const Rational& x) const {
    return std::binary_search(sets_.ndf.begin(), sets_.ndf.end(), x);
}

void PiecewiseFn::compute_sets() {
    for (const auto& b : joints_) {
        Rational dl = pieces_[left_of(b)].poly.derivative_at(b);
        Rational dr = pieces_[right_of(b)].poly.derivative_at(b);
        if (dl != dr) {
            sets_.ndf.push_back(b);
        } else if (pieces_[owner(b)].poly.derivative_at(b) != dl && !overrides_.count(b)) {
            throw Error(ErrorCode::NotExtendedDerivative,
                        "owning piece slope at differentiable joint " + b.str() + " differs from the derivative");
        }
    }
    sets_.ncdf = sets_.ndf;
    for (const auto& [x, v] : overrides_) {
        if (!in_ndf(x))
            throw Error(ErrorCode::NotExtendedDerivative, "override at " + x.str() + ", where the function is differentiable");
        Rational dl = pieces_[left_of(x)].poly.derivative_at(x);
        Rational dr = pieces_[right_of(x)].poly.derivative_at(x);
        if (v != dl && v != dr) consistent_ = false;
    }
    for (const auto& b : sets_.ndf) {
        if (overrides_.count(b)) continue;
        Rational v = pieces_[owner(b)].poly.derivative_at(b);
        if (v != pieces_[left_of(b)].poly.derivative_at(b) && v != pieces_[right_of(b)].poly.derivative_at(b))
            consistent_ = false;
    }

    // Boundary of the zero set.
    std::vector<Rational> cand;
    for (const auto& p : pieces_) {
        const Interval& iv = p.interval;
        if (p.poly.is_zero()) {
            if (iv.lo) cand.push_back(*iv.lo);
            if (iv.hi) cand.push_back(*iv.hi);
            continue;
        }
        if (p.poly.degree() == 0) continue;
        for (auto& r : real_roots(p.poly)) {
            if (r.rational) {
                if (iv.closure_contains(r.value)) cand.push_back(r.value);
                continue;
            }
            if (iv.lo && r.compare(*iv.lo) <= 0) continue;
            if (iv.hi && r.compare(*iv.hi) >= 0) continue;
            sets_.bdz.irrational.push_back(std::move(r));
        }
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (const auto& x : cand) {
        if (!eval(x).is_zero()) continue;
        bool interior = pieces_[left_of(x)].poly.is_zero() && pieces_[right_of(x)].poly.is_zero();
        if (!interior) sets_.bdz.rational.push_back(x);
    }
}

} // namespace adcert
