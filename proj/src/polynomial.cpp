#include "adcert/polynomial.hpp"

#include "adcert/error.hpp"

#include <algorithm>
#include <sstream>

namespace adcert {

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }
Poly Poly::x() { return Poly(std::vector<Rational>{Rational(0), Rational(1)}); }
Poly Poly::linear(const Rational& c0, const Rational& c1) { return Poly(std::vector<Rational>{c0, c1}); }

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational Poly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
    return c_[static_cast<std::size_t>(k)];
}

Rational Poly::eval(const Rational& x) const {
    mpq_class acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc *= x.raw();
        acc += it->raw();
    }
    return Rational(acc);
}

double Poly::eval_double(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->to_double();
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<long>(k));
    return Poly(std::move(d));
}

Rational Poly::derivative_at(const Rational& x) const {
    mpq_class acc(0);
    for (std::size_t k = c_.size(); k-- > 1;) {
        acc *= x.raw();
        acc += c_[k].raw() * static_cast<long>(k);
    }
    return Rational(acc);
}

Poly Poly::compose(const Poly& inner) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Poly::constant(*it);
    return acc;
}

Poly Poly::scaled(const Rational& s) const {
    std::vector<Rational> out = c_;
    for (auto& c : out) c *= s;
    return Poly(std::move(out));
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k < a.c_.size()) out[k] += a.c_[k];
        if (k < b.c_.size()) out[k] += b.c_[k];
    }
    return Poly(std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) { return a + b.scaled(Rational(-1)); }

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out));
}

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw Error(ErrorCode::BadParams, "polynomial division by zero");
    std::vector<Rational> rem = a.c_;
    int db = b.degree();
    std::vector<Rational> quo(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0);
    Rational lead = b.leading();
    for (int k = a.degree(); k >= db; --k) {
        const Rational& top = rem[static_cast<std::size_t>(k)];
        if (top.is_zero()) continue;
        Rational f = top / lead;
        quo[static_cast<std::size_t>(k - db)] = f;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    q = Poly(std::move(quo));
    r = Poly(std::move(rem));
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return scaled(Rational(1) / leading());
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

Poly Poly::squarefree() const {
    if (degree() <= 0) return monic();
    Poly g = gcd(*this, derivative());
    Poly q, r;
    divmod(*this, g, q, r);
    return q.monic();
}

int Poly::order() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (!c_[k].is_zero()) return static_cast<int>(k);
    return -1;
}

std::string Poly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = c_.size(); k-- > 0;) {
        if (c_[k].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[k].str();
        if (k >= 1) os << "*" << var;
        if (k >= 2) os << "^" << k;
    }
    return os.str();
}

namespace {

int sign_at(const Poly& p, const Rational& x) { return p.eval(x).sign(); }

std::vector<Poly> sturm_chain(const Poly& s) {
    std::vector<Poly> chain{s, s.derivative()};
    while (!chain.back().is_zero()) {
        Poly q, r;
        Poly::divmod(chain[chain.size() - 2], chain.back(), q, r);
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    if (chain.back().is_zero()) chain.pop_back();
    return chain;
}

int variations(const std::vector<Poly>& chain, const Rational& x) {
    int prev = 0, count = 0;
    for (const auto& p : chain) {
        int s = sign_at(p, x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// Leading coefficient of the primitive integer multiple of s.
mpz_class integer_leading(const Poly& s) {
    mpz_class l(1);
    for (const auto& c : s.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.raw().get_den_mpz_t());
    mpz_class g(0);
    std::vector<mpz_class> ints;
    for (const auto& c : s.coeffs()) {
        mpz_class v = c.raw().get_num() * (l / c.raw().get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        ints.push_back(v);
    }
    mpz_class lead = ints.back() / g;
    return abs(lead);
}

Rational cauchy_bound(const Poly& s) {
    Rational lead = s.leading().abs();
    Rational m(0);
    for (int k = 0; k < s.degree(); ++k) m = std::max(m, s.coeff(k).abs() / lead);
    return Rational(1) + m;
}

struct Isolation {
    std::vector<Rational> rational;
    std::vector<RealRoot> irrational;
};

// Returns a rational root found at a probe point, if any; otherwise fills out.
std::optional<Rational> isolate(const Poly& s, Isolation& out) {
    std::vector<Poly> chain = sturm_chain(s);
    Rational b = cauchy_bound(s);
    Rational a = -b;
    mpz_class lead = integer_leading(s);
    Rational tight(mpq_class(mpz_class(1), mpz_class(lead * lead * 2)));

    struct Job { Rational lo, hi; int count; };
    std::vector<Job> stack;
    int total = variations(chain, a) - variations(chain, b);
    if (total > 0) stack.push_back({a, b, total});
    while (!stack.empty()) {
        Job job = stack.back();
        stack.pop_back();
        if (job.count == 0) continue;
        if (job.count == 1) {
            Rational lo = job.lo, hi = job.hi;
            int slo = sign_at(s, lo);
            while (hi - lo >= tight) {
                Rational mid = (lo + hi) / Rational(2);
                int sm = sign_at(s, mid);
                if (sm == 0) return mid;
                if (sm == slo) lo = mid; else hi = mid;
            }
            Rational cand = simplest_between(lo, hi);
            if (s.eval(cand).is_zero()) return cand;
            RealRoot r;
            r.rational = false;
            r.lo = lo;
            r.hi = hi;
            r.poly = s;
            out.irrational.push_back(std::move(r));
            continue;
        }
        Rational mid = (job.lo + job.hi) / Rational(2);
        if (s.eval(mid).is_zero()) return mid;
        int vm = variations(chain, mid);
        int left = variations(chain, job.lo) - vm;
        stack.push_back({mid, job.hi, job.count - left});
        stack.push_back({job.lo, mid, left});
    }
    return std::nullopt;
}

} // namespace

std::vector<RealRoot> real_roots(const Poly& p) {
    if (p.is_zero()) throw Error(ErrorCode::BadParams, "roots of the zero polynomial");
    Poly s = p.squarefree();
    std::vector<Rational> rational;
    Isolation iso;
    while (s.degree() >= 1) {
        if (s.degree() == 1) {
            rational.push_back(-s.coeff(0) / s.coeff(1));
            break;
        }
        iso = Isolation{};
        std::optional<Rational> hit = isolate(s, iso);
        if (!hit) break;
        rational.push_back(*hit);
        Poly q, r;
        Poly::divmod(s, Poly::linear(-*hit, Rational(1)), q, r);
        s = q.monic();
        iso = Isolation{};
    }
    std::vector<RealRoot> out;
    for (auto& v : rational) {
        RealRoot r;
        r.rational = true;
        r.value = v;
        out.push_back(std::move(r));
    }
    for (auto& r : iso.irrational) out.push_back(std::move(r));
    // Irrational intervals may contain rational roots found later in deflation; separate them.
    for (auto& r : out)
        if (!r.rational)
            for (const auto& v : rational) r.separate_from(v);
    std::sort(out.begin(), out.end(), [](const RealRoot& x, const RealRoot& y) {
        const Rational& kx = x.rational ? x.value : x.lo;
        const Rational& ky = y.rational ? y.value : y.lo;
        return kx < ky;
    });
    return out;
}

void RealRoot::refine(const Rational& width) {
    if (rational) return;
    int slo = poly.eval(lo).sign();
    while (hi - lo >= width) {
        Rational mid = (lo + hi) / Rational(2);
        int sm = poly.eval(mid).sign();
        if (sm == 0) {  // cannot happen for an irrational root, kept for safety
            rational = true;
            value = mid;
            return;
        }
        if (sm == slo) lo = mid; else hi = mid;
    }
}

void RealRoot::separate_from(const Rational& x) {
    if (rational) return;
    int slo = poly.eval(lo).sign();
    while (lo < x && x < hi) {
        Rational mid = (lo + hi) / Rational(2);
        int sm = poly.eval(mid).sign();
        if (sm == 0) {
            rational = true;
            value = mid;
            return;
        }
        if (sm == slo) lo = mid; else hi = mid;
    }
}

int RealRoot::compare(const Rational& x) {
    if (!rational) separate_from(x);
    if (rational) return value < x ? -1 : (value > x ? 1 : 0);
    return hi <= x ? -1 : 1;
}

int count_roots_open(const Poly& p, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
    int n = 0;
    for (auto& r : real_roots(p)) {
        if (lo && r.compare(*lo) <= 0) continue;
        if (hi && r.compare(*hi) >= 0) continue;
        ++n;
    }
    return n;
}

namespace {

mpz_class floor_of(const mpq_class& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

// Simplest rational in (a, b) for 0 <= a < b; b absent means +infinity.
mpq_class simplest_nonneg(const mpq_class& a, const std::optional<mpq_class>& b) {
    mpz_class n = floor_of(a) + 1;
    if (!b || mpq_class(n) < *b) return mpq_class(n);
    mpz_class f = floor_of(a);
    // a, b in [f, f+1], and b <= f+1 with no integer strictly between
    mpq_class bf = *b - f;
    mpq_class inv_lo = 1 / bf;
    std::optional<mpq_class> inv_hi;
    if (a != f) inv_hi = 1 / (a - f);
    mpq_class inner = simplest_nonneg(inv_lo, inv_hi);
    return mpq_class(f) + 1 / inner;
}

} // namespace

Rational simplest_between(const Rational& a, const Rational& b) {
    if (!(a < b)) throw Error(ErrorCode::BadParams, "empty interval");
    if (a.sign() < 0 && b.sign() > 0) return Rational(0);
    if (b.sign() <= 0) return -simplest_between(-b, -a);
    return Rational(simplest_nonneg(a.raw(), b.raw()));
}

Rational root_free_radius(const Poly& q) {
    Rational a0 = q.coeff(0).abs();
    if (a0.is_zero()) throw Error(ErrorCode::BadParams, "root_free_radius needs q(0) != 0");
    Rational m(0);
    for (int k = 1; k <= q.degree(); ++k) m = std::max(m, q.coeff(k).abs());
    if (m.is_zero()) return Rational(1);
    return a0 / (a0 + m);
}

} // namespace adcert
