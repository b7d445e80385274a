#include "adcert/oracle.hpp"

#include "adcert/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

namespace adcert {

std::string_view to_string(OracleStatus s) {
    switch (s) {
    case OracleStatus::Differentiable: return "differentiable";
    case OracleStatus::NonDifferentiable: return "non-differentiable";
    case OracleStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

std::string vec_str(const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += v[i].str();
    }
    return s + ")";
}

void check_len(const Network& net, const std::vector<Rational>& w) {
    if (w.size() != net.W())
        throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(net.W()) + " parameters, got " +
                                                   std::to_string(w.size()));
}

std::vector<Rational> apply(const Matrix& J, const std::vector<Rational>& d) {
    std::vector<Rational> out(J.rows);
    for (std::size_t r = 0; r < J.rows; ++r) {
        mpq_class acc = 0;
        for (std::size_t c = 0; c < J.cols; ++c)
            if (!d[c].is_zero()) acc += J(r, c).raw() * d[c].raw();
        out[r] = Rational(acc);
    }
    return out;
}

std::vector<Rational> negated(std::vector<Rational> v) {
    for (auto& x : v) x = -x;
    return v;
}

// Poly q with q(0) = 0 allowed: radius on which q has no zero except possibly t = 0.
Rational punctured_radius(const Poly& q) {
    int m = q.order();
    std::vector<Rational> c(q.coeffs().begin() + m, q.coeffs().end());
    return root_free_radius(Poly(std::move(c)));
}

} // namespace

std::string OracleWitness::str() const {
    switch (kind) {
    case Kind::Opposed:
        return "d=" + vec_str(d) + " slope(+d)=" + vec_str(plus) + " slope(-d)=" + vec_str(minus);
    case Kind::Nonlinear:
        return "d=" + vec_str(d) + " slope(d)=" + vec_str(plus) + " linear=" + vec_str(minus);
    case Kind::CellMismatch:
        return "d1=" + vec_str(d) + " grad1=[" + grad1.str() + "] d2=" + vec_str(d2) + " grad2=[" + grad2.str() + "]";
    }
    return {};
}

RayGerm ray_germ(const Network& net, const std::vector<Rational>& w, const std::vector<Rational>& d) {
    check_len(net, w);
    check_len(net, d);
    RayGerm g;
    g.direction = d;
    g.gamma.gamma.resize(net.L());
    std::optional<Rational> tstar;
    std::vector<Poly> zprev;
    for (const auto& c : net.input()) zprev.push_back(Poly::constant(c));
    for (std::size_t l = 1; l <= net.L(); ++l) {
        const Layer& ly = net.layer(l);
        const auto& pre = ly.pre;
        std::vector<Poly> subs = zprev;
        const std::size_t off = net.param_offset(l);
        for (std::size_t p = 0; p < pre.param_count; ++p) subs.push_back(Poly::linear(w[off + p], d[off + p]));
        std::vector<Poly> z(pre.out_dim);
        for (std::size_t i = 0; i < pre.out_dim; ++i) {
            Poly y = pre.tau[i].substitute(subs);
            const PiecewiseFn& act = ly.act[i];
            Rational b = y.coeff(0);
            Poly var = y - Poly::constant(b);
            std::size_t k;
            if (var.is_zero()) k = act.owner(b);
            else if (var.coeff(var.order()).sign() > 0) k = act.right_of(b);
            else k = act.left_of(b);
            g.gamma.gamma[l - 1].push_back(k);
            const Piece& pc = act.pieces()[k];
            for (const auto& e : {pc.interval.lo, pc.interval.hi}) {
                if (!e) continue;
                Poly q = y - Poly::constant(*e);
                if (q.is_zero()) continue;
                Rational r = punctured_radius(q);
                if (!tstar || r < *tstar) tstar = r;
            }
            z[i] = pc.poly.compose(y);
        }
        zprev = std::move(z);
    }
    for (const auto& p : zprev) g.slope.push_back(p.coeff(1));
    g.t_star = tstar ? *tstar : Rational(1);
    return g;
}

std::optional<std::vector<Rational>> strict_cone_point(const std::vector<std::vector<Rational>>& rows_in,
                                                       std::size_t dim) {
    using Row = std::vector<mpq_class>;
    std::function<std::optional<std::vector<mpq_class>>(std::vector<Row>, std::size_t)> solve =
        [&](std::vector<Row> rows, std::size_t n) -> std::optional<std::vector<mpq_class>> {
        // Normalise by the first non-zero entry, drop duplicates, catch 0 > 0 and a > 0 with -a > 0.
        for (auto& r : rows) {
            auto it = std::find_if(r.begin(), r.end(), [](const mpq_class& x) { return sgn(x) != 0; });
            if (it == r.end()) return std::nullopt;
            mpq_class s = abs(*it);
            for (auto& x : r) x /= s;
        }
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        for (const auto& r : rows) {
            Row neg = r;
            for (auto& x : neg) x = -x;
            if (std::binary_search(rows.begin(), rows.end(), neg)) return std::nullopt;
        }
        if (rows.empty()) return std::vector<mpq_class>(n);
        const std::size_t k = n - 1;
        std::vector<Row> pos, neg, next;
        for (auto& r : rows) {
            int s = sgn(r[k]);
            if (s > 0) pos.push_back(r);
            else if (s < 0) neg.push_back(r);
            else next.emplace_back(r.begin(), r.begin() + k);
        }
        for (const auto& p : pos)
            for (const auto& q : neg) {
                Row c(k);
                mpq_class ap = p[k], aq = -q[k];
                for (std::size_t j = 0; j < k; ++j) c[j] = q[j] * ap + p[j] * aq;
                next.push_back(std::move(c));
            }
        auto sub = solve(std::move(next), k);
        if (!sub) return std::nullopt;
        auto dot = [&](const Row& r) {
            mpq_class acc = 0;
            for (std::size_t j = 0; j < k; ++j) acc += r[j] * (*sub)[j];
            return acc;
        };
        std::optional<mpq_class> lo, hi;
        for (const auto& p : pos) {
            mpq_class v = -dot(p) / p[k];
            if (!lo || v > *lo) lo = v;
        }
        for (const auto& q : neg) {
            mpq_class v = dot(q) / (-q[k]);
            if (!hi || v < *hi) hi = v;
        }
        mpq_class x = 0;
        if (lo && hi) x = (*lo + *hi) / 2;
        else if (lo) {
            mpz_class f;
            mpz_fdiv_q(f.get_mpz_t(), lo->get_num_mpz_t(), lo->get_den_mpz_t());
            x = f + 1;
        } else if (hi) {
            mpz_class c;
            mpz_cdiv_q(c.get_mpz_t(), hi->get_num_mpz_t(), hi->get_den_mpz_t());
            x = c - 1;
        }
        sub->push_back(x);
        return sub;
    };
    std::vector<Row> rows;
    for (const auto& r : rows_in) {
        if (r.size() != dim) throw Error(ErrorCode::DimMismatch, "constraint row length");
        Row m;
        for (const auto& x : r) m.push_back(x.raw());
        rows.push_back(std::move(m));
    }
    auto sol = solve(std::move(rows), dim);
    if (!sol) return std::nullopt;
    std::vector<Rational> out;
    for (auto& x : *sol) out.emplace_back(x);
    return out;
}

CellEnumeration enumerate_cells(const Network& net, const std::vector<Rational>& w, std::size_t cap) {
    check_len(net, w);
    return enumerate_cells(net, w, forward(net, w), cap);
}

CellEnumeration enumerate_cells(const Network& net, const std::vector<Rational>& w, const ForwardTrace& tr,
                                std::size_t cap) {
    const std::size_t W = net.W();
    std::vector<std::vector<std::vector<std::pair<std::uint32_t, Rational>>>> grads(net.L() + 1);
    for (std::size_t l = 1; l <= net.L(); ++l) grads[l] = tau_gradients(net, l, tr.z[l - 1], w);

    using Vec = std::vector<mpq_class>;
    const std::vector<NeuronId> ids = net.neurons();
    // dz[l][i]: gradient of z_{l,i} in the current branch.
    std::vector<std::vector<Vec>> dz(net.L() + 1);
    dz[0].assign(net.input().size(), Vec(W));
    for (std::size_t l = 1; l <= net.L(); ++l) dz[l].assign(net.layer(l).pre.out_dim, Vec(W));

    CellEnumeration out;
    out.complete = true;
    PieceAssignment gamma;
    gamma.gamma.resize(net.L());
    for (std::size_t l = 1; l <= net.L(); ++l) gamma.gamma[l - 1].assign(net.layer(l).pre.out_dim, 0);
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> point(W);
    std::vector<Vec> a_buf(ids.size(), Vec(W));

    std::function<void(std::size_t)> dfs = [&](std::size_t k) {
        if (!out.complete) return;
        if (k == ids.size()) {
            if (out.cells.size() >= cap) {
                out.complete = false;
                return;
            }
            Cell c;
            c.gamma = gamma;
            c.direction = point;
            if (rows.empty() && W > 0) {
                c.direction.assign(W, Rational(0));
                c.direction[0] = 1;
            }
            const auto& last = dz[net.L()];
            c.gradient = Matrix(last.size(), W);
            for (std::size_t r = 0; r < last.size(); ++r)
                for (std::size_t p = 0; p < W; ++p) c.gradient(r, p) = Rational(last[r][p]);
            out.cells.push_back(std::move(c));
            return;
        }
        const NeuronId id = ids[k];
        const Layer& ly = net.layer(id.l);
        const auto& pre = ly.pre;
        const std::size_t off = net.param_offset(id.l);
        Vec& a = a_buf[k];
        for (auto& x : a) x = 0;
        for (const auto& [v, g] : grads[id.l][id.i]) {
            if (g.is_zero()) continue;
            if (v < pre.in_dim) {
                const Vec& src = dz[id.l - 1][v];
                for (std::size_t p = 0; p < W; ++p)
                    if (sgn(src[p]) != 0) a[p] += g.raw() * src[p];
            } else {
                a[off + (v - pre.in_dim)] += g.raw();
            }
        }
        const PiecewiseFn& act = ly.act[id.i];
        const Rational& b = tr.y[id.l][id.i];
        bool degenerate = std::all_of(a.begin(), a.end(), [](const mpq_class& x) { return sgn(x) == 0; });
        auto take = [&](std::size_t piece) {
            gamma.gamma[id.l - 1][id.i] = piece;
            mpq_class s = act.pieces()[piece].poly.derivative_at(b).raw();
            Vec& dst = dz[id.l][id.i];
            for (std::size_t p = 0; p < W; ++p) {
                if (sgn(a[p]) == 0 || sgn(s) == 0) dst[p] = 0;
                else dst[p] = a[p] * s;
            }
            dfs(k + 1);
        };
        if (!act.is_joint(b) || degenerate) {
            take(act.owner(b));
            return;
        }
        mpq_class ap = 0;
        for (std::size_t p = 0; p < W; ++p)
            if (sgn(a[p]) != 0) ap += a[p] * point[p].raw();
        for (int side : {1, -1}) {
            std::vector<Rational> row(W);
            for (std::size_t p = 0; p < W; ++p) row[p] = Rational(mpq_class(a[p] * side));
            std::optional<std::vector<Rational>> pt;
            if (rows.empty()) {
                pt = row;
            } else if (sgn(ap) * side > 0) {
                pt = point;
            } else if (sgn(ap) == 0) {
                // point + eps * row stays inside the current open cone for small eps.
                mpq_class eps = 1;
                for (const auto& r : rows) {
                    mpq_class rp = 0, rr = 0;
                    for (std::size_t p = 0; p < W; ++p) {
                        rp += r[p].raw() * point[p].raw();
                        rr += r[p].raw() * row[p].raw();
                    }
                    if (sgn(rr) < 0) eps = std::min<mpq_class>(eps, rp / (-rr) / 2);
                }
                std::vector<Rational> q(W);
                for (std::size_t p = 0; p < W; ++p) q[p] = Rational(mpq_class(point[p].raw() + eps * row[p].raw()));
                pt = std::move(q);
            }
            rows.push_back(std::move(row));
            if (!pt) pt = strict_cone_point(rows, W);
            if (pt) {
                std::vector<Rational> saved = point;
                point = *pt;
                take(side > 0 ? act.right_of(b) : act.left_of(b));
                point = std::move(saved);
            }
            rows.pop_back();
            if (!out.complete) return;
        }
    };
    dfs(0);
    return out;
}

namespace {

std::optional<OracleWitness> probe(const Network& net, const std::vector<Rational>& w, const OracleBudget& budget,
                                   std::vector<OracleEvidence>& ev) {
    const std::size_t W = net.W();
    std::vector<std::vector<Rational>> coord(W);
    auto opposed = [&](const std::vector<Rational>& d) -> std::optional<OracleWitness> {
        RayGerm gp = ray_germ(net, w, d);
        RayGerm gm = ray_germ(net, w, negated(d));
        if (budget.record_evidence)
            ev.push_back({"direction", "d=" + vec_str(d) + " slope=" + vec_str(gp.slope) + " t*=" + gp.t_star.str()});
        if (gp.slope != negated(gm.slope)) {
            OracleWitness wi;
            wi.kind = OracleWitness::Kind::Opposed;
            wi.d = d;
            wi.plus = gp.slope;
            wi.minus = gm.slope;
            return wi;
        }
        return std::nullopt;
    };
    for (std::size_t j = 0; j < W; ++j) {
        std::vector<Rational> e(W);
        e[j] = 1;
        if (auto wi = opposed(e)) return wi;
        coord[j] = ray_germ(net, w, e).slope;
    }
    std::mt19937_64 rng(budget.seed);
    std::uniform_int_distribution<int> dist(-4, 4);
    for (std::size_t r = 0; r < budget.directions && W > 0; ++r) {
        std::vector<Rational> d(W);
        bool nz = false;
        while (!nz) {
            for (auto& x : d) {
                x = dist(rng);
                nz = nz || !x.is_zero();
            }
        }
        if (auto wi = opposed(d)) return wi;
        std::vector<Rational> slope = ray_germ(net, w, d).slope;
        std::vector<Rational> lin(slope.size());
        for (std::size_t j = 0; j < W; ++j)
            for (std::size_t o = 0; o < lin.size(); ++o) lin[o] += d[j] * coord[j][o];
        if (slope != lin) {
            OracleWitness wi;
            wi.kind = OracleWitness::Kind::Nonlinear;
            wi.d = d;
            wi.plus = slope;
            wi.minus = lin;
            return wi;
        }
    }
    return std::nullopt;
}

std::size_t closure_count(const Network& net, const ForwardTrace& tr, std::size_t cap) {
    std::size_t total = 1;
    for (const auto& id : net.neurons()) {
        total *= net.layer(id.l).act[id.i].closure_owners(tr.y[id.l][id.i]).size();
        if (total > cap) return total;
    }
    return total;
}

} // namespace

OracleVerdict oracle_differentiability(const Network& net, const std::vector<Rational>& w,
                                       const OracleBudget& budget) {
    check_len(net, w);
    return oracle_differentiability(net, w, forward(net, w), budget);
}

OracleVerdict oracle_differentiability(const Network& net, const std::vector<Rational>& w, const ForwardTrace& tr,
                                       const OracleBudget& budget) {
    check_len(net, w);
    OracleVerdict v;
    v.seed = budget.seed;

    // Step 1: every smooth selection whose region touches w has the same derivative.
    if (closure_count(net, tr, budget.closure_cap) <= budget.closure_cap) {
        auto gammas = closure_assignments(net, tr, budget.closure_cap);
        Matrix J0 = piece_jacobian(net, gammas[0], w);
        bool agree = true;
        for (std::size_t k = 1; k < gammas.size() && agree; ++k) agree = piece_jacobian(net, gammas[k], w) == J0;
        if (agree) {
            v.status = OracleStatus::Differentiable;
            v.gradient = J0;
            v.step = 1;
            if (budget.record_evidence)
                v.evidence.push_back({"assignment", std::to_string(gammas.size()) + " closure assignments agree"});
            return v;
        }
    }

    // Step 3 runs before the probes: it is exact and usually cheaper.
    v.cells = enumerate_cells(net, w, tr, budget.cell_cap);
    const CellEnumeration& cells = *v.cells;
    if (cells.complete) {
        for (const auto& c : cells.cells)
            if (budget.record_evidence)
                v.evidence.push_back({"cell", "gamma=" + c.gamma.str() + " d=" + vec_str(c.direction) + " grad=[" +
                                              c.gradient.str() + "]"});
        const Cell* other = nullptr;
        for (const auto& c : cells.cells)
            if (!(c.gradient == cells.cells[0].gradient)) {
                other = &c;
                break;
            }
        if (!other) {
            v.status = OracleStatus::Differentiable;
            v.gradient = cells.cells[0].gradient;
            v.step = 3;
            return v;
        }
        v.status = OracleStatus::NonDifferentiable;
        v.step = 3;
        for (const auto& c : cells.cells) {
            std::vector<Rational> plus = apply(c.gradient, c.direction);
            std::vector<Rational> minus = ray_germ(net, w, negated(c.direction)).slope;
            if (minus != negated(plus)) {
                OracleWitness wi;
                wi.kind = OracleWitness::Kind::Opposed;
                wi.d = c.direction;
                wi.plus = std::move(plus);
                wi.minus = std::move(minus);
                v.witness = std::move(wi);
                return v;
            }
        }
        if (auto wi = probe(net, w, budget, v.evidence)) {
            v.witness = std::move(wi);
            return v;
        }
        OracleWitness wi;
        wi.kind = OracleWitness::Kind::CellMismatch;
        wi.d = cells.cells[0].direction;
        wi.grad1 = cells.cells[0].gradient;
        wi.d2 = other->direction;
        wi.grad2 = other->gradient;
        v.witness = std::move(wi);
        return v;
    }

    // Step 2: direction probes.
    if (auto wi = probe(net, w, budget, v.evidence)) {
        v.status = OracleStatus::NonDifferentiable;
        v.witness = std::move(wi);
        v.step = 2;
        return v;
    }
    v.status = OracleStatus::Inconclusive;
    v.step = 2;
    return v;
}

bool clarke_limit_in(const CellEnumeration& cells, const Matrix& g) {
    for (const auto& c : cells.cells)
        if (c.gradient == g) return true;
    if (!cells.complete) throw Error(ErrorCode::ExplosionGuard, "cell enumeration hit its cap");
    return false;
}

bool oracle_clarke_limit(const Network& net, const std::vector<Rational>& w, const Matrix& g,
                         const OracleBudget& budget) {
    return clarke_limit_in(enumerate_cells(net, w, budget.cell_cap), g);
}

std::vector<std::vector<double>> fd_grad(const Network& net, const std::vector<Rational>& w, double step) {
    check_len(net, w);
    std::vector<double> x;
    for (const auto& r : w) x.push_back(r.to_double());
    std::vector<std::vector<double>> J(net.out_dim(), std::vector<double>(net.W()));
    for (std::size_t p = 0; p < net.W(); ++p) {
        std::vector<double> a = x, b = x;
        a[p] += step;
        b[p] -= step;
        auto fa = forward_double(net, a), fb = forward_double(net, b);
        for (std::size_t r = 0; r < net.out_dim(); ++r) J[r][p] = (fa[r] - fb[r]) / (2 * step);
    }
    return J;
}

} // namespace adcert
