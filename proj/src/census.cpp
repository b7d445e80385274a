#include "adcert/census.hpp"

#include "adcert/error.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <thread>

namespace adcert {

Rational CensusReport::nd_density() const { return Rational(mpq_class(mpz_class(std::to_string(nd)), mpz_class(std::to_string(total)))); }
Rational CensusReport::inc_density() const { return Rational(mpq_class(mpz_class(std::to_string(inc)), mpz_class(std::to_string(total)))); }
Rational CensusReport::union_density() const {
    return Rational(mpq_class(mpz_class(std::to_string(nd + inc)), mpz_class(std::to_string(total))));
}

std::string count_ratio(std::uint64_t num, std::uint64_t den) { return std::to_string(num) + "/" + std::to_string(den); }

std::string CensusReport::ratio(std::uint64_t count) const { return count_ratio(count / inert_factor, total / inert_factor); }

BoundSet bounds(const Network& net, const Grid& grid) {
    const NetworkMeta& meta = net.meta();
    if (!meta.wsb_ok)
        throw Error(ErrorCode::NotApplicable, "some layer has neither bias parameters nor the well-structured biaffine form");
    std::size_t ndf_sum = 0, union_sum = 0, inc_sum = 0;
    for (const auto& id : net.neurons()) {
        const BreakpointSets& s = net.layer(id.l).act[id.i].breakpoints();
        const bool Sl = meta.S_full[id.l], Snext = meta.S_full[id.l + 1];
        std::vector<Rational> both = s.ndf;
        for (const auto& r : s.bdz.rational)
            if (!std::binary_search(s.ndf.begin(), s.ndf.end(), r)) both.push_back(r);
        const std::size_t with_bdz = both.size() + s.bdz.irrational.size();
        ndf_sum += s.ndf.size();
        union_sum += Snext ? with_bdz : s.ndf.size();
        if (Sl && Snext) inc_sum += with_bdz;
        else if (Sl) inc_sum += s.ndf.size();
        else if (Snext) inc_sum += s.bdz.size();
    }
    const Rational m(static_cast<long>(grid.size()));
    BoundSet b;
    if (net.has_bias()) b.bias_ndf = Rational(static_cast<long>(ndf_sum)) / m;
    b.general_union = Rational(static_cast<long>(union_sum)) / m;
    b.inc = Rational(static_cast<long>(inc_sum)) / m;
    return b;
}

namespace {

// Can local parameters p and q of layer l be swapped, up to a relabelling of neurons?
bool transposition_ok(const Network& net, std::size_t l, std::size_t p, std::size_t q) {
    std::vector<std::uint32_t> rho_prev(net.layer(l).pre.in_dim);
    std::iota(rho_prev.begin(), rho_prev.end(), 0u);
    for (std::size_t k = l; k <= net.L(); ++k) {
        const Layer& ly = net.layer(k);
        const auto& pre = ly.pre;
        const std::size_t nv = pre.in_dim + pre.param_count;
        std::vector<std::uint32_t> m(nv);
        for (std::size_t v = 0; v < pre.in_dim; ++v) m[rho_prev[v]] = static_cast<std::uint32_t>(v);
        for (std::size_t u = 0; u < pre.param_count; ++u) m[pre.in_dim + u] = static_cast<std::uint32_t>(pre.in_dim + u);
        if (k == l) std::swap(m[pre.in_dim + p], m[pre.in_dim + q]);
        std::vector<MultiPoly> ren;
        for (const auto& t : pre.tau) ren.push_back(t.renamed(m, nv));
        std::vector<std::uint32_t> rho(pre.out_dim);
        std::vector<bool> used(pre.out_dim, false);
        for (std::size_t i = 0; i < pre.out_dim; ++i) {
            bool found = false;
            for (std::size_t j = 0; j < pre.out_dim && !found; ++j) {
                if (used[j] || !(ren[j] == pre.tau[i]) || !(ly.act[j] == ly.act[i])) continue;
                used[j] = true;
                rho[i] = static_cast<std::uint32_t>(j);
                found = true;
            }
            if (!found) return false;
        }
        rho_prev = std::move(rho);
    }
    return true;
}

struct BlockList {
    std::vector<std::size_t> params;
    std::vector<std::vector<std::uint16_t>> tuples;  // non-decreasing grid indices
    std::vector<std::uint64_t> weights;
};

std::uint64_t factorial(std::size_t k) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
}

BlockList make_block(std::vector<std::size_t> params, std::size_t m) {
    BlockList b;
    b.params = std::move(params);
    const std::size_t k = b.params.size();
    std::vector<std::uint16_t> cur(k, 0);
    while (true) {
        b.tuples.push_back(cur);
        std::uint64_t w = factorial(k);
        for (std::size_t i = 0; i < k;) {
            std::size_t j = i;
            while (j < k && cur[j] == cur[i]) ++j;
            w /= factorial(j - i);
            i = j;
        }
        b.weights.push_back(w);
        std::size_t pos = k;
        while (pos > 0 && cur[pos - 1] + 1u == m) --pos;
        if (pos == 0) break;
        ++cur[pos - 1];
        for (std::size_t i = pos; i < k; ++i) cur[i] = cur[pos - 1];
    }
    return b;
}

} // namespace

Symmetry find_symmetry(const Network& net) {
    Symmetry s;
    const std::size_t W = net.W();
    std::vector<bool> inert(W, false);
    const Layer& last = net.layer(net.L());
    if (last.pre.has_bias())
        for (std::size_t i = 0; i < last.pre.out_dim; ++i)
            if (last.act[i].is_affine()) {
                std::size_t p = net.param_offset(net.L()) + last.pre.bias_param(i);
                inert[p] = true;
                s.inert.push_back(p);
            }
    std::vector<std::size_t> parent(W);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t l = 1; l <= net.L(); ++l) {
        const std::size_t off = net.param_offset(l), P = net.layer(l).pre.param_count;
        for (std::size_t p = 0; p < P; ++p)
            for (std::size_t q = p + 1; q < P; ++q) {
                if (inert[off + p] || inert[off + q] || find(off + p) == find(off + q)) continue;
                if (transposition_ok(net, l, p, q)) parent[find(off + q)] = find(off + p);
            }
    }
    std::vector<std::vector<std::size_t>> by_root(W);
    for (std::size_t p = 0; p < W; ++p)
        if (!inert[p]) by_root[find(p)].push_back(p);
    for (auto& b : by_root)
        if (!b.empty()) s.blocks.push_back(std::move(b));
    std::sort(s.blocks.begin(), s.blocks.end());
    return s;
}

CensusReport scan(const Network& net, const Grid& grid, const CensusOptions& opts) {
    const std::size_t W = net.W(), m = grid.size();
    CensusReport rep;
    rep.grid = grid.M;
    rep.W = W;
    rep.has_bias = net.has_bias();
    rep.allow_unknown = opts.allow_unknown;

    rep.total = 1;
    for (std::size_t p = 0; p < W; ++p) {
        if (rep.total > UINT64_MAX / m) throw Error(ErrorCode::GridTooLarge, "|M|^W overflows");
        rep.total *= m;
    }

    Symmetry sym = find_symmetry(net);
    for (std::size_t k = 0; k < sym.inert.size(); ++k) rep.inert_factor *= m;
    if (!opts.reduce || opts.log_points) {
        sym.blocks.clear();
        sym.inert.clear();
        for (std::size_t p = 0; p < W; ++p) sym.blocks.push_back({p});
    }
    rep.symmetry_blocks = sym.blocks;
    std::uint64_t inert_weight = 1;
    for (std::size_t k = 0; k < sym.inert.size(); ++k) inert_weight *= m;

    std::vector<BlockList> blocks;
    std::uint64_t count = 1;
    for (const auto& b : sym.blocks) {
        // C(m + k - 1, k) tuples; check before building
        std::uint64_t c = 1;
        for (std::size_t i = 1; i <= b.size(); ++i) {
            c = c * (m + i - 1) / i;
            if (c > opts.cap) break;
        }
        if (c > opts.cap || count > opts.cap / c)
            throw Error(ErrorCode::GridTooLarge, "more than " + std::to_string(opts.cap) + " grid points to classify");
        count *= c;
        blocks.push_back(make_block(b, m));
    }
    rep.enumerated = count;

    struct Tally {
        std::uint64_t by[5] = {0, 0, 0, 0, 0};
        std::vector<PointRecord> points;
        std::exception_ptr err;
    };
    OracleBudget budget = opts.budget;
    budget.record_evidence = false;
    const std::size_t jobs = std::max<std::size_t>(1, std::min<std::uint64_t>(opts.jobs, count));
    std::vector<Tally> tallies(jobs);
    auto work = [&](std::size_t t) {
        Tally& tl = tallies[t];
        try {
            const std::uint64_t lo = count * t / jobs, hi = count * (t + 1) / jobs;
            std::vector<Rational> w(W, grid.M.empty() ? Rational(0) : grid.M[0]);
            for (std::uint64_t r = lo; r < hi; ++r) {
                std::uint64_t rem = r, weight = inert_weight;
                for (std::size_t b = blocks.size(); b-- > 0;) {
                    const BlockList& bl = blocks[b];
                    const std::size_t idx = rem % bl.tuples.size();
                    rem /= bl.tuples.size();
                    for (std::size_t k = 0; k < bl.params.size(); ++k) w[bl.params[k]] = grid.M[bl.tuples[idx][k]];
                    weight *= bl.weights[idx];
                }
                Classification c = classify(net, w, budget);
                tl.by[static_cast<int>(c.verdict)] += weight;
                if (opts.log_points) tl.points.push_back({w, std::move(c)});
            }
        } catch (...) {
            tl.err = std::current_exception();
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> th;
        for (std::size_t t = 0; t < jobs; ++t) th.emplace_back(work, t);
        for (auto& x : th) x.join();
    }
    for (auto& tl : tallies) {
        if (tl.err) std::rethrow_exception(tl.err);
        for (int v = 0; v < 5; ++v) rep.by_verdict[v] += tl.by[v];
        for (auto& p : tl.points) rep.points.push_back(std::move(p));
    }
    rep.nd = rep.by_verdict[static_cast<int>(Verdict::NonDiffClarke)] +
             rep.by_verdict[static_cast<int>(Verdict::NonDiffNotClarke)];
    rep.inc = rep.by_verdict[static_cast<int>(Verdict::DiffIncorrect)];
    rep.unknown = rep.by_verdict[static_cast<int>(Verdict::Unknown)];
    try {
        rep.bounds = bounds(net, grid);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotApplicable) throw;
    }
    return rep;
}

VerifyResult verify(const CensusReport& r) {
    if (r.unknown > 0 && !r.allow_unknown)
        throw Error(ErrorCode::IncompleteReport, std::to_string(r.unknown) + " points have verdict Unknown");
    VerifyResult out;
    auto add = [&](std::string name, bool pass, std::string detail) {
        out.pass = out.pass && pass;
        out.checks.push_back({std::move(name), pass, std::move(detail)});
    };
    const Rational nd = r.nd_density(), inc = r.inc_density(), uni = r.union_density();
    if (r.has_bias) {
        add("inc_empty", r.inc == 0, "inc=" + std::to_string(r.inc));
        if (r.bounds.bias_ndf)
            add("bias_ndf_bound", nd <= *r.bounds.bias_ndf, r.ratio(r.nd) + " <= " + r.bounds.bias_ndf->str());
    }
    if (r.bounds.general_union)
        add("general_union_bound", uni <= *r.bounds.general_union,
            r.ratio(r.nd + r.inc) + " <= " + r.bounds.general_union->str());
    if (r.bounds.inc)
        add("inc_bound", inc <= *r.bounds.inc, r.ratio(r.inc) + " <= " + r.bounds.inc->str());
    if (r.lower) {
        const Rational need = r.lower->value(r.grid.size());
        if (r.lower->set == LowerBoundClaim::Set::NonDiff)
            add("lower_bound_nd", nd >= need, r.ratio(r.nd) + " >= " + need.str());
        else
            add("lower_bound_inc", inc >= need, r.ratio(r.inc) + " >= " + need.str());
    }
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

} // namespace

std::string census_csv(const CensusReport& r, const VerifyResult& v, bool decimal) {
    std::string out;
    if (!r.points.empty()) {
        for (std::size_t p = 0; p < r.W; ++p) out += "w" + std::to_string(p + 1) + ",";
        out += "verdict,certificate,witness\n";
        for (const auto& pt : r.points) {
            for (const auto& x : pt.w) out += x.str() + ",";
            out += std::string(to_string(pt.c.verdict)) + "," + std::string(to_string(pt.c.certificate)) + "," +
                   csv_field(pt.c.witness) + "\n";
        }
        out += "\n";
    }
    out += decimal ? "key,value,decimal\n" : "key,value\n";
    auto row = [&](const std::string& k, const std::string& val, const std::optional<Rational>& num = std::nullopt) {
        out += k + "," + csv_field(val);
        if (decimal) out += "," + (num ? num->decimal(6) : std::string());
        out += "\n";
    };
    std::string g;
    for (std::size_t i = 0; i < r.grid.size(); ++i) g += (i ? ";" : "") + r.grid[i].str();
    row("grid", g);
    row("W", std::to_string(r.W));
    row("points", std::to_string(r.total));
    row("classified", std::to_string(r.enumerated));
    row("inert_factor", std::to_string(r.inert_factor));
    for (int k = 0; k < 5; ++k) row(std::string("verdict:") + std::string(to_string(static_cast<Verdict>(k))), std::to_string(r.by_verdict[k]));
    row("nd", std::to_string(r.nd));
    row("inc", std::to_string(r.inc));
    row("unknown", std::to_string(r.unknown));
    row("nd_density", r.ratio(r.nd), r.nd_density());
    row("inc_density", r.ratio(r.inc), r.inc_density());
    row("union_density", r.ratio(r.nd + r.inc), r.union_density());
    auto opt = [&](const char* k, const std::optional<Rational>& b) { row(k, b ? b->str() : "n/a", b); };
    opt("bias_ndf_bound", r.bounds.bias_ndf);
    opt("general_union_bound", r.bounds.general_union);
    opt("inc_bound", r.bounds.inc);
    if (r.lower) opt("lower_bound", r.lower->value(r.grid.size()));
    for (const auto& c : v.checks) row("check:" + c.name, (c.pass ? "PASS " : "FAIL ") + c.detail);
    row("verify", v.pass ? "PASS" : "FAIL");
    return out;
}

} // namespace adcert
