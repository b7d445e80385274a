#include "adcert/config_io.hpp"

#include "adcert/catalog.hpp"
#include "adcert/error.hpp"

#include <fstream>
#include <sstream>

namespace adcert {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadConfig, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::size_t size_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0))
        bad(std::string("field '") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

json bound_to_json(const std::optional<Rational>& b, const char* inf) {
    return b ? rational_to_json(*b) : json(inf);
}

std::optional<Rational> bound_from_json(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "-inf" || s == "inf" || s == "+inf") return std::nullopt;
    }
    return rational_from_json(j);
}

json poly_terms_to_json(const MultiPoly& p) {
    json arr = json::array();
    for (const auto& t : p.terms()) {
        json vars = json::array();
        for (const auto& [v, e] : t.powers) vars.push_back(json::array({v, e}));
        arr.push_back(json{{"coef", rational_to_json(t.coef)}, {"vars", vars}});
    }
    return arr;
}

MultiPoly poly_terms_from_json(const json& j, std::size_t nvars) {
    if (!j.is_array()) bad("polynomial must be a list of terms");
    MultiPoly p(nvars);
    for (const auto& t : j) {
        MultiPoly::Powers pw;
        for (const auto& ve : field(t, "vars")) {
            if (!ve.is_array() || ve.size() != 2) bad("term variable must be [index, exponent]");
            std::size_t v = ve[0].get<std::size_t>();
            if (v >= nvars) bad("term variable index out of range");
            pw.emplace_back(static_cast<std::uint32_t>(v), ve[1].get<std::uint32_t>());
        }
        p.add_term(rational_from_json(field(t, "coef")), std::move(pw));
    }
    return p;
}

std::vector<Rational> rational_list(const json& j) {
    if (!j.is_array()) bad("expected a list of rationals");
    std::vector<Rational> out;
    for (const auto& x : j) out.push_back(rational_from_json(x));
    return out;
}

json rational_list_json(const std::vector<Rational>& v) {
    json arr = json::array();
    for (const auto& x : v) arr.push_back(rational_to_json(x));
    return arr;
}

} // namespace

json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const json& j) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
    } catch (const Error& e) {
        bad(e.what());
    }
    bad("rationals must be \"p/q\" strings or integers, got " + j.dump());
}

json activation_to_json(const PiecewiseFn& f) {
    json pieces = json::array();
    for (const auto& p : f.pieces()) {
        pieces.push_back(json{{"lo", bound_to_json(p.interval.lo, "-inf")},
                              {"hi", bound_to_json(p.interval.hi, "inf")},
                              {"lo_closed", p.interval.lo_closed},
                              {"hi_closed", p.interval.hi_closed},
                              {"coeffs", rational_list_json(p.poly.coeffs())}});
    }
    json out{{"pieces", pieces}};
    if (f.has_overrides()) {
        json ov = json::array();
        for (const auto& [x, v] : f.overrides()) ov.push_back(json{{"at", rational_to_json(x)}, {"value", rational_to_json(v)}});
        out["overrides"] = ov;
    }
    return out;
}

PiecewiseFn activation_from_json(const json& j) {
    std::map<Rational, Rational> overrides;
    if (j.is_object() && j.contains("overrides"))
        for (const auto& o : j.at("overrides")) overrides[rational_from_json(field(o, "at"))] = rational_from_json(field(o, "value"));
    if (j.is_string() || (j.is_object() && j.contains("catalog"))) {
        std::string name = j.is_string() ? j.get<std::string>() : j.at("catalog").get<std::string>();
        CatalogParams cp;
        if (j.is_object()) {
            if (j.contains("points")) cp.points = rational_list(j.at("points"));
            if (j.contains("values")) cp.values = rational_list(j.at("values"));
            if (j.contains("coeffs")) cp.coeffs = rational_list(j.at("coeffs"));
            if (j.contains("slope")) cp.slope = rational_from_json(j.at("slope"));
            if (j.contains("owner")) cp.owner = j.at("owner").get<std::string>() == "right" ? Ownership::Right : Ownership::Left;
            if (j.contains("with_zero")) cp.with_zero = j.at("with_zero").get<bool>();
        }
        PiecewiseFn f = catalog(name, cp);
        if (overrides.empty()) return f;
        return PiecewiseFn(f.pieces(), overrides);
    }
    std::vector<Piece> pieces;
    for (const auto& pj : field(j, "pieces")) {
        Piece p;
        p.interval.lo = bound_from_json(field(pj, "lo"));
        p.interval.hi = bound_from_json(field(pj, "hi"));
        p.interval.lo_closed = pj.value("lo_closed", false);
        p.interval.hi_closed = pj.value("hi_closed", false);
        p.poly = Poly(rational_list(field(pj, "coeffs")));
        pieces.push_back(std::move(p));
    }
    return PiecewiseFn(std::move(pieces), std::move(overrides));
}

json network_to_json(const Network& net) {
    json layers = json::array();
    for (const auto& ly : net.layers()) {
        const auto& p = ly.pre;
        json lj{{"kind", std::string(to_string(p.kind))}, {"in", p.in_dim}, {"out", p.out_dim}};
        switch (p.kind) {
        case LayerKind::AffineWithBias: {
            lj["weights"] = p.param_count - p.out_dim;
            json fs = json::array();
            for (const auto& f : p.f) fs.push_back(poly_terms_to_json(f));
            lj["f"] = fs;
            break;
        }
        case LayerKind::WellStructuredBiaffine: {
            lj["params"] = p.param_count;
            json ms = json::array();
            for (const auto& M : p.M) {
                json rows = json::array();
                for (std::size_t r = 0; r < M.rows; ++r) {
                    json row = json::array();
                    for (std::size_t c = 0; c < M.cols; ++c) row.push_back(rational_to_json(M(r, c)));
                    rows.push_back(row);
                }
                ms.push_back(rows);
            }
            lj["matrices"] = ms;
            lj["constants"] = rational_list_json(p.c);
            break;
        }
        case LayerKind::General: {
            lj["params"] = p.param_count;
            json ts = json::array();
            for (const auto& t : p.tau) ts.push_back(poly_terms_to_json(t));
            lj["tau"] = ts;
            break;
        }
        }
        json acts = json::array();
        for (const auto& a : ly.act) acts.push_back(activation_to_json(a));
        lj["activations"] = acts;
        layers.push_back(lj);
    }
    return json{{"input", rational_list_json(net.input())}, {"layers", layers}};
}

Network network_from_json(const json& root) {
    const json& j = (root.is_object() && root.contains("network")) ? root.at("network") : root;
    std::vector<Rational> input = rational_list(field(j, "input"));
    std::vector<Layer> layers;
    for (const auto& lj : field(j, "layers")) {
        std::string kind = field(lj, "kind").get<std::string>();
        std::size_t in = size_field(lj, "in"), out = size_field(lj, "out");
        Layer ly;
        if (kind == "affine_bias") {
            std::size_t weights = size_field(lj, "weights");
            std::vector<MultiPoly> fs;
            for (const auto& fj : field(lj, "f")) fs.push_back(poly_terms_from_json(fj, in + weights));
            ly.pre = PreActivationLayer::affine_with_bias(in, out, weights, std::move(fs));
        } else if (kind == "wsb") {
            std::size_t params = size_field(lj, "params");
            std::vector<Matrix> ms;
            for (const auto& mj : field(lj, "matrices")) {
                Matrix M(in, params);
                if (!mj.is_array() || mj.size() != in) bad("wsb matrix must have `in` rows");
                for (std::size_t r = 0; r < in; ++r) {
                    if (!mj[r].is_array() || mj[r].size() != params) bad("wsb matrix row must have `params` entries");
                    for (std::size_t c = 0; c < params; ++c) M(r, c) = rational_from_json(mj[r][c]);
                }
                ms.push_back(std::move(M));
            }
            ly.pre = PreActivationLayer::wsb(in, out, params, std::move(ms), rational_list(field(lj, "constants")));
        } else if (kind == "general") {
            std::size_t params = size_field(lj, "params");
            std::vector<MultiPoly> ts;
            for (const auto& tj : field(lj, "tau")) ts.push_back(poly_terms_from_json(tj, in + params));
            ly.pre = PreActivationLayer::general(in, out, params, std::move(ts));
        } else {
            bad("unknown layer kind '" + kind + "'");
        }
        for (const auto& aj : field(lj, "activations")) ly.act.push_back(activation_from_json(aj));
        layers.push_back(std::move(ly));
    }
    return Network(std::move(input), std::move(layers));
}

json answers_to_json(const AnswerSheet& a) {
    json j{{"fixture", a.fixture}};
    if (!a.grid.empty()) j["grid"] = rational_list_json(a.grid);
    if (a.lower) {
        j["lower_bound"] = json{{"set", a.lower->set == LowerBoundClaim::Set::NonDiff ? "nondiff" : "incorrect"},
                                {"factor", rational_to_json(a.lower->factor)},
                                {"sum", a.lower->sum}};
        if (!a.grid.empty()) j["lower_bound"]["value"] = rational_to_json(a.lower->value(a.grid.size()));
    }
    json facts = json::object();
    for (const auto& [k, v] : a.facts) facts[k] = v;
    j["facts"] = facts;
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

Network load_network(const std::string& path) {
    std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadConfig, path + ": " + e.what());
    }
    try {
        return network_from_json(j);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadConfig, path + ": " + e.what());
    }
}

} // namespace adcert
