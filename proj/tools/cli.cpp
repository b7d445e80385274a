#include "cli.hpp"

#include "adcert/census.hpp"
#include "adcert/config_io.hpp"
#include "adcert/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

namespace adcert::cli {

namespace {

const std::vector<std::string> kVerbs = {"eval", "ad", "classify", "census", "fixture", "bounds"};

struct Loaded {
    Network net;
    std::optional<AnswerSheet> answers;
};

Loaded load(const Command& c) {
    if (c.net) return {load_network(*c.net), std::nullopt};
    Fixture f = fixture_from_spec(*c.fixture);
    return {std::move(f.net), std::move(f.answers)};
}

std::vector<Rational> parse_point(const std::string& text) {
    std::vector<Rational> w;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(',', start);
        w.push_back(Rational::parse(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return w;
}

Grid grid_for(const Command& c, const Loaded& l) {
    if (c.grid) return parse_grid(*c.grid);
    if (l.answers && !l.answers->grid.empty()) return Grid(l.answers->grid);
    throw UsageError("--grid is required", "");
}

std::vector<Rational> point_for(const Command& c) {
    if (!c.at) throw UsageError("--at is required for " + c.verb, "");
    return parse_point(*c.at);
}

void print_row(std::ostream& out, const std::vector<Rational>& row, bool decimal) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i].str();
    if (decimal) {
        out << "\t";
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i].decimal(6);
    }
    out << "\n";
}

OracleBudget budget_for(const Command& c) {
    OracleBudget b;
    b.seed = c.seed;
    b.directions = c.directions;
    return b;
}

} // namespace

Command parse_args(const std::vector<std::string>& args) {
    CLI::App app{"adcert: exact automatic-differentiation correctness checks for layered networks", "adcert"};
    Command c;
    std::string net, fixture, at, grid, out;
    app.add_option("verb", c.verb, "eval | ad | classify | census | fixture | bounds")->required();
    auto* o_net = app.add_option("--net", net, "network config (JSON)");
    auto* o_fix = app.add_option("--fixture", fixture, "fixture name with optional ,key=value parameters");
    auto* o_at = app.add_option("--at", at, "parameter point, comma-separated rationals");
    auto* o_grid = app.add_option("--grid", grid, "grid: -1,0,1 | equispaced:lo:hi:count | 16eq");
    auto* o_out = app.add_option("--out", out, "output path");
    app.add_flag("--log-points", c.log_points, "census: write one CSV row per point");
    app.add_flag("--allow-unknown", c.allow_unknown, "census: do not fail on Unknown verdicts");
    app.add_flag("--decimal", c.decimal, "add decimal display values");
    app.add_option("--jobs", c.jobs, "census worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", c.seed, "oracle direction seed");
    app.add_option("--directions", c.directions, "oracle random probe directions");
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what(), app.help());
    }
    if (std::find(kVerbs.begin(), kVerbs.end(), c.verb) == kVerbs.end())
        throw UsageError("unknown verb '" + c.verb + "'", app.help());
    if ((o_net->count() > 0) == (o_fix->count() > 0))
        throw UsageError("exactly one of --net and --fixture is required", app.help());
    if (o_net->count()) c.net = net;
    if (o_fix->count()) c.fixture = fixture;
    if (o_at->count()) c.at = at;
    if (o_grid->count()) c.grid = grid;
    if (o_out->count()) c.out = out;
    if ((c.verb == "eval" || c.verb == "ad" || c.verb == "classify") && !c.at)
        throw UsageError("--at is required for " + c.verb, app.help());
    if (c.verb == "fixture" && !c.fixture) throw UsageError("fixture needs --fixture", app.help());
    return c;
}

int run(const Command& c, std::ostream& out, std::ostream& err) {
    Loaded l = load(c);
    const Network& net = l.net;
    if (c.verb == "eval") {
        print_row(out, forward(net, point_for(c)).output(), c.decimal);
        return 0;
    }
    if (c.verb == "ad") {
        Matrix J = reverse_ad(net, point_for(c)).jacobian;
        for (std::size_t r = 0; r < J.rows; ++r)
            print_row(out, std::vector<Rational>(J.data.begin() + r * J.cols, J.data.begin() + (r + 1) * J.cols), c.decimal);
        return 0;
    }
    if (c.verb == "classify") {
        Classification k = classify(net, point_for(c), budget_for(c));
        out << to_string(k.verdict) << "\n";
        out << "certificate=" << to_string(k.certificate) << "\n";
        out << "ad=[" << k.ad.str() << "]\n";
        if (k.derivative_claim) out << "derivative=[" << k.derivative_claim->str() << "]\n";
        if (!k.witness.empty()) out << "witness=" << k.witness << "\n";
        return 0;
    }
    if (c.verb == "bounds") {
        Grid g = grid_for(c, l);
        BoundSet b;
        try {
            b = bounds(net, g);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotApplicable) throw;
            err << "note: " << e.what() << "\n";
        }
        auto line = [&](const char* k, const std::optional<Rational>& v) {
            out << k << "=" << (v ? v->str() : "n/a");
            if (c.decimal && v) out << "\t" << v->decimal(6);
            out << "\n";
        };
        line("bias_ndf_bound", b.bias_ndf);
        line("general_union_bound", b.general_union);
        line("inc_bound", b.inc);
        return 0;
    }
    if (c.verb == "fixture") {
        json cfg = network_to_json(net);
        json ans = answers_to_json(*l.answers);
        if (c.out) {
            write_text_file(*c.out, cfg.dump(2) + "\n");
            write_text_file(*c.out + ".answers.json", ans.dump(2) + "\n");
            out << "wrote " << *c.out << " and " << *c.out << ".answers.json\n";
        } else {
            out << json{{"network", cfg}, {"answers", ans}}.dump(2) << "\n";
        }
        return 0;
    }
    // census
    Grid g = grid_for(c, l);
    CensusOptions opts;
    opts.budget = budget_for(c);
    opts.jobs = c.jobs;
    opts.log_points = c.log_points;
    opts.allow_unknown = c.allow_unknown;
    CensusReport rep = scan(net, g, opts);
    if (l.answers) rep.lower = l.answers->lower;
    VerifyResult v;
    bool incomplete = false;
    try {
        v = verify(rep);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::IncompleteReport) throw;
        err << e.what() << "\n";
        incomplete = true;
        v.pass = false;
    }
    std::string csv = census_csv(rep, v, c.decimal);
    if (c.out) write_text_file(*c.out, csv);
    out << "points=" << rep.total << " classified=" << rep.enumerated << "\n";
    out << "nd=" << rep.nd << " inc=" << rep.inc << " unknown=" << rep.unknown << "\n";
    out << "density=" << rep.ratio(rep.nd) << "\n";
    out << "inc_density=" << rep.ratio(rep.inc) << "\n";
    for (const auto& ch : v.checks) out << (ch.pass ? "PASS " : "FAIL ") << ch.name << ": " << ch.detail << "\n";
    if (!c.out) out << csv;
    out << "verify=" << (v.pass && !incomplete ? "PASS" : "FAIL") << "\n";
    return v.pass && !incomplete ? 0 : 1;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Command c;
    try {
        c = parse_args(args);
    } catch (const HelpRequested& h) {
        out << h.text;
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << e.help;
        return 2;
    }
    try {
        return run(c, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace adcert::cli
