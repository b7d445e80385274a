#include "adcert/certify.hpp"

#include "adcert/error.hpp"

namespace adcert {

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::DiffCorrect: return "DiffCorrect";
    case Verdict::DiffIncorrect: return "DiffIncorrect";
    case Verdict::NonDiffClarke: return "NonDiffClarke";
    case Verdict::NonDiffNotClarke: return "NonDiffNotClarke";
    case Verdict::Unknown: return "Unknown";
    }
    return "?";
}

std::string_view to_string(Certificate c) {
    switch (c) {
    case Certificate::ThmBiasEquivalence: return "ThmBiasEquivalence";
    case Certificate::ThmBiasClarke: return "ThmBiasClarke";
    case Certificate::SuffStd: return "SuffStd";
    case Certificate::SuffClarke: return "SuffClarke";
    case Certificate::Oracle: return "Oracle";
    case Certificate::None: return "None";
    }
    return "?";
}

bool is_nondiff(Verdict v) { return v == Verdict::NonDiffClarke || v == Verdict::NonDiffNotClarke; }

namespace {

bool nonzero(const std::vector<Rational>& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return true;
    return false;
}

std::string neuron_str(NeuronId id) { return "(" + std::to_string(id.l) + "," + std::to_string(id.i + 1) + ")"; }

} // namespace

BiasDecision decide_bias(const Network& net, const ADReport& rep) {
    if (!net.has_bias()) throw Error(ErrorCode::RequiresBias, "some layer has no bias parameters");
    BiasDecision d;
    for (const auto& id : net.neurons()) {
        if (net.layer(id.l).act[id.i].in_ndf(rep.trace.y[id.l][id.i]) && nonzero(rep.hidden_partial(id))) {
            d.witness = id;
            return d;
        }
    }
    d.differentiable = true;
    d.gradient = rep.jacobian;
    return d;
}

BiasDecision decide_bias(const Network& net, const std::vector<Rational>& w) {
    if (!net.has_bias()) throw Error(ErrorCode::RequiresBias, "some layer has no bias parameters");
    return decide_bias(net, reverse_ad(net, w));
}

std::optional<Certificate> sufficient_std(const Network& net, const ADReport& rep) {
    for (const auto& id : net.neurons()) {
        bool bias = net.layer(id.l).pre.has_bias();
        if ((!bias || nonzero(rep.hidden_partial(id))) && net.layer(id.l).act[id.i].in_ndf(rep.trace.y[id.l][id.i]))
            return std::nullopt;
    }
    return Certificate::SuffStd;
}

std::optional<Certificate> sufficient_std(const Network& net, const std::vector<Rational>& w) {
    return sufficient_std(net, reverse_ad(net, w));
}

std::optional<Certificate> sufficient_clarke(const Network& net, const ADReport& rep) {
    if (!net.all_consistent()) return std::nullopt;
    for (const auto& id : net.neurons())
        if (!net.layer(id.l).pre.has_bias() && net.layer(id.l).act[id.i].in_ncdf(rep.trace.y[id.l][id.i]))
            return std::nullopt;
    return Certificate::SuffClarke;
}

std::optional<Certificate> sufficient_clarke(const Network& net, const std::vector<Rational>& w) {
    return sufficient_clarke(net, reverse_ad(net, w));
}

namespace {

Classification by_oracle(const Network& net, const std::vector<Rational>& w, const ForwardTrace& trace,
                         const OracleBudget& budget, Classification c) {
    c.certificate = Certificate::Oracle;
    OracleVerdict ov;
    try {
        ov = oracle_differentiability(net, w, trace, budget);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ExplosionGuard) throw;
        ov.status = OracleStatus::Inconclusive;
    }
    switch (ov.status) {
    case OracleStatus::Differentiable:
        if (ov.gradient == c.ad) {
            c.verdict = Verdict::DiffCorrect;
            c.derivative_claim = c.ad;
        } else {
            c.verdict = Verdict::DiffIncorrect;
            c.derivative_claim = ov.gradient;
            c.witness = "true=[" + ov.gradient.str() + "]";
        }
        return c;
    case OracleStatus::NonDifferentiable:
        c.witness = ov.witness ? ov.witness->str() : std::string();
        try {
            const bool limit = ov.cells && ov.cells->complete ? clarke_limit_in(*ov.cells, c.ad)
                                                              : oracle_clarke_limit(net, w, c.ad, budget);
            c.verdict = limit ? Verdict::NonDiffClarke : Verdict::NonDiffNotClarke;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ExplosionGuard) throw;
            c.verdict = Verdict::Unknown;
        }
        return c;
    case OracleStatus::Inconclusive:
        break;
    }
    c.verdict = Verdict::Unknown;
    c.certificate = Certificate::None;
    return c;
}

} // namespace

Classification classify(const Network& net, const std::vector<Rational>& w, const OracleBudget& budget) {
    ADReport rep = reverse_ad(net, w);
    Classification c;
    c.ad = rep.jacobian;

    if (net.has_bias()) {
        BiasDecision d = decide_bias(net, rep);
        if (d.differentiable) {
            c.verdict = Verdict::DiffCorrect;
            c.derivative_claim = rep.jacobian;
            c.certificate = Certificate::ThmBiasEquivalence;
            return c;
        }
        if (net.all_consistent()) {
            c.verdict = Verdict::NonDiffClarke;
            c.certificate = Certificate::ThmBiasClarke;
            c.witness = neuron_str(*d.witness);
            return c;
        }
        return by_oracle(net, w, rep.trace, budget, c);
    }
    if (sufficient_std(net, rep)) {
        c.verdict = Verdict::DiffCorrect;
        c.derivative_claim = rep.jacobian;
        c.certificate = Certificate::SuffStd;
        return c;
    }
    if (sufficient_clarke(net, rep)) {
        Classification o = by_oracle(net, w, rep.trace, budget, c);
        // Clarke membership is already certified; the oracle only says which case holds.
        if (o.verdict == Verdict::DiffCorrect || o.verdict == Verdict::NonDiffClarke) o.certificate = Certificate::SuffClarke;
        return o;
    }
    return by_oracle(net, w, rep.trace, budget, c);
}

} // namespace adcert
