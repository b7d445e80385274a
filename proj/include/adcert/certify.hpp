#pragma once

#include "adcert/ad.hpp"
#include "adcert/oracle.hpp"

#include <optional>
#include <string>

namespace adcert {

enum class Verdict { DiffCorrect, DiffIncorrect, NonDiffClarke, NonDiffNotClarke, Unknown };
enum class Certificate { ThmBiasEquivalence, ThmBiasClarke, SuffStd, SuffClarke, Oracle, None };

std::string_view to_string(Verdict v);
std::string_view to_string(Certificate c);
bool is_nondiff(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Unknown;
    // DiffCorrect: the AD output, which is the derivative. DiffIncorrect: the true derivative.
    std::optional<Matrix> derivative_claim;
    Certificate certificate = Certificate::None;
    std::string witness;
    Matrix ad;  // what AD returned
};

struct BiasDecision {
    bool differentiable = false;
    Matrix gradient;                 // when differentiable
    std::optional<NeuronId> witness;  // y in ndf with a non-zero output partial
};

BiasDecision decide_bias(const Network& net, const std::vector<Rational>& w);
BiasDecision decide_bias(const Network& net, const ADReport& rep);

std::optional<Certificate> sufficient_std(const Network& net, const std::vector<Rational>& w);
std::optional<Certificate> sufficient_std(const Network& net, const ADReport& rep);
std::optional<Certificate> sufficient_clarke(const Network& net, const std::vector<Rational>& w);
std::optional<Certificate> sufficient_clarke(const Network& net, const ADReport& rep);

Classification classify(const Network& net, const std::vector<Rational>& w, const OracleBudget& budget = {});

} // namespace adcert
