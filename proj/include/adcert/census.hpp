#pragma once

#include "adcert/certify.hpp"
#include "adcert/fixtures.hpp"
#include "adcert/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adcert {

struct BoundSet {
    std::optional<Rational> bias_ndf;       // (1/|M|) sum |ndf|, bias networks only
    std::optional<Rational> general_union;  // (1/|M|) sum |ndf u (bdz n S_{l+1})|
    std::optional<Rational> inc;            // (1/|M|) sum |(ndf n S_l) u (bdz n S_{l+1})|
};

// Throws NotApplicable when some layer has neither bias parameters nor the biaffine form.
BoundSet bounds(const Network& net, const Grid& grid);

struct CensusOptions {
    OracleBudget budget;
    std::size_t jobs = 1;
    bool log_points = false;
    bool allow_unknown = false;
    bool reduce = true;  // enumerate parameter-symmetry orbits instead of all points
    std::uint64_t cap = 10'000'000;  // on enumerated points
};

struct PointRecord {
    std::vector<Rational> w;
    Classification c;
};

struct CensusReport {
    std::vector<Rational> grid;
    std::size_t W = 0;
    bool has_bias = false;
    bool allow_unknown = false;
    std::uint64_t total = 0;       // |Omega|
    std::uint64_t enumerated = 0;  // classify calls made
    std::uint64_t nd = 0, inc = 0, unknown = 0;
    std::uint64_t by_verdict[5] = {0, 0, 0, 0, 0};
    BoundSet bounds;
    std::optional<LowerBoundClaim> lower;
    std::vector<PointRecord> points;  // with log_points
    std::vector<std::vector<std::size_t>> symmetry_blocks;
    // |M|^k for the k parameters no verdict depends on; densities are printed with it cancelled.
    std::uint64_t inert_factor = 1;

    std::string ratio(std::uint64_t count) const;

    Rational nd_density() const;
    Rational inc_density() const;
    Rational union_density() const;
};

// Sets of parameters that can be permuted freely without changing any verdict,
// and parameters whose value never affects a verdict.
struct Symmetry {
    std::vector<std::vector<std::size_t>> blocks;  // partition of 0..W-1 (inert parameters excluded)
    std::vector<std::size_t> inert;
};
Symmetry find_symmetry(const Network& net);

CensusReport scan(const Network& net, const Grid& grid, const CensusOptions& opts = {});

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};
struct VerifyResult {
    bool pass = true;
    std::vector<Check> checks;
};

// Throws IncompleteReport when Unknown points are present and not allowed.
VerifyResult verify(const CensusReport& report);

std::string count_ratio(std::uint64_t num, std::uint64_t den);
std::string census_csv(const CensusReport& report, const VerifyResult& result, bool decimal);

} // namespace adcert
