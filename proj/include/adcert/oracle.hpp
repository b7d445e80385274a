#pragma once

#include "adcert/ad.hpp"
#include "adcert/matrix.hpp"
#include "adcert/network.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adcert {

struct OracleBudget {
    std::size_t directions = 8;        // random probe directions
    std::uint64_t seed = 0;
    std::size_t closure_cap = 4;       // Step 1 is skipped above this many closure assignments
    std::size_t cell_cap = 1u << 16;   // first-order cells before giving up
    bool record_evidence = true;
};

// The smooth selection that owns (w, w + t* d) and the exact one-sided slope there.
struct RayGerm {
    std::vector<Rational> direction;
    PieceAssignment gamma;
    std::vector<Rational> slope;  // d/dt z_L(w + t d) at 0+, length N_L
    Rational t_star;              // (w, w + t* d) lies in R^gamma
};

RayGerm ray_germ(const Network& net, const std::vector<Rational>& w, const std::vector<Rational>& d);

// A first-order cell: directions d with sign(a . d) fixed for every neuron
// sitting on a breakpoint with non-zero first-order variation a.
struct Cell {
    PieceAssignment gamma;
    std::vector<Rational> direction;  // an interior direction
    Matrix gradient;                  // D z_L^gamma(w), the derivative seen from inside the cell
};

struct CellEnumeration {
    bool complete = false;  // false when the cap was hit
    std::vector<Cell> cells;
};

CellEnumeration enumerate_cells(const Network& net, const std::vector<Rational>& w, std::size_t cap);
CellEnumeration enumerate_cells(const Network& net, const std::vector<Rational>& w, const ForwardTrace& trace,
                                std::size_t cap);

enum class OracleStatus { Differentiable, NonDifferentiable, Inconclusive };
std::string_view to_string(OracleStatus s);

struct OracleWitness {
    enum class Kind {
        Opposed,       // slope(d) != -slope(-d)
        Nonlinear,     // slope(d) != sum_j d_j slope(e_j)
        CellMismatch,  // two open cones of directions with different derivatives
    };
    Kind kind = Kind::Opposed;
    std::vector<Rational> d;
    std::vector<Rational> plus;   // slope along d
    std::vector<Rational> minus;  // Opposed: slope along -d; Nonlinear: linear prediction
    std::vector<Rational> d2;     // CellMismatch: second direction
    Matrix grad1, grad2;          // CellMismatch: the two cell derivatives
    std::string str() const;
};

struct OracleEvidence {
    std::string kind;  // "assignment", "direction" or "cell"
    std::string detail;
};

struct OracleVerdict {
    OracleStatus status = OracleStatus::Inconclusive;
    Matrix gradient;
    std::optional<OracleWitness> witness;
    std::vector<OracleEvidence> evidence;
    int step = 0;  // 1 closure agreement, 2 direction probes, 3 cell enumeration
    std::uint64_t seed = 0;
    std::optional<CellEnumeration> cells;  // when step 3 ran
};

OracleVerdict oracle_differentiability(const Network& net, const std::vector<Rational>& w,
                                       const OracleBudget& budget = {});
// Same, reusing a forward trace of w.
OracleVerdict oracle_differentiability(const Network& net, const std::vector<Rational>& w, const ForwardTrace& trace,
                                       const OracleBudget& budget = {});

// True iff g is the derivative of a smooth selection whose region has
// non-empty interior arbitrarily close to w, i.e. a limit of nearby gradients.
bool oracle_clarke_limit(const Network& net, const std::vector<Rational>& w, const Matrix& g,
                         const OracleBudget& budget = {});
// Membership in an enumeration already computed at w.
bool clarke_limit_in(const CellEnumeration& cells, const Matrix& g);

// Central differences of z_L in double precision, N_L x W.
std::vector<std::vector<double>> fd_grad(const Network& net, const std::vector<Rational>& w, double step);

// Strict homogeneous system {a_k . d > 0}: an exact solution or nothing.
std::optional<std::vector<Rational>> strict_cone_point(const std::vector<std::vector<Rational>>& rows, std::size_t dim);

} // namespace adcert
