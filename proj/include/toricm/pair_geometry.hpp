#pragma once

#include <string>
#include <vector>

#include "toricm/multiplicity.hpp"

namespace toricm {

struct ToricPair {
    Fan fan;
    MultiplicitySet mset;
    std::vector<IntVec> gamma;    // coordinates of Div_T(X,M)
    std::vector<IntVec> minimal;  // minimal nonzero reduced elements
};

// Validates the fan and computes gamma and the minimal elements.
ToricPair make_pair(const Fan& f, const MultiplicitySet& M);
// The pair whose multiplicity set is {0} together with `members`.
ToricPair subpair(const ToricPair& p, const std::vector<IntVec>& members);

struct PairDivisorQ {
    RatVec coeffs;  // one per element of gamma
};

PairDivisorQ pullback(const ToricPair& p, const TorusDivisorQ& D);
PairDivisorQ anticanonical(const ToricPair& p);

struct PairPicard {
    std::size_t rank = 0;
    std::vector<Int> invariant_factors;  // the factors > 1
    IntMatrix presentation;              // d x |gamma|: column m is phi(m)
    IntMatrix projection;                // rank x |gamma|: onto the free quotient
    IntMatrix torsion_projection;        // one row per invariant factor, read modulo it
    bool pullback_injective = false;     // N_M has finite index in N

    Int torsion_order() const;
    RatVec project(const RatVec& coeffs) const;
    // Image in the torsion part (entries reduced modulo the invariant factors); needs integers.
    IntVec torsion_image(const IntVec& coeffs) const;
};

PairPicard picard_from_gamma(const Fan& f, const std::vector<IntVec>& gamma);
PairPicard pair_picard(const ToricPair& p);

// The program: minimize sum alpha_j subject to l_m(alpha) >= 1 over the given elements,
// alpha >= 0.
LPProblem fujita_program(const std::vector<IntVec>& elements, const HeightSystem& h);
Rat fujita_value(const std::vector<IntVec>& elements, const HeightSystem& h);

struct ClosureResult {
    ToricPair pair;            // the enlarged pair (unchanged when already proper)
    std::vector<std::size_t> adjoined_axes;
    long multiple = 0;         // the d used for every adjoined axis
    std::vector<std::string> log;
};

// Adjoins d e_i for axes lacking a multiple, doubling d until the Fujita invariant of the
// enlarged pair equals the pair's own. Raises NotQuasiProper otherwise.
ClosureResult quasi_proper_closure(const ToricPair& p, const HeightSystem& h);

}  // namespace toricm
