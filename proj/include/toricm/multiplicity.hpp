#pragma once

#include <string>
#include <vector>

#include "toricm/toric_core.hpp"

namespace toricm {

enum class MultKind { Full, Campana, WeakCampana, Darmon, Integral, Custom, Finite };

std::string to_string(MultKind k);

// A subset of N^n containing 0. Finite is an internal kind ({0} plus a listed set) used for
// subpairs; `adjoined` holds axis multiples added by the quasi-proper closure (set union).
struct MultiplicitySet {
    MultKind kind = MultKind::Full;
    std::size_t n = 0;
    std::vector<long> weights;          // Campana thresholds (0 = infinity) or Darmon moduli
    long weight = 0;                    // WeakCampana total weight
    std::vector<std::size_t> indices;   // WeakCampana support, or Integral forced coordinates
    std::vector<IntVec> elements;       // Custom generators or Finite members
    std::vector<IntVec> adjoined;

    static MultiplicitySet full(std::size_t n);
    static MultiplicitySet campana(std::vector<long> weights);
    static MultiplicitySet weak_campana(std::size_t n, long m, std::vector<std::size_t> support = {});
    static MultiplicitySet darmon(std::vector<long> moduli);
    static MultiplicitySet integral(std::size_t n, std::vector<std::size_t> forced);
    static MultiplicitySet custom(std::size_t n, std::vector<IntVec> gens);
    static MultiplicitySet finite(std::size_t n, std::vector<IntVec> members);

    // Raises ConfigError on inconsistent parameters.
    void check() const;
};

bool contains(const MultiplicitySet& M, const IntVec& m);
bool reduced_contains(const Fan& f, const MultiplicitySet& M, const IntVec& m);
// Componentwise-minimal nonzero elements of the reduced set.
std::vector<IntVec> minimal_reduced_elements(const Fan& f, const MultiplicitySet& M);
// Irreducible elements of the reduced set: those that are not a sum of two nonzero reduced
// elements. This is the unique inclusion-minimal generating set.
std::vector<IntVec> generators(const Fan& f, const MultiplicitySet& M);
// Vectors whose span equals the rational span of M.
std::vector<IntVec> spanning_set(const MultiplicitySet& M);
bool has_axis_multiple(const MultiplicitySet& M, std::size_t i);

}  // namespace toricm
