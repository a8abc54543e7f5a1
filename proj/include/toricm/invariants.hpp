#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toricm/pair_geometry.hpp"

namespace toricm {

enum class Rigidity { AdjointRigid, ToricAdjointRigidOnly, NotRigid };
std::string to_string(Rigidity r);

struct FujitaResult {
    Rat a;
    RatVec alpha_vec;               // relative-interior optimal point
    std::vector<RatVec> vertices;   // optimal vertices used to build it
    bool strictly_positive = false;
};

struct InvariantReport {
    Rat a;
    RatVec alpha_vec;
    bool alpha_strictly_positive = false;
    TorusDivisorQ rep_divisor;      // sum_j alpha_j L(sigma_j), a representative of a*L
    std::vector<IntVec> gamma_circle;
    std::size_t b = 0;
    Rigidity rigidity = Rigidity::NotRigid;
    std::optional<Rat> alpha_const;
    PairPicard pic_circle;
    bool quasi_proper = false;
    long closure_multiple = 0;
    std::vector<std::size_t> closure_axes;
    std::string rigidity_reason;    // names the failed span test when not adjoint rigid
    std::vector<std::string> diagnostics;
};

// Optimum of the Fujita program over the minimal reduced elements, with a relative-interior
// optimal point. Raises NonPositiveAlpha when no strictly positive optimum exists.
FujitaResult fujita_a(const ToricPair& p, const HeightSystem& h);
// Same, without the positivity requirement.
FujitaResult fujita_solve(const std::vector<IntVec>& elements, const HeightSystem& h);

std::vector<IntVec> m_circle(const ToricPair& p, const HeightSystem& h, const Rat& a);
// Both rank computations are performed; raises InternalError if they disagree.
std::size_t b_invariant(const ToricPair& p, const std::vector<IntVec>& gamma_circle);

struct RigidityResult {
    Rigidity rigidity = Rigidity::NotRigid;
    std::string reason;
};
RigidityResult rigidity_classify(const ToricPair& p, const HeightSystem& h,
                                 const std::vector<IntVec>& gamma_circle,
                                 const std::vector<RatVec>& optimal_vertices = {});

// Exponential integral over the dual of the effective cone of the subpair, divided by the
// torsion order. `order` selects the triangulation insertion order.
Rat alpha_constant(const ToricPair& p_circle, const HeightSystem& h,
                   const std::vector<std::size_t>& order = {});

// Full report. Quasi-properness failures are recorded, not thrown.
InvariantReport compute_invariants(const ToricPair& p, const HeightSystem& h);

}  // namespace toricm
