#pragma once

#include <string>
#include <vector>

#include "toricm/rational_algebra.hpp"

namespace toricm {

using Cone = std::vector<std::size_t>;  // sorted ray indices

struct Fan {
    std::size_t d = 0;
    std::vector<IntVec> rays;
    std::vector<Cone> cones;  // maximal cones

    std::size_t n() const { return rays.size(); }
    std::size_t k() const { return cones.size(); }
};

struct TorusDivisorQ {
    RatVec coeffs;
};

struct HeightSystem {
    RatMatrix L_mat;  // (i, j) = l^{(i)}(e_j): row per ray, column per maximal cone
    std::vector<RatVec> cartier_points;
    TorusDivisorQ divisor;

    // The linear form l^{(i)} as a vector over the maximal cones.
    RatVec form(std::size_t i) const { return L_mat.row(i); }
    // l_m = sum_i m_i l^{(i)}.
    RatVec form(const IntVec& m) const;
};

// Raises NotSmooth, NotComplete or MalformedCone.
const Fan& validate_fan(const Fan& f);
// Completeness plus simplicial (not necessarily smooth) cones; used for refined fans.
void validate_simplicial_complete(const Fan& f);

RatVec cartier_data(const Fan& f, const TorusDivisorQ& D, std::size_t cone);
HeightSystem height_system(const Fan& f, const TorusDivisorQ& D);
bool is_nef(const HeightSystem& h);
// Raises PreconditionViolated when h is not nef.
bool is_big_given_nef(const HeightSystem& h, std::size_t d);

std::vector<int> cox_monomial_hat(const Fan& f, std::size_t cone);

// Stellar subdivision at each new ray. With sort_rays the rays are inserted in
// lexicographic order, otherwise in the given order.
Fan refine_fan(const Fan& f, const std::vector<IntVec>& new_rays, bool sort_rays = true);

IntVec phi(const IntVec& m, const Fan& f);

// True when the rays indexed by `support` all lie in a common maximal cone.
bool spans_cone(const Fan& f, const std::vector<std::size_t>& support);
// Minimal subsets of rays not contained in any cone.
std::vector<std::vector<std::size_t>> primitive_collections(const Fan& f);
// Index of a maximal cone containing v, if any; `coords` receives v in that cone's ray basis.
std::optional<std::size_t> cone_containing(const Fan& f, const IntVec& v, RatVec* coords = nullptr);

// Standard fans.
Fan projective_space_fan(std::size_t dim);
Fan product_fan(const Fan& a, const Fan& b);
Fan hirzebruch_fan(long d);

}  // namespace toricm
