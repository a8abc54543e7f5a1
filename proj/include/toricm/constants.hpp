#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "toricm/invariants.hpp"

namespace toricm {

using Real = long double;

struct LocalDensity {
    long p = 0;
    Real value = 0;       // (1 - 1/p)^g * truncated sum
    Real tail_bound = 0;  // rigorous bound on |value - true value| from the truncation
    std::optional<Real> closed_form;
    int truncation = 0;   // coordinate-sum cutoff T of the truncated sum
    bool divides_S = false;
};

// Sum over the reduced set (or over N^n_red when p | S) of p^{-a_m}, times (1 - 1/p)^g with
// g = gamma_circle_size. `truncation` < 0 picks T so that the tail is below 1e-18.
LocalDensity local_density(long p, const ToricPair& pair, const RatVec& a_coeffs,
                           std::size_t gamma_circle_size, long S, int truncation = -1);

struct EulerProductResult {
    Real value = 0;         // point estimate including an asymptotic tail correction
    Real truncated = 0;     // product over p <= P
    Real lo = 0, hi = 0;    // rigorous interval for the infinite product
    Real log_tail_bound = 0;
    Rat c;                  // convergence exponent
    long prime_limit = 0;
    std::size_t prime_count = 0;
    std::vector<LocalDensity> first_primes;  // display sample
};

// The convergence exponent min(2, min a_m over M_red minus M°). Raises DivergentProduct if <= 1.
Rat convergence_exponent(const ToricPair& pair, const RatVec& a_coeffs,
                         const std::vector<IntVec>& gamma_circle);

EulerProductResult euler_product(const ToricPair& pair, const RatVec& a_coeffs,
                                 const std::vector<IntVec>& gamma_circle, long S, long prime_limit,
                                 std::size_t display_primes = 10, unsigned threads = 1);

Rat c_inf_adjoint_rigid(const Fan& f, const RatVec& a_coeffs);

struct ConeData {
    Cone rays;                      // indices into the refined fan
    std::vector<IntVec> elements;   // the m of each ray, in ray order
    Int index_snf;                  // I(sigma) as a quotient order
    Int index_det;                  // |det(phi(m), m in sigma)|
    Rat torsion_ratio;
    std::size_t z_dim = 0;
    Rat z_volume_factorial;         // Volume(Z_sigma) * dim(Z_sigma)!
    Rat contribution;               // I(sigma) * C_inf(sigma)
    std::size_t parent_cone = 0;    // maximal cone of the original fan containing sigma
};

struct CInfGeneral {
    Rat value;
    Fan refined;
    std::vector<IntVec> gamma_bar;  // Gamma° plus the adjoined axis multiples
    std::vector<ConeData> cones;
    std::vector<std::string> diagnostics;
};

// rep_coeffs: the representative of a*L with pullback coefficient 1 on Gamma°.
// `sort_rays` selects the refinement insertion order.
CInfGeneral c_inf_general(const ToricPair& pair, const InvariantReport& inv, bool sort_rays = true);

enum class CInfBranch { AdjointRigidFormula, GeneralFormula };
std::string to_string(CInfBranch b);

struct ConstantReport {
    InvariantReport inv;
    CInfBranch branch = CInfBranch::GeneralFormula;
    Rat c_inf;
    std::optional<Rat> c_inf_adjoint;
    std::optional<CInfGeneral> general;
    Rat prefactor;                  // alpha / (a (b-1)!)
    EulerProductResult euler;
    Real leading_C = 0, leading_lo = 0, leading_hi = 0;
    std::vector<std::string> diagnostics;
};

// Raises NotRigid, NotQuasiProper, NonPositiveAlpha, PreconditionViolated (S != 1 without
// adjoint rigidity), DivergentAlpha, DivergentProduct.
ConstantReport leading_constant(const ToricPair& pair, const HeightSystem& h, long S,
                                long prime_limit = 1000000, unsigned threads = 1);

// F_p(s) = sum over the reduced set of p^{-l_m(s)}; raises OutsideRegion unless Re l^(i)(s) > 0.
struct ComplexValue {
    std::complex<Real> value;
    Real tail_bound = 0;
};
ComplexValue local_factor_F(const ToricPair& pair, const HeightSystem& h,
                            const std::vector<std::complex<Real>>& s, long p, int truncation = -1);
bool convergence_region_check(const ToricPair& pair, const HeightSystem& h,
                              const std::vector<std::complex<Real>>& s);

struct VolumeEstimate {
    Real value = 0;
    Real std_error = 0;
    std::size_t samples = 0;
};
// Monte-Carlo volume of D(B) in logarithmic coordinates over Gamma°.
VolumeEstimate volume_DB_estimate(const HeightSystem& h, const std::vector<IntVec>& gamma_circle,
                                  Real B, std::size_t samples, unsigned long long seed = 20240611ULL);

std::vector<long> primes_up_to(long n);

}  // namespace toricm
