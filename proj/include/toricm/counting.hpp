#pragma once

#include <string>
#include <vector>

#include "toricm/constants.hpp"

namespace toricm {

enum class CountMethod { CoxEnumeration, ProjectiveOracle };
std::string to_string(CountMethod m);

struct CountReport {
    double B = 0;
    Int N;          // 2^dim * S(B)
    Int positive;   // S(B)
    CountMethod method = CountMethod::CoxEnumeration;
    double elapsed_ms = 0;
};

struct CountOptions {
    double budget = 2e9;  // cap on the pre-pruning tuple estimate
    unsigned threads = 1;
};

// Integral height system: L scaled by the smallest positive rational making every
// l^(i)(e_j) an integer with gcd 1. `scale` receives that factor.
IntMatrix integral_height_matrix(const HeightSystem& h, Rat* scale = nullptr);

// max_j prod_i x_i^{l^(i)(e_j)}; requires an integral height matrix.
Int height_of_tuple(const HeightSystem& h, const std::vector<long>& x);

// Counts for every bound of the schedule in one enumeration at the largest bound.
std::vector<CountReport> count_points(const ToricPair& pair, const HeightSystem& h, long S,
                                      const std::vector<double>& schedule, const CountOptions& opt = {});
CountReport count_points(const ToricPair& pair, const HeightSystem& h, long S, double B,
                         const CountOptions& opt = {});

// Direct enumeration of points of a product of projective spaces (dims lists the factors,
// matching product_fan order). Heights come from the multidegree of L, not the height matrix.
std::vector<CountReport> oracle_count(const ToricPair& pair, const std::vector<std::size_t>& dims,
                                      const TorusDivisorQ& L, long S, const std::vector<double>& schedule,
                                      const CountOptions& opt = {});

struct CompareRow {
    double B = 0;
    Int N;
    Real predicted = 0;
    std::optional<Real> ratio;  // absent when predicted == 0
    CountMethod method = CountMethod::CoxEnumeration;
    double elapsed_ms = 0;
};

// predicted = C B^a (log B)^{b-1}.
Real predicted_count(const ConstantReport& rep, double B);
std::vector<CompareRow> compare_prediction(const ToricPair& pair, const HeightSystem& h, long S,
                                           const ConstantReport& rep, const std::vector<double>& schedule,
                                           const CountOptions& opt = {});

}  // namespace toricm
