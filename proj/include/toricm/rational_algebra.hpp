#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "toricm/errors.hpp"

namespace toricm {

using Rat = mpq_class;
using Int = mpz_class;
using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) fail("MalformedMatrix", "ragged row");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }
    std::vector<T> col(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) fail("MalformedMatrix", "dimension mismatch in product");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                if ((*this)(i, k) == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
            }
        return r;
    }

    std::vector<T> operator*(const std::vector<T>& v) const {
        if (cols_ != v.size()) fail("MalformedMatrix", "dimension mismatch in matrix-vector product");
        std::vector<T> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RatMatrix = Matrix<Rat>;
using IntMatrix = Matrix<Int>;

RatMatrix to_rat(const IntMatrix& m);
RatVec to_rat(const IntVec& v);
// Requires integral entries.
IntMatrix to_int(const RatMatrix& m);

Rat dot(const RatVec& a, const RatVec& b);
Int dot(const IntVec& a, const IntVec& b);

// Reduced row echelon form; pivot columns returned through `pivots`.
RatMatrix rref(RatMatrix m, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const RatMatrix& m);
std::size_t rank_of(const std::vector<RatVec>& vectors, std::size_t dim);
Rat det(const RatMatrix& m);
std::optional<RatMatrix> inverse(const RatMatrix& m);
// Basis of {x : m x = 0}.
std::vector<RatVec> nullspace(const RatMatrix& m);
// Some solution of m x = b, if one exists.
std::optional<RatVec> solve(const RatMatrix& m, const RatVec& b);
bool in_span(const std::vector<RatVec>& span, const RatVec& v);

// Scales a nonzero rational vector to the primitive integer vector on the same ray.
IntVec primitive(const RatVec& v);
IntVec primitive(const IntVec& v);
bool is_zero(const RatVec& v);

// num/den in lowest terms; the two-argument mpq constructor does not reduce.
inline Rat ratio(const Int& num, const Int& den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rat& q);
Rat parse_rat(const std::string& s);

// left * A * right = diag(invariant_factors), padded with zeros.
struct SmithDecomposition {
    std::vector<Int> invariant_factors;  // length min(rows, cols); d_i | d_{i+1}
    IntMatrix left;
    IntMatrix right;
    std::size_t rank() const;
    // Product of the nonzero factors; the order of the torsion part of coker A.
    Int torsion_order() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& a);

enum class LPStatus { Optimal, Infeasible, Unbounded };

// minimize objective . x  subject to  A x >= b, x_j >= 0 where nonneg[j].
struct LPProblem {
    RatVec objective;
    RatMatrix A;
    RatVec b;
    std::vector<bool> nonneg;
};

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    Rat value;
    RatVec x;
    // y >= 0 with b.y = value and (A^T y)_j <= c_j (= c_j for free variables).
    RatVec dual;
};

// Exact simplex with Bland's rule. Among optimal points returns the lexicographically
// smallest one (over the nonnegative variables).
LPSolution lp_optimize(const LPProblem& p);
// Single simplex solve without the lexicographic tie-break.
LPSolution lp_solve_raw(const LPProblem& p);
// Maximum of g over the optimal face of p.
Rat lp_max_over_optimal_face(const LPProblem& p, const RatVec& g);
// The problem restricted to its optimal face (objective pinned by two inequalities).
LPProblem lp_optimal_face(const LPProblem& p, const Rat& optimum);
bool lp_check_certificate(const LPProblem& p, const LPSolution& s);

// Polyhedral cone given by generators; facet normals optional.
struct RatCone {
    std::size_t ambient_dim = 0;
    std::vector<IntVec> generators;
    std::vector<IntVec> lineality;  // basis of the lineality space (dual cones only)
    std::optional<std::vector<IntVec>> facet_normals;

    bool pointed() const { return lineality.empty(); }
};

RatCone make_cone(std::size_t dim, const std::vector<IntVec>& gens);

// Extreme rays and lineality basis of {x : <g,x> >= 0 for all generators g}.
RatCone dual_cone(const RatCone& c);
// As dual_cone, but raises DualNotPointed when the dual contains a line.
RatCone dual_cone_pointed(const RatCone& c);
// Extreme rays of a cone (generators with redundant ones removed).
std::vector<IntVec> extreme_rays(const RatCone& c);
// Placing triangulation; rays are inserted in `order` (indices into the extreme rays),
// default lexicographic.
std::vector<RatCone> triangulate_cone(const RatCone& c,
                                      const std::vector<std::size_t>& order = {});
Rat exp_integral_simplicial(const std::vector<IntVec>& v, const RatVec& ell);
// Sum of exp_integral_simplicial over a triangulation of a pointed cone.
Rat exp_integral_cone(const RatCone& c, const RatVec& ell,
                      const std::vector<std::size_t>& order = {});

}  // namespace toricm
