#include "toricm/rational_algebra.hpp"

#include <algorithm>
#include <utility>

namespace toricm {

RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

RatVec to_rat(const IntVec& v) {
    RatVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

IntMatrix to_int(const RatMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j).get_den() != 1) fail("NotIntegral", "matrix entry is not an integer");
            r(i, j) = m(i, j).get_num();
        }
    return r;
}

Rat dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) fail("MalformedMatrix", "dot product length mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Int dot(const IntVec& a, const IntVec& b) {
    if (a.size() != b.size()) fail("MalformedMatrix", "dot product length mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

RatMatrix rref(RatMatrix m, std::vector<std::size_t>* pivots) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        Rat inv = 1 / m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    if (pivots) *pivots = piv;
    return m;
}

std::size_t rank(const RatMatrix& m) {
    std::vector<std::size_t> piv;
    rref(m, &piv);
    return piv.size();
}

std::size_t rank_of(const std::vector<RatVec>& vectors, std::size_t dim) {
    if (vectors.empty()) return 0;
    return rank(RatMatrix::from_rows(vectors, dim));
}

Rat det(const RatMatrix& a) {
    if (a.rows() != a.cols()) fail("MalformedMatrix", "determinant of a non-square matrix");
    RatMatrix m = a;
    const std::size_t n = m.rows();
    Rat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rat f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

std::optional<RatMatrix> inverse(const RatMatrix& a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) return std::nullopt;
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<std::size_t> piv;
    aug = rref(aug, &piv);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

std::vector<RatVec> nullspace(const RatMatrix& m) {
    std::vector<std::size_t> piv;
    RatMatrix r = rref(m, &piv);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RatVec> solve(const RatMatrix& m, const RatVec& b) {
    if (b.size() != m.rows()) fail("MalformedMatrix", "right-hand side length mismatch");
    RatMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    std::vector<std::size_t> piv;
    RatMatrix r = rref(aug, &piv);
    if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
    RatVec x(m.cols());
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = r(i, m.cols());
    return x;
}

bool in_span(const std::vector<RatVec>& span, const RatVec& v) {
    if (span.empty()) return is_zero(v);
    const std::size_t base = rank_of(span, v.size());
    std::vector<RatVec> ext = span;
    ext.push_back(v);
    return rank_of(ext, v.size()) == base;
}

bool is_zero(const RatVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& q) { return q == 0; });
}

IntVec primitive(const RatVec& v) {
    Int l = 1;
    for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i] * l).get_num();
    return primitive(r);
}

IntVec primitive(const IntVec& v) {
    Int g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) fail("ZeroVector", "primitive vector of zero");
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
    return r;
}

std::string to_string(const Rat& q) { return q.get_str(); }

Rat parse_rat(const std::string& s) {
    Rat q;
    std::string t;
    for (char c : s)
        if (c != ' ') t += c;
    if (t.empty() || q.set_str(t, 10) != 0) fail("ConfigError", "not a rational number: '" + s + "'");
    if (q.get_den() == 0) fail("ConfigError", "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------------------
// Smith normal form

std::size_t SmithDecomposition::rank() const {
    std::size_t r = 0;
    for (const auto& d : invariant_factors)
        if (d != 0) ++r;
    return r;
}

Int SmithDecomposition::torsion_order() const {
    Int t = 1;
    for (const auto& d : invariant_factors)
        if (d != 0) t *= d;
    return t;
}

SmithDecomposition smith_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    IntMatrix d = a;
    IntMatrix left = IntMatrix::identity(m);
    IntMatrix right = IntMatrix::identity(n);

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < n; ++c) std::swap(d(i, c), d(j, c));
        for (std::size_t c = 0; c < m; ++c) std::swap(left(i, c), left(j, c));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < m; ++r) std::swap(d(r, i), d(r, j));
        for (std::size_t r = 0; r < n; ++r) std::swap(right(r, i), right(r, j));
    };
    // row_i += f * row_j
    auto add_row = [&](std::size_t i, std::size_t j, const Int& f) {
        for (std::size_t c = 0; c < n; ++c) d(i, c) += f * d(j, c);
        for (std::size_t c = 0; c < m; ++c) left(i, c) += f * left(j, c);
    };
    auto add_col = [&](std::size_t i, std::size_t j, const Int& f) {
        for (std::size_t r = 0; r < m; ++r) d(r, i) += f * d(r, j);
        for (std::size_t r = 0; r < n; ++r) right(r, i) += f * right(r, j);
    };

    const std::size_t k = std::min(m, n);
    for (std::size_t t = 0; t < k; ++t) {
        for (;;) {
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (d(i, j) != 0 && (bi == m || abs(d(i, j)) < abs(d(bi, bj)))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m) break;
            if (bi != t) swap_rows(t, bi);
            if (bj != t) swap_cols(t, bj);

            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (d(i, t) == 0) continue;
                Int q = d(i, t) / d(t, t);
                add_row(i, t, -q);
                if (d(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                Int q = d(t, j) / d(t, t);
                add_col(j, t, -q);
                if (d(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        add_row(t, i, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed) break;
        }
        if (d(t, t) < 0) {
            for (std::size_t c = 0; c < n; ++c) d(t, c) = -d(t, c);
            for (std::size_t c = 0; c < m; ++c) left(t, c) = -left(t, c);
        }
    }

    SmithDecomposition s;
    s.invariant_factors.resize(k);
    for (std::size_t t = 0; t < k; ++t) s.invariant_factors[t] = d(t, t);
    s.left = std::move(left);
    s.right = std::move(right);
    return s;
}

// ---------------------------------------------------------------------------
// Simplex

namespace {

struct Tableau {
    std::vector<RatVec> rows;  // each of width ncols + 1, last entry is the right-hand side
    RatVec cost;               // reduced costs, last entry is minus the objective value
    std::vector<std::size_t> basis;
    std::size_t ncols = 0;

    void pivot(std::size_t r, std::size_t c) {
        Rat inv = 1 / rows[r][c];
        for (auto& v : rows[r]) v *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rat f = rows[i][c];
            for (std::size_t j = 0; j <= ncols; ++j) rows[i][j] -= f * rows[r][j];
        }
        if (cost[c] != 0) {
            Rat f = cost[c];
            for (std::size_t j = 0; j <= ncols; ++j) cost[j] -= f * rows[r][j];
        }
        basis[r] = c;
    }

    // Bland's rule; columns with allowed[c] == false never enter.
    bool run(const std::vector<bool>& allowed) {
        for (;;) {
            std::size_t enter = ncols;
            for (std::size_t c = 0; c < ncols; ++c)
                if (allowed[c] && cost[c] < 0) {
                    enter = c;
                    break;
                }
            if (enter == ncols) return true;
            std::size_t leave = rows.size();
            Rat best;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r][enter] <= 0) continue;
                Rat ratio = rows[r][ncols] / rows[r][enter];
                if (leave == rows.size() || ratio < best ||
                    (ratio == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == rows.size()) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LPSolution lp_solve_raw(const LPProblem& p) {
    const std::size_t m = p.A.rows();
    const std::size_t nv = p.objective.size();
    if (p.A.cols() != nv || p.b.size() != m || p.nonneg.size() != nv)
        fail("MalformedLP", "inconsistent LP dimensions");

    // Standard form columns: split free variables, then one surplus per row, then artificials.
    std::vector<std::pair<std::size_t, int>> colmap;  // (original variable, sign)
    for (std::size_t j = 0; j < nv; ++j) {
        colmap.push_back({j, 1});
        if (!p.nonneg[j]) colmap.push_back({j, -1});
    }
    const std::size_t nx = colmap.size();
    const std::size_t nslack = m;
    const std::size_t nart = m;
    const std::size_t ncols = nx + nslack + nart;

    Tableau t;
    t.ncols = ncols;
    t.rows.assign(m, RatVec(ncols + 1));
    t.basis.resize(m);
    std::vector<int> sign(m, 1);
    RatMatrix std_a(m, nx + nslack);
    for (std::size_t i = 0; i < m; ++i) {
        sign[i] = p.b[i] < 0 ? -1 : 1;
        for (std::size_t c = 0; c < nx; ++c) std_a(i, c) = p.A(i, colmap[c].first) * colmap[c].second * sign[i];
        std_a(i, nx + i) = -sign[i];
        for (std::size_t c = 0; c < nx + nslack; ++c) t.rows[i][c] = std_a(i, c);
        t.rows[i][nx + nslack + i] = 1;
        t.rows[i][ncols] = p.b[i] * sign[i];
        t.basis[i] = nx + nslack + i;
    }

    // Phase 1: minimize the sum of artificials.
    t.cost.assign(ncols + 1, Rat(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < nx + nslack; ++c) t.cost[c] -= t.rows[i][c];
    for (std::size_t i = 0; i < m; ++i) t.cost[ncols] -= t.rows[i][ncols];
    std::vector<bool> allowed(ncols, true);
    t.run(allowed);

    LPSolution sol;
    if (t.cost[ncols] != 0) {
        sol.status = LPStatus::Infeasible;
        return sol;
    }
    // Drive artificials out of the basis; drop redundant rows.
    std::vector<bool> keep(m, true);
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < nx + nslack) continue;
        std::size_t c = 0;
        while (c < nx + nslack && t.rows[r][c] == 0) ++c;
        if (c < nx + nslack)
            t.pivot(r, c);
        else
            keep[r] = false;
    }
    {
        std::vector<RatVec> rows;
        std::vector<std::size_t> basis;
        for (std::size_t r = 0; r < m; ++r)
            if (keep[r]) {
                rows.push_back(t.rows[r]);
                basis.push_back(t.basis[r]);
            }
        t.rows = std::move(rows);
        t.basis = std::move(basis);
    }
    for (std::size_t c = nx + nslack; c < ncols; ++c) allowed[c] = false;

    // Phase 2.
    RatVec cstd(ncols, Rat(0));
    for (std::size_t c = 0; c < nx; ++c) cstd[c] = p.objective[colmap[c].first] * colmap[c].second;
    t.cost.assign(ncols + 1, Rat(0));
    for (std::size_t c = 0; c < ncols; ++c) t.cost[c] = cstd[c];
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const Rat& cb = cstd[t.basis[r]];
        if (cb == 0) continue;
        for (std::size_t c = 0; c <= ncols; ++c) t.cost[c] -= cb * t.rows[r][c];
    }
    if (!t.run(allowed)) {
        sol.status = LPStatus::Unbounded;
        return sol;
    }

    RatVec xs(ncols, Rat(0));
    for (std::size_t r = 0; r < t.rows.size(); ++r) xs[t.basis[r]] = t.rows[r][ncols];
    sol.status = LPStatus::Optimal;
    sol.x.assign(nv, Rat(0));
    for (std::size_t c = 0; c < nx; ++c) sol.x[colmap[c].first] += xs[c] * colmap[c].second;
    sol.value = dot(p.objective, sol.x);

    // Dual from the final basis: B^T y' = c_B on the kept rows.
    std::vector<std::size_t> kept_rows;
    for (std::size_t r = 0; r < m; ++r)
        if (keep[r]) kept_rows.push_back(r);
    const std::size_t k = kept_rows.size();
    RatMatrix bt(k, k);
    RatVec cb(k);
    for (std::size_t r = 0; r < k; ++r) {
        cb[r] = cstd[t.basis[r]];
        for (std::size_t i = 0; i < k; ++i) bt(r, i) = std_a(kept_rows[i], t.basis[r]);
    }
    sol.dual.assign(m, Rat(0));
    if (k > 0) {
        auto y = solve(bt, cb);
        if (!y) fail("InternalError", "singular simplex basis");
        for (std::size_t i = 0; i < k; ++i) sol.dual[kept_rows[i]] = (*y)[i] * sign[kept_rows[i]];
    }
    return sol;
}

LPProblem lp_optimal_face(const LPProblem& p, const Rat& optimum) {
    LPProblem q = p;
    const std::size_t m = p.A.rows(), n = p.objective.size();
    q.A = RatMatrix(m + 2, n);
    q.b = p.b;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) q.A(i, j) = p.A(i, j);
    for (std::size_t j = 0; j < n; ++j) {
        q.A(m, j) = p.objective[j];
        q.A(m + 1, j) = -p.objective[j];
    }
    q.b.push_back(optimum);
    q.b.push_back(-optimum);
    return q;
}

LPSolution lp_optimize(const LPProblem& p) {
    LPSolution first = lp_solve_raw(p);
    if (first.status != LPStatus::Optimal) return first;
    LPProblem face = lp_optimal_face(p, first.value);
    RatVec x = first.x;
    const std::size_t n = p.objective.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (!p.nonneg[k]) continue;
        LPProblem q = face;
        q.objective.assign(n, Rat(0));
        q.objective[k] = 1;
        LPSolution s = lp_solve_raw(q);
        if (s.status != LPStatus::Optimal) fail("InternalError", "lexicographic refinement failed");
        x = s.x;
        // Pin x_k at its minimum.
        RatVec row(n, Rat(0));
        row[k] = 1;
        RatMatrix a(face.A.rows() + 2, n);
        for (std::size_t i = 0; i < face.A.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = face.A(i, j);
        a(face.A.rows(), k) = 1;
        a(face.A.rows() + 1, k) = -1;
        face.A = std::move(a);
        face.b.push_back(s.value);
        face.b.push_back(-s.value);
    }
    first.x = x;
    return first;
}

Rat lp_max_over_optimal_face(const LPProblem& p, const RatVec& g) {
    LPSolution s = lp_solve_raw(p);
    if (s.status == LPStatus::Infeasible) fail("Infeasible", "LP is infeasible");
    if (s.status == LPStatus::Unbounded) fail("Unbounded", "LP is unbounded");
    LPProblem q = lp_optimal_face(p, s.value);
    q.objective.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) q.objective[j] = -g[j];
    LPSolution t = lp_solve_raw(q);
    if (t.status == LPStatus::Unbounded) fail("Unbounded", "objective unbounded on the optimal face");
    if (t.status != LPStatus::Optimal) fail("InternalError", "optimal face is empty");
    return -t.value;
}

bool lp_check_certificate(const LPProblem& p, const LPSolution& s) {
    if (s.status != LPStatus::Optimal) return false;
    const std::size_t m = p.A.rows(), n = p.objective.size();
    RatVec ax = p.A * s.x;
    for (std::size_t i = 0; i < m; ++i) {
        if (ax[i] < p.b[i]) return false;
        if (s.dual[i] < 0) return false;
        if (s.dual[i] * (ax[i] - p.b[i]) != 0) return false;
    }
    RatVec aty = p.A.transpose() * s.dual;
    for (std::size_t j = 0; j < n; ++j) {
        if (p.nonneg[j]) {
            if (s.x[j] < 0 || aty[j] > p.objective[j]) return false;
            if (s.x[j] * (p.objective[j] - aty[j]) != 0) return false;
        } else if (aty[j] != p.objective[j]) {
            return false;
        }
    }
    return dot(p.b, s.dual) == s.value && dot(p.objective, s.x) == s.value;
}

}  // namespace toricm
