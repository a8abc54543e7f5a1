#include <algorithm>
#include <random>

#include "doctest.h"
#include "toricm/rational_algebra.hpp"

using namespace toricm;

namespace {

IntMatrix imat(const std::vector<std::vector<long>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

IntVec iv(std::initializer_list<long> v) {
    IntVec out;
    for (long x : v) out.push_back(Int(x));
    return out;
}

void check_snf(const IntMatrix& A) {
    SmithDecomposition s = smith_normal_form(A);
    IntMatrix D = s.left * A * s.right;
    for (std::size_t i = 0; i < D.rows(); ++i)
        for (std::size_t j = 0; j < D.cols(); ++j) {
            if (i == j && i < s.invariant_factors.size()) CHECK(D(i, j) == s.invariant_factors[i]);
            else CHECK(D(i, j) == 0);
        }
    for (std::size_t i = 0; i + 1 < s.invariant_factors.size(); ++i) {
        const Int& a = s.invariant_factors[i];
        const Int& b = s.invariant_factors[i + 1];
        if (a == 0) CHECK(b == 0);
        else CHECK(b % a == 0);
        CHECK(a >= 0);
    }
    CHECK(abs(det(to_rat(s.left))) == 1);
    CHECK(abs(det(to_rat(s.right))) == 1);
}

}  // namespace

TEST_CASE("smith normal form examples") {
    SmithDecomposition id = smith_normal_form(IntMatrix::identity(3));
    CHECK(id.invariant_factors == std::vector<Int>{1, 1, 1});
    SmithDecomposition d23 = smith_normal_form(imat({{2, 0}, {0, 3}}));
    CHECK(d23.invariant_factors == std::vector<Int>{1, 6});
    // Rows phi(m) for the six weak-Campana generators on the projective plane.
    IntMatrix P = imat({{2, 0}, {0, 2}, {-2, -2}, {1, 1}, {0, -1}, {-1, 0}});
    SmithDecomposition s = smith_normal_form(P);
    CHECK(s.rank() == 2);
    CHECK(s.torsion_order() == 1);
    CHECK(P.rows() - s.rank() == 4);
    check_snf(P);
}

TEST_CASE("smith normal form on random matrices") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dim(1, 8), entry(-6, 6);
    for (int t = 0; t < 200; ++t) {
        IntMatrix A(dim(rng), dim(rng));
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = entry(rng);
        check_snf(A);
        if (A.rows() == A.cols()) {
            SmithDecomposition s = smith_normal_form(A);
            Int prod = 1;
            for (const auto& d : s.invariant_factors) prod *= d;
            CHECK(Rat(prod) == abs(det(to_rat(A))));
        }
    }
}

TEST_CASE("rank, determinant, inverse") {
    RatMatrix m = to_rat(imat({{1, 2}, {3, 4}}));
    CHECK(det(m) == -2);
    auto inv = inverse(m);
    REQUIRE(inv);
    CHECK((*inv * m) == RatMatrix::identity(2));
    CHECK(rank(to_rat(imat({{1, 2}, {2, 4}}))) == 1);
    CHECK(!inverse(to_rat(imat({{1, 2}, {2, 4}}))));
    CHECK(in_span({RatVec{1, 0, 1}, RatVec{0, 1, 1}}, RatVec{2, 3, 5}));
    CHECK(!in_span({RatVec{1, 0, 1}}, RatVec{0, 1, 0}));
}

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rat("6/4") == Rat(3, 2));
    CHECK(to_string(Rat(3, 2)) == "3/2");
    CHECK(to_string(Rat(2)) == "2");
    CHECK_THROWS_AS(parse_rat("x"), Error);
    CHECK(primitive(iv({2, 4, -6})) == iv({1, 2, -3}));
}

TEST_CASE("linear programs") {
    SUBCASE("minimize x subject to x >= 1") {
        LPProblem p{{Rat(1)}, to_rat(imat({{1}})), {Rat(1)}, {false}};
        LPSolution s = lp_optimize(p);
        CHECK(s.status == LPStatus::Optimal);
        CHECK(s.value == 1);
        CHECK(lp_check_certificate(p, s));
    }
    SUBCASE("weak Campana program on the projective plane") {
        // Constraints 2 alpha_a >= 1 and alpha_a + alpha_b >= 1 over the three cone variables.
        LPProblem p;
        p.objective = {1, 1, 1};
        p.nonneg = {true, true, true};
        p.A = to_rat(imat({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}}));
        p.b.assign(6, Rat(1));
        LPSolution s = lp_optimize(p);
        CHECK(s.value == Rat(3, 2));
        CHECK(lp_check_certificate(p, s));
    }
    SUBCASE("infeasible and unbounded") {
        LPProblem inf{{Rat(1)}, to_rat(imat({{1}, {-1}})), {Rat(1), Rat(0)}, {false}};
        CHECK(lp_optimize(inf).status == LPStatus::Infeasible);
        LPProblem unb{{Rat(-1)}, to_rat(imat({{1}})), {Rat(0)}, {true}};
        CHECK(lp_optimize(unb).status == LPStatus::Unbounded);
    }
    SUBCASE("maximum over the optimal face") {
        LPProblem p{{1, 1}, to_rat(imat({{1, 1}})), {Rat(1)}, {true, true}};
        CHECK(lp_max_over_optimal_face(p, {1, 0}) == 1);
        CHECK(lp_max_over_optimal_face(p, {0, 0}) == 0);
        // Campana(2,2) program on P^1: rows 2 alpha_j >= 1 and the generator (3,0) gives 3/2.
        LPProblem c{{1, 1}, to_rat(imat({{2, 0}, {0, 2}})), {1, 1}, {true, true}};
        CHECK(lp_max_over_optimal_face(c, {3, 0}) == Rat(3, 2));
    }
    SUBCASE("random programs carry exact dual certificates") {
        std::mt19937 rng(11);
        std::uniform_int_distribution<int> e(0, 5);
        for (int t = 0; t < 100; ++t) {
            LPProblem p;
            const std::size_t m = 2 + t % 4, k = 2 + t % 3;
            p.objective.resize(k);
            for (auto& c : p.objective) c = 1 + e(rng);
            p.nonneg.assign(k, true);
            p.A = RatMatrix(m, k);
            p.b.resize(m);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < k; ++j) p.A(i, j) = e(rng);
                p.b[i] = e(rng);
            }
            LPSolution s = lp_optimize(p);
            if (s.status != LPStatus::Optimal) continue;
            CHECK(lp_check_certificate(p, s));
            CHECK(dot(p.objective, s.x) == s.value);
            RatVec ax = p.A * s.x;
            for (std::size_t i = 0; i < m; ++i) CHECK(ax[i] >= p.b[i]);
        }
    }
}

TEST_CASE("dual cones") {
    RatCone orth = make_cone(3, {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})});
    RatCone d = dual_cone(orth);
    CHECK(d.pointed());
    std::vector<IntVec> rays = d.generators;
    std::sort(rays.begin(), rays.end());
    CHECK(rays == std::vector<IntVec>{iv({0, 0, 1}), iv({0, 1, 0}), iv({1, 0, 0})});

    // The half-plane dual of a single ray contains a line.
    RatCone half = dual_cone(make_cone(2, {iv({1, 0})}));
    CHECK(!half.pointed());
    CHECK(half.lineality.size() == 1);
    const IntVec line = primitive(half.lineality[0]);
    CHECK((line == iv({0, 1}) || line == iv({0, -1})));
    CHECK(half.generators == std::vector<IntVec>{iv({1, 0})});
    CHECK_THROWS_AS(dual_cone_pointed(make_cone(2, {iv({1, 0})})), Error);

    RatCone c = make_cone(2, {iv({1, 0}), iv({1, 2})});
    std::vector<IntVec> dr = dual_cone(c).generators;
    std::sort(dr.begin(), dr.end());
    CHECK(dr == std::vector<IntVec>{iv({0, 1}), iv({2, -1})});
}

TEST_CASE("dual cone is an involution on pointed full-dimensional cones") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> e(0, 4);
    int tested = 0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t dim = 3 + t % 2;
        std::vector<IntVec> gens;
        for (int g = 0; g < 5; ++g) {
            IntVec v(dim);
            for (auto& x : v) x = e(rng);
            v[0] += 1;
            gens.push_back(v);
        }
        std::vector<RatVec> rv;
        for (auto& g : gens) rv.push_back(to_rat(g));
        if (rank_of(rv, dim) < dim) continue;
        RatCone c = make_cone(dim, gens);
        std::vector<IntVec> a = extreme_rays(c);
        std::vector<IntVec> b = dual_cone(dual_cone(c)).generators;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
        ++tested;
    }
    CHECK(tested >= 20);
}

TEST_CASE("triangulations and exponential integrals") {
    CHECK(triangulate_cone(make_cone(2, {iv({1, 0}), iv({0, 1})})).size() == 1);
    // (1,1) is not extreme, so one simplicial cone remains.
    CHECK(triangulate_cone(make_cone(2, {iv({1, 0}), iv({1, 1}), iv({0, 1})})).size() == 1);
    CHECK(triangulate_cone(make_cone(3, {iv({1, 0, 1}), iv({0, 1, 1}), iv({-1, 0, 1}), iv({0, -1, 1})})).size() == 2);
    CHECK_THROWS_AS(triangulate_cone(dual_cone(make_cone(2, {iv({1, 0})}))), Error);

    CHECK(exp_integral_simplicial({iv({1, 0}), iv({0, 1})}, {1, 1}) == 1);
    CHECK(exp_integral_simplicial({iv({2})}, {3}) == Rat(1, 3));
    CHECK(exp_integral_simplicial({iv({1, 0}), iv({1, 2})}, {1, 1}) == Rat(2, 3));
    CHECK_THROWS_AS(exp_integral_simplicial({iv({1, 0}), iv({-1, 1})}, {1, 1}), Error);
}

TEST_CASE("exponential integral is independent of the triangulation") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> e(0, 4);
    int tested = 0;
    for (int t = 0; t < 80 && tested < 24; ++t) {
        const std::size_t dim = 3 + t % 2;
        std::vector<IntVec> gens;
        for (int g = 0; g < 6; ++g) {
            IntVec v(dim);
            for (auto& x : v) x = e(rng);
            v[g % dim] += 1;
            gens.push_back(v);
        }
        std::vector<RatVec> rv;
        for (auto& g : gens) rv.push_back(to_rat(g));
        if (rank_of(rv, dim) < dim) continue;
        RatCone c = make_cone(dim, gens);
        const std::size_t r = extreme_rays(c).size();
        if (r <= dim) continue;
        std::vector<std::size_t> rev(r);
        for (std::size_t i = 0; i < r; ++i) rev[i] = r - 1 - i;
        std::vector<std::size_t> rot(r);
        for (std::size_t i = 0; i < r; ++i) rot[i] = (i + 1) % r;
        RatVec ell(dim, Rat(1));
        ell[0] = Rat(3, 2);
        const Rat base = exp_integral_cone(c, ell);
        CHECK(exp_integral_cone(c, ell, rev) == base);
        CHECK(exp_integral_cone(c, ell, rot) == base);
        ++tested;
    }
    CHECK(tested >= 20);
}
