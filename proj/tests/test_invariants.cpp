#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

using namespace toricm;

namespace {

IntVec iv(std::initializer_list<long> v) {
    IntVec out;
    for (long x : v) out.push_back(Int(x));
    return out;
}

TorusDivisorQ unit_divisor(std::size_t n, std::size_t i = 0) {
    TorusDivisorQ D;
    D.coeffs.assign(n, Rat(0));
    D.coeffs[i] = 1;
    return D;
}

std::set<IntVec> as_set(const std::vector<IntVec>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("weak Campana points on the projective plane") {
    Fan f = projective_space_fan(2);
    ToricPair p = make_pair(f, MultiplicitySet::weak_campana(3, 2));
    HeightSystem h = height_system(f, unit_divisor(3));
    InvariantReport r = compute_invariants(p, h);
    CHECK(r.a == Rat(3, 2));
    CHECK(r.b == 4);
    CHECK(r.rigidity == Rigidity::AdjointRigid);
    CHECK(as_set(r.gamma_circle) == as_set(minimal_reduced_elements(f, p.mset)));
    REQUIRE(r.alpha_const);
    CHECK(*r.alpha_const == Rat(3, 16));
    CHECK(*r.alpha_const / (r.a * 6) == Rat(1, 48));
    CHECK(r.alpha_strictly_positive);
    CHECK(r.quasi_proper);
    Rat sum = 0;
    for (const auto& x : r.alpha_vec) sum += x;
    CHECK(sum == r.a);
}

TEST_CASE("projective spaces with the full multiplicity") {
    for (std::size_t n = 2; n <= 5; ++n) {
        CAPTURE(n);
        Fan f = projective_space_fan(n - 1);
        ToricPair p = make_pair(f, MultiplicitySet::full(n));
        InvariantReport r = compute_invariants(p, height_system(f, unit_divisor(n)));
        CHECK(r.a == Rat(long(n)));
        CHECK(r.b == 1);
        CHECK(r.rigidity == Rigidity::AdjointRigid);
        CHECK(r.gamma_circle.size() == n);
        REQUIRE(r.alpha_const);
        CHECK(*r.alpha_const == 1);
    }
}

TEST_CASE("m-full points: degree of the polynomial") {
    for (auto [n, m] : std::vector<std::pair<long, long>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}}) {
        CAPTURE(n);
        CAPTURE(m);
        Fan f = projective_space_fan(n - 1);
        ToricPair p = make_pair(f, MultiplicitySet::weak_campana(n, m));
        InvariantReport r = compute_invariants(p, height_system(f, unit_divisor(n)));
        CHECK(r.a == ratio(n, m));
        const long expected = oracle::binom(m + n - 1, n - 1) - oracle::binom(m - 1, n - 1) - n;
        CHECK(static_cast<long>(r.b) - 1 == expected);
        CHECK(r.rigidity == Rigidity::AdjointRigid);
    }
}

TEST_CASE("Campana points on the projective line") {
    Fan f = projective_space_fan(1);
    ToricPair p = make_pair(f, MultiplicitySet::campana({2, 2}));
    InvariantReport r = compute_invariants(p, height_system(f, unit_divisor(2)));
    CHECK(r.a == 1);
    CHECK(r.b == 1);
    CHECK(as_set(r.gamma_circle) == std::set<IntVec>{iv({2, 0}), iv({0, 2})});
    CHECK(r.pic_circle.torsion_order() == 2);
    REQUIRE(r.alpha_const);
    CHECK(*r.alpha_const == Rat(1, 4));
    CHECK(r.alpha_vec == RatVec{Rat(1, 2), Rat(1, 2)});
}

TEST_CASE("rigidity of the integral examples") {
    {
        Fan f = projective_space_fan(1);
        ToricPair p = make_pair(f, MultiplicitySet::integral(2, {0, 1}));
        InvariantReport r = compute_invariants(p, height_system(f, unit_divisor(2)));
        CHECK(r.rigidity == Rigidity::ToricAdjointRigidOnly);
        CHECK(r.a == 0);
        CHECK(r.b == 0);
        CHECK_FALSE(r.quasi_proper);
    }
    for (long d = 1; d <= 2; ++d) {  // -K is not nef on F_3
        CAPTURE(d);
        Fan f = hirzebruch_fan(d);
        ToricPair p = make_pair(f, MultiplicitySet::integral(4, {0, 2}));
        InvariantReport r = compute_invariants(p, height_system(f, TorusDivisorQ{{1, 1, 1, 1}}));
        CHECK(r.rigidity != Rigidity::AdjointRigid);
        CHECK(r.rigidity == Rigidity::ToricAdjointRigidOnly);
        CHECK_FALSE(r.rigidity_reason.empty());
    }
}

TEST_CASE("the two linear programs agree") {
    struct Case {
        const char* name;
        Fan f;
        MultiplicitySet M;
    };
    Fan p1 = projective_space_fan(1), p2 = projective_space_fan(2);
    std::vector<Case> cases{{"P2 weak campana", p2, MultiplicitySet::weak_campana(3, 2)},
                            {"P2 darmon", p2, MultiplicitySet::darmon({2, 3, 2})},
                            {"P1xP1 campana", product_fan(p1, p1), MultiplicitySet::campana({2, 3, 2, 2})},
                            {"F1 full", hirzebruch_fan(1), MultiplicitySet::full(4)},
                            {"P3 weak campana", projective_space_fan(3), MultiplicitySet::weak_campana(4, 3)}};
    for (const auto& c : cases) {
        const std::string name = c.name;
        CAPTURE(name);
        ToricPair p = make_pair(c.f, c.M);
        auto divs = oracle::random_divisors(c.f, 10, 29, [&](const TorusDivisorQ& D) {
            HeightSystem h = height_system(c.f, D);
            return is_nef(h) && is_big_given_nef(h, c.f.d);
        });
        REQUIRE(divs.size() == 10);
        for (const auto& D : divs) {
            HeightSystem h = height_system(c.f, D);
            FujitaResult fr = fujita_a(p, h);
            CHECK(fr.a == oracle::effectivity_a(p, D.coeffs));
            // scaling: a(tL) = a(L) / t
            TorusDivisorQ D3 = D;
            for (auto& x : D3.coeffs) x *= 3;
            CHECK(fujita_a(p, height_system(c.f, D3)).a == fr.a / 3);
            // linear equivalence: adding div(chi^u) does not change a
            TorusDivisorQ Du = D;
            for (std::size_t i = 0; i < c.f.n(); ++i) Du.coeffs[i] += Rat(c.f.rays[i][0] * 2);
            CHECK(fujita_a(p, height_system(c.f, Du)).a == fr.a);
        }
    }
}

TEST_CASE("adjoint divisor coefficients vanish exactly on the circle set") {
    Fan f = projective_space_fan(1);
    ToricPair p = make_pair(f, MultiplicitySet::campana({2, 2}));
    HeightSystem h = height_system(f, unit_divisor(2));
    InvariantReport r = compute_invariants(p, h);
    PairDivisorQ L = pullback(p, r.rep_divisor);
    PairDivisorQ K = anticanonical(p);
    for (std::size_t c = 0; c < p.gamma.size(); ++c) {
        const Rat coeff = L.coeffs[c] + K.coeffs[c];
        CHECK(coeff >= 0);
        const bool in_circle = std::find(r.gamma_circle.begin(), r.gamma_circle.end(), p.gamma[c]) != r.gamma_circle.end();
        CHECK((coeff == 0) == in_circle);
    }
}

TEST_CASE("alpha constant is independent of the triangulation") {
    struct Case {
        const char* name;
        Fan f;
        MultiplicitySet M;
        TorusDivisorQ D;
    };
    Fan p1 = projective_space_fan(1), p2 = projective_space_fan(2);
    std::vector<Case> cases{{"P2 weak campana", p2, MultiplicitySet::weak_campana(3, 2), unit_divisor(3)},
                            {"P3 weak campana 2", projective_space_fan(3), MultiplicitySet::weak_campana(4, 2), unit_divisor(4)},
                            {"P1xP1 weak campana", product_fan(p1, p1), MultiplicitySet::weak_campana(4, 2),
                             TorusDivisorQ{{1, 0, 1, 0}}}};
    std::mt19937 rng(41);
    for (const auto& c : cases) {
        const std::string name = c.name;
        CAPTURE(name);
        ToricPair p = make_pair(c.f, c.M);
        HeightSystem h = height_system(c.f, c.D);
        InvariantReport r = compute_invariants(p, h);
        ToricPair pc = subpair(p, r.gamma_circle);
        PairPicard pic = pair_picard(pc);
        std::vector<IntVec> gens;
        for (std::size_t j = 0; j < pc.gamma.size(); ++j) gens.push_back(pic.projection.col(j));
        const std::size_t nrays = dual_cone(make_cone(pic.rank, gens)).generators.size();
        const Rat base = alpha_constant(pc, h);
        CHECK(base > 0);
        std::vector<std::size_t> order(nrays);
        std::iota(order.begin(), order.end(), 0);
        for (int t = 0; t < 6; ++t) {
            std::shuffle(order.begin(), order.end(), rng);
            CHECK(alpha_constant(pc, h, order) == base);
        }
    }
}

TEST_CASE("refusals") {
    Fan f = projective_space_fan(2);
    ToricPair p = make_pair(f, MultiplicitySet::full(3));
    CHECK_THROWS_WITH_AS(compute_invariants(p, height_system(f, TorusDivisorQ{{1, -2, 0}})),
                         doctest::Contains("NotNef"), Error);
    Fan pp = product_fan(projective_space_fan(1), projective_space_fan(1));
    CHECK_THROWS_WITH_AS(compute_invariants(make_pair(pp, MultiplicitySet::full(4)), height_system(pp, unit_divisor(4))),
                         doctest::Contains("NotBig"), Error);
}
