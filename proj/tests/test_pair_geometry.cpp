#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"

using namespace toricm;

namespace {

IntVec iv(std::initializer_list<long> v) {
    IntVec out;
    for (long x : v) out.push_back(Int(x));
    return out;
}

std::size_t index_of(const std::vector<IntVec>& v, const IntVec& m) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), m) - v.begin());
}

}  // namespace

TEST_CASE("pullback coefficients") {
    Fan p2 = projective_space_fan(2);
    ToricPair p = make_pair(p2, MultiplicitySet::weak_campana(3, 2));
    TorusDivisorQ D1{{Rat(1), Rat(0), Rat(0)}};
    PairDivisorQ pb = pullback(p, D1);
    CHECK(pb.coeffs[index_of(p.gamma, iv({2, 0, 0}))] == 2);
    CHECK(pb.coeffs[index_of(p.gamma, iv({1, 1, 0}))] == 1);
    CHECK(pb.coeffs[index_of(p.gamma, iv({0, 1, 1}))] == 0);

    PairDivisorQ zero = pullback(p, TorusDivisorQ{{0, 0, 0}});
    for (const auto& c : zero.coeffs) CHECK(c == 0);

    ToricPair sub = subpair(p, minimal_reduced_elements(p2, p.mset));
    PairDivisorQ half = pullback(sub, TorusDivisorQ{{Rat(1, 2), Rat(1, 2), Rat(1, 2)}});
    REQUIRE(half.coeffs.size() == 6);
    for (const auto& c : half.coeffs) CHECK(c == 1);
}

TEST_CASE("anticanonical representative") {
    Fan p2 = projective_space_fan(2);
    CHECK(anticanonical(make_pair(p2, MultiplicitySet::full(3))).coeffs == RatVec{-1, -1, -1});
    CHECK(anticanonical(make_pair(p2, MultiplicitySet::weak_campana(3, 2))).coeffs.size() == 15);
    ToricPair sub = subpair(make_pair(p2, MultiplicitySet::weak_campana(3, 2)),
                            minimal_reduced_elements(p2, MultiplicitySet::weak_campana(3, 2)));
    CHECK(anticanonical(sub).coeffs == RatVec(6, Rat(-1)));
    CHECK(anticanonical(make_pair(projective_space_fan(1), MultiplicitySet::integral(2, {0, 1}))).coeffs.empty());
}

TEST_CASE("Picard groups of pairs") {
    Fan p1 = projective_space_fan(1), p2 = projective_space_fan(2);
    // Subpair on the six minimal weak-Campana elements.
    ToricPair sub = subpair(make_pair(p2, MultiplicitySet::weak_campana(3, 2)),
                            minimal_reduced_elements(p2, MultiplicitySet::weak_campana(3, 2)));
    PairPicard wc = pair_picard(sub);
    CHECK(wc.rank == 4);
    CHECK(wc.torsion_order() == 1);
    CHECK(wc.pullback_injective);

    PairPicard camp = picard_from_gamma(p1, {iv({2, 0}), iv({0, 2})});
    CHECK(camp.rank == 1);
    CHECK(camp.invariant_factors == std::vector<Int>{2});

    for (std::size_t n = 2; n <= 5; ++n) {
        PairPicard pic = pair_picard(make_pair(projective_space_fan(n - 1), MultiplicitySet::full(n)));
        CHECK(pic.rank == 1);
        CHECK(pic.torsion_order() == 1);
    }
}

TEST_CASE("principal divisors vanish in the Picard group") {
    struct Case {
        Fan f;
        MultiplicitySet M;
    };
    Fan p1 = projective_space_fan(1), p2 = projective_space_fan(2);
    std::vector<Case> cases{{p1, MultiplicitySet::campana({2, 2})},
                            {p2, MultiplicitySet::weak_campana(3, 2)},
                            {p2, MultiplicitySet::darmon({2, 2, 3})},
                            {product_fan(p1, p1), MultiplicitySet::full(4)},
                            {hirzebruch_fan(2), MultiplicitySet::campana({2, 3, 2, 2})}};
    for (const auto& c : cases) {
        ToricPair p = make_pair(c.f, c.M);
        PairPicard pic = pair_picard(p);
        // rank from an independent rational computation
        std::vector<RatVec> phis;
        for (const auto& m : p.gamma) phis.push_back(to_rat(phi(m, c.f)));
        CHECK(pic.rank == p.gamma.size() - rank_of(phis, c.f.d));
        for (std::size_t t = 0; t < c.f.d; ++t) {
            // div(chi^u) for the coordinate form u = e_t pulls back to <u, phi(m)> on each generator.
            IntVec coeffs;
            for (const auto& m : p.gamma) coeffs.push_back(phi(m, c.f)[t]);
            RatVec proj = pic.project(to_rat(coeffs));
            CHECK(is_zero(proj));
            IntVec tors = pic.torsion_image(coeffs);
            for (const auto& x : tors) CHECK(x == 0);
        }
    }
}

TEST_CASE("quasi-proper closure") {
    Fan p1 = projective_space_fan(1), p2 = projective_space_fan(2);
    {
        ToricPair p = make_pair(p2, MultiplicitySet::weak_campana(3, 2));
        HeightSystem h = height_system(p2, TorusDivisorQ{{1, 0, 0}});
        ClosureResult r = quasi_proper_closure(p, h);
        CHECK(r.adjoined_axes.empty());
    }
    {
        ToricPair p = make_pair(p1, MultiplicitySet::integral(2, {0, 1}));
        HeightSystem h = height_system(p1, TorusDivisorQ{{1, 0}});
        CHECK_THROWS_WITH_AS(quasi_proper_closure(p, h), doctest::Contains("NotQuasiProper"), Error);
    }
    {
        Fan pp = product_fan(p1, p1);
        ToricPair p = make_pair(pp, MultiplicitySet::integral(4, {0}));
        HeightSystem h = height_system(pp, TorusDivisorQ{{1, 1, 1, 1}});
        ClosureResult r = quasi_proper_closure(p, h);
        CHECK(r.adjoined_axes == std::vector<std::size_t>{0});
        CHECK(fujita_value(r.pair.minimal, h) == 1);
        CHECK(fujita_value(p.minimal, h) == 1);
    }
}

TEST_CASE("make_pair validation") {
    CHECK_THROWS_AS(make_pair(projective_space_fan(2), MultiplicitySet::full(2)), Error);
}
