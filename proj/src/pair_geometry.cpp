#include "toricm/pair_geometry.hpp"

#include <algorithm>

namespace toricm {

ToricPair make_pair(const Fan& f, const MultiplicitySet& M) {
    validate_fan(f);
    if (M.n != f.n()) fail("ConfigError", "multiplicity set length differs from ray count");
    M.check();
    ToricPair p;
    p.fan = f;
    p.mset = M;
    p.gamma = generators(f, M);
    p.minimal = minimal_reduced_elements(f, M);
    return p;
}

ToricPair subpair(const ToricPair& p, const std::vector<IntVec>& members) {
    ToricPair q;
    q.fan = p.fan;
    q.mset = MultiplicitySet::finite(p.fan.n(), members);
    q.gamma = generators(q.fan, q.mset);
    q.minimal = minimal_reduced_elements(q.fan, q.mset);
    return q;
}

PairDivisorQ pullback(const ToricPair& p, const TorusDivisorQ& D) {
    if (D.coeffs.size() != p.fan.n()) fail("MalformedDivisor", "divisor length differs from ray count");
    PairDivisorQ out;
    for (const auto& m : p.gamma) {
        Rat s = 0;
        for (std::size_t i = 0; i < m.size(); ++i) s += D.coeffs[i] * Rat(m[i]);
        out.coeffs.push_back(s);
    }
    return out;
}

PairDivisorQ anticanonical(const ToricPair& p) {
    PairDivisorQ out;
    out.coeffs.assign(p.gamma.size(), Rat(-1));
    return out;
}

Int PairPicard::torsion_order() const {
    Int t = 1;
    for (const auto& d : invariant_factors) t *= d;
    return t;
}

RatVec PairPicard::project(const RatVec& coeffs) const {
    if (coeffs.size() != projection.cols()) fail("MalformedDivisor", "pair divisor length mismatch");
    return to_rat(projection) * coeffs;
}

IntVec PairPicard::torsion_image(const IntVec& coeffs) const {
    IntVec out = torsion_projection * coeffs;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] %= invariant_factors[i];
        if (out[i] < 0) out[i] += invariant_factors[i];
    }
    return out;
}

PairPicard picard_from_gamma(const Fan& f, const std::vector<IntVec>& gamma) {
    const std::size_t g = gamma.size();
    PairPicard pic;
    pic.presentation = IntMatrix(f.d, g);
    IntMatrix P(g, f.d);  // rows phi(m): the map N^vee -> Div_T(X,M)
    for (std::size_t r = 0; r < g; ++r) {
        IntVec v = phi(gamma[r], f);
        for (std::size_t j = 0; j < f.d; ++j) {
            P(r, j) = v[j];
            pic.presentation(j, r) = v[j];
        }
    }
    SmithDecomposition s = smith_normal_form(P);
    const std::size_t rk = s.rank();
    pic.rank = g - rk;
    pic.pullback_injective = rk == f.d;
    std::vector<std::size_t> tors_rows;
    for (std::size_t i = 0; i < s.invariant_factors.size(); ++i)
        if (s.invariant_factors[i] > 1) {
            pic.invariant_factors.push_back(s.invariant_factors[i]);
            tors_rows.push_back(i);
        }
    pic.projection = IntMatrix(pic.rank, g);
    for (std::size_t r = 0; r < pic.rank; ++r)
        for (std::size_t c = 0; c < g; ++c) pic.projection(r, c) = s.left(rk + r, c);
    pic.torsion_projection = IntMatrix(tors_rows.size(), g);
    for (std::size_t r = 0; r < tors_rows.size(); ++r)
        for (std::size_t c = 0; c < g; ++c) pic.torsion_projection(r, c) = s.left(tors_rows[r], c);
    return pic;
}

PairPicard pair_picard(const ToricPair& p) { return picard_from_gamma(p.fan, p.gamma); }

LPProblem fujita_program(const std::vector<IntVec>& elements, const HeightSystem& h) {
    const std::size_t k = h.L_mat.cols();
    LPProblem lp;
    lp.objective.assign(k, Rat(1));
    lp.nonneg.assign(k, true);
    lp.A = RatMatrix(elements.size(), k);
    lp.b.assign(elements.size(), Rat(1));
    for (std::size_t r = 0; r < elements.size(); ++r) {
        RatVec l = h.form(elements[r]);
        for (std::size_t j = 0; j < k; ++j) lp.A(r, j) = l[j];
    }
    return lp;
}

Rat fujita_value(const std::vector<IntVec>& elements, const HeightSystem& h) {
    LPSolution s = lp_solve_raw(fujita_program(elements, h));
    if (s.status == LPStatus::Infeasible) fail("InfeasibleLP", "Fujita program is infeasible");
    if (s.status == LPStatus::Unbounded) fail("InternalError", "Fujita program is unbounded");
    return s.value;
}

ClosureResult quasi_proper_closure(const ToricPair& p, const HeightSystem& h) {
    ClosureResult res;
    res.pair = p;
    for (std::size_t i = 0; i < p.fan.n(); ++i)
        if (!has_axis_multiple(p.mset, i)) res.adjoined_axes.push_back(i);
    if (res.adjoined_axes.empty()) {
        res.log.push_back("pair is proper; nothing adjoined");
        return res;
    }

    const Rat a0 = fujita_value(p.minimal, h);
    long d = 1;
    for (const auto& v : {p.gamma, p.minimal})
        for (const auto& m : v)
            for (const auto& x : m) d = std::max(d, x.get_si());
    d *= 2;

    constexpr int kMaxDoublings = 10;
    for (int step = 0; step <= kMaxDoublings; ++step, d *= 2) {
        MultiplicitySet M = p.mset;
        for (auto i : res.adjoined_axes) {
            IntVec e(p.fan.n(), Int(0));
            e[i] = d;
            M.adjoined.push_back(e);
        }
        ToricPair q = make_pair(p.fan, M);
        Rat a = fujita_value(q.minimal, h);
        res.log.push_back("d = " + std::to_string(d) + ": a = " + to_string(a));
        if (a == a0) {
            res.pair = std::move(q);
            res.multiple = d;
            return res;
        }
    }
    fail("NotQuasiProper", "Fujita invariant of the closure did not reach " + to_string(a0) +
                               " after " + std::to_string(kMaxDoublings) + " doublings (last: " +
                               res.log.back() + ")");
}

}  // namespace toricm
