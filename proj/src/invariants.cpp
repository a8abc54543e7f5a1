#include "toricm/invariants.hpp"

#include <algorithm>
#include <set>

namespace toricm {

std::string to_string(Rigidity r) {
    switch (r) {
        case Rigidity::AdjointRigid: return "AdjointRigid";
        case Rigidity::ToricAdjointRigidOnly: return "ToricAdjointRigidOnly";
        case Rigidity::NotRigid: return "NotRigid";
    }
    return "?";
}

namespace {

std::string vec_str(const IntVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

}  // namespace

FujitaResult fujita_solve(const std::vector<IntVec>& elements, const HeightSystem& h) {
    LPProblem lp = fujita_program(elements, h);
    LPSolution s = lp_optimize(lp);
    if (s.status == LPStatus::Infeasible) fail("InfeasibleLP", "Fujita program is infeasible");
    if (s.status == LPStatus::Unbounded) fail("InternalError", "Fujita program is unbounded");

    FujitaResult r;
    r.a = s.value;
    const std::size_t k = lp.objective.size();
    LPProblem face = lp_optimal_face(lp, s.value);
    std::set<RatVec> pts{s.x};
    auto maximize = [&](const RatVec& g) {
        LPProblem q = face;
        q.objective.resize(k);
        for (std::size_t j = 0; j < k; ++j) q.objective[j] = -g[j];
        LPSolution t = lp_solve_raw(q);  // any optimal vertex will do here
        if (t.status != LPStatus::Optimal) fail("InternalError", "optimal face is not bounded");
        pts.insert(t.x);
    };
    for (std::size_t j = 0; j < k; ++j) {
        RatVec e(k, Rat(0));
        e[j] = 1;
        maximize(e);
    }
    for (std::size_t row = 0; row < lp.A.rows(); ++row) maximize(lp.A.row(row));

    r.vertices.assign(pts.begin(), pts.end());
    r.alpha_vec.assign(k, Rat(0));
    for (const auto& v : r.vertices)
        for (std::size_t j = 0; j < k; ++j) r.alpha_vec[j] += v[j];
    for (auto& x : r.alpha_vec) x /= static_cast<long>(r.vertices.size());
    r.strictly_positive = std::all_of(r.alpha_vec.begin(), r.alpha_vec.end(), [](const Rat& q) { return q > 0; });
    return r;
}

FujitaResult fujita_a(const ToricPair& p, const HeightSystem& h) {
    if (!is_nef(h) || !is_big_given_nef(h, p.fan.d)) fail("PreconditionViolated", "L must be big and nef");
    quasi_proper_closure(p, h);
    FujitaResult r = fujita_solve(p.minimal, h);
    if (!r.strictly_positive) fail("NonPositiveAlpha", "no strictly positive optimal point");
    return r;
}

std::vector<IntVec> m_circle(const ToricPair& p, const HeightSystem& h, const Rat& a) {
    (void)a;
    std::vector<IntVec> out;
    if (p.minimal.empty()) return out;
    LPProblem lp = fujita_program(p.minimal, h);
    for (const auto& m : p.minimal)
        if (lp_max_over_optimal_face(lp, h.form(m)) == 1) out.push_back(m);
    return out;
}

std::size_t b_invariant(const ToricPair& p, const std::vector<IntVec>& gamma_circle) {
    std::vector<RatVec> phis;
    for (const auto& m : gamma_circle) phis.push_back(to_rat(phi(m, p.fan)));
    const std::size_t direct = gamma_circle.size() - rank_of(phis, p.fan.d);
    const std::size_t snf = picard_from_gamma(p.fan, gamma_circle).rank;
    if (direct != snf) fail("InternalError", "b-invariant computations disagree");
    return direct;
}

RigidityResult rigidity_classify(const ToricPair& p, const HeightSystem& h,
                                 const std::vector<IntVec>& gamma_circle,
                                 const std::vector<RatVec>& optimal_vertices) {
    std::vector<RatVec> span;
    for (const auto& m : gamma_circle) span.push_back(h.form(m));

    auto constant_on_vertices = [&](const RatVec& l) {
        for (std::size_t t = 1; t < optimal_vertices.size(); ++t)
            if (dot(l, optimal_vertices[t]) != dot(l, optimal_vertices[0])) return false;
        return true;
    };

    RigidityResult r;
    std::string first_missing;
    for (std::size_t i = 0; i < p.fan.n(); ++i)
        if (!in_span(span, h.form(i))) {
            first_missing = "l^(" + std::to_string(i) + ") is not in the span of the forms l_m, m in Gamma°";
            break;
        }
    if (first_missing.empty()) {
        r.rigidity = Rigidity::AdjointRigid;
        for (std::size_t i = 0; i < p.fan.n(); ++i)
            if (!constant_on_vertices(h.form(i))) {
                r.rigidity = Rigidity::NotRigid;
                r.reason = "span test passed but l^(" + std::to_string(i) + ") varies over optimal vertices";
                return r;
            }
        return r;
    }
    for (const auto& v : spanning_set(p.mset)) {
        RatVec l = h.form(v);
        if (!in_span(span, l)) {
            r.rigidity = Rigidity::NotRigid;
            r.reason = first_missing + "; l_v for v = " + vec_str(v) + " in M is not in that span either";
            return r;
        }
        if (!constant_on_vertices(l)) {
            r.rigidity = Rigidity::NotRigid;
            r.reason = "span test passed but l_v for v = " + vec_str(v) + " varies over optimal vertices";
            return r;
        }
    }
    r.rigidity = Rigidity::ToricAdjointRigidOnly;
    r.reason = first_missing;
    return r;
}

Rat alpha_constant(const ToricPair& p_circle, const HeightSystem& h, const std::vector<std::size_t>& order) {
    PairPicard pic = pair_picard(p_circle);
    const Rat tors(pic.torsion_order());
    if (pic.rank == 0) return 1 / tors;
    std::vector<IntVec> gens;
    for (std::size_t c = 0; c < p_circle.gamma.size(); ++c) gens.push_back(pic.projection.col(c));
    RatCone lambda = make_cone(pic.rank, gens);
    RatCone dual = dual_cone(lambda);
    if (!dual.pointed()) fail("DivergentAlpha", "effective cone is not full-dimensional");
    RatVec ell = pic.project(pullback(p_circle, h.divisor).coeffs);
    try {
        return exp_integral_cone(dual, ell, order) / tors;
    } catch (const Error& e) {
        if (e.code() == "DivergentIntegral")
            fail("DivergentAlpha", "pullback of L is not positive on the dual effective cone");
        throw;
    }
}

InvariantReport compute_invariants(const ToricPair& p, const HeightSystem& h) {
    if (!is_nef(h)) fail("NotNef", "L is not nef");
    if (!is_big_given_nef(h, p.fan.d)) fail("NotBig", "L is not big");

    InvariantReport rep;
    try {
        ClosureResult cr = quasi_proper_closure(p, h);
        rep.quasi_proper = true;
        rep.closure_multiple = cr.multiple;
        rep.closure_axes = cr.adjoined_axes;
    } catch (const Error& e) {
        if (e.code() != "NotQuasiProper") throw;
        rep.diagnostics.push_back(e.what());
    }

    FujitaResult fr = fujita_solve(p.minimal, h);
    rep.a = fr.a;
    rep.alpha_vec = fr.alpha_vec;
    rep.alpha_strictly_positive = fr.strictly_positive;
    if (!fr.strictly_positive) rep.diagnostics.push_back("NonPositiveAlpha: no strictly positive optimal point");

    rep.rep_divisor.coeffs.resize(p.fan.n());
    for (std::size_t i = 0; i < p.fan.n(); ++i) rep.rep_divisor.coeffs[i] = dot(h.form(i), rep.alpha_vec);

    rep.gamma_circle = m_circle(p, h, rep.a);
    // Cross-check against the relative-interior point.
    for (const auto& m : p.minimal) {
        bool tight = dot(h.form(m), rep.alpha_vec) == 1;
        bool in = std::find(rep.gamma_circle.begin(), rep.gamma_circle.end(), m) != rep.gamma_circle.end();
        if (tight != in) fail("InternalError", "relative-interior point disagrees with the optimal-face test");
    }
    rep.b = b_invariant(p, rep.gamma_circle);
    ToricPair pc = subpair(p, rep.gamma_circle);
    rep.pic_circle = pair_picard(pc);

    RigidityResult rr = rigidity_classify(p, h, rep.gamma_circle, fr.vertices);
    rep.rigidity = rr.rigidity;
    rep.rigidity_reason = rr.reason;

    if (rep.rigidity != Rigidity::NotRigid) {
        try {
            rep.alpha_const = alpha_constant(pc, h);
        } catch (const Error& e) {
            if (e.code() != "DivergentAlpha") throw;
            rep.diagnostics.push_back(e.what());
        }
    }
    return rep;
}

}  // namespace toricm
