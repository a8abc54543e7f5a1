#include "toricm/toric_core.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace toricm {

RatVec HeightSystem::form(const IntVec& m) const {
    RatVec out(L_mat.cols(), Rat(0));
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        Rat w(m[i]);
        for (std::size_t j = 0; j < L_mat.cols(); ++j) out[j] += w * L_mat(i, j);
    }
    return out;
}

namespace {

RatMatrix cone_matrix(const Fan& f, const Cone& c) {
    RatMatrix m(c.size(), f.d);
    for (std::size_t r = 0; r < c.size(); ++r)
        for (std::size_t j = 0; j < f.d; ++j) m(r, j) = f.rays[c[r]][j];
    return m;
}

void check_structure(const Fan& f) {
    if (f.d == 0) fail("MalformedCone", "lattice rank must be positive");
    std::set<IntVec> seen;
    for (std::size_t i = 0; i < f.rays.size(); ++i) {
        const auto& r = f.rays[i];
        if (r.size() != f.d) fail("MalformedCone", "ray " + std::to_string(i) + " has wrong dimension");
        if (std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; }))
            fail("MalformedCone", "ray " + std::to_string(i) + " is zero");
        if (primitive(r) != r) fail("MalformedCone", "ray " + std::to_string(i) + " is not primitive");
        if (!seen.insert(r).second) fail("MalformedCone", "duplicate ray " + std::to_string(i));
    }
    std::set<Cone> cones;
    for (std::size_t j = 0; j < f.cones.size(); ++j) {
        Cone c = f.cones[j];
        if (c.size() != f.d)
            fail("MalformedCone", "cone " + std::to_string(j) + " does not have d rays");
        for (auto i : c)
            if (i >= f.rays.size()) fail("MalformedCone", "cone " + std::to_string(j) + " has a ray index out of range");
        std::sort(c.begin(), c.end());
        if (std::adjacent_find(c.begin(), c.end()) != c.end())
            fail("MalformedCone", "cone " + std::to_string(j) + " repeats a ray");
        if (!cones.insert(c).second) fail("MalformedCone", "duplicate cone " + std::to_string(j));
    }
}

void check_facets(const Fan& f) {
    std::map<Cone, int> count;
    for (const auto& c0 : f.cones) {
        Cone c = c0;
        std::sort(c.begin(), c.end());
        for (std::size_t drop = 0; drop < c.size(); ++drop) {
            Cone facet;
            for (std::size_t t = 0; t < c.size(); ++t)
                if (t != drop) facet.push_back(c[t]);
            ++count[facet];
        }
    }
    for (const auto& [facet, k] : count)
        if (k != 2) fail("NotComplete", "a facet lies in " + std::to_string(k) + " maximal cones");
}

}  // namespace

const Fan& validate_fan(const Fan& f) {
    check_structure(f);
    for (std::size_t j = 0; j < f.cones.size(); ++j) {
        Rat d = det(cone_matrix(f, f.cones[j]));
        if (abs(d) != 1) fail("NotSmooth", "cone " + std::to_string(j) + " has |det| = " + to_string(abs(d)));
    }
    check_facets(f);
    return f;
}

void validate_simplicial_complete(const Fan& f) {
    check_structure(f);
    for (std::size_t j = 0; j < f.cones.size(); ++j)
        if (det(cone_matrix(f, f.cones[j])) == 0)
            fail("MalformedCone", "cone " + std::to_string(j) + " is not simplicial");
    check_facets(f);
}

RatVec cartier_data(const Fan& f, const TorusDivisorQ& D, std::size_t cone) {
    if (D.coeffs.size() != f.n()) fail("MalformedDivisor", "divisor length differs from ray count");
    const Cone& c = f.cones.at(cone);
    RatVec rhs(c.size());
    for (std::size_t r = 0; r < c.size(); ++r) rhs[r] = D.coeffs[c[r]];
    auto mu = solve(cone_matrix(f, c), rhs);
    if (!mu) fail("NotSmooth", "singular cone");
    return *mu;
}

HeightSystem height_system(const Fan& f, const TorusDivisorQ& D) {
    HeightSystem h;
    h.divisor = D;
    for (auto& c : h.divisor.coeffs) c.canonicalize();
    h.L_mat = RatMatrix(f.n(), f.k());
    for (std::size_t j = 0; j < f.k(); ++j) {
        RatVec mu = cartier_data(f, h.divisor, j);
        for (std::size_t i = 0; i < f.n(); ++i) h.L_mat(i, j) = h.divisor.coeffs[i] - dot(mu, to_rat(f.rays[i]));
        for (auto i : f.cones[j])
            if (h.L_mat(i, j) != 0) fail("InternalError", "height form does not vanish on its cone");
        h.cartier_points.push_back(std::move(mu));
    }
    return h;
}

bool is_nef(const HeightSystem& h) {
    for (std::size_t i = 0; i < h.L_mat.rows(); ++i)
        for (std::size_t j = 0; j < h.L_mat.cols(); ++j)
            if (h.L_mat(i, j) < 0) return false;
    return true;
}

bool is_big_given_nef(const HeightSystem& h, std::size_t d) {
    if (!is_nef(h)) fail("PreconditionViolated", "bigness test requires a nef divisor");
    return rank(h.L_mat) == d + 1;
}

std::vector<int> cox_monomial_hat(const Fan& f, std::size_t cone) {
    std::vector<int> e(f.n(), 1);
    for (auto i : f.cones.at(cone)) e[i] = 0;
    return e;
}

std::optional<std::size_t> cone_containing(const Fan& f, const IntVec& v, RatVec* coords) {
    const RatVec rv = to_rat(v);
    for (std::size_t j = 0; j < f.k(); ++j) {
        RatMatrix m = cone_matrix(f, f.cones[j]).transpose();
        auto c = solve(m, rv);
        if (!c) continue;
        if (std::all_of(c->begin(), c->end(), [](const Rat& q) { return q >= 0; })) {
            if (coords) *coords = *c;
            return j;
        }
    }
    return std::nullopt;
}

Fan refine_fan(const Fan& f, const std::vector<IntVec>& new_rays, bool sort_rays) {
    std::vector<IntVec> todo;
    for (const auto& r : new_rays) {
        if (r.size() != f.d) fail("MalformedCone", "new ray has wrong dimension");
        todo.push_back(primitive(r));
    }
    if (sort_rays) std::sort(todo.begin(), todo.end());

    Fan g = f;
    for (auto& c : g.cones) std::sort(c.begin(), c.end());
    for (const auto& v : todo) {
        if (std::find(g.rays.begin(), g.rays.end(), v) != g.rays.end()) continue;
        const std::size_t vi = g.rays.size();
        g.rays.push_back(v);
        std::vector<Cone> next;
        const RatVec rv = to_rat(v);
        for (const auto& c : g.cones) {
            auto coeff = solve(cone_matrix(g, c).transpose(), rv);
            bool inside = coeff && std::all_of(coeff->begin(), coeff->end(), [](const Rat& q) { return q >= 0; });
            if (!inside) {
                next.push_back(c);
                continue;
            }
            for (std::size_t t = 0; t < c.size(); ++t) {
                if ((*coeff)[t] == 0) continue;
                Cone nc;
                for (std::size_t s = 0; s < c.size(); ++s) nc.push_back(s == t ? vi : c[s]);
                std::sort(nc.begin(), nc.end());
                next.push_back(nc);
            }
        }
        g.cones = std::move(next);
    }
    return g;
}

IntVec phi(const IntVec& m, const Fan& f) {
    if (m.size() != f.n()) fail("MalformedVector", "multiplicity vector length differs from ray count");
    IntVec out(f.d, Int(0));
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        for (std::size_t j = 0; j < f.d; ++j) out[j] += m[i] * f.rays[i][j];
    }
    return out;
}

bool spans_cone(const Fan& f, const std::vector<std::size_t>& support) {
    for (const auto& c : f.cones) {
        bool all = true;
        for (auto i : support)
            if (std::find(c.begin(), c.end(), i) == c.end()) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

std::vector<std::vector<std::size_t>> primitive_collections(const Fan& f) {
    const std::size_t n = f.n();
    if (n > 24) fail("Unsupported", "too many rays for primitive collection enumeration");
    std::vector<std::vector<std::size_t>> out;
    for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1UL << i)) s.push_back(i);
        if (spans_cone(f, s)) continue;
        bool minimal = true;
        for (std::size_t drop = 0; drop < s.size() && minimal; ++drop) {
            std::vector<std::size_t> t;
            for (std::size_t u = 0; u < s.size(); ++u)
                if (u != drop) t.push_back(s[u]);
            if (!spans_cone(f, t)) minimal = false;
        }
        if (minimal) out.push_back(s);
    }
    return out;
}

Fan projective_space_fan(std::size_t dim) {
    Fan f;
    f.d = dim;
    for (std::size_t i = 0; i < dim; ++i) {
        IntVec e(dim, Int(0));
        e[i] = 1;
        f.rays.push_back(e);
    }
    f.rays.push_back(IntVec(dim, Int(-1)));
    for (std::size_t skip = 0; skip <= dim; ++skip) {
        Cone c;
        for (std::size_t i = 0; i <= dim; ++i)
            if (i != skip) c.push_back(i);
        f.cones.push_back(c);
    }
    std::sort(f.cones.begin(), f.cones.end());
    return f;
}

Fan product_fan(const Fan& a, const Fan& b) {
    Fan f;
    f.d = a.d + b.d;
    for (const auto& r : a.rays) {
        IntVec v = r;
        v.resize(f.d, Int(0));
        f.rays.push_back(v);
    }
    for (const auto& r : b.rays) {
        IntVec v(a.d, Int(0));
        v.insert(v.end(), r.begin(), r.end());
        f.rays.push_back(v);
    }
    for (const auto& ca : a.cones)
        for (const auto& cb : b.cones) {
            Cone c = ca;
            for (auto i : cb) c.push_back(i + a.n());
            std::sort(c.begin(), c.end());
            f.cones.push_back(c);
        }
    return f;
}

Fan hirzebruch_fan(long d) {
    Fan f;
    f.d = 2;
    f.rays = {IntVec{1, 0}, IntVec{0, 1}, IntVec{-1, Int(d)}, IntVec{0, -1}};
    f.cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    return f;
}

}  // namespace toricm
