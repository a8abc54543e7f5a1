#include <algorithm>
#include <map>
#include <set>

#include "toricm/rational_algebra.hpp"

namespace toricm {

namespace {

Rat pair_with(const IntVec& g, const RatVec& x) {
    Rat s = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] != 0) s += Rat(g[i]) * x[i];
    return s;
}

void check_dim(const IntVec& v, std::size_t dim) {
    if (v.size() != dim) fail("MalformedCone", "generator has wrong dimension");
}

}  // namespace

RatCone make_cone(std::size_t dim, const std::vector<IntVec>& gens) {
    RatCone c;
    c.ambient_dim = dim;
    std::set<IntVec> seen;
    for (const auto& g : gens) {
        check_dim(g, dim);
        if (std::all_of(g.begin(), g.end(), [](const Int& x) { return x == 0; })) continue;
        IntVec p = primitive(g);
        if (seen.insert(p).second) c.generators.push_back(p);
    }
    return c;
}

// Double description: start from the whole space (lineality = everything) and intersect
// one half-space at a time.
RatCone dual_cone(const RatCone& c) {
    const std::size_t b = c.ambient_dim;
    std::vector<IntVec> cons;
    for (const auto& g : c.generators) {
        check_dim(g, b);
        cons.push_back(g);
    }
    for (const auto& l : c.lineality) {
        check_dim(l, b);
        cons.push_back(l);
        IntVec neg = l;
        for (auto& x : neg) x = -x;
        cons.push_back(neg);
    }

    std::vector<RatVec> lin;
    for (std::size_t i = 0; i < b; ++i) {
        RatVec e(b, Rat(0));
        e[i] = 1;
        lin.push_back(e);
    }
    std::vector<RatVec> rays;
    std::vector<std::size_t> processed;

    auto zero_set = [&](const RatVec& r) {
        std::vector<std::size_t> z;
        for (auto idx : processed)
            if (pair_with(cons[idx], r) == 0) z.push_back(idx);
        return z;
    };

    for (std::size_t ci = 0; ci < cons.size(); ++ci) {
        const IntVec& g = cons[ci];
        if (std::all_of(g.begin(), g.end(), [](const Int& x) { return x == 0; })) continue;

        std::size_t li = lin.size();
        for (std::size_t i = 0; i < lin.size(); ++i)
            if (pair_with(g, lin[i]) != 0) {
                li = i;
                break;
            }
        if (li < lin.size()) {
            RatVec l = lin[li];
            Rat gl = pair_with(g, l);
            if (gl < 0) {
                for (auto& x : l) x = -x;
                gl = -gl;
            }
            lin.erase(lin.begin() + li);
            for (auto& v : lin) {
                Rat f = pair_with(g, v) / gl;
                if (f != 0)
                    for (std::size_t k = 0; k < b; ++k) v[k] -= f * l[k];
            }
            for (auto& v : rays) {
                Rat f = pair_with(g, v) / gl;
                if (f != 0)
                    for (std::size_t k = 0; k < b; ++k) v[k] -= f * l[k];
            }
            rays.push_back(l);
            processed.push_back(ci);
            continue;
        }

        std::vector<RatVec> pos, neg, keep;
        std::vector<Rat> pos_val, neg_val;
        for (const auto& r : rays) {
            Rat v = pair_with(g, r);
            if (v > 0) {
                pos.push_back(r);
                pos_val.push_back(v);
                keep.push_back(r);
            } else if (v < 0) {
                neg.push_back(r);
                neg_val.push_back(v);
            } else {
                keep.push_back(r);
            }
        }
        if (!neg.empty()) {
            std::vector<std::vector<std::size_t>> zs;
            for (const auto& r : rays) zs.push_back(zero_set(r));
            auto z_of = [&](const RatVec& r) { return zero_set(r); };
            for (std::size_t i = 0; i < pos.size(); ++i) {
                auto zp = z_of(pos[i]);
                for (std::size_t j = 0; j < neg.size(); ++j) {
                    auto zn = z_of(neg[j]);
                    std::vector<std::size_t> common;
                    std::set_intersection(zp.begin(), zp.end(), zn.begin(), zn.end(),
                                          std::back_inserter(common));
                    bool adjacent = true;
                    for (std::size_t k = 0; k < rays.size() && adjacent; ++k) {
                        if (rays[k] == pos[i] || rays[k] == neg[j]) continue;
                        if (std::includes(zs[k].begin(), zs[k].end(), common.begin(), common.end()))
                            adjacent = false;
                    }
                    if (!adjacent) continue;
                    RatVec nr(b);
                    for (std::size_t k = 0; k < b; ++k)
                        nr[k] = pos_val[i] * neg[j][k] - neg_val[j] * pos[i][k];
                    keep.push_back(nr);
                }
            }
        }
        rays = std::move(keep);
        processed.push_back(ci);
        std::sort(processed.begin(), processed.end());
    }

    RatCone out;
    out.ambient_dim = b;
    std::set<IntVec> uniq;
    for (const auto& r : rays)
        if (!is_zero(r)) uniq.insert(primitive(r));
    out.generators.assign(uniq.begin(), uniq.end());
    for (const auto& l : lin) out.lineality.push_back(primitive(l));
    return out;
}

RatCone dual_cone_pointed(const RatCone& c) {
    RatCone d = dual_cone(c);
    if (!d.pointed()) fail("DualNotPointed", "dual cone contains a line");
    return d;
}

std::vector<IntVec> extreme_rays(const RatCone& c) {
    if (!c.pointed()) fail("NotPointed", "cone contains a line");
    RatCone dd = dual_cone(dual_cone(c));
    if (!dd.pointed()) fail("NotPointed", "cone contains a line");
    return dd.generators;
}

std::vector<RatCone> triangulate_cone(const RatCone& c, const std::vector<std::size_t>& order) {
    std::vector<IntVec> rays = extreme_rays(c);
    const std::size_t b = c.ambient_dim;
    std::vector<RatCone> out;
    if (rays.empty()) {
        RatCone z;
        z.ambient_dim = b;
        out.push_back(z);
        return out;
    }

    // Coordinates on the linear span: project to the pivot columns.
    std::vector<RatVec> rr;
    for (const auto& r : rays) rr.push_back(to_rat(r));
    std::vector<std::size_t> piv;
    rref(RatMatrix::from_rows(rr, b), &piv);
    const std::size_t k = piv.size();
    std::vector<RatVec> pts;
    for (const auto& r : rr) {
        RatVec p(k);
        for (std::size_t i = 0; i < k; ++i) p[i] = r[piv[i]];
        pts.push_back(p);
    }

    std::vector<std::size_t> ord = order;
    if (ord.empty())
        for (std::size_t i = 0; i < rays.size(); ++i) ord.push_back(i);
    if (ord.size() != rays.size()) fail("MalformedCone", "insertion order must list every extreme ray");
    {
        auto s = ord;
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] != i) fail("MalformedCone", "insertion order is not a permutation");
    }

    std::vector<std::size_t> initial;
    std::vector<RatVec> chosen;
    std::vector<std::size_t> rest;
    for (auto i : ord) {
        if (initial.size() < k) {
            chosen.push_back(pts[i]);
            if (rank_of(chosen, k) == chosen.size()) {
                initial.push_back(i);
                continue;
            }
            chosen.pop_back();
        }
        rest.push_back(i);
    }

    using Simplex = std::vector<std::size_t>;  // sorted ray indices
    std::vector<Simplex> simplices;
    {
        Simplex s = initial;
        std::sort(s.begin(), s.end());
        simplices.push_back(s);
    }

    // Normal of the hyperplane through a facet, positive on `opposite`.
    auto facet_normal = [&](const Simplex& facet, std::size_t opposite) {
        std::vector<RatVec> rows;
        for (auto i : facet) rows.push_back(pts[i]);
        RatVec n;
        if (rows.empty()) {
            n.assign(k, Rat(0));
            n[0] = 1;
        } else {
            auto ns = nullspace(RatMatrix::from_rows(rows, k));
            n = ns.at(0);
        }
        if (dot(n, pts[opposite]) < 0)
            for (auto& x : n) x = -x;
        return n;
    };

    for (auto u : rest) {
        std::map<Simplex, std::pair<int, std::size_t>> facets;  // facet -> (multiplicity, opposite)
        for (const auto& s : simplices)
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                Simplex f;
                for (std::size_t t = 0; t < s.size(); ++t)
                    if (t != drop) f.push_back(s[t]);
                auto& e = facets[f];
                e.first += 1;
                e.second = s[drop];
            }
        std::vector<Simplex> added;
        for (const auto& [f, e] : facets) {
            if (e.first != 1) continue;
            RatVec n = facet_normal(f, e.second);
            if (dot(n, pts[u]) < 0) {
                Simplex s = f;
                s.push_back(u);
                std::sort(s.begin(), s.end());
                added.push_back(s);
            }
        }
        if (added.empty()) fail("InternalError", "placed ray sees no boundary facet");
        simplices.insert(simplices.end(), added.begin(), added.end());
    }

    for (const auto& s : simplices) {
        RatCone sc;
        sc.ambient_dim = b;
        for (auto i : s) sc.generators.push_back(rays[i]);
        out.push_back(sc);
    }
    return out;
}

Rat exp_integral_simplicial(const std::vector<IntVec>& v, const RatVec& ell) {
    const std::size_t b = ell.size();
    if (v.size() != b) fail("MalformedCone", "simplicial cone must be full-dimensional");
    if (b == 0) return 1;
    RatMatrix m(b, b);
    Rat denom = 1;
    for (std::size_t i = 0; i < b; ++i) {
        check_dim(v[i], b);
        Rat p = pair_with(v[i], ell);
        if (p <= 0) fail("DivergentIntegral", "linear form is not positive on a generator");
        denom *= p;
        for (std::size_t j = 0; j < b; ++j) m(i, j) = v[i][j];
    }
    Rat d = det(m);
    if (d == 0) fail("MalformedCone", "generators are linearly dependent");
    return abs(d) / denom;
}

Rat exp_integral_cone(const RatCone& c, const RatVec& ell, const std::vector<std::size_t>& order) {
    if (c.ambient_dim == 0) return 1;
    Rat total = 0;
    for (const auto& s : triangulate_cone(c, order)) total += exp_integral_simplicial(s.generators, ell);
    return total;
}

}  // namespace toricm
