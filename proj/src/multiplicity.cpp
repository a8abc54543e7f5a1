#include "toricm/multiplicity.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace toricm {

std::string to_string(MultKind k) {
    switch (k) {
        case MultKind::Full: return "full";
        case MultKind::Campana: return "campana";
        case MultKind::WeakCampana: return "weak_campana";
        case MultKind::Darmon: return "darmon";
        case MultKind::Integral: return "integral";
        case MultKind::Custom: return "custom";
        case MultKind::Finite: return "finite";
    }
    return "?";
}

MultiplicitySet MultiplicitySet::full(std::size_t n) {
    MultiplicitySet M;
    M.kind = MultKind::Full;
    M.n = n;
    return M;
}

MultiplicitySet MultiplicitySet::campana(std::vector<long> weights) {
    MultiplicitySet M;
    M.kind = MultKind::Campana;
    M.n = weights.size();
    M.weights = std::move(weights);
    M.check();
    return M;
}

MultiplicitySet MultiplicitySet::weak_campana(std::size_t n, long m, std::vector<std::size_t> support) {
    MultiplicitySet M;
    M.kind = MultKind::WeakCampana;
    M.n = n;
    M.weight = m;
    if (support.empty())
        for (std::size_t i = 0; i < n; ++i) support.push_back(i);
    std::sort(support.begin(), support.end());
    M.indices = std::move(support);
    M.check();
    return M;
}

MultiplicitySet MultiplicitySet::darmon(std::vector<long> moduli) {
    MultiplicitySet M;
    M.kind = MultKind::Darmon;
    M.n = moduli.size();
    M.weights = std::move(moduli);
    M.check();
    return M;
}

MultiplicitySet MultiplicitySet::integral(std::size_t n, std::vector<std::size_t> forced) {
    MultiplicitySet M;
    M.kind = MultKind::Integral;
    M.n = n;
    std::sort(forced.begin(), forced.end());
    M.indices = std::move(forced);
    M.check();
    return M;
}

MultiplicitySet MultiplicitySet::custom(std::size_t n, std::vector<IntVec> gens) {
    MultiplicitySet M;
    M.kind = MultKind::Custom;
    M.n = n;
    M.elements = std::move(gens);
    M.check();
    return M;
}

MultiplicitySet MultiplicitySet::finite(std::size_t n, std::vector<IntVec> members) {
    MultiplicitySet M;
    M.kind = MultKind::Finite;
    M.n = n;
    M.elements = std::move(members);
    M.check();
    return M;
}

void MultiplicitySet::check() const {
    auto bad = [](const std::string& s) { fail("ConfigError", "multiplicity: " + s); };
    switch (kind) {
        case MultKind::Campana:
            if (weights.size() != n) bad("campana needs one weight per ray");
            for (auto w : weights)
                if (w < 0) bad("campana weights must be >= 1 (0 means infinity)");
            break;
        case MultKind::Darmon:
            if (weights.size() != n) bad("darmon needs one modulus per ray");
            for (auto w : weights)
                if (w < 1) bad("darmon moduli must be positive");
            break;
        case MultKind::WeakCampana:
            if (weight < 1) bad("weak campana weight must be positive");
            for (auto i : indices)
                if (i >= n) bad("weak campana support index out of range");
            break;
        case MultKind::Integral:
            for (auto i : indices)
                if (i >= n) bad("integral index out of range");
            break;
        case MultKind::Custom:
        case MultKind::Finite:
            for (const auto& g : elements) {
                if (g.size() != n) bad("element length differs from ray count");
                for (const auto& x : g)
                    if (x < 0) bad("elements must be nonnegative");
            }
            break;
        case MultKind::Full:
            break;
    }
    for (const auto& a : adjoined)
        if (a.size() != n) bad("adjoined element has wrong length");
}

namespace {

bool is_zero_vec(const IntVec& m) {
    return std::all_of(m.begin(), m.end(), [](const Int& x) { return x == 0; });
}

bool in_index_set(const std::vector<std::size_t>& s, std::size_t i) {
    return std::binary_search(s.begin(), s.end(), i);
}

bool leq(const IntVec& a, const IntVec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// Is m an N-combination of gens?
bool monoid_member(const std::vector<IntVec>& gens, const IntVec& m) {
    std::set<IntVec> dead;
    std::function<bool(const IntVec&)> rec = [&](const IntVec& x) -> bool {
        if (is_zero_vec(x)) return true;
        if (dead.count(x)) return false;
        for (const auto& g : gens) {
            if (is_zero_vec(g) || !leq(g, x)) continue;
            IntVec y = x;
            for (std::size_t i = 0; i < y.size(); ++i) y[i] -= g[i];
            if (rec(y)) return true;
        }
        dead.insert(x);
        return false;
    };
    return rec(m);
}

bool base_contains(const MultiplicitySet& M, const IntVec& m) {
    switch (M.kind) {
        case MultKind::Full:
            return true;
        case MultKind::Campana:
            for (std::size_t i = 0; i < M.n; ++i) {
                if (m[i] == 0) continue;
                if (M.weights[i] == 0 || m[i] < M.weights[i]) return false;
            }
            return true;
        case MultKind::WeakCampana: {
            Int s = 0;
            for (std::size_t i = 0; i < M.n; ++i) {
                if (m[i] == 0) continue;
                if (!in_index_set(M.indices, i)) return false;
                s += m[i];
            }
            return s == 0 || s >= M.weight;
        }
        case MultKind::Darmon:
            for (std::size_t i = 0; i < M.n; ++i)
                if (m[i] % M.weights[i] != 0) return false;
            return true;
        case MultKind::Integral:
            for (auto i : M.indices)
                if (m[i] != 0) return false;
            return true;
        case MultKind::Custom:
            return monoid_member(M.elements, m);
        case MultKind::Finite:
            return is_zero_vec(m) || std::find(M.elements.begin(), M.elements.end(), m) != M.elements.end();
    }
    return false;
}

long max_entry(const std::vector<IntVec>& v) {
    long b = 0;
    for (const auto& g : v)
        for (const auto& x : g) b = std::max(b, x.get_si());
    return b;
}

long max_weight(const std::vector<long>& w) {
    long b = 0;
    for (auto x : w) b = std::max(b, x);
    return b;
}

// Coordinate bound for minimal elements.
long minimal_bound(const MultiplicitySet& M) {
    switch (M.kind) {
        case MultKind::Full:
        case MultKind::Integral: return 1;
        case MultKind::Campana:
        case MultKind::Darmon: return max_weight(M.weights);
        case MultKind::WeakCampana: return M.weight;
        case MultKind::Custom:
        case MultKind::Finite: return max_entry(M.elements);
    }
    return 0;
}

// Coordinate bound for irreducible elements. Campana: a coordinate >= 2w splits off w e_i.
// WeakCampana: total >= 2w splits into two parts of total >= w. Darmon: irreducibles are
// d_i e_i. Custom: irreducibles lie in G. Full/Integral: the unit vectors.
long generator_bound(const MultiplicitySet& M) {
    switch (M.kind) {
        case MultKind::Full:
        case MultKind::Integral: return 1;
        case MultKind::Campana: return std::max(0L, 2 * max_weight(M.weights) - 1);
        case MultKind::Darmon: return max_weight(M.weights);
        case MultKind::WeakCampana: return 2 * M.weight - 1;
        case MultKind::Custom:
        case MultKind::Finite: return max_entry(M.elements);
    }
    return 0;
}

// Reduced elements of M supported in some maximal cone with coordinates <= bound.
std::set<IntVec> reduced_box(const Fan& f, const MultiplicitySet& M, long bound) {
    std::set<IntVec> out;
    if (bound <= 0) return out;
    for (const auto& c : f.cones) {
        const std::size_t d = c.size();
        std::vector<long> x(d, 0);
        for (;;) {
            std::size_t t = 0;
            while (t < d && x[t] == bound) x[t++] = 0;
            if (t == d) break;
            ++x[t];
            IntVec m(f.n(), Int(0));
            for (std::size_t s = 0; s < d; ++s) m[c[s]] = x[s];
            if (contains(M, m)) out.insert(m);
        }
    }
    return out;
}

}  // namespace

bool contains(const MultiplicitySet& M, const IntVec& m) {
    if (m.size() != M.n) fail("MalformedVector", "multiplicity vector length mismatch");
    for (const auto& x : m)
        if (x < 0) return false;
    if (base_contains(M, m)) return true;
    return std::find(M.adjoined.begin(), M.adjoined.end(), m) != M.adjoined.end();
}

bool reduced_contains(const Fan& f, const MultiplicitySet& M, const IntVec& m) {
    if (!contains(M, m)) return false;
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] != 0) support.push_back(i);
    return spans_cone(f, support);
}

std::vector<IntVec> minimal_reduced_elements(const Fan& f, const MultiplicitySet& M) {
    std::set<IntVec> cand = reduced_box(f, M, minimal_bound(M));
    for (const auto& a : M.adjoined)
        if (reduced_contains(f, M, a) && !is_zero_vec(a)) cand.insert(a);
    std::vector<IntVec> out;
    for (const auto& m : cand) {
        bool minimal = true;
        for (const auto& o : cand)
            if (o != m && leq(o, m)) {
                minimal = false;
                break;
            }
        if (minimal) out.push_back(m);
    }
    return out;
}

std::vector<IntVec> generators(const Fan& f, const MultiplicitySet& M) {
    std::set<IntVec> cand = reduced_box(f, M, generator_bound(M));
    for (const auto& a : M.adjoined)
        if (reduced_contains(f, M, a) && !is_zero_vec(a)) cand.insert(a);
    std::vector<IntVec> out;
    for (const auto& m : cand) {
        // Look for a split m = a + b with a, b nonzero in M (supports stay inside a cone).
        const std::size_t n = m.size();
        std::vector<long> hi(n), a(n, 0);
        for (std::size_t i = 0; i < n; ++i) hi[i] = m[i].get_si();
        bool irreducible = true;
        for (;;) {
            std::size_t t = 0;
            while (t < n && a[t] == hi[t]) a[t++] = 0;
            if (t == n) break;
            ++a[t];
            IntVec av(n), bv(n);
            bool b_zero = true;
            for (std::size_t i = 0; i < n; ++i) {
                av[i] = a[i];
                bv[i] = hi[i] - a[i];
                if (bv[i] != 0) b_zero = false;
            }
            if (b_zero) continue;
            if (contains(M, av) && contains(M, bv)) {
                irreducible = false;
                break;
            }
        }
        if (irreducible) out.push_back(m);
    }
    return out;
}

std::vector<IntVec> spanning_set(const MultiplicitySet& M) {
    std::vector<IntVec> out;
    auto unit = [&](std::size_t i) {
        IntVec e(M.n, Int(0));
        e[i] = 1;
        return e;
    };
    switch (M.kind) {
        case MultKind::Custom:
        case MultKind::Finite:
            out = M.elements;
            break;
        default:
            for (std::size_t i = 0; i < M.n; ++i)
                if (has_axis_multiple(M, i)) out.push_back(unit(i));
            break;
    }
    for (const auto& a : M.adjoined) out.push_back(a);
    return out;
}

bool has_axis_multiple(const MultiplicitySet& M, std::size_t i) {
    for (const auto& a : M.adjoined) {
        bool axis = a[i] > 0;
        for (std::size_t j = 0; j < M.n && axis; ++j)
            if (j != i && a[j] != 0) axis = false;
        if (axis) return true;
    }
    switch (M.kind) {
        case MultKind::Full:
        case MultKind::Darmon: return true;
        case MultKind::Campana: return M.weights[i] != 0;
        case MultKind::WeakCampana: return in_index_set(M.indices, i);
        case MultKind::Integral: return !in_index_set(M.indices, i);
        case MultKind::Custom:
        case MultKind::Finite:
            for (const auto& g : M.elements) {
                bool axis = g[i] > 0;
                for (std::size_t j = 0; j < M.n && axis; ++j)
                    if (j != i && g[j] != 0) axis = false;
                if (axis) return true;
            }
            return false;
    }
    return false;
}

}  // namespace toricm
