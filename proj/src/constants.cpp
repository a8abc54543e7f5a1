#include "toricm/constants.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <thread>

namespace toricm {

std::string to_string(CInfBranch b) {
    return b == CInfBranch::AdjointRigidFormula ? "AdjointRigidFormula" : "GeneralFormula";
}

std::vector<long> primes_up_to(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    for (long i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

namespace {

using Face = std::vector<std::size_t>;

std::vector<Face> fan_faces(const Fan& f) {
    std::set<Face> faces;
    for (const auto& c : f.cones) {
        const std::size_t d = c.size();
        for (unsigned long mask = 0; mask < (1UL << d); ++mask) {
            Face t;
            for (std::size_t s = 0; s < d; ++s)
                if (mask & (1UL << s)) t.push_back(c[s]);
            std::sort(t.begin(), t.end());
            faces.insert(t);
        }
    }
    return {faces.begin(), faces.end()};
}

// Calls fn(m) for every m in N^n_red with total in [1, T], each exactly once.
void for_each_reduced(const std::vector<Face>& faces, std::size_t n, long T,
                      const std::function<void(const std::vector<long>&, long)>& fn) {
    std::vector<long> m(n, 0);
    for (const auto& face : faces) {
        const std::size_t t = face.size();
        if (t == 0 || static_cast<long>(t) > T) continue;
        std::function<void(std::size_t, long)> rec = [&](std::size_t pos, long used) {
            if (pos == t) {
                fn(m, used);
                return;
            }
            const long remaining_slots = static_cast<long>(t - pos - 1);
            for (long v = 1; used + v + remaining_slots <= T; ++v) {
                m[face[pos]] = v;
                rec(pos + 1, used + v);
            }
            m[face[pos]] = 0;
        };
        rec(0, 0);
    }
}

bool contains_small(const MultiplicitySet& M, const std::vector<long>& m) {
    IntVec v(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) v[i] = m[i];
    return contains(M, v);
}

Real binom_real(long n, long k) {
    if (k < 0 || k > n) return 0;
    return std::exp(std::lgamma(static_cast<Real>(n) + 1) - std::lgamma(static_cast<Real>(k) + 1) -
                    std::lgamma(static_cast<Real>(n - k) + 1));
}

// sum_{s > T} C(s+n-1, n-1) x^s with 0 < x < 1.
Real binomial_tail(std::size_t n, Real x, long T) {
    Real total = 0;
    const long nn = static_cast<long>(n);
    for (long s = T + 1;; ++s) {
        Real term = binom_real(s + nn - 1, nn - 1) * std::pow(x, static_cast<Real>(s));
        total += term;
        Real ratio = (static_cast<Real>(s + nn) / static_cast<Real>(s + 1)) * x;
        if (ratio < 1 && (term < 1e-40L || term * ratio / (1 - ratio) < total * 1e-6L)) {
            total += term * ratio / (1 - ratio);
            return total;
        }
        if (s > T + 100000) return INFINITY;
    }
}

Real to_real(const Rat& q) { return static_cast<Real>(q.get_d()) + static_cast<Real>(Rat(q - Rat(q.get_d())).get_d()); }

// Per-coordinate generating function over the allowed positive values.
struct ClosedForm {
    const ToricPair* pair = nullptr;
    std::vector<Face> faces;
    bool available = false;

    explicit ClosedForm(const ToricPair& p) : pair(&p), faces(fan_faces(p.fan)) {
        const auto k = p.mset.kind;
        available = p.mset.adjoined.empty() &&
                    (k == MultKind::Full || k == MultKind::Campana || k == MultKind::Darmon ||
                     k == MultKind::Integral || k == MultKind::WeakCampana);
    }

    // Sum over the reduced set of prod q_i^{m_i}; `full` sums over N^n_red instead.
    Real sum(const std::vector<Real>& q, bool full) const {
        const MultiplicitySet& M = pair->mset;
        const std::size_t n = q.size();
        std::vector<Real> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (full) {
                g[i] = q[i] / (1 - q[i]);
                continue;
            }
            switch (M.kind) {
                case MultKind::Full: g[i] = q[i] / (1 - q[i]); break;
                case MultKind::Campana:
                    g[i] = M.weights[i] == 0 ? 0 : std::pow(q[i], static_cast<Real>(M.weights[i])) / (1 - q[i]);
                    break;
                case MultKind::Darmon: {
                    Real qd = std::pow(q[i], static_cast<Real>(M.weights[i]));
                    g[i] = qd / (1 - qd);
                    break;
                }
                case MultKind::Integral:
                    g[i] = std::binary_search(M.indices.begin(), M.indices.end(), i) ? 0 : q[i] / (1 - q[i]);
                    break;
                case MultKind::WeakCampana: g[i] = q[i] / (1 - q[i]); break;
                default: g[i] = 0;
            }
        }
        Real total = 0;
        for (const auto& face : faces) {
            Real term = 1;
            for (auto i : face) term *= g[i];
            if (!full && M.kind == MultKind::WeakCampana && !face.empty()) {
                bool inside = true;
                for (auto i : face)
                    if (!std::binary_search(M.indices.begin(), M.indices.end(), i)) inside = false;
                if (!inside) continue;
                // Remove the vectors with all entries >= 1 on the face and total < w.
                const long w = M.weight;
                const std::size_t t = face.size();
                std::vector<long> v(t, 1);
                Real corr = 0;
                std::function<void(std::size_t, long)> rec = [&](std::size_t pos, long used) {
                    if (pos == t) {
                        if (used < w) {
                            Real x = 1;
                            for (std::size_t s = 0; s < t; ++s) x *= std::pow(q[face[s]], static_cast<Real>(v[s]));
                            corr += x;
                        }
                        return;
                    }
                    for (long val = 1; used + val + static_cast<long>(t - pos - 1) < w; ++val) {
                        v[pos] = val;
                        rec(pos + 1, used + val);
                    }
                };
                if (static_cast<long>(t) < w) rec(0, 0);
                term -= corr;
            }
            total += term;
        }
        return total;
    }
};

struct TruncatedSum {
    Real value = 0;
    Real tail = 0;
    int T = 0;
};

TruncatedSum truncated_sum(const ToricPair& pair, const std::vector<Face>& faces, const std::vector<Real>& a,
                           long p, bool full, int truncation) {
    const std::size_t n = a.size();
    const Real lp = std::log(static_cast<Real>(p));
    Real amin = *std::min_element(a.begin(), a.end());
    if (amin <= 0) fail("NonSummable", "some coefficient a_i is not positive");
    const Real x = std::exp(-amin * lp);
    TruncatedSum r;
    long T = truncation;
    if (T < 0) {
        T = 1;
        while (T < 400 && binomial_tail(n, x, T) > 1e-18L) ++T;
    }
    r.T = static_cast<int>(T);
    r.tail = binomial_tail(n, x, T);
    Real sum = 1, comp = 0;  // Neumaier compensation; millions of terms at small p
    for_each_reduced(faces, n, T, [&](const std::vector<long>& m, long) {
        if (!full && !contains_small(pair.mset, m)) return;
        Real am = 0;
        for (std::size_t i = 0; i < n; ++i) am += a[i] * static_cast<Real>(m[i]);
        const Real term = std::exp(-am * lp);
        const Real t = sum + term;
        comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    });
    r.value = sum + comp;
    return r;
}

std::vector<Real> real_coeffs(const RatVec& a) {
    std::vector<Real> out;
    for (const auto& q : a) out.push_back(to_real(q));
    return out;
}

// Prime factors of S.
std::vector<long> prime_factors(long S) {
    std::vector<long> out;
    for (long q = 2; q * q <= S; ++q)
        if (S % q == 0) {
            out.push_back(q);
            while (S % q == 0) S /= q;
        }
    if (S > 1) out.push_back(S);
    return out;
}

}  // namespace

LocalDensity local_density(long p, const ToricPair& pair, const RatVec& a_coeffs, std::size_t g, long S,
                           int truncation) {
    if (a_coeffs.size() != pair.fan.n()) fail("MalformedDivisor", "coefficient vector length mismatch");
    for (const auto& q : a_coeffs)
        if (q <= 0) fail("NonSummable", "some coefficient a_i is not positive");
    LocalDensity ld;
    ld.p = p;
    ld.divides_S = S > 0 && S % p == 0;
    ClosedForm cf(pair);
    std::vector<Real> a = real_coeffs(a_coeffs);
    const Real pre = std::pow(1 - 1 / static_cast<Real>(p), static_cast<Real>(g));
    TruncatedSum ts = truncated_sum(pair, cf.faces, a, p, ld.divides_S, truncation);
    ld.value = pre * ts.value;
    ld.tail_bound = pre * ts.tail;
    ld.truncation = ts.T;
    if (cf.available || ld.divides_S) {
        std::vector<Real> q;
        for (auto ai : a) q.push_back(std::exp(-ai * std::log(static_cast<Real>(p))));
        ld.closed_form = pre * cf.sum(q, ld.divides_S);
    }
    return ld;
}

Rat convergence_exponent(const ToricPair& pair, const RatVec& a_coeffs, const std::vector<IntVec>& gamma_circle) {
    Rat amin = *std::min_element(a_coeffs.begin(), a_coeffs.end());
    if (amin <= 0) fail("NonSummable", "some coefficient a_i is not positive");
    Rat bound = Rat(2) / amin;
    long T = static_cast<long>(std::ceil(bound.get_d())) + 1;
    std::vector<Face> faces = fan_faces(pair.fan);
    Rat c = 2;
    for_each_reduced(faces, pair.fan.n(), T, [&](const std::vector<long>& m, long) {
        if (!contains_small(pair.mset, m)) return;
        IntVec v(m.size());
        Rat am = 0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            v[i] = m[i];
            am += a_coeffs[i] * m[i];
        }
        if (std::find(gamma_circle.begin(), gamma_circle.end(), v) != gamma_circle.end()) return;
        if (am < c) c = am;
    });
    if (c <= 1) fail("DivergentProduct", "convergence exponent " + to_string(c) + " is not above 1");
    return c;
}

EulerProductResult euler_product(const ToricPair& pair, const RatVec& a_coeffs,
                                 const std::vector<IntVec>& gamma_circle, long S, long P,
                                 std::size_t display_primes, unsigned threads) {
    if (S < 1) fail("ConfigError", "S must be positive");
    if (P < 3) fail("ConfigError", "prime limit must be at least 3");
    EulerProductResult res;
    res.prime_limit = P;
    res.c = convergence_exponent(pair, a_coeffs, gamma_circle);
    for (long q : prime_factors(S))
        if (q > P) fail("ConfigError", "prime factors of S must not exceed the prime limit");

    const std::size_t n = pair.fan.n();
    const std::size_t g = gamma_circle.size();
    std::vector<Real> a = real_coeffs(a_coeffs);
    ClosedForm cf(pair);
    std::vector<long> primes = primes_up_to(P);
    res.prime_count = primes.size();

    auto density = [&](long p) -> Real {
        const bool divides = S % p == 0;
        const Real pre = std::pow(1 - 1 / static_cast<Real>(p), static_cast<Real>(g));
        if (cf.available || divides) {
            std::vector<Real> q(n);
            const Real lp = std::log(static_cast<Real>(p));
            for (std::size_t i = 0; i < n; ++i) q[i] = std::exp(-a[i] * lp);
            return pre * cf.sum(q, divides);
        }
        return pre * truncated_sum(pair, cf.faces, a, p, divides, -1).value;
    };

    // Fixed block partition, independent of the thread count; blocks are multiplied in order
    // so the result is bit-identical for any --threads.
    const unsigned nt = std::max(1u, threads);
    const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(64, primes.size()));
    std::vector<Real> partial(blocks, 1);
    auto work = [&](unsigned tid) {
        for (std::size_t b = tid; b < blocks; b += nt) {
            const std::size_t lo = primes.size() * b / blocks, hi = primes.size() * (b + 1) / blocks;
            Real prod = 1;
            for (std::size_t i = lo; i < hi; ++i) prod *= density(primes[i]);
            partial[b] = prod;
        }
    };
    if (nt == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
        for (auto& t : pool) t.join();
    }
    Real trunc = 1;
    for (auto x : partial) trunc *= x;
    res.truncated = trunc;

    for (std::size_t i = 0; i < std::min(display_primes, primes.size()); ++i)
        res.first_primes.push_back(local_density(primes[i], pair, a_coeffs, g, S));

    // Tail over p > P. With x = p^{-1/D}, C_p = (1 - x^D)^g (A(x) + R(x)) where A collects the
    // terms of total < s0; Q(x) = (1 - x^D)^g A(x) - 1 is an exact integer polynomial.
    Int Dl = 1;
    for (const auto& q : a_coeffs) mpz_lcm(Dl.get_mpz_t(), Dl.get_mpz_t(), q.get_den_mpz_t());
    const long D = Dl.get_si();
    std::vector<long> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = Rat(a_coeffs[i] * D).get_num().get_si();
    const Rat amin_q = *std::min_element(a_coeffs.begin(), a_coeffs.end());
    const Real amin = to_real(amin_q);
    long s0 = 2;
    while (Rat(s0) * amin_q < res.c + 1) ++s0;
    std::map<long, Int> A;
    A[0] = 1;
    for_each_reduced(cf.faces, n, s0 - 1, [&](const std::vector<long>& m, long) {
        if (!contains_small(pair.mset, m)) return;
        long e = 0;
        for (std::size_t i = 0; i < n; ++i) e += k[i] * m[i];
        A[e] += 1;
    });
    for (std::size_t t = 0; t < g; ++t) {
        std::map<long, Int> next;
        for (const auto& [e, c] : A) {
            next[e] += c;
            next[e + D] -= c;
        }
        A = std::move(next);
    }
    A[0] -= 1;
    const Rat exact_limit = Rat(D) * amin_q * s0;  // coefficients of lower degree are exact
    const Real lP = std::log(static_cast<Real>(P));
    auto prime_tail = [&](Real sigma) {  // bound for sum_{p > P} p^{-sigma}
        return 1.25506L * sigma / ((sigma - 1) * lP) * std::pow(static_cast<Real>(P), 1 - sigma);
    };
    Real T_tail = 0, u_max = 0, correction = 0;
    for (const auto& [e, c] : A) {
        if (c == 0) continue;
        if (ratio(e, D) <= 1)
            fail("DivergentProduct", "local factors deviate from 1 at order p^-" + to_string(ratio(e, D)));
        const Real sigma = static_cast<Real>(e) / D;
        const Real absc = std::fabs(static_cast<Real>(c.get_d()));
        T_tail += absc * prime_tail(sigma);
        u_max += absc * std::pow(static_cast<Real>(P), -sigma);
        if (Rat(e) < exact_limit)
            correction += static_cast<Real>(c.get_d()) * (-std::expint(-(sigma - 1) * lP));
    }
    {
        const long nn = static_cast<long>(n);
        Real rsum = 0, usum = 0;
        for (long s = s0;; ++s) {
            const Real sigma = amin * s;
            const Real bc = binom_real(s + nn - 1, nn - 1);
            const Real term = bc * prime_tail(sigma);
            rsum += term;
            usum += bc * std::pow(static_cast<Real>(P), -sigma);
            const Real ratio = (static_cast<Real>(s + nn) / static_cast<Real>(s + 1)) *
                               std::pow(static_cast<Real>(P), -amin) * ((sigma + amin) / sigma) *
                               ((sigma - 1) / (sigma + amin - 1));
            if (ratio < 0.5L && term < 1e-40L) {
                rsum += term * ratio / (1 - ratio);
                usum += bc * std::pow(static_cast<Real>(P), -sigma) * 2;
                break;
            }
            if (s > s0 + 100000) fail("InternalError", "tail series did not converge");
        }
        T_tail += rsum;
        u_max += usum;
    }
    if (u_max >= 0.5L) fail("DivergentProduct", "prime limit too small for a rigorous tail bound");
    const Real rounding = static_cast<Real>(primes.size()) * 64 * LDBL_EPSILON;
    res.log_tail_bound = T_tail / (1 - u_max) + rounding;
    res.lo = trunc * std::exp(-res.log_tail_bound);
    res.hi = trunc * std::exp(res.log_tail_bound);
    res.value = std::clamp(trunc * std::exp(correction), res.lo, res.hi);
    return res;
}

Rat c_inf_adjoint_rigid(const Fan& f, const RatVec& a) {
    if (a.size() != f.n()) fail("MalformedDivisor", "coefficient vector length mismatch");
    Rat total = 0;
    for (const auto& c : f.cones) {
        Rat t = 1;
        for (auto i : c) {
            if (a[i] <= 0) fail("PreconditionViolated", "coefficients must be positive");
            t /= a[i];
        }
        total += t;
    }
    Rat scale = 1;
    for (std::size_t i = 0; i < f.d; ++i) scale *= 2;
    return scale * total;
}

namespace {

Int quotient_order_or_fail(const IntMatrix& m) {
    SmithDecomposition s = smith_normal_form(m);
    if (s.rank() != m.rows()) fail("InfiniteIndex", "the index quotient is infinite");
    return s.torsion_order();
}

}  // namespace

CInfGeneral c_inf_general(const ToricPair& pair, const InvariantReport& inv, bool sort_rays) {
    const Fan& f = pair.fan;
    const std::size_t n = f.n();
    const std::vector<IntVec>& gc = inv.gamma_circle;
    const RatVec& a = inv.rep_divisor.coeffs;
    CInfGeneral out;

    long dmult = 1;
    for (const auto& m : gc)
        for (const auto& x : m) dmult = std::max(dmult, x.get_si());
    dmult *= 2;
    MultiplicitySet Mc = MultiplicitySet::finite(n, gc);
    std::vector<bool> is_adjoined;
    for (const auto& m : gc) {
        out.gamma_bar.push_back(m);
        is_adjoined.push_back(false);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!has_axis_multiple(Mc, i)) {
            IntVec e(n, Int(0));
            e[i] = dmult;
            out.gamma_bar.push_back(e);
            is_adjoined.push_back(true);
        }

    std::vector<IntVec> phis;
    for (const auto& m : out.gamma_bar) phis.push_back(phi(m, f));
    for (const auto& v : phis)
        if (std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; }))
            fail("Unsupported", "an element of Gamma° maps to 0 in N");
    out.refined = refine_fan(f, phis, sort_rays);
    validate_simplicial_complete(out.refined);

    // Each refined ray must come from exactly one element.
    std::vector<std::size_t> ray_elem(out.refined.n(), SIZE_MAX);
    for (std::size_t e = 0; e < phis.size(); ++e) {
        IntVec r = primitive(phis[e]);
        auto it = std::find(out.refined.rays.begin(), out.refined.rays.end(), r);
        if (it == out.refined.rays.end()) fail("InternalError", "refined fan misses a ray");
        std::size_t ri = static_cast<std::size_t>(it - out.refined.rays.begin());
        if (ray_elem[ri] != SIZE_MAX) fail("Unsupported", "two elements of Gamma° span the same ray");
        ray_elem[ri] = e;
    }
    for (std::size_t r = 0; r < ray_elem.size(); ++r)
        if (ray_elem[r] == SIZE_MAX) fail("Unsupported", "a ray of the fan carries no element of Gamma°");

    const Rat tors0(picard_from_gamma(f, gc).torsion_order());
    bool weights_differ = false;

    for (const auto& sigma : out.refined.cones) {
        ConeData cd;
        cd.rays = sigma;
        std::vector<std::size_t> in_elems;
        for (auto r : sigma) {
            in_elems.push_back(ray_elem[r]);
            cd.elements.push_back(out.gamma_bar[ray_elem[r]]);
        }
        // Gamma(sigma): Gamma° plus the adjoined elements whose ray lies in sigma.
        std::vector<std::size_t> gs;
        for (std::size_t e = 0; e < out.gamma_bar.size(); ++e)
            if (!is_adjoined[e] || std::find(in_elems.begin(), in_elems.end(), e) != in_elems.end()) gs.push_back(e);
        std::vector<IntVec> gamma_sigma;
        for (auto e : gs) gamma_sigma.push_back(out.gamma_bar[e]);

        const std::size_t gsz = gs.size();
        std::vector<std::size_t> outside;
        for (std::size_t t = 0; t < gsz; ++t)
            if (std::find(in_elems.begin(), in_elems.end(), gs[t]) == in_elems.end()) outside.push_back(t);
        IntMatrix q(gsz, f.d + outside.size());
        for (std::size_t t = 0; t < gsz; ++t)
            for (std::size_t j = 0; j < f.d; ++j) q(t, j) = phis[gs[t]][j];
        for (std::size_t o = 0; o < outside.size(); ++o) q(outside[o], f.d + o) = 1;
        cd.index_snf = quotient_order_or_fail(q);

        RatMatrix dm(f.d, f.d);
        for (std::size_t s = 0; s < f.d; ++s)
            for (std::size_t j = 0; j < f.d; ++j) dm(s, j) = phis[in_elems[s]][j];
        cd.index_det = Rat(abs(det(dm))).get_num();
        if (cd.index_det != cd.index_snf) fail("InternalError", "I(sigma) computations disagree");

        const Rat tors_sigma(picard_from_gamma(f, gamma_sigma).torsion_order());
        cd.torsion_ratio = tors0 / tors_sigma;

        // Z_sigma on the adjoined coordinates.
        std::vector<std::size_t> adj;  // positions within gamma_sigma
        for (std::size_t t = 0; t < gsz; ++t)
            if (is_adjoined[gs[t]]) adj.push_back(t);
        if (adj.empty()) {
            cd.z_dim = 0;
            cd.z_volume_factorial = 1;
        } else {
            IntMatrix pt(f.d, gsz);  // P_sigma^T
            for (std::size_t t = 0; t < gsz; ++t)
                for (std::size_t j = 0; j < f.d; ++j) pt(j, t) = phis[gs[t]][j];
            SmithDecomposition sk = smith_normal_form(pt);
            const std::size_t rk = sk.rank();
            std::vector<RatVec> kproj;
            for (std::size_t c = rk; c < gsz; ++c) {
                RatVec v;
                for (auto t : adj) v.push_back(Rat(sk.right(t, c)));
                kproj.push_back(v);
            }
            const std::size_t s_dim = kproj.empty() ? 0 : rank_of(kproj, adj.size());
            cd.z_dim = s_dim;
            if (s_dim == 0) {
                cd.z_volume_factorial = 1;
            } else {
                IntMatrix km(kproj.size(), adj.size());
                for (std::size_t r = 0; r < kproj.size(); ++r)
                    for (std::size_t c = 0; c < adj.size(); ++c) km(r, c) = kproj[r][c].get_num();
                SmithDecomposition sr = smith_normal_form(km);
                auto vinv = inverse(to_rat(sr.right));
                if (!vinv) fail("InternalError", "singular unimodular transform");
                IntMatrix vi = to_int(*vinv);
                IntMatrix basis(s_dim, adj.size());
                for (std::size_t r = 0; r < s_dim; ++r)
                    for (std::size_t c = 0; c < adj.size(); ++c) basis(r, c) = sr.invariant_factors[r] * vi(r, c);
                RatVec atil(adj.size());
                for (std::size_t c = 0; c < adj.size(); ++c) {
                    const IntVec& m = gamma_sigma[adj[c]];
                    Rat s = 0;
                    for (std::size_t i = 0; i < n; ++i) s += a[i] * m[i];
                    atil[c] = s;
                    if (s != 1) weights_differ = true;
                }
                std::vector<IntVec> cols;
                for (std::size_t c = 0; c < adj.size(); ++c) cols.push_back(basis.col(c));
                RatCone cone = dual_cone_pointed(make_cone(s_dim, cols));
                RatVec ell = to_rat(basis) * atil;
                cd.z_volume_factorial = exp_integral_cone(cone, ell);
            }
        }
        cd.contribution = Rat(cd.index_snf) * cd.torsion_ratio * cd.z_volume_factorial;

        IntVec interior(f.d, Int(0));
        for (auto r : sigma)
            for (std::size_t j = 0; j < f.d; ++j) interior[j] += out.refined.rays[r][j];
        auto parent = cone_containing(f, interior);
        if (!parent) fail("InternalError", "refined cone lies in no original cone");
        cd.parent_cone = *parent;
        out.value += cd.contribution;
        out.cones.push_back(std::move(cd));
    }
    Rat scale = 1;
    for (std::size_t i = 0; i < f.d; ++i) scale *= 2;
    out.value *= scale;
    if (weights_differ)
        out.diagnostics.push_back("Z_sigma weights differ from 1 on some adjoined coordinate; the weighted polytope is used");
    return out;
}

ConstantReport leading_constant(const ToricPair& pair, const HeightSystem& h, long S, long prime_limit,
                                unsigned threads) {
    ConstantReport rep;
    rep.inv = compute_invariants(pair, h);
    const InvariantReport& inv = rep.inv;
    if (inv.rigidity == Rigidity::NotRigid) fail("NotRigid", inv.rigidity_reason);
    if (!inv.quasi_proper) fail("NotQuasiProper", "pair is not quasi-proper with respect to L");
    if (!inv.alpha_strictly_positive) fail("NonPositiveAlpha", "no strictly positive optimal point");
    if (S != 1 && inv.rigidity != Rigidity::AdjointRigid)
        fail("PreconditionViolated", "S must be 1 unless L is adjoint rigid");
    if (!inv.alpha_const) fail("DivergentAlpha", "alpha-constant is not finite");
    if (inv.b < 1) fail("PreconditionViolated", "b-invariant must be positive");

    const RatVec& a = inv.rep_divisor.coeffs;
    if (inv.rigidity == Rigidity::AdjointRigid) {
        rep.branch = CInfBranch::AdjointRigidFormula;
        rep.c_inf_adjoint = c_inf_adjoint_rigid(pair.fan, a);
        rep.c_inf = *rep.c_inf_adjoint;
        try {
            rep.general = c_inf_general(pair, inv);
            if (rep.general->value != rep.c_inf)
                rep.diagnostics.push_back("general-branch C_inf " + to_string(rep.general->value) +
                                          " differs from the adjoint-rigid value " + to_string(rep.c_inf));
        } catch (const Error& e) {
            rep.diagnostics.push_back(std::string("general branch unavailable: ") + e.what());
        }
    } else {
        rep.branch = CInfBranch::GeneralFormula;
        rep.general = c_inf_general(pair, inv);
        rep.c_inf = rep.general->value;
        for (const auto& d : rep.general->diagnostics) rep.diagnostics.push_back(d);
        if (!inv.pic_circle.pullback_injective)
            rep.diagnostics.push_back(
                "N^vee -> Div_T(X,M°) is not injective; the general C_inf formula assumes it is and may be "
                "off by a lattice factor (compare against the counting module)");
    }

    Rat fact = 1;
    for (std::size_t i = 2; i < inv.b; ++i) fact *= static_cast<unsigned long>(i);
    rep.prefactor = *inv.alpha_const / (inv.a * fact);
    rep.euler = euler_product(pair, a, inv.gamma_circle, S, prime_limit, 10, threads);
    const Real k = to_real(rep.prefactor * rep.c_inf);
    rep.leading_C = k * rep.euler.value;
    rep.leading_lo = k * rep.euler.lo;
    rep.leading_hi = k * rep.euler.hi;
    return rep;
}

namespace {

std::vector<std::complex<Real>> forms_at(const HeightSystem& h, const std::vector<std::complex<Real>>& s) {
    if (s.size() != h.L_mat.cols()) fail("MalformedVector", "s must have one entry per maximal cone");
    std::vector<std::complex<Real>> out(h.L_mat.rows());
    for (std::size_t i = 0; i < h.L_mat.rows(); ++i)
        for (std::size_t j = 0; j < h.L_mat.cols(); ++j) out[i] += to_real(h.L_mat(i, j)) * s[j];
    return out;
}

}  // namespace

ComplexValue local_factor_F(const ToricPair& pair, const HeightSystem& h, const std::vector<std::complex<Real>>& s,
                            long p, int truncation) {
    auto l = forms_at(h, s);
    Real smin = INFINITY;
    for (const auto& v : l) smin = std::min(smin, v.real());
    if (!(smin > 0)) fail("OutsideRegion", "Re l^(i)(s) must be positive for every i");
    const std::size_t n = pair.fan.n();
    const Real lp = std::log(static_cast<Real>(p));
    const Real x = std::exp(-smin * lp);
    long T = truncation;
    if (T < 0) {
        T = 1;
        while (T < 400 && binomial_tail(n, x, T) > 1e-18L) ++T;
    }
    ComplexValue out;
    out.tail_bound = binomial_tail(n, x, T);
    std::complex<Real> sum = 1;
    for_each_reduced(fan_faces(pair.fan), n, T, [&](const std::vector<long>& m, long) {
        if (!contains_small(pair.mset, m)) return;
        std::complex<Real> lm = 0;
        for (std::size_t i = 0; i < n; ++i) lm += static_cast<Real>(m[i]) * l[i];
        sum += std::exp(-lm * lp);
    });
    out.value = sum;
    return out;
}

bool convergence_region_check(const ToricPair& pair, const HeightSystem& h, const std::vector<std::complex<Real>>& s) {
    auto l = forms_at(h, s);
    for (const auto& v : l)
        if (!(v.real() > 0)) return false;
    for (const auto& m : pair.minimal) {
        Real re = 0;
        for (std::size_t i = 0; i < m.size(); ++i) re += static_cast<Real>(m[i].get_d()) * l[i].real();
        if (!(re > 1)) return false;
    }
    return true;
}

VolumeEstimate volume_DB_estimate(const HeightSystem& h, const std::vector<IntVec>& gamma_circle, Real B,
                                  std::size_t samples, unsigned long long seed) {
    VolumeEstimate est;
    est.samples = samples;
    if (B <= 1 || gamma_circle.empty() || samples == 0) return est;
    const Real b = std::log(B);
    const std::size_t g = gamma_circle.size(), k = h.L_mat.cols();
    std::vector<std::vector<Real>> w(g, std::vector<Real>(k));
    std::vector<Real> box(g);
    for (std::size_t t = 0; t < g; ++t) {
        RatVec l = h.form(gamma_circle[t]);
        Real mx = 0;
        for (std::size_t j = 0; j < k; ++j) {
            w[t][j] = to_real(l[j]);
            mx = std::max(mx, w[t][j]);
        }
        if (mx <= 0) fail("UnboundedCoordinate", "a coordinate of D(B) is unbounded");
        box[t] = b / mx;
    }
    Real box_vol = 1;
    for (auto x : box) box_vol *= x;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Real s1 = 0, s2 = 0;
    std::vector<Real> y(g);
    for (std::size_t it = 0; it < samples; ++it) {
        Real sum = 0;
        for (std::size_t t = 0; t < g; ++t) {
            y[t] = box[t] * static_cast<Real>(unif(rng));
            sum += y[t];
        }
        bool inside = true;
        for (std::size_t j = 0; j < k && inside; ++j) {
            Real acc = 0;
            for (std::size_t t = 0; t < g; ++t) acc += y[t] * w[t][j];
            if (acc > b) inside = false;
        }
        Real v = inside ? std::exp(sum) : 0;
        s1 += v;
        s2 += v * v;
    }
    const Real N = static_cast<Real>(samples);
    const Real mean = s1 / N;
    const Real var = std::max<Real>(0, s2 / N - mean * mean);
    est.value = box_vol * mean;
    est.std_error = box_vol * std::sqrt(var / N);
    return est;
}

}  // namespace toricm
