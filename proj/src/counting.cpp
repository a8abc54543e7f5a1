#include "toricm/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <thread>

namespace toricm {

std::string to_string(CountMethod m) {
    return m == CountMethod::CoxEnumeration ? "CoxEnumeration" : "ProjectiveOracle";
}

namespace {

using u64 = unsigned long long;
constexpr u64 kMaxBound = 4000000000000000000ULL;

u64 sat_mul(u64 a, u64 b, u64 cap) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap + 1;
    u64 r = a * b;
    return r > cap ? cap + 1 : r;
}

u64 sat_pow(u64 v, long e, u64 cap) {
    u64 r = 1;
    for (long t = 0; t < e && r <= cap; ++t) r = sat_mul(r, v, cap);
    return r;
}

bool is_integer(double B) { return std::floor(B) == B && B >= 1 && B < 1e18; }

// Largest integer Y with Y^q <= B^p.
Int scaled_threshold(double B, const Rat& s) {
    if (B < 1) return 0;
    if (is_integer(B)) {
        Int base(static_cast<unsigned long>(B)), pw, root;
        mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), s.get_num().get_ui());
        mpz_root(root.get_mpz_t(), pw.get_mpz_t(), s.get_den().get_ui());
        return root;
    }
    long double v = std::pow(static_cast<long double>(B), static_cast<long double>(s.get_d()));
    return Int(static_cast<double>(std::floor(v)));
}

// floor(Y^{1/e})
u64 int_root(u64 Y, long e) {
    Int r, y(std::to_string(Y));
    mpz_root(r.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(e));
    return std::stoull(r.get_str());
}

std::vector<u64> smallest_prime_factors(u64 n) {
    std::vector<u64> spf(n + 1, 0);
    for (u64 i = 2; i <= n; ++i) {
        if (spf[i]) continue;
        for (u64 j = i; j <= n; j += i)
            if (!spf[j]) spf[j] = i;
    }
    return spf;
}

// Necessary condition on a single coordinate's valuation.
bool coord_allowed(const MultiplicitySet& M, std::size_t i, long v) {
    if (v == 0 || !M.adjoined.empty()) return true;
    switch (M.kind) {
        case MultKind::Campana: return M.weights[i] != 0 && v >= M.weights[i];
        case MultKind::Darmon: return v % M.weights[i] == 0;
        case MultKind::Integral: return !std::binary_search(M.indices.begin(), M.indices.end(), i);
        case MultKind::WeakCampana: return std::binary_search(M.indices.begin(), M.indices.end(), i);
        default: return true;
    }
}

// The coordinate filter is exact for these kinds.
bool coordinatewise(const MultiplicitySet& M) {
    return M.adjoined.empty() && (M.kind == MultKind::Full || M.kind == MultKind::Campana ||
                                  M.kind == MultKind::Darmon || M.kind == MultKind::Integral);
}

bool joint_contains(const MultiplicitySet& M, const std::vector<long>& m) {
    if (M.kind == MultKind::WeakCampana && M.adjoined.empty()) {
        long s = 0;
        for (auto x : m) s += x;
        return s == 0 || s >= M.weight;
    }
    IntVec v(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) v[i] = m[i];
    return contains(M, v);
}

struct Thresholds {
    std::vector<Int> Y;               // per schedule entry
    std::vector<std::size_t> order;   // schedule indices sorted by Y
    u64 ymax = 0;
};

Thresholds make_thresholds(const std::vector<double>& schedule, const Rat& s) {
    Thresholds t;
    Int ymax = 0;
    for (double B : schedule) {
        if (!(B >= 0) || !std::isfinite(B)) fail("ConfigError", "height bounds must be finite and nonnegative");
        t.Y.push_back(scaled_threshold(B, s));
        ymax = std::max(ymax, t.Y.back());
    }
    if (ymax > Int(std::to_string(kMaxBound))) fail("BudgetExceeded", "height bound exceeds 64-bit range");
    t.ymax = std::stoull(ymax.get_str());
    t.order.resize(schedule.size());
    std::iota(t.order.begin(), t.order.end(), 0);
    std::stable_sort(t.order.begin(), t.order.end(), [&](auto a, auto b) { return t.Y[a] < t.Y[b]; });
    return t;
}

// hist[r] counts heights falling in (Y[order[r-1]], Y[order[r]]]; cumulated per schedule entry.
std::vector<Int> cumulate(const Thresholds& t, const std::vector<u64>& hist) {
    std::vector<Int> out(t.Y.size());
    Int run = 0;
    for (std::size_t r = 0; r < t.order.size(); ++r) {
        run += Int(std::to_string(hist[r]));
        out[t.order[r]] = run;
    }
    return out;
}

std::size_t bucket(const Thresholds& t, const Int& h) {
    std::size_t lo = 0, hi = t.order.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (t.Y[t.order[mid]] >= h) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

IntMatrix integral_height_matrix(const HeightSystem& h, Rat* scale) {
    const RatMatrix& L = h.L_mat;
    Int den = 1, g = 0;
    for (std::size_t i = 0; i < L.rows(); ++i)
        for (std::size_t j = 0; j < L.cols(); ++j) {
            if (L(i, j) < 0) fail("PreconditionViolated", "L must be nef");
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), L(i, j).get_den_mpz_t());
        }
    IntMatrix out(L.rows(), L.cols());
    for (std::size_t i = 0; i < L.rows(); ++i)
        for (std::size_t j = 0; j < L.cols(); ++j) {
            out(i, j) = Rat(L(i, j) * den).get_num();
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out(i, j).get_mpz_t());
        }
    if (g == 0) fail("PreconditionViolated", "L is zero");
    for (std::size_t i = 0; i < L.rows(); ++i)
        for (std::size_t j = 0; j < L.cols(); ++j) out(i, j) /= g;
    if (scale) *scale = ratio(den, g);
    return out;
}

Int height_of_tuple(const HeightSystem& h, const std::vector<long>& x) {
    if (x.size() != h.L_mat.rows()) fail("MalformedVector", "tuple length differs from ray count");
    Int best = 0;
    for (std::size_t j = 0; j < h.L_mat.cols(); ++j) {
        Int mon = 1;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < 1) fail("PreconditionViolated", "tuple entries must be positive");
            const Rat& e = h.L_mat(i, j);
            if (e.get_den() != 1 || e < 0) fail("PreconditionViolated", "height matrix must be integral and nonnegative");
            Int p;
            mpz_pow_ui(p.get_mpz_t(), Int(x[i]).get_mpz_t(), e.get_num().get_ui());
            mon *= p;
        }
        best = std::max(best, mon);
    }
    return best;
}

std::vector<CountReport> count_points(const ToricPair& pair, const HeightSystem& h, long S,
                                      const std::vector<double>& schedule, const CountOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    if (S < 1) fail("ConfigError", "S must be positive");
    const Fan& f = pair.fan;
    const std::size_t n = f.n(), k = f.k();
    Rat s;
    IntMatrix Lint = integral_height_matrix(h, &s);
    std::vector<std::vector<long>> E(n, std::vector<long>(k));
    std::vector<long> emax(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (!Lint(i, j).fits_slong_p()) fail("BudgetExceeded", "height exponents too large");
            E[i][j] = Lint(i, j).get_si();
            emax[i] = std::max(emax[i], E[i][j]);
        }
    for (std::size_t i = 0; i < n; ++i)
        if (emax[i] <= 0)
            fail("UnboundedCoordinate", "coordinate " + std::to_string(i) + " is not bounded by the height");

    std::vector<CountReport> out(schedule.size());
    if (schedule.empty()) return out;
    Thresholds th = make_thresholds(schedule, s);
    const u64 Y = th.ymax;

    std::vector<u64> bound(n);
    u64 maxb = 1;
    for (std::size_t i = 0; i < n; ++i) {
        bound[i] = Y >= 1 ? int_root(Y, emax[i]) : 0;
        maxb = std::max(maxb, bound[i]);
    }
    if (static_cast<double>(maxb) > 2e8) fail("BudgetExceeded", "coordinate bound " + std::to_string(maxb) + " too large");
    const std::vector<u64> spf = smallest_prime_factors(maxb);

    const MultiplicitySet& M = pair.mset;
    std::vector<std::vector<u64>> lists(n);
    double estimate = 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (u64 v = 1; v <= bound[i]; ++v) {
            bool ok = true;
            for (u64 x = v; x > 1 && ok;) {
                u64 p = spf[x];
                long e = 0;
                while (x % p == 0) x /= p, ++e;
                if (S % static_cast<long>(p) != 0 && !coord_allowed(M, i, e)) ok = false;
            }
            if (ok) lists[i].push_back(v);
        }
        estimate *= static_cast<double>(lists[i].size());
    }
    if (estimate > opt.budget)
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "estimated %.3Lg tuples exceeds the budget of %.3g",
                      static_cast<long double>(estimate), opt.budget);
        fail("BudgetExceeded", buf);
    }

    // Primitive collections, checked once their last coordinate is assigned.
    std::vector<std::vector<std::vector<std::size_t>>> pc_at(n);
    for (auto& c : primitive_collections(f)) pc_at[*std::max_element(c.begin(), c.end())].push_back(c);
    const bool joint = !coordinatewise(M);

    auto run_block = [&](std::size_t first, std::size_t stride, std::vector<u64>& hist) {
        std::vector<u64> x(n, 0);
        std::vector<std::vector<u64>> acc(n + 1, std::vector<u64>(k, 1));
        std::vector<u64> primes;
        std::vector<long> val(n);
        auto leaf = [&]() {
            if (joint) {
                primes.clear();
                for (std::size_t i = 0; i < n; ++i)
                    for (u64 y = x[i]; y > 1;) {
                        u64 p = spf[y];
                        primes.push_back(p);
                        while (y % p == 0) y /= p;
                    }
                std::sort(primes.begin(), primes.end());
                primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
                for (u64 p : primes) {
                    if (S % static_cast<long>(p) == 0) continue;
                    for (std::size_t i = 0; i < n; ++i) {
                        long e = 0;
                        for (u64 y = x[i]; y % p == 0; y /= p) ++e;
                        val[i] = e;
                    }
                    if (!joint_contains(M, val)) return;
                }
            }
            u64 hgt = *std::max_element(acc[n].begin(), acc[n].end());
            ++hist[bucket(th, Int(std::to_string(hgt)))];
        };
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == n) {
                leaf();
                return;
            }
            const auto& li = lists[i];
            std::size_t start = 0, step = 1;
            if (i == 0) start = first, step = stride;
            for (std::size_t t = start; t < li.size(); t += step) {
                const u64 v = li[t];
                bool over = false;
                for (std::size_t j = 0; j < k; ++j) {
                    acc[i + 1][j] = sat_mul(acc[i][j], sat_pow(v, E[i][j], Y), Y);
                    if (acc[i + 1][j] > Y) over = true;
                }
                if (over) break;  // lists are ascending
                x[i] = v;
                bool coprime = true;
                for (const auto& c : pc_at[i]) {
                    u64 g = 0;
                    for (auto idx : c) g = std::gcd(g, x[idx]);
                    if (g != 1) {
                        coprime = false;
                        break;
                    }
                }
                if (coprime) self(self, i + 1);
            }
        };
        if (n > 0) rec(rec, 0);
    };

    const unsigned nt = std::max(1u, opt.threads);
    std::vector<std::vector<u64>> hists(nt, std::vector<u64>(th.order.size() + 1, 0));
    if (nt == 1) {
        run_block(0, 1, hists[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(run_block, t, nt, std::ref(hists[t]));
        for (auto& t : pool) t.join();
    }
    std::vector<u64> hist(th.order.size(), 0);
    for (const auto& hh : hists)
        for (std::size_t r = 0; r < hist.size(); ++r) hist[r] += hh[r];
    std::vector<Int> cum = cumulate(th, hist);

    Int two_d = 1;
    for (std::size_t i = 0; i < f.d; ++i) two_d *= 2;
    const double ms = ms_since(t0);
    for (std::size_t r = 0; r < schedule.size(); ++r) {
        out[r].B = schedule[r];
        out[r].positive = cum[r];
        out[r].N = two_d * cum[r];
        out[r].method = CountMethod::CoxEnumeration;
        out[r].elapsed_ms = ms;
    }
    return out;
}

CountReport count_points(const ToricPair& pair, const HeightSystem& h, long S, double B, const CountOptions& opt) {
    return count_points(pair, h, S, std::vector<double>{B}, opt).front();
}

std::vector<CountReport> oracle_count(const ToricPair& pair, const std::vector<std::size_t>& dims,
                                      const TorusDivisorQ& L, long S, const std::vector<double>& schedule,
                                      const CountOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    if (S < 1) fail("ConfigError", "S must be positive");
    if (dims.empty()) fail("UnsupportedFan", "no projective factors given");
    Fan expect = projective_space_fan(dims[0]);
    for (std::size_t t = 1; t < dims.size(); ++t) expect = product_fan(expect, projective_space_fan(dims[t]));
    auto cone_set = [](const Fan& f) {
        std::set<Cone> s;
        for (auto c : f.cones) {
            std::sort(c.begin(), c.end());
            s.insert(c);
        }
        return s;
    };
    if (expect.d != pair.fan.d || expect.rays != pair.fan.rays || cone_set(expect) != cone_set(pair.fan))
        fail("UnsupportedFan", "fan is not the stated product of projective spaces");
    const std::size_t n = pair.fan.n();
    if (L.coeffs.size() != n) fail("MalformedDivisor", "divisor length differs from ray count");

    // Multidegree of L; the height is prod_k max|y^(k)|^{deg_k}.
    std::vector<Rat> deg;
    std::vector<std::size_t> offset;
    std::size_t pos = 0;
    Int q = 1;
    for (auto dk : dims) {
        offset.push_back(pos);
        Rat sdeg = 0;
        for (std::size_t i = 0; i <= dk; ++i) sdeg += L.coeffs[pos + i];
        if (sdeg <= 0) fail("PreconditionViolated", "L must have positive degree on every factor");
        deg.push_back(sdeg);
        mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), sdeg.get_den_mpz_t());
        pos += dk + 1;
    }
    std::vector<unsigned long> pdeg;
    for (const auto& dq : deg) pdeg.push_back(Rat(dq * q).get_num().get_ui());

    std::vector<CountReport> out(schedule.size());
    if (schedule.empty()) return out;
    Thresholds th = make_thresholds(schedule, Rat(q));
    const Int Y(std::to_string(th.ymax));

    std::vector<long> bound;
    for (auto p : pdeg) {
        Int r;
        mpz_root(r.get_mpz_t(), Y.get_mpz_t(), p);
        bound.push_back(r.get_si());
    }
    double estimate = 1;
    for (std::size_t t = 0; t < dims.size(); ++t)
        estimate *= std::pow(2.0 * static_cast<double>(bound[t]), static_cast<double>(dims[t] + 1));
    if (estimate > opt.budget) fail("BudgetExceeded", "oracle search space too large");

    std::vector<long> y(n);
    std::vector<u64> hist(th.order.size() + 1, 0);
    const MultiplicitySet& M = pair.mset;

    auto multiplicity_ok = [&]() {
        std::set<long> primes;
        for (long v : y) {
            long a = std::labs(v);
            for (long p = 2; p * p <= a; ++p)
                if (a % p == 0) {
                    primes.insert(p);
                    while (a % p == 0) a /= p;
                }
            if (a > 1) primes.insert(a);
        }
        for (long p : primes) {
            if (S % p == 0) continue;
            IntVec m(n);
            for (std::size_t i = 0; i < n; ++i) {
                long e = 0;
                for (long a = std::labs(y[i]); a % p == 0; a /= p) ++e;
                m[i] = e;
            }
            if (!contains(M, m)) return false;
        }
        return true;
    };

    // factor t, coordinate c within it; hprod is the height of the finished factors and lim
    // the largest coordinate factor t can still afford.
    auto rec = [&](auto&& self, std::size_t t, std::size_t c, long fmax, long g, Int hprod, long lim) -> void {
        if (t == dims.size()) {
            if (hprod <= Y && multiplicity_ok()) ++hist[bucket(th, hprod)];
            return;
        }
        if (c == 0) {
            Int room = Y / hprod, r;
            mpz_root(r.get_mpz_t(), room.get_mpz_t(), pdeg[t]);
            lim = std::min(bound[t], r.get_si());
        }
        if (c == dims[t] + 1) {
            if (g != 1) return;
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), Int(fmax).get_mpz_t(), pdeg[t]);
            Int nh = hprod * pw;
            if (nh > Y) return;
            self(self, t + 1, 0, 0, 0, nh, 0);
            return;
        }
        const long b = lim;
        for (long v = -b; v <= b; ++v) {
            if (v == 0) continue;
            if (c == 0 && v < 0) continue;  // one representative per projective point
            y[offset[t] + c] = v;
            self(self, t, c + 1, std::max(fmax, std::labs(v)), std::gcd(g, std::labs(v)), hprod, lim);
        }
    };
    rec(rec, 0, 0, 0, 0, Int(1), 0);
    hist.pop_back();
    std::vector<Int> cum = cumulate(th, hist);
    const double ms = ms_since(t0);
    for (std::size_t r = 0; r < schedule.size(); ++r) {
        out[r].B = schedule[r];
        out[r].N = cum[r];
        out[r].method = CountMethod::ProjectiveOracle;
        out[r].elapsed_ms = ms;
    }
    return out;
}

Real predicted_count(const ConstantReport& rep, double B) {
    if (B < 1) return 0;
    const Real lb = std::log(static_cast<Real>(B));
    const Real a = static_cast<Real>(rep.inv.a.get_d());
    Real logpart = rep.inv.b == 1 ? 1 : std::pow(lb, static_cast<Real>(rep.inv.b - 1));
    return rep.leading_C * std::pow(static_cast<Real>(B), a) * logpart;
}

std::vector<CompareRow> compare_prediction(const ToricPair& pair, const HeightSystem& h, long S,
                                           const ConstantReport& rep, const std::vector<double>& schedule,
                                           const CountOptions& opt) {
    std::vector<double> sorted = schedule;
    std::sort(sorted.begin(), sorted.end());
    std::vector<CountReport> counts = count_points(pair, h, S, sorted, opt);
    std::vector<CompareRow> rows;
    for (const auto& c : counts) {
        CompareRow r;
        r.B = c.B;
        r.N = c.N;
        r.predicted = predicted_count(rep, c.B);
        if (r.predicted != 0) r.ratio = static_cast<Real>(c.N.get_d()) / r.predicted;
        r.method = c.method;
        r.elapsed_ms = c.elapsed_ms;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace toricm
