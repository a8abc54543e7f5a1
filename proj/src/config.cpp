#include "toricm/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace toricm {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) { fail("ConfigError", path + ": " + msg); }

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) bad(path, "missing field '" + key + "'");
    return j.at(key);
}

long get_long(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<long>();
}

std::size_t get_index(const json& j, const std::string& path) {
    long v = get_long(j, path);
    if (v < 0) bad(path, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

std::vector<long> get_longs(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array");
    std::vector<long> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_long(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::size_t> get_indices(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_index(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

IntVec get_intvec(const json& j, const std::string& path) {
    IntVec out;
    for (long v : get_longs(j, path)) out.push_back(Int(v));
    return out;
}

std::vector<IntVec> get_intvecs(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array");
    std::vector<IntVec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_intvec(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Rat get_rat(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (!j.is_string()) bad(path, "expected a rational written as \"p/q\" or an integer");
    try {
        return parse_rat(j.get<std::string>());
    } catch (const Error& e) {
        bad(path, e.what());
    }
}

json intvec_json(const IntVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.get_si());
    return a;
}

json intvecs_json(const std::vector<IntVec>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(intvec_json(x));
    return a;
}

MultiplicitySet mset_from_json(const json& j, std::size_t n, const std::string& path) {
    const std::string kind = need(j, "kind", path).is_string() ? j.at("kind").get<std::string>() : "";
    try {
        if (kind == "full") return MultiplicitySet::full(n);
        if (kind == "campana") {
            auto w = get_longs(need(j, "weights", path), path + ".weights");
            if (w.size() != n) bad(path + ".weights", "length differs from the ray count " + std::to_string(n));
            return MultiplicitySet::campana(w);
        }
        if (kind == "weak_campana") {
            long m = get_long(need(j, "weight", path), path + ".weight");
            std::vector<std::size_t> sup;
            if (j.contains("support")) sup = get_indices(j.at("support"), path + ".support");
            for (std::size_t t = 0; t < sup.size(); ++t)
                if (sup[t] >= n) bad(path + ".support[" + std::to_string(t) + "]", "ray index out of range");
            return MultiplicitySet::weak_campana(n, m, sup);
        }
        if (kind == "darmon") {
            auto w = get_longs(need(j, "moduli", path), path + ".moduli");
            if (w.size() != n) bad(path + ".moduli", "length differs from the ray count " + std::to_string(n));
            return MultiplicitySet::darmon(w);
        }
        if (kind == "integral") {
            auto f = get_indices(need(j, "forced", path), path + ".forced");
            for (std::size_t t = 0; t < f.size(); ++t)
                if (f[t] >= n) bad(path + ".forced[" + std::to_string(t) + "]", "ray index out of range");
            return MultiplicitySet::integral(n, f);
        }
        if (kind == "custom" || kind == "finite") {
            const std::string key = kind == "custom" ? "generators" : "members";
            auto g = get_intvecs(need(j, key, path), path + "." + key);
            for (std::size_t t = 0; t < g.size(); ++t)
                if (g[t].size() != n) bad(path + "." + key + "[" + std::to_string(t) + "]", "length differs from the ray count");
            return kind == "custom" ? MultiplicitySet::custom(n, g) : MultiplicitySet::finite(n, g);
        }
    } catch (const Error& e) {
        if (std::string(e.what()).rfind("ConfigError: " + path, 0) == 0) throw;
        bad(path, e.what());
    }
    bad(path + ".kind", "unknown multiplicity kind '" + kind + "'");
}

json mset_json(const MultiplicitySet& M) {
    json j;
    j["kind"] = to_string(M.kind);
    switch (M.kind) {
        case MultKind::Campana: j["weights"] = M.weights; break;
        case MultKind::Darmon: j["moduli"] = M.weights; break;
        case MultKind::WeakCampana:
            j["weight"] = M.weight;
            j["support"] = M.indices;
            break;
        case MultKind::Integral: j["forced"] = M.indices; break;
        case MultKind::Custom: j["generators"] = intvecs_json(M.elements); break;
        case MultKind::Finite: j["members"] = intvecs_json(M.elements); break;
        default: break;
    }
    return j;
}

bool same_mset(const MultiplicitySet& a, const MultiplicitySet& b) {
    return a.kind == b.kind && a.n == b.n && a.weights == b.weights && a.weight == b.weight &&
           a.indices == b.indices && a.elements == b.elements && a.adjoined == b.adjoined;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

long param(const std::vector<std::string>& parts, std::size_t i, long dflt, const std::string& name) {
    if (parts.size() <= i) return dflt;
    try {
        std::size_t used = 0;
        long v = std::stol(parts[i], &used);
        if (used != parts[i].size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        bad("preset", "parameter '" + parts[i] + "' of " + name + " is not an integer");
    }
}

JobConfig from_fan(const std::string& name, const Fan& f, const MultiplicitySet& M, RatVec L) {
    JobConfig c;
    c.preset = name;
    c.rank = f.d;
    c.rays = f.rays;
    c.cones = f.cones;
    c.mset = M;
    c.divisor = std::move(L);
    return c;
}

RatVec unit_divisor(std::size_t n, std::size_t i) {
    RatVec v(n, Rat(0));
    v[i] = 1;
    return v;
}

}  // namespace

bool JobConfig::operator==(const JobConfig& o) const {
    return preset == o.preset && rank == o.rank && rays == o.rays && cones == o.cones && same_mset(mset, o.mset) &&
           divisor == o.divisor && S == o.S && B == o.B && prime_limit == o.prime_limit && budget == o.budget &&
           samples == o.samples && threads == o.threads && oracle_dims == o.oracle_dims;
}

JobConfig job_from_json(const json& j) {
    if (!j.is_object()) bad("$", "expected a JSON object");
    if (j.contains("version") && get_long(j.at("version"), "version") != kSchemaVersion)
        bad("version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");

    JobConfig c;
    if (j.contains("preset")) {
        if (!j.at("preset").is_string()) bad("preset", "expected a string");
        c = preset_job(j.at("preset").get<std::string>());
    }
    if (j.contains("fan")) {
        const json& f = j.at("fan");
        c.rank = get_index(need(f, "rank", "fan"), "fan.rank");
        c.rays = get_intvecs(need(f, "rays", "fan"), "fan.rays");
        for (std::size_t r = 0; r < c.rays.size(); ++r)
            if (c.rays[r].size() != c.rank)
                bad("fan.rays[" + std::to_string(r) + "]", "length differs from fan.rank");
        const json& cj = need(f, "cones", "fan");
        if (!cj.is_array()) bad("fan.cones", "expected an array");
        c.cones.clear();
        for (std::size_t t = 0; t < cj.size(); ++t) {
            const std::string p = "fan.cones[" + std::to_string(t) + "]";
            Cone cone = get_indices(cj[t], p);
            for (std::size_t s = 0; s < cone.size(); ++s)
                if (cone[s] >= c.rays.size())
                    bad(p + "[" + std::to_string(s) + "]", "ray index " + std::to_string(cone[s]) + " out of range");
            c.cones.push_back(cone);
        }
        if (!j.contains("multiplicity") && c.mset.n != c.rays.size()) c.mset = MultiplicitySet::full(c.rays.size());
        if (!j.contains("divisor") && c.divisor.size() != c.rays.size()) bad("divisor", "required with an explicit fan");
        if (!j.contains("preset")) c.preset.clear();
        c.oracle_dims.clear();
    }
    if (c.rays.empty()) bad("fan", "no fan given (set 'fan' or 'preset')");
    const std::size_t n = c.rays.size();
    if (j.contains("multiplicity")) c.mset = mset_from_json(j.at("multiplicity"), n, "multiplicity");
    if (j.contains("divisor")) {
        const json& d = j.at("divisor");
        if (!d.is_array()) bad("divisor", "expected an array of rationals");
        c.divisor.clear();
        for (std::size_t i = 0; i < d.size(); ++i) c.divisor.push_back(get_rat(d[i], "divisor[" + std::to_string(i) + "]"));
    }
    if (c.divisor.size() != n) bad("divisor", "length differs from the ray count " + std::to_string(n));
    if (c.mset.n != n) bad("multiplicity", "length differs from the ray count " + std::to_string(n));
    if (j.contains("S")) {
        c.S = get_long(j.at("S"), "S");
        if (c.S < 1) bad("S", "must be a positive integer");
    }
    if (j.contains("B")) {
        const json& b = j.at("B");
        if (!b.is_array()) bad("B", "expected an array of numbers");
        c.B.clear();
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!b[i].is_number()) bad("B[" + std::to_string(i) + "]", "expected a number");
            double v = b[i].get<double>();
            if (!(v >= 0) || !std::isfinite(v)) bad("B[" + std::to_string(i) + "]", "must be finite and nonnegative");
            c.B.push_back(v);
        }
    }
    if (j.contains("prime_limit")) {
        c.prime_limit = get_long(j.at("prime_limit"), "prime_limit");
        if (c.prime_limit < 3) bad("prime_limit", "must be at least 3");
    }
    if (j.contains("budget")) {
        if (!j.at("budget").is_number()) bad("budget", "expected a number");
        c.budget = j.at("budget").get<double>();
        if (!(c.budget > 0)) bad("budget", "must be positive");
    }
    if (j.contains("samples")) c.samples = get_index(j.at("samples"), "samples");
    if (j.contains("threads")) {
        c.threads = static_cast<unsigned>(get_index(j.at("threads"), "threads"));
        if (c.threads == 0) bad("threads", "must be positive");
    }
    if (j.contains("oracle_dims")) c.oracle_dims = get_indices(j.at("oracle_dims"), "oracle_dims");
    for (auto& cone : c.cones) std::sort(cone.begin(), cone.end());
    return c;
}

json job_to_json(const JobConfig& c) {
    json j;
    j["version"] = kSchemaVersion;
    if (!c.preset.empty()) j["preset"] = c.preset;
    j["fan"] = {{"rank", c.rank}, {"rays", intvecs_json(c.rays)}, {"cones", c.cones}};
    j["multiplicity"] = mset_json(c.mset);
    json d = json::array();
    for (const auto& q : c.divisor) d.push_back(rat_json(q));
    j["divisor"] = d;
    j["S"] = c.S;
    j["B"] = c.B;
    j["prime_limit"] = c.prime_limit;
    j["budget"] = c.budget;
    j["samples"] = c.samples;
    j["threads"] = c.threads;
    if (!c.oracle_dims.empty()) j["oracle_dims"] = c.oracle_dims;
    return j;
}

JobConfig job_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') ++line, col = 1;
            else ++col;
        }
        fail("ConfigError", "line " + std::to_string(line) + ", column " + std::to_string(col) + ": JSON syntax error");
    }
    return job_from_json(j);
}

std::vector<std::string> preset_names() {
    return {"p1-full",       "p1-campana-2-2", "p2-full",   "p2-weak-campana-2",     "pn-full",
            "pn-mfull",      "p1xp1-full",     "hirzebruch-d-integral", "p1-gm-integral"};
}

JobConfig preset_job(const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts.empty()) bad("preset", "empty preset name");
    const std::string& name = parts[0];
    JobConfig c;
    if (name == "p1-full") {
        c = from_fan(spec, projective_space_fan(1), MultiplicitySet::full(2), unit_divisor(2, 0));
        c.oracle_dims = {1};
    } else if (name == "p1-campana-2-2") {
        c = from_fan(spec, projective_space_fan(1), MultiplicitySet::campana({2, 2}), unit_divisor(2, 0));
        c.oracle_dims = {1};
    } else if (name == "p2-full") {
        c = from_fan(spec, projective_space_fan(2), MultiplicitySet::full(3), unit_divisor(3, 0));
        c.oracle_dims = {2};
    } else if (name == "p2-weak-campana-2") {
        c = from_fan(spec, projective_space_fan(2), MultiplicitySet::weak_campana(3, 2), unit_divisor(3, 0));
        c.oracle_dims = {2};
    } else if (name == "pn-full" || name == "pn-mfull") {
        long n = param(parts, 1, 3, name);
        if (n < 2 || n > 12) bad("preset", name + " needs 2 <= n <= 12");
        const std::size_t nn = static_cast<std::size_t>(n);
        MultiplicitySet M = MultiplicitySet::full(nn);
        if (name == "pn-mfull") {
            long m = param(parts, 2, 2, name);
            if (m < 1) bad("preset", "pn-mfull needs m >= 1");
            M = MultiplicitySet::weak_campana(nn, m);
        }
        c = from_fan(spec, projective_space_fan(nn - 1), M, unit_divisor(nn, 0));
        c.oracle_dims = {nn - 1};
    } else if (name == "p1xp1-full") {
        Fan f = product_fan(projective_space_fan(1), projective_space_fan(1));
        c = from_fan(spec, f, MultiplicitySet::full(4), RatVec{1, 0, 1, 0});
        c.oracle_dims = {1, 1};
    } else if (name == "hirzebruch-d-integral") {
        long d = param(parts, 1, 1, name);
        if (d < 1) bad("preset", "hirzebruch-d-integral needs d >= 1");
        // Integral along the two divisors meeting the (-d)-curve; L = -K.
        c = from_fan(spec, hirzebruch_fan(d), MultiplicitySet::integral(4, {0, 2}), RatVec{1, 1, 1, 1});
    } else if (name == "p1-gm-integral") {
        c = from_fan(spec, projective_space_fan(1), MultiplicitySet::integral(2, {0, 1}), unit_divisor(2, 0));
        c.oracle_dims = {1};
    } else {
        bad("preset", "unknown preset '" + name + "'");
    }
    const std::size_t allowed = (name == "pn-mfull") ? 3 : (name == "pn-full" || name == "hirzebruch-d-integral") ? 2 : 1;
    if (parts.size() > allowed) bad("preset", "too many parameters for " + name);
    for (auto& cone : c.cones) std::sort(cone.begin(), cone.end());
    return c;
}

std::vector<PresetExpectation> preset_expectations() {
    auto binom = [](long n, long k) {
        if (k < 0 || k > n) return 0L;
        long r = 1;
        for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    std::vector<PresetExpectation> out{
        {"p1-full", 2, 1, Rigidity::AdjointRigid},
        {"p1-campana-2-2", 1, 1, Rigidity::AdjointRigid},
        {"p2-full", 3, 1, Rigidity::AdjointRigid},
        {"p2-weak-campana-2", Rat(3, 2), 4, Rigidity::AdjointRigid},
        {"p1xp1-full", 2, 2, Rigidity::AdjointRigid},
        {"hirzebruch-d-integral:1", 1, 1, Rigidity::ToricAdjointRigidOnly},
        {"hirzebruch-d-integral:2", 1, 1, Rigidity::ToricAdjointRigidOnly},
        {"p1-gm-integral", 0, 0, Rigidity::ToricAdjointRigidOnly},
    };
    for (long n = 2; n <= 5; ++n) out.push_back({"pn-full:" + std::to_string(n), n, 1, Rigidity::AdjointRigid});
    for (auto [n, m] : std::vector<std::pair<long, long>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {4, 2}}) {
        const long b = binom(m + n - 1, n - 1) - binom(m - 1, n - 1) - n + 1;
        out.push_back({"pn-mfull:" + std::to_string(n) + ":" + std::to_string(m), ratio(n, m),
                       static_cast<std::size_t>(b), Rigidity::AdjointRigid});
    }
    return out;
}

JobContext build_job(const JobConfig& c) {
    JobContext ctx;
    ctx.fan.d = c.rank;
    ctx.fan.rays = c.rays;
    ctx.fan.cones = c.cones;
    validate_fan(ctx.fan);
    ctx.pair = make_pair(ctx.fan, c.mset);
    ctx.divisor.coeffs = c.divisor;
    ctx.height = height_system(ctx.fan, ctx.divisor);
    return ctx;
}

json rat_json(const Rat& q) { return to_string(q); }

std::string fmt12(long double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", x);
    return buf;
}

json invariants_json(const InvariantReport& r) {
    json j;
    j["version"] = kSchemaVersion;
    j["a"] = rat_json(r.a);
    j["a_decimal"] = fmt12(static_cast<long double>(r.a.get_d()));
    j["b"] = r.b;
    json av = json::array();
    for (const auto& q : r.alpha_vec) av.push_back(rat_json(q));
    j["alpha_vec"] = av;
    j["alpha_strictly_positive"] = r.alpha_strictly_positive;
    json rd = json::array();
    for (const auto& q : r.rep_divisor.coeffs) rd.push_back(rat_json(q));
    j["rep_divisor"] = rd;
    j["gamma_circle"] = intvecs_json(r.gamma_circle);
    j["rigidity"] = to_string(r.rigidity);
    if (!r.rigidity_reason.empty()) j["rigidity_reason"] = r.rigidity_reason;
    if (r.alpha_const) {
        j["alpha"] = rat_json(*r.alpha_const);
        j["alpha_decimal"] = fmt12(static_cast<long double>(r.alpha_const->get_d()));
    } else {
        j["alpha"] = nullptr;
    }
    j["pic_circle"] = {{"rank", r.pic_circle.rank},
                       {"torsion", json::array()},
                       {"pullback_injective", r.pic_circle.pullback_injective}};
    for (const auto& t : r.pic_circle.invariant_factors) j["pic_circle"]["torsion"].push_back(t.get_si());
    j["quasi_proper"] = r.quasi_proper;
    j["closure_multiple"] = r.closure_multiple;
    j["closure_axes"] = r.closure_axes;
    j["diagnostics"] = r.diagnostics;
    return j;
}

json constants_json(const ConstantReport& r) {
    json j;
    j["version"] = kSchemaVersion;
    j["invariants"] = invariants_json(r.inv);
    j["branch"] = to_string(r.branch);
    j["c_inf"] = rat_json(r.c_inf);
    if (r.c_inf_adjoint) j["c_inf_adjoint_rigid"] = rat_json(*r.c_inf_adjoint);
    if (r.general) {
        json g;
        g["value"] = rat_json(r.general->value);
        g["gamma_bar"] = intvecs_json(r.general->gamma_bar);
        g["refined_rays"] = intvecs_json(r.general->refined.rays);
        json cones = json::array();
        for (const auto& cd : r.general->cones) {
            cones.push_back({{"rays", cd.rays},
                             {"index", cd.index_snf.get_str()},
                             {"torsion_ratio", rat_json(cd.torsion_ratio)},
                             {"z_dim", cd.z_dim},
                             {"z_volume_factorial", rat_json(cd.z_volume_factorial)},
                             {"contribution", rat_json(cd.contribution)},
                             {"parent_cone", cd.parent_cone}});
        }
        g["cones"] = cones;
        g["diagnostics"] = r.general->diagnostics;
        j["general"] = g;
    }
    j["prefactor"] = rat_json(r.prefactor);
    json e;
    e["value"] = fmt12(r.euler.value);
    e["truncated"] = fmt12(r.euler.truncated);
    e["interval"] = {fmt12(r.euler.lo), fmt12(r.euler.hi)};
    e["log_tail_bound"] = fmt12(r.euler.log_tail_bound);
    e["convergence_exponent"] = rat_json(r.euler.c);
    e["prime_limit"] = r.euler.prime_limit;
    e["prime_count"] = r.euler.prime_count;
    json ps = json::array();
    for (const auto& ld : r.euler.first_primes) {
        json p{{"p", ld.p}, {"value", fmt12(ld.value)}, {"tail_bound", fmt12(ld.tail_bound)}, {"truncation", ld.truncation}};
        if (ld.closed_form) p["closed_form"] = fmt12(*ld.closed_form);
        p["divides_S"] = ld.divides_S;
        ps.push_back(p);
    }
    e["local_densities"] = ps;
    j["euler_product"] = e;
    j["leading_C"] = fmt12(r.leading_C);
    j["leading_C_interval"] = {fmt12(r.leading_lo), fmt12(r.leading_hi)};
    j["diagnostics"] = r.diagnostics;
    return j;
}

json counts_json(const std::vector<CountReport>& rows) {
    json j;
    j["version"] = kSchemaVersion;
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"B", r.B}, {"N", r.N.get_str()}, {"method", to_string(r.method)}, {"elapsed_ms", r.elapsed_ms}});
    j["rows"] = a;
    return j;
}

std::string counts_csv(const std::vector<CountReport>& rows) {
    std::string s = "B,N,method,elapsed_ms\n";
    for (const auto& r : rows)
        s += fmt12(r.B) + "," + r.N.get_str() + "," + to_string(r.method) + "," + fmt12(r.elapsed_ms) + "\n";
    return s;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string s = "B,N,predicted,ratio,method,elapsed_ms\n";
    for (const auto& r : rows)
        s += fmt12(r.B) + "," + r.N.get_str() + "," + fmt12(r.predicted) + "," + (r.ratio ? fmt12(*r.ratio) : "n/a") +
             "," + to_string(r.method) + "," + fmt12(r.elapsed_ms) + "\n";
    return s;
}

int exit_code_for(const std::string& code) {
    static const std::vector<std::string> config_codes{
        "ConfigError",   "MalformedCone", "MalformedDivisor", "MalformedMatrix",     "MalformedVector",
        "MalformedLP",   "NotComplete",   "NotSmooth",        "NotPointed",          "ZeroVector",
        "UnsupportedFan", "NotNef",       "NotBig",           "UnboundedCoordinate", "PreconditionViolated"};
    if (code == "BudgetExceeded") return 3;
    if (std::find(config_codes.begin(), config_codes.end(), code) != config_codes.end()) return 2;
    return 1;
}

}  // namespace toricm
