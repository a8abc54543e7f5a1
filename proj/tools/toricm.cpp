#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "toricm/config.hpp"

using namespace toricm;

namespace {

struct Options {
    std::string config, preset, out, format;
    std::vector<double> B;
    long prime_limit = 0;
    double budget = 0;
    unsigned threads = 0;
};

JobConfig load_job(const Options& o) {
    if (!o.config.empty() && !o.preset.empty()) fail("ConfigError", "use either --config or --preset");
    JobConfig job;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) fail("ConfigError", "cannot read " + o.config);
        std::stringstream ss;
        ss << in.rdbuf();
        job = job_from_text(ss.str());
    } else if (!o.preset.empty()) {
        job = preset_job(o.preset);
    } else {
        fail("ConfigError", "one of --config or --preset is required");
    }
    if (!o.B.empty()) job.B = o.B;
    if (o.prime_limit) job.prime_limit = o.prime_limit;
    if (o.budget > 0) job.budget = o.budget;
    if (o.threads) job.threads = o.threads;
    return job;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) fail("ConfigError", "cannot write " + o.out);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_invariants(const Options& o) {
    JobConfig job = load_job(o);
    JobContext ctx = build_job(job);
    emit(o, dump(invariants_json(compute_invariants(ctx.pair, ctx.height))));
    return 0;
}

int cmd_constants(const Options& o) {
    JobConfig job = load_job(o);
    JobContext ctx = build_job(job);
    ConstantReport r = leading_constant(ctx.pair, ctx.height, job.S, job.prime_limit, job.threads);
    emit(o, dump(constants_json(r)));
    return 0;
}

int cmd_count(const Options& o) {
    JobConfig job = load_job(o);
    JobContext ctx = build_job(job);
    CountOptions opt{job.budget, job.threads};
    auto rows = count_points(ctx.pair, ctx.height, job.S, job.B, opt);
    emit(o, o.format == "json" ? dump(counts_json(rows)) : counts_csv(rows));
    return 0;
}

int cmd_compare(const Options& o) {
    JobConfig job = load_job(o);
    JobContext ctx = build_job(job);
    CountOptions opt{job.budget, job.threads};
    std::vector<CompareRow> rows;
    if (!job.B.empty()) {
        ConstantReport r = leading_constant(ctx.pair, ctx.height, job.S, job.prime_limit, job.threads);
        rows = compare_prediction(ctx.pair, ctx.height, job.S, r, job.B, opt);
        for (const auto& d : r.diagnostics) std::cerr << "diagnostic: " << d << "\n";
    }
    if (o.format == "json") {
        json j;
        j["version"] = kSchemaVersion;
        j["rows"] = json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"B", r.B},
                                 {"N", r.N.get_str()},
                                 {"predicted", fmt12(r.predicted)},
                                 {"ratio", r.ratio ? json(fmt12(*r.ratio)) : json("n/a")},
                                 {"method", to_string(r.method)},
                                 {"elapsed_ms", r.elapsed_ms}});
        emit(o, dump(j));
    } else {
        emit(o, compare_csv(rows));
    }
    return 0;
}

int cmd_selftest(const Options& o) {
    std::ostringstream s;
    bool ok = true;
    for (const auto& e : preset_expectations()) {
        std::string line;
        try {
            JobContext ctx = build_job(preset_job(e.name));
            InvariantReport r = compute_invariants(ctx.pair, ctx.height);
            const bool pass = r.a == e.a && r.b == e.b && r.rigidity == e.rigidity;
            ok = ok && pass;
            line = std::string(pass ? "PASS " : "FAIL ") + e.name + " a=" + to_string(r.a) + " b=" +
                   std::to_string(r.b) + " rigidity=" + to_string(r.rigidity);
        } catch (const Error& err) {
            ok = false;
            line = "FAIL " + e.name + " " + err.what();
        }
        s << line << "\n";
    }
    emit(o, s.str());
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariants, leading constants and point counts for toric pairs"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "job configuration (JSON)");
        sub->add_option("--preset", o.preset, "preset name, parameters after colons (pn-mfull:3:2)");
        sub->add_option("--B", o.B, "height bound (repeatable)")->take_all();
        sub->add_option("--prime-limit", o.prime_limit, "largest prime in the truncated Euler product");
        sub->add_option("--budget", o.budget, "tuple budget for enumeration");
        sub->add_option("--threads", o.threads, "worker cap");
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    auto* inv = app.add_subcommand("invariants", "a, b, Gamma°, rigidity and alpha");
    auto* con = app.add_subcommand("constants", "C_inf, local densities, Euler product and leading constant");
    auto* cnt = app.add_subcommand("count", "enumerate points of bounded height");
    auto* cmp = app.add_subcommand("compare", "counts against the predicted asymptotic");
    auto* st = app.add_subcommand("selftest", "check every preset against its expected invariants");
    for (auto* s : {inv, con, cnt, cmp}) add_common(s);
    st->add_option("--out", o.out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (*inv) return cmd_invariants(o);
        if (*con) return cmd_constants(o);
        if (*cnt) return cmd_count(o);
        if (*cmp) return cmd_compare(o);
        if (*st) return cmd_selftest(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
    return 2;
}
