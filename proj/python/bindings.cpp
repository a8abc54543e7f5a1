#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "toricm/config.hpp"

namespace py = pybind11;
using namespace toricm;

namespace {

// Jobs cross the boundary as JSON text; the Python side decodes it.
JobConfig load(const std::string& preset, const std::string& config) {
    if (!preset.empty() && !config.empty()) fail("ConfigError", "use either preset or config");
    if (!preset.empty()) return preset_job(preset);
    if (config.empty()) fail("ConfigError", "one of preset or config is required");
    return job_from_text(config);
}

std::string invariants(const std::string& preset, const std::string& config) {
    JobContext ctx = build_job(load(preset, config));
    py::gil_scoped_release release;
    return invariants_json(compute_invariants(ctx.pair, ctx.height)).dump();
}

std::string constants(const std::string& preset, const std::string& config, long prime_limit, unsigned threads) {
    JobConfig job = load(preset, config);
    if (prime_limit > 0) job.prime_limit = prime_limit;
    JobContext ctx = build_job(job);
    py::gil_scoped_release release;
    return constants_json(leading_constant(ctx.pair, ctx.height, job.S, job.prime_limit, threads)).dump();
}

std::string count(const std::string& preset, const std::string& config, const std::vector<double>& B, double budget,
                  unsigned threads) {
    JobConfig job = load(preset, config);
    JobContext ctx = build_job(job);
    CountOptions opt;
    opt.budget = budget;
    opt.threads = threads;
    py::gil_scoped_release release;
    return counts_json(count_points(ctx.pair, ctx.height, job.S, B, opt)).dump();
}

std::string preset_config(const std::string& name) { return job_to_json(preset_job(name)).dump(); }

py::list selftest() {
    py::list out;
    for (const auto& e : preset_expectations()) {
        JobContext ctx = build_job(preset_job(e.name));
        InvariantReport r = compute_invariants(ctx.pair, ctx.height);
        py::dict row;
        row["name"] = e.name;
        row["a"] = to_string(r.a);
        row["b"] = r.b;
        row["rigidity"] = to_string(r.rigidity);
        row["ok"] = r.a == e.a && r.b == e.b && r.rigidity == e.rigidity;
        out.append(row);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Invariants, leading constants and point counts for toric pairs";
    py::register_exception<Error>(m, "ToricmError", PyExc_RuntimeError);
    m.def("preset_names", &preset_names);
    m.def("preset_config", &preset_config, py::arg("name"));
    m.def("invariants_json", &invariants, py::arg("preset") = "", py::arg("config") = "");
    m.def("constants_json", &constants, py::arg("preset") = "", py::arg("config") = "", py::arg("prime_limit") = 0,
          py::arg("threads") = 1);
    m.def("count_json", &count, py::arg("preset") = "", py::arg("config") = "", py::arg("B") = std::vector<double>{},
          py::arg("budget") = 2e9, py::arg("threads") = 1);
    m.def("selftest", &selftest);
    m.def("exit_code_for", &exit_code_for, py::arg("code"));
#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
