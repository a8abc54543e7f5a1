#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "toricm/counting.hpp"

namespace toricm {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

struct JobConfig {
    std::string preset;                  // informational once resolved
    std::size_t rank = 0;
    std::vector<IntVec> rays;
    std::vector<Cone> cones;
    MultiplicitySet mset;
    RatVec divisor;
    long S = 1;
    std::vector<double> B;
    long prime_limit = 1000000;
    double budget = 2e9;
    std::size_t samples = 100000;
    unsigned threads = 1;
    std::vector<std::size_t> oracle_dims;  // projective factor dimensions, when the fan is such a product

    bool operator==(const JobConfig&) const;
};

// Field paths appear in ConfigError messages, e.g. "fan.cones[2][1]".
JobConfig job_from_json(const json& j);
json job_to_json(const JobConfig& c);
// Parses JSON text; syntax errors report line and column.
JobConfig job_from_text(const std::string& text);

// Names accept parameters after colons: "pn-full:4", "pn-mfull:3:2", "hirzebruch-d-integral:2".
JobConfig preset_job(const std::string& name);
std::vector<std::string> preset_names();

struct PresetExpectation {
    std::string name;
    Rat a;
    std::size_t b = 0;
    Rigidity rigidity = Rigidity::AdjointRigid;
};
// Expected a, b and rigidity for representative instances of every preset.
std::vector<PresetExpectation> preset_expectations();

struct JobContext {
    Fan fan;
    ToricPair pair;
    TorusDivisorQ divisor;
    HeightSystem height;
};
JobContext build_job(const JobConfig& c);

json rat_json(const Rat& q);
json invariants_json(const InvariantReport& r);
json constants_json(const ConstantReport& r);
json counts_json(const std::vector<CountReport>& rows);

std::string counts_csv(const std::vector<CountReport>& rows);
std::string compare_csv(const std::vector<CompareRow>& rows);
std::string fmt12(long double x);

// Exit status for an error code: 1 refusal, 2 configuration problem, 3 budget.
int exit_code_for(const std::string& code);

}  // namespace toricm
