#pragma once

#include "hardylab/symbols.hpp"

#include <json.hpp>

#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace hardylab::harness {

using nlohmann::json;

inline constexpr const char* version = "1.0.0";

// Every numeric default used by the experiments.
struct Defaults {
    std::size_t base_count = 4096;
    int refinement_depth = 40;
    std::size_t nodes_per_octave = 512;
    int depth = 30;          // histogram levels
    int n_max = 20;          // profile levels
    int fit_lo = 8;          // profile fit range
    int fit_hi = 16;
    std::size_t N = 256;     // matrix truncation
    std::size_t K = 0;       // 0: 16 N
    std::vector<std::size_t> Ns = {128, 256, 512};
    std::size_t moments = 16384;
};

const Defaults& defaults();

struct ExperimentConfig {
    std::string experiment;
    std::string output_dir;
    json params = json::object();
    json sampling = json::object();
    json analysis = json::object();
};

// Throws ValidationError on a malformed or empty config, UsageError on an
// unknown experiment id.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);

struct VerdictRow {
    std::string check;
    std::string module;
    std::string symbol;
    json params = json::object();
    std::string outcome;
    std::string expected;
    bool required = true;  // an undecided or contrary outcome sets exit code 2
    bool ok = false;
    json evidence = json::array();
    std::string note;
};

struct Report {
    std::string experiment;
    std::string tool_version = version;
    json config;
    std::deque<VerdictRow> rows;  // deque: Context::row hands out stable references
    std::vector<std::string> files;

    int exit_code() const;  // 0 all required rows ok, 2 otherwise
};

json to_json(const Report& r);

// Runs one experiment, writes its CSV files and report.json into
// config.output_dir.
Report run_experiment(const ExperimentConfig& config);

struct ExperimentInfo {
    std::string id;
    std::string description;
    std::string anchor;
    std::vector<std::string> params;  // accepted keys of "params"
};

// stable registry order
const std::vector<ExperimentInfo>& list_experiments();
json experiments_json();

// Parameter access with range checks; records every value it hands out so
// the report can echo the effective configuration.
class Context {
public:
    Context(const ExperimentConfig& config, Report& report);

    double param(const std::string& key, double fallback, double lo, double hi);
    std::vector<double> param_list(const std::string& key, const std::vector<double>& fallback,
                                   double lo, double hi);
    long analysis(const std::string& key, long fallback, long lo, long hi);
    std::vector<std::size_t> analysis_list(const std::string& key, const std::vector<std::size_t>& fallback);
    // base_fallback 0 selects the global default
    symbols::TraceOptions trace_options(std::size_t base_fallback = 0);
    std::size_t base_count(std::size_t base_fallback = 0);
    int refinement_depth();

    // relative file name inside output_dir; returns the full path
    std::string file(const std::string& name);
    VerdictRow& row(const std::string& check, const std::string& module, const std::string& symbol);

    const json& effective() const { return effective_; }

private:
    const ExperimentConfig& config_;
    Report& report_;
    json effective_;
};

using ExperimentFn = std::function<void(Context&)>;
const ExperimentFn& experiment_body(const std::string& id);

} // namespace hardylab::harness
