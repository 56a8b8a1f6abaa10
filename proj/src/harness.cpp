#include "hardylab/errors.hpp"
#include "hardylab/harness.hpp"
#include "hardylab/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <mutex>

namespace hardylab::harness {

namespace fs = std::filesystem;

const Defaults& defaults()
{
    static const Defaults d;
    return d;
}

namespace {

const std::vector<std::string> sampling_keys = {"base_count", "refinement_depth", "nodes_per_octave"};
const std::vector<std::string> analysis_keys = {"depth", "n_max", "fit_lo", "fit_hi", "N",
                                                "K",     "Ns",    "moments"};

bool contains(const std::vector<std::string>& v, const std::string& s)
{
    return std::find(v.begin(), v.end(), s) != v.end();
}

const ExperimentInfo& find_info(const std::string& id)
{
    for (const auto& e : list_experiments())
        if (e.id == id)
            return e;
    throw UsageError("unknown experiment '" + id + "' (see `hardy-lab list`)");
}

void check_section(const json& j, const char* name, const std::vector<std::string>& allowed)
{
    if (!j.is_object())
        throw ValidationError(std::string("config section '") + name + "' must be an object");
    for (const auto& item : j.items())
        if (!contains(allowed, item.key()))
            throw ValidationError(std::string("unknown key '") + item.key() + "' in '" + name + "'");
}

std::mutex report_mutex;

} // namespace

ExperimentConfig parse_config(const json& j)
{
    if (!j.is_object() || j.empty())
        throw ValidationError("config is empty");
    static const std::vector<std::string> top = {"experiment", "output_dir", "params",
                                                 "sampling",   "analysis",   "deterministic"};
    for (const auto& item : j.items())
        if (!contains(top, item.key()))
            throw ValidationError("unknown config key '" + item.key() + "'");
    if (!j.contains("experiment") || !j["experiment"].is_string())
        throw ValidationError("config requires a string 'experiment'");
    ExperimentConfig c;
    c.experiment = j["experiment"].get<std::string>();
    const auto& info = find_info(c.experiment);
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string() || j["output_dir"].get<std::string>().empty())
            throw ValidationError("'output_dir' must be a non-empty string");
        c.output_dir = j["output_dir"].get<std::string>();
    } else {
        c.output_dir = "hardy-lab-out/" + c.experiment;
    }
    if (j.contains("deterministic") && !(j["deterministic"].is_boolean() && j["deterministic"].get<bool>()))
        throw ValidationError("'deterministic' is always on and may only be set to true");
    if (j.contains("params")) {
        check_section(j["params"], "params", info.params);
        c.params = j["params"];
    }
    if (j.contains("sampling")) {
        check_section(j["sampling"], "sampling", sampling_keys);
        c.sampling = j["sampling"];
    }
    if (j.contains("analysis")) {
        check_section(j["analysis"], "analysis", analysis_keys);
        c.analysis = j["analysis"];
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    const auto text = io::read_text(path);
    json j;
    try {
        j = text.empty() ? json() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

int Report::exit_code() const
{
    for (const auto& r : rows)
        if (r.required && !r.ok)
            return 2;
    return 0;
}

json to_json(const Report& r)
{
    json j;
    j["experiment"] = r.experiment;
    j["tool_version"] = r.tool_version;
    j["config"] = r.config;
    j["verdicts"] = json::array();
    for (const auto& v : r.rows) {
        json x;
        x["check"] = v.check;
        x["module"] = v.module;
        x["symbol"] = v.symbol;
        x["params"] = v.params;
        x["outcome"] = v.outcome;
        x["expected"] = v.expected;
        x["required"] = v.required;
        x["ok"] = v.ok;
        x["evidence"] = v.evidence;
        x["note"] = v.note;
        j["verdicts"].push_back(x);
    }
    j["files"] = r.files;
    j["exit_code"] = r.exit_code();
    return j;
}

Context::Context(const ExperimentConfig& config, Report& report) : config_(config), report_(report)
{
    effective_ = {{"params", json::object()}, {"sampling", json::object()}, {"analysis", json::object()}};
}

double Context::param(const std::string& key, double fallback, double lo, double hi)
{
    double v = fallback;
    if (config_.params.contains(key)) {
        if (!config_.params[key].is_number())
            throw ValidationError("param '" + key + "' must be a number");
        v = config_.params[key].get<double>();
    }
    if (!(v >= lo && v <= hi) || !std::isfinite(v))
        throw ValidationError("param '" + key + "' = " + std::to_string(v) + " outside [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    effective_["params"][key] = v;
    return v;
}

std::vector<double> Context::param_list(const std::string& key, const std::vector<double>& fallback,
                                        double lo, double hi)
{
    std::vector<double> v = fallback;
    if (config_.params.contains(key)) {
        const auto& a = config_.params[key];
        if (!a.is_array() || a.empty())
            throw ValidationError("param '" + key + "' must be a non-empty array");
        v.clear();
        for (const auto& x : a) {
            if (!x.is_number())
                throw ValidationError("param '" + key + "' must hold numbers");
            v.push_back(x.get<double>());
        }
    }
    for (double x : v)
        if (!(x >= lo && x <= hi))
            throw ValidationError("param '" + key + "' entry " + std::to_string(x) + " outside [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
    effective_["params"][key] = v;
    return v;
}

long Context::analysis(const std::string& key, long fallback, long lo, long hi)
{
    long v = fallback;
    if (config_.analysis.contains(key)) {
        if (!config_.analysis[key].is_number_integer())
            throw ValidationError("analysis '" + key + "' must be an integer");
        v = config_.analysis[key].get<long>();
    }
    if (v < lo || v > hi)
        throw ValidationError("analysis '" + key + "' = " + std::to_string(v) + " outside [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    effective_["analysis"][key] = v;
    return v;
}

std::vector<std::size_t> Context::analysis_list(const std::string& key,
                                                const std::vector<std::size_t>& fallback)
{
    std::vector<std::size_t> v = fallback;
    if (config_.analysis.contains(key)) {
        const auto& a = config_.analysis[key];
        if (!a.is_array() || a.size() < 3)
            throw ValidationError("analysis '" + key + "' must be an array of at least 3 sizes");
        v.clear();
        for (const auto& x : a) {
            if (!x.is_number_unsigned() || x.get<std::size_t>() < 8 || x.get<std::size_t>() > 1024)
                throw ValidationError("analysis '" + key + "' entries must be integers in [8, 1024]");
            v.push_back(x.get<std::size_t>());
        }
    }
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] != 2 * v[i - 1])
            throw ValidationError("analysis '" + key + "' must double at each step");
    effective_["analysis"][key] = v;
    return v;
}

std::size_t Context::base_count(std::size_t base_fallback)
{
    long v = static_cast<long>(base_fallback ? base_fallback : defaults().base_count);
    if (config_.sampling.contains("base_count")) {
        if (!config_.sampling["base_count"].is_number_integer())
            throw ValidationError("sampling 'base_count' must be an integer");
        v = config_.sampling["base_count"].get<long>();
    }
    if (v < 64 || v > (1L << 22))
        throw ValidationError("sampling 'base_count' outside [64, 4194304]");
    effective_["sampling"]["base_count"] = v;
    return static_cast<std::size_t>(v);
}

int Context::refinement_depth()
{
    long v = defaults().refinement_depth;
    if (config_.sampling.contains("refinement_depth")) {
        if (!config_.sampling["refinement_depth"].is_number_integer())
            throw ValidationError("sampling 'refinement_depth' must be an integer");
        v = config_.sampling["refinement_depth"].get<long>();
    }
    if (v < 4 || v > 60)
        throw ValidationError("sampling 'refinement_depth' outside [4, 60]");
    effective_["sampling"]["refinement_depth"] = v;
    return static_cast<int>(v);
}

symbols::TraceOptions Context::trace_options(std::size_t base_fallback)
{
    symbols::TraceOptions o;
    o.base_count = base_count(base_fallback);
    o.refinement_depth = refinement_depth();
    long npo = static_cast<long>(defaults().nodes_per_octave);
    if (config_.sampling.contains("nodes_per_octave")) {
        if (!config_.sampling["nodes_per_octave"].is_number_integer())
            throw ValidationError("sampling 'nodes_per_octave' must be an integer");
        npo = config_.sampling["nodes_per_octave"].get<long>();
    }
    if (npo < 16 || npo > (1L << 16))
        throw ValidationError("sampling 'nodes_per_octave' outside [16, 65536]");
    effective_["sampling"]["nodes_per_octave"] = npo;
    o.nodes_per_octave = static_cast<std::size_t>(npo);
    return o;
}

std::string Context::file(const std::string& name)
{
    report_.files.push_back(name);
    return (fs::path(config_.output_dir) / name).string();
}

VerdictRow& Context::row(const std::string& check, const std::string& module, const std::string& symbol)
{
    VerdictRow r;
    r.check = check;
    r.module = module;
    r.symbol = symbol;
    report_.rows.push_back(std::move(r));
    return report_.rows.back();
}

Report run_experiment(const ExperimentConfig& config)
{
    const auto& body = experiment_body(config.experiment);
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec)
        throw ValidationError("cannot create output directory " + config.output_dir + ": " + ec.message());
    Report report;
    report.experiment = config.experiment;
    Context ctx(config, report);
    body(ctx);
    report.config = {{"experiment", config.experiment},
                     {"output_dir", config.output_dir},
                     {"deterministic", true},
                     {"params", ctx.effective()["params"]},
                     {"sampling", ctx.effective()["sampling"]},
                     {"analysis", ctx.effective()["analysis"]}};
    for (const auto& f : report.files) {
        const auto p = fs::path(config.output_dir) / f;
        if (!fs::exists(p) || fs::file_size(p) == 0)
            throw Error("output", "output file missing or empty: " + p.string());
    }
    report.files.push_back("report.json");
    std::lock_guard<std::mutex> lock(report_mutex);
    io::write_text((fs::path(config.output_dir) / "report.json").string(), to_json(report).dump(2) + "\n");
    return report;
}

} // namespace hardylab::harness
