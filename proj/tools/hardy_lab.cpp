#include "hardylab/errors.hpp"
#include "hardylab/harness.hpp"
#include "hardylab/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace hardylab;

namespace {

void print_table(const harness::Report& r)
{
    std::printf("experiment %s (hardy-lab %s)\n", r.experiment.c_str(), r.tool_version.c_str());
    for (const auto& v : r.rows) {
        std::string params = v.params.empty() ? "" : v.params.dump();
        std::printf("  %-4s %-28s %-10s %-34s %s -> %s (expected %s)%s\n", v.ok ? "ok" : "FAIL",
                    v.check.c_str(), v.module.c_str(), v.symbol.c_str(), params.c_str(),
                    v.outcome.c_str(), v.expected.c_str(), v.required ? "" : " [informational]");
    }
    std::printf("files:");
    for (const auto& f : r.files)
        std::printf(" %s", f.c_str());
    std::printf("\nexit code %d\n", r.exit_code());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hardy-lab: composition operators on the Hardy space, numerically"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
    std::string config_path;
    bool quiet = false;
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_flag("--quiet", quiet, "suppress the verdict table");

    auto* list = app.add_subcommand("list", "list registered experiments");
    bool as_json = false;
    list->add_flag("--json", as_json, "machine-readable output");

    auto* trace = app.add_subcommand("trace", "sample a boundary trace to CSV");
    std::string symbol_json, out_path;
    std::size_t base_count = 4096;
    int depth = 40;
    trace->add_option("--symbol", symbol_json, "symbol spec as JSON, or @file")->required();
    trace->add_option("--out", out_path, "output CSV")->required();
    trace->add_option("--base-count", base_count, "uniform cells on (0, pi]");
    trace->add_option("--depth", depth, "dyadic refinement depth near t = 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*list) {
            if (as_json) {
                std::cout << harness::experiments_json().dump(2) << "\n";
            } else {
                for (const auto& e : harness::list_experiments())
                    std::printf("%-26s %s [%s]\n", e.id.c_str(), e.description.c_str(), e.anchor.c_str());
            }
            return 0;
        }
        if (*run) {
            const auto config = harness::load_config(config_path);
            const auto report = harness::run_experiment(config);
            if (!quiet)
                print_table(report);
            return report.exit_code();
        }
        if (*trace) {
            const std::string text = !symbol_json.empty() && symbol_json[0] == '@'
                                         ? io::read_text(symbol_json.substr(1))
                                         : symbol_json;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(text);
            } catch (const nlohmann::json::parse_error& e) {
                throw ValidationError(std::string("symbol is not valid JSON: ") + e.what());
            }
            symbols::TraceOptions opt;
            opt.base_count = base_count;
            opt.refinement_depth = depth;
            const auto tr = symbols::sample_trace(symbols::make_symbol(io::spec_from_json(j)), opt);
            io::write_trace_csv(out_path, tr);
            std::printf("%zu nodes written to %s\n", tr.mirrored ? 2 * tr.size() : tr.size(), out_path.c_str());
            return 0;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "hardy-lab: %s error: %s\n", e.kind().c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "hardy-lab: error: %s\n", e.what());
        return 1;
    }
    return 1;
}
