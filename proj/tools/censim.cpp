// censim — command-line front end for the censorship-economics simulator.
//
// Verbs:
//   run       run a scenario, write scenario.json / cycles.csv / report.json
//   eval      score tools and write tool_scores.csv
//   sweep     run a scenario across a list of seeds
//   validate  schema-check a scenario file
//
// Exit codes: 0 success, 1 runtime error, 2 configuration/schema error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "censim/errors.hpp"
#include "censim/scenario_io.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw censim::ConfigError("cannot read scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

censim::Scenario load_with_overrides(const std::string& path,
                                     const std::vector<std::string>& overrides,
                                     std::optional<std::uint64_t> seed,
                                     std::string* resolved_json = nullptr) {
    std::string text = slurp(path);
    std::vector<std::string> all = overrides;
    if (seed) all.push_back("seed=" + std::to_string(*seed));
    text = censim::apply_overrides(text, all);
    censim::Scenario s = censim::scenario_from_json(text);
    if (resolved_json) *resolved_json = censim::scenario_to_json(s);
    return s;
}

int run_one(const censim::Scenario& s, const std::string& resolved, const fs::path& out_dir,
            bool frozen) {
    fs::create_directories(out_dir);
    std::vector<censim::CycleReport> reports = censim::run_scenario(s, frozen);
    censim::atomic_write(out_dir / "scenario.json", resolved);
    censim::atomic_write(out_dir / "cycles.csv", censim::cycles_to_csv(reports));
    censim::atomic_write(out_dir / "report.json", censim::report_to_json(s, reports, frozen));
    std::cout << "scenario " << s.name << ": grand total cost "
              << censim::grand_total(reports) << ", final fn_rate "
              << reports.back().confusion.fn_rate << ", final fp_rate "
              << reports.back().confusion.fp_rate << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Economic arms-race simulator for censorship evasion tools"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    bool frozen = false;
    std::vector<std::string> tool_ids;
    std::vector<std::uint64_t> sweep_seeds;

    CLI::App* run = app.add_subcommand("run", "Run a scenario and write reports");
    run->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--override", overrides, "key=value overrides (dotted paths)");
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_flag("--frozen-classifier", frozen,
                  "Diagnostic mode: censor keeps the cycle-1 classifier");

    CLI::App* eval = app.add_subcommand("eval", "Score tools against the scenario's catalog");
    eval->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
    eval->add_option("tools", tool_ids, "Tool ids declared in the scenario")->required();
    eval->add_option("--out", out_dir, "Output directory");
    eval->add_option("--override", overrides, "key=value overrides (dotted paths)");
    eval->add_option("--seed", seed, "Override the scenario seed");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario across several seeds");
    sweep->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
    sweep->add_option("--seeds", sweep_seeds, "Seed list")->required();
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--override", overrides, "key=value overrides (dotted paths)");
    sweep->add_flag("--frozen-classifier", frozen,
                    "Diagnostic mode: censor keeps the cycle-1 classifier");

    CLI::App* validate = app.add_subcommand("validate", "Schema-check a scenario file");
    validate->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage problems are configuration errors
    }

    try {
        if (run->parsed()) {
            std::string resolved;
            censim::Scenario s = load_with_overrides(scenario_path, overrides, seed, &resolved);
            return run_one(s, resolved, out_dir, frozen);
        }
        if (eval->parsed()) {
            std::string resolved;
            censim::Scenario s = load_with_overrides(scenario_path, overrides, seed, &resolved);
            std::vector<censim::Tool> tools;
            for (const std::string& id : tool_ids) tools.push_back(s.tool_by_id(id));
            std::vector<censim::ToolScore> scores =
                censim::compare_tools(tools, s, s.demand);
            fs::create_directories(out_dir);
            censim::atomic_write(fs::path(out_dir) / "tool_scores.csv",
                                 censim::tool_scores_to_csv(scores));
            std::cout << censim::tool_scores_to_csv(scores);
            return 0;
        }
        if (sweep->parsed()) {
            for (std::uint64_t s_seed : sweep_seeds) {
                std::string resolved;
                censim::Scenario s =
                    load_with_overrides(scenario_path, overrides, s_seed, &resolved);
                fs::path dir = fs::path(out_dir) / ("seed-" + std::to_string(s_seed));
                run_one(s, resolved, dir, frozen);
            }
            return 0;
        }
        if (validate->parsed()) {
            censim::Scenario s = censim::scenario_from_json(slurp(scenario_path));
            std::cout << "OK: " << s.name << " (" << s.catalog.size() << " features, "
                      << s.n_cycles << " cycles)\n";
            return 0;
        }
    } catch (const censim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
