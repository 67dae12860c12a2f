#ifndef CENSIM_SCENARIO_IO_HPP
#define CENSIM_SCENARIO_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "censim/armsrace.hpp"
#include "censim/eval.hpp"

namespace censim {

// Strict scenario (de)serialization: unknown keys are rejected with the
// full field path, so a typo in a config never silently changes a run.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);

// Applies "dotted.path=value" overrides to the raw JSON document before
// parsing.  Values parse as JSON when possible, else as strings.
std::string apply_overrides(const std::string& text, const std::vector<std::string>& overrides);

// The four stock scenarios: figure1-polymorphism, figure2-steganography,
// blacklist-poly-vs-steg, tool-reeval.
std::vector<std::string> stock_scenario_names();
Scenario stock_scenario(const std::string& name);

// Report emission.
std::string cycles_to_csv(const std::vector<CycleReport>& reports);
std::string report_to_json(const Scenario& s, const std::vector<CycleReport>& reports,
                           bool frozen);
std::string tool_scores_to_csv(const std::vector<ToolScore>& scores);

// Writes via a temp file + rename so partial runs never leave truncated
// reports behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

} // namespace censim

#endif
