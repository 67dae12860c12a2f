#ifndef CENSIM_EVAL_HPP
#define CENSIM_EVAL_HPP

#include <map>
#include <string>
#include <vector>

#include "censim/armsrace.hpp"

namespace censim {

// A tool's score: the cost of the cheapest feature set that classifies
// its traffic within the censor's demanded error rates.  Higher is better
// for the evader; infeasible means the whole catalog was defeated.
struct ToolScore {
    std::string tool_id;
    bool feasible = false;
    FeatureSet feature_set;     // empty when infeasible
    CostBreakdown costs;        // zero when infeasible
    std::map<std::string, bool> obfuscated; // feature id -> flagged
    std::uint64_t catalog_fingerprint = 0;
};

// Enumerates catalog subsets in nondecreasing non-classification cost
// (ties: smaller set, then lexicographic) and returns the first subset
// whose held-out error meets the demand.  Requires |catalog| <= 20.
ToolScore evaluate_tool(const Tool& tool, const Scenario& scenario, const AccuracyDemand& demand);

// Flags a feature as obfuscated when the best single-feature classifier's
// balanced error on the tool's traffic is >= 0.5 - epsilon.  Returned map
// covers every catalog feature; balanced errors included for reporting.
struct ObfuscationReport {
    std::map<std::string, bool> flags;
    std::map<std::string, double> balanced_error;
    // flagged features ordered by surrogate cost, cheapest first
    std::vector<std::string> obfuscated_by_cost;
};

ObfuscationReport obfuscation_report(const Tool& tool, const Scenario& scenario, double epsilon);

// Ranks tools best-for-the-evader first: infeasible above any finite
// score, then descending total, ties by tool id.  All scores must come
// from the same catalog.
std::vector<ToolScore> compare_tools(const std::vector<Tool>& tools, const Scenario& scenario,
                                     const AccuracyDemand& demand);

// Ordering predicate used by compare_tools; exposed for tests.
bool score_ranks_before(const ToolScore& a, const ToolScore& b);

} // namespace censim

#endif
