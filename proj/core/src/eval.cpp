#include "censim/eval.hpp"

#include <algorithm>

#include "censim/errors.hpp"

namespace censim {

namespace {

struct Candidate {
    FeatureSet fs;
    double non_cls_cost = 0.0;
};

// nondecreasing non-classification cost; ties toward smaller sets, then
// lexicographic ids
bool candidate_precedes(const Candidate& a, const Candidate& b) {
    if (a.non_cls_cost != b.non_cls_cost) return a.non_cls_cost < b.non_cls_cost;
    if (a.fs.size() != b.fs.size()) return a.fs.size() < b.fs.size();
    return a.fs < b.fs;
}

std::vector<Candidate> enumerate_subsets(const Scenario& s) {
    const std::size_t n = s.catalog.size();
    if (n > 20)
        throw ConfigError("evaluate_tool: exhaustive enumeration limited to 20 features");
    FeatureSet all_ids;
    for (const Feature& f : s.catalog.features()) all_ids.push_back(f.id);
    std::vector<Candidate> subsets;
    subsets.reserve(1ULL << n);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        Candidate c;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) c.fs.push_back(all_ids[i]);
        c.non_cls_cost = non_classification_cost(c.fs, s.econ, s.catalog);
        subsets.push_back(std::move(c));
    }
    std::stable_sort(subsets.begin(), subsets.end(), candidate_precedes);
    return subsets;
}

} // namespace

ToolScore evaluate_tool(const Tool& tool, const Scenario& scenario, const AccuracyDemand& demand) {
    TrafficTrace trace = cycle_traffic(scenario, tool, 0);
    TrafficTrace train, eval;
    split_trace(trace, scenario.training_fraction, train, eval);

    FeatureSet all_ids;
    for (const Feature& f : scenario.catalog.features()) all_ids.push_back(f.id);
    FeatureTable train_table = build_feature_table(scenario.catalog, all_ids, train);
    FeatureTable eval_table = build_feature_table(scenario.catalog, all_ids, eval);

    ToolScore score;
    score.tool_id = tool.id;
    score.catalog_fingerprint = scenario.catalog.fingerprint();

    for (const Candidate& c : enumerate_subsets(scenario)) {
        PosteriorModel model = train_posterior(train_table, c.fs, scenario.bins, scenario.alpha);
        ClassificationResult r = classify_table(model, scenario.cost_matrix, eval_table);
        if (r.report.fn_rate <= demand.max_fn_rate && r.report.fp_rate <= demand.max_fp_rate) {
            score.feasible = true;
            score.feature_set = c.fs;
            // the score prices the feature set itself (its deployment cost),
            // not the consequence costs of the resulting decisions
            score.costs = cycle_cost(c.fs, FeatureSet{}, 0.0, scenario.econ, scenario.catalog);
            break;
        }
    }
    return score;
}

ObfuscationReport obfuscation_report(const Tool& tool, const Scenario& scenario, double epsilon) {
    TrafficTrace trace = cycle_traffic(scenario, tool, 0);
    TrafficTrace train, eval;
    split_trace(trace, scenario.training_fraction, train, eval);

    FeatureSet all_ids;
    for (const Feature& f : scenario.catalog.features()) all_ids.push_back(f.id);
    FeatureTable train_table = build_feature_table(scenario.catalog, all_ids, train);
    FeatureTable eval_table = build_feature_table(scenario.catalog, all_ids, eval);

    // symmetric unit costs: decisions reduce to most-probable-type
    CostMatrix unit(1.0, 1.0);

    ObfuscationReport report;
    for (const std::string& id : all_ids) {
        FeatureSet single{id};
        PosteriorModel model = train_posterior(train_table, single, scenario.bins, scenario.alpha);
        ClassificationResult r = classify_table(model, unit, eval_table);
        double balanced = 0.5 * (r.report.fn_rate + r.report.fp_rate);
        report.balanced_error[id] = balanced;
        report.flags[id] = balanced >= 0.5 - epsilon;
    }

    std::vector<std::string> flagged;
    for (const auto& [id, on] : report.flags)
        if (on) flagged.push_back(id);
    std::sort(flagged.begin(), flagged.end(), [&](const std::string& a, const std::string& b) {
        double ca = non_classification_cost(FeatureSet{a}, scenario.econ, scenario.catalog);
        double cb = non_classification_cost(FeatureSet{b}, scenario.econ, scenario.catalog);
        if (ca != cb) return ca < cb;
        return a < b;
    });
    report.obfuscated_by_cost = std::move(flagged);
    return report;
}

bool score_ranks_before(const ToolScore& a, const ToolScore& b) {
    if (a.feasible != b.feasible) return !a.feasible; // infeasible outranks any finite score
    if (a.feasible && a.costs.total != b.costs.total) return a.costs.total > b.costs.total;
    return a.tool_id < b.tool_id;
}

std::vector<ToolScore> compare_tools(const std::vector<Tool>& tools, const Scenario& scenario,
                                     const AccuracyDemand& demand) {
    if (tools.empty()) throw ConfigError("compare_tools: no tools given");
    std::vector<ToolScore> scores;
    scores.reserve(tools.size());
    for (const Tool& tool : tools) {
        ToolScore s = evaluate_tool(tool, scenario, demand);
        s.obfuscated = obfuscation_report(tool, scenario, scenario.obfuscation_epsilon).flags;
        scores.push_back(std::move(s));
    }
    for (const ToolScore& s : scores)
        if (s.catalog_fingerprint != scores.front().catalog_fingerprint)
            throw ConfigError("compare_tools: scores from different catalogs");
    std::stable_sort(scores.begin(), scores.end(), score_ranks_before);
    return scores;
}

} // namespace censim
