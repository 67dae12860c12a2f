#ifndef CENSIM_ARMSRACE_HPP
#define CENSIM_ARMSRACE_HPP

#include <string>
#include <vector>

#include "censim/censor.hpp"
#include "censim/economics.hpp"
#include "censim/evader.hpp"

namespace censim {

// Accuracy the censor demands of a classifier before it counts as
// adequate (used by the evaluator).
struct AccuracyDemand {
    double max_fn_rate = 0.05;
    double max_fp_rate = 0.05;
};

// Everything a run needs: traffic model, censor catalog and economics,
// the evader's tool schedule, and run parameters.
struct Scenario {
    std::string name;
    TrafficSpec traffic;
    FeatureCatalog catalog;
    std::vector<Probe> probes;
    CostMatrix cost_matrix{1.0, 1.0};
    EconomyConfig econ;
    std::vector<Tool> tools;            // declared tools, addressable by id
    std::vector<std::string> schedule;  // tool id per cycle; last entry repeats
    int n_cycles = 1;
    double training_fraction = 0.5;
    SelectionStrategy strategy = SelectionStrategy::exhaustive;
    int bins = 16;
    double alpha = 1.0;
    AccuracyDemand demand;
    double obfuscation_epsilon = 0.05;

    const Tool& tool_by_id(const std::string& id) const; // ConfigError if unknown
    const Tool& tool_for_cycle(int cycle) const;
    void validate() const;
};

struct CycleReport {
    int cycle = 0;
    std::string tool_id;
    FeatureSet feature_set;
    CostBreakdown costs;
    ConfusionReport confusion;
};

// Censor state carried across cycles.
struct CensorState {
    FeatureSet accumulated_features; // union of every set ever deployed
    FeatureSet current_features;
    PosteriorModel model;
    bool trained = false;
};

// One development cycle: generate cycle traffic, apply the active tool,
// split train/eval, re-select features (unless frozen), train, classify,
// and account costs.  Updates the censor state in place.
CycleReport run_cycle(const Scenario& s, CensorState& state, int cycle, bool frozen);

// Runs all cycles.  With frozen == true the censor selects and trains in
// cycle 0 only and reuses that classifier afterwards (the diagnostic
// "before the censor responds" mode).
std::vector<CycleReport> run_scenario(const Scenario& s, bool frozen = false);

// Sum of per-cycle totals.
double grand_total(const std::vector<CycleReport>& reports);

// The per-cycle traffic for a given cycle (fresh flows, cycle-salted
// seed, active tool applied).  Exposed for the evaluator and tests.
TrafficTrace cycle_traffic(const Scenario& s, const Tool& tool, int cycle);

// Stratified train/eval split preserving flow order within each class.
void split_trace(const TrafficTrace& trace, double training_fraction,
                 TrafficTrace& train, TrafficTrace& eval);

} // namespace censim

#endif
