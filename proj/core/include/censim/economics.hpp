#ifndef CENSIM_ECONOMICS_HPP
#define CENSIM_ECONOMICS_HPP

#include <map>
#include <string>

#include "censim/features.hpp"

namespace censim {

// Surrogate cost rates.  All per-cycle except imp_rate, which is charged
// once per newly implemented feature.
struct EconomyConfig {
    std::map<std::string, double> op_cost;            // measurement id -> cost per cycle
    double store_rate = 0.0;                          // per byte per cycle
    double imp_rate = 0.0;                            // per line of code, one-time
    std::map<FeatureLevel, double> level_multipliers; // applied to store cost

    double multiplier(FeatureLevel level) const;      // defaults to 1.0
    double op(const std::string& measurement) const;  // defaults to 0.0
    void validate() const;                            // ConfigError on bad rates/ordering
};

// The four per-cycle cost terms.
struct CostBreakdown {
    double classification = 0.0;
    double operating = 0.0;
    double storage = 0.0;
    double implementation = 0.0;
    double total = 0.0;

    bool operator==(const CostBreakdown&) const = default;
};

// store_rate * store_bytes * level multiplier.
double feature_store_cost(const Feature& f, const EconomyConfig& econ);

// Zero when the feature was already implemented in a prior cycle.
double feature_imp_cost(const Feature& f, const FeatureSet& prior, const EconomyConfig& econ);

// Per-cycle total: classification + operating (distinct measurements of
// fs_new, charged once each) + storage (fs_new) + implementation (fs_new
// minus fs_prior).
CostBreakdown cycle_cost(const FeatureSet& fs_new,
                         const FeatureSet& fs_prior,
                         double classification_total,
                         const EconomyConfig& econ,
                         const FeatureCatalog& catalog);

// Operating + storage + implementation-from-scratch; the subset ordering
// key used by the evaluator.
double non_classification_cost(const FeatureSet& fs, const EconomyConfig& econ,
                               const FeatureCatalog& catalog);

} // namespace censim

#endif
