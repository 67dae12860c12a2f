#include "censim/economics.hpp"

#include <algorithm>

#include "censim/errors.hpp"

namespace censim {

double EconomyConfig::multiplier(FeatureLevel level) const {
    auto it = level_multipliers.find(level);
    return it == level_multipliers.end() ? 1.0 : it->second;
}

double EconomyConfig::op(const std::string& measurement) const {
    auto it = op_cost.find(measurement);
    return it == op_cost.end() ? 0.0 : it->second;
}

void EconomyConfig::validate() const {
    for (const auto& [m, c] : op_cost)
        if (c < 0.0) throw ConfigError("economy: op_cost[" + m + "] is negative");
    if (store_rate < 0.0) throw ConfigError("economy: store_rate is negative");
    if (imp_rate < 0.0) throw ConfigError("economy: imp_rate is negative");
    for (const auto& [level, m] : level_multipliers)
        if (m < 1.0)
            throw ConfigError(std::string("economy: level_multipliers[") + to_string(level) +
                              "] must be >= 1");
    if (multiplier(FeatureLevel::flow_distributional) < multiplier(FeatureLevel::packet_level))
        throw ConfigError("economy: flow-distributional multiplier below packet-level");
    if (multiplier(FeatureLevel::stateful) < multiplier(FeatureLevel::flow_distributional))
        throw ConfigError("economy: stateful multiplier below flow-distributional");
}

double feature_store_cost(const Feature& f, const EconomyConfig& econ) {
    return econ.store_rate * static_cast<double>(f.store_bytes) * econ.multiplier(f.level);
}

double feature_imp_cost(const Feature& f, const FeatureSet& prior, const EconomyConfig& econ) {
    if (std::binary_search(prior.begin(), prior.end(), f.id)) return 0.0;
    return econ.imp_rate * static_cast<double>(f.impl_loc);
}

CostBreakdown cycle_cost(const FeatureSet& fs_new,
                         const FeatureSet& fs_prior,
                         double classification_total,
                         const EconomyConfig& econ,
                         const FeatureCatalog& catalog) {
    CostBreakdown b;
    b.classification = classification_total;
    for (const std::string& m : measurements_of(catalog, fs_new))
        b.operating += econ.op(m);
    for (const std::string& id : fs_new) {
        const Feature& f = catalog.at(id);
        b.storage += feature_store_cost(f, econ);
        b.implementation += feature_imp_cost(f, fs_prior, econ);
    }
    b.total = b.classification + b.operating + b.storage + b.implementation;
    return b;
}

double non_classification_cost(const FeatureSet& fs, const EconomyConfig& econ,
                               const FeatureCatalog& catalog) {
    CostBreakdown b = cycle_cost(fs, FeatureSet{}, 0.0, econ, catalog);
    return b.operating + b.storage + b.implementation;
}

} // namespace censim
