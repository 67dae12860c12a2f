#ifndef CENSIM_CENSOR_HPP
#define CENSIM_CENSOR_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "censim/economics.hpp"
#include "censim/features.hpp"
#include "censim/traffic.hpp"

namespace censim {

enum class Action { allow, disallow };

const char* to_string(Action a);

// Consequence costs c(type, action).  False negatives and false positives
// must cost something; correct actions may be free or even rewarded.
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(double disallowed_allow, double allowed_disallow,
               double disallowed_disallow = 0.0, double allowed_allow = 0.0);

    double at(TrafficType t, Action a) const;

private:
    // indexed [type][action]
    std::array<std::array<double, 2>, 2> c_{{{0.0, 0.0}, {0.0, 0.0}}};
};

// Posterior over {allowed, disallowed}; indexed by TrafficType.
using TypeDistribution = std::array<double, 2>;

inline double& prob(TypeDistribution& d, TrafficType t) { return d[static_cast<std::size_t>(t)]; }
inline double prob(const TypeDistribution& d, TrafficType t) { return d[static_cast<std::size_t>(t)]; }

// Discretized class-conditional likelihoods for one feature.  Scalar
// features use equal-width bins fit on the training range; categorical
// features use one bin per observed category plus an "unseen" bucket.
struct LikelihoodTable {
    bool categorical = false;
    std::vector<double> edges;              // bins+1 strictly increasing (scalar)
    std::vector<std::string> categories;    // observed categories (categorical)
    std::array<std::vector<double>, 2> probs; // [type][bin], rows sum to 1

    std::size_t bin_of(const FeatureValue& v) const;
};

// Naive-Bayes-style posterior model; immutable once trained.
struct PosteriorModel {
    FeatureSet feature_set;
    std::map<std::string, LikelihoodTable> tables;
    TypeDistribution priors{0.5, 0.5};
    int bins = 16;
    double alpha = 1.0;
};

struct ConfusionReport {
    std::size_t true_positives = 0;  // disallowed flows blocked
    std::size_t false_positives = 0; // allowed flows blocked
    std::size_t true_negatives = 0;  // allowed flows passed
    std::size_t false_negatives = 0; // disallowed flows passed
    double fn_rate = 0.0;
    double fp_rate = 0.0;

    std::size_t total() const {
        return true_positives + false_positives + true_negatives + false_negatives;
    }
};

// Precomputed feature columns for a trace; lets subset search and the
// evaluator avoid re-extracting features for every candidate set.
struct FeatureTable {
    std::vector<TrafficType> labels;
    std::map<std::string, std::vector<FeatureValue>> columns; // feature id -> per-flow value

    std::size_t n_flows() const { return labels.size(); }
};

FeatureTable build_feature_table(const FeatureCatalog& catalog, const FeatureSet& fs,
                                 const TrafficTrace& trace);

// Fits the discretized naive-Bayes model.  Requires both classes present;
// an empty feature set yields a priors-only model.
PosteriorModel train_posterior(const TrafficTrace& training, const FeatureCatalog& catalog,
                               const FeatureSet& fs, int bins, double alpha);
PosteriorModel train_posterior(const FeatureTable& table, const FeatureSet& fs,
                               int bins, double alpha);

// Bayes-rule posterior; features treated as conditionally independent.
// Out-of-range scalar values clamp to the nearest edge bin.
TypeDistribution posterior(const PosteriorModel& model, const Flow& flow,
                           const FeatureCatalog& catalog);
TypeDistribution posterior_from_row(const PosteriorModel& model,
                                    const FeatureTable& table, std::size_t row);

// Expected-cost-minimizing action (Bayes decision); exact ties go to allow.
Action decide(const TypeDistribution& post, const CostMatrix& cm);

// Cost actually incurred given the hidden true label.
double instance_cost(TrafficType true_type, Action action, const CostMatrix& cm);

struct ClassificationResult {
    std::vector<Action> actions;
    ConfusionReport report;
    double total_cost = 0.0;
};

ClassificationResult classify_trace(const PosteriorModel& model, const CostMatrix& cm,
                                    const TrafficTrace& trace, const FeatureCatalog& catalog);
ClassificationResult classify_table(const PosteriorModel& model, const CostMatrix& cm,
                                    const FeatureTable& table);

enum class SelectionStrategy { exhaustive, greedy };

// Picks the feature set minimizing estimated cycle cost on the training
// trace (classification + op + store + imp against the prior set).  Ties
// break toward smaller sets, then lexicographic ids.  Exhaustive search
// refuses catalogs larger than 20 features.
FeatureSet select_feature_set(const FeatureCatalog& catalog, const FeatureSet& prior_features,
                              const TrafficTrace& training, const CostMatrix& cm,
                              const EconomyConfig& econ, SelectionStrategy strategy,
                              int bins, double alpha);

// Model dump/load for reproducibility audits (JSON text).
std::string model_to_json(const PosteriorModel& model);
PosteriorModel model_from_json(const std::string& text);

} // namespace censim

#endif
