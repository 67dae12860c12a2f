#include "censim/censor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "censim/errors.hpp"

namespace censim {

const char* to_string(Action a) {
    return a == Action::allow ? "allow" : "disallow";
}

CostMatrix::CostMatrix(double disallowed_allow, double allowed_disallow,
                       double disallowed_disallow, double allowed_allow) {
    if (disallowed_allow <= 0.0)
        throw ConfigError("cost matrix: c(disallowed, allow) must be positive");
    if (allowed_disallow <= 0.0)
        throw ConfigError("cost matrix: c(allowed, disallow) must be positive");
    c_[static_cast<std::size_t>(TrafficType::disallowed)][static_cast<std::size_t>(Action::allow)] =
        disallowed_allow;
    c_[static_cast<std::size_t>(TrafficType::allowed)][static_cast<std::size_t>(Action::disallow)] =
        allowed_disallow;
    c_[static_cast<std::size_t>(TrafficType::disallowed)][static_cast<std::size_t>(Action::disallow)] =
        disallowed_disallow;
    c_[static_cast<std::size_t>(TrafficType::allowed)][static_cast<std::size_t>(Action::allow)] =
        allowed_allow;
}

double CostMatrix::at(TrafficType t, Action a) const {
    return c_[static_cast<std::size_t>(t)][static_cast<std::size_t>(a)];
}

std::size_t LikelihoodTable::bin_of(const FeatureValue& v) const {
    if (categorical) {
        const auto* tag = std::get_if<std::string>(&v);
        if (!tag) throw ConfigError("categorical table given a scalar value");
        auto it = std::lower_bound(categories.begin(), categories.end(), *tag);
        if (it != categories.end() && *it == *tag)
            return static_cast<std::size_t>(it - categories.begin());
        return categories.size(); // unseen bucket
    }
    const auto* x = std::get_if<double>(&v);
    if (!x) throw ConfigError("scalar table given a categorical value");
    // clamp out-of-range values to the edge bins
    std::size_t n_bins = edges.size() - 1;
    if (*x <= edges.front()) return 0;
    if (*x >= edges.back()) return n_bins - 1;
    auto it = std::upper_bound(edges.begin(), edges.end(), *x);
    std::size_t b = static_cast<std::size_t>(it - edges.begin()) - 1;
    return std::min(b, n_bins - 1);
}

FeatureTable build_feature_table(const FeatureCatalog& catalog, const FeatureSet& fs,
                                 const TrafficTrace& trace) {
    FeatureTable table;
    table.labels.reserve(trace.size());
    for (const Flow& f : trace) table.labels.push_back(f.true_type);
    for (const std::string& id : fs) {
        const Feature& feature = catalog.at(id);
        std::vector<FeatureValue>& col = table.columns[id];
        col.reserve(trace.size());
        for (const Flow& f : trace) col.push_back(compute_feature(feature, f));
    }
    return table;
}

namespace {

LikelihoodTable fit_table(const std::vector<FeatureValue>& col,
                          const std::vector<TrafficType>& labels, int bins, double alpha) {
    LikelihoodTable t;
    t.categorical = std::holds_alternative<std::string>(col.front());

    std::size_t n_bins;
    if (t.categorical) {
        for (const FeatureValue& v : col) t.categories.push_back(std::get<std::string>(v));
        std::sort(t.categories.begin(), t.categories.end());
        t.categories.erase(std::unique(t.categories.begin(), t.categories.end()),
                           t.categories.end());
        n_bins = t.categories.size() + 1; // plus the unseen bucket
    } else {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const FeatureValue& v : col) {
            double x = std::get<double>(v);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        n_bins = static_cast<std::size_t>(bins);
        t.edges.resize(n_bins + 1);
        for (std::size_t i = 0; i <= n_bins; ++i)
            t.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
    }

    std::array<std::vector<double>, 2> counts;
    std::array<double, 2> class_n{0.0, 0.0};
    for (auto& c : counts) c.assign(n_bins, 0.0);
    for (std::size_t i = 0; i < col.size(); ++i) {
        auto cls = static_cast<std::size_t>(labels[i]);
        counts[cls][t.bin_of(col[i])] += 1.0;
        class_n[cls] += 1.0;
    }
    for (std::size_t cls = 0; cls < 2; ++cls) {
        t.probs[cls].resize(n_bins);
        double denom = class_n[cls] + alpha * static_cast<double>(n_bins);
        for (std::size_t b = 0; b < n_bins; ++b)
            t.probs[cls][b] = (counts[cls][b] + alpha) / denom;
    }
    return t;
}

void fill_confusion(ConfusionReport& r) {
    std::size_t disallowed = r.true_positives + r.false_negatives;
    std::size_t allowed = r.true_negatives + r.false_positives;
    r.fn_rate = disallowed ? static_cast<double>(r.false_negatives) / disallowed : 0.0;
    r.fp_rate = allowed ? static_cast<double>(r.false_positives) / allowed : 0.0;
}

} // namespace

PosteriorModel train_posterior(const FeatureTable& table, const FeatureSet& fs,
                               int bins, double alpha) {
    if (bins < 2) throw ConfigError("train_posterior: bins must be >= 2");
    if (alpha <= 0.0) throw ConfigError("train_posterior: alpha must be positive");
    if (table.labels.empty()) throw TrainingError("train_posterior: empty training trace");

    std::array<double, 2> class_n{0.0, 0.0};
    for (TrafficType t : table.labels) class_n[static_cast<std::size_t>(t)] += 1.0;
    if (class_n[0] == 0.0 || class_n[1] == 0.0)
        throw TrainingError("train_posterior: training trace contains a single class");

    PosteriorModel model;
    model.feature_set = fs;
    model.bins = bins;
    model.alpha = alpha;
    double n = class_n[0] + class_n[1];
    model.priors = {class_n[0] / n, class_n[1] / n};
    for (const std::string& id : fs) {
        auto it = table.columns.find(id);
        if (it == table.columns.end())
            throw ConfigError("train_posterior: feature table missing column " + id);
        model.tables[id] = fit_table(it->second, table.labels, bins, alpha);
    }
    return model;
}

PosteriorModel train_posterior(const TrafficTrace& training, const FeatureCatalog& catalog,
                               const FeatureSet& fs, int bins, double alpha) {
    return train_posterior(build_feature_table(catalog, fs, training), fs, bins, alpha);
}

namespace {

TypeDistribution posterior_from_values(const PosteriorModel& model,
                                       const std::vector<const FeatureValue*>& values) {
    std::array<double, 2> log_post;
    for (std::size_t cls = 0; cls < 2; ++cls)
        log_post[cls] = model.priors[cls] > 0.0 ? std::log(model.priors[cls])
                                                : -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    for (const std::string& id : model.feature_set) {
        const LikelihoodTable& t = model.tables.at(id);
        std::size_t b = t.bin_of(*values[i++]);
        for (std::size_t cls = 0; cls < 2; ++cls)
            log_post[cls] += std::log(t.probs[cls][b]);
    }
    double m = std::max(log_post[0], log_post[1]);
    TypeDistribution post{0.0, 0.0};
    if (!std::isfinite(m)) {
        // degenerate prior: keep it degenerate
        post = model.priors;
        return post;
    }
    double z = 0.0;
    for (std::size_t cls = 0; cls < 2; ++cls) {
        post[cls] = std::isfinite(log_post[cls]) ? std::exp(log_post[cls] - m) : 0.0;
        z += post[cls];
    }
    post[0] /= z;
    post[1] /= z;
    return post;
}

} // namespace

TypeDistribution posterior(const PosteriorModel& model, const Flow& flow,
                           const FeatureCatalog& catalog) {
    std::vector<FeatureValue> owned;
    owned.reserve(model.feature_set.size());
    for (const std::string& id : model.feature_set)
        owned.push_back(compute_feature(catalog.at(id), flow));
    std::vector<const FeatureValue*> ptrs;
    ptrs.reserve(owned.size());
    for (const FeatureValue& v : owned) ptrs.push_back(&v);
    return posterior_from_values(model, ptrs);
}

TypeDistribution posterior_from_row(const PosteriorModel& model,
                                    const FeatureTable& table, std::size_t row) {
    std::vector<const FeatureValue*> ptrs;
    ptrs.reserve(model.feature_set.size());
    for (const std::string& id : model.feature_set)
        ptrs.push_back(&table.columns.at(id)[row]);
    return posterior_from_values(model, ptrs);
}

Action decide(const TypeDistribution& post, const CostMatrix& cm) {
    double expected_allow = prob(post, TrafficType::allowed) * cm.at(TrafficType::allowed, Action::allow) +
                            prob(post, TrafficType::disallowed) * cm.at(TrafficType::disallowed, Action::allow);
    double expected_disallow =
        prob(post, TrafficType::allowed) * cm.at(TrafficType::allowed, Action::disallow) +
        prob(post, TrafficType::disallowed) * cm.at(TrafficType::disallowed, Action::disallow);
    // ties go to allow: a blacklisting censor defaults to passing traffic
    return expected_disallow < expected_allow ? Action::disallow : Action::allow;
}

double instance_cost(TrafficType true_type, Action action, const CostMatrix& cm) {
    return cm.at(true_type, action);
}

namespace {

ClassificationResult classify_common(const PosteriorModel& model, const CostMatrix& cm,
                                     const std::vector<TrafficType>& labels,
                                     const std::function<TypeDistribution(std::size_t)>& post_of) {
    ClassificationResult result;
    result.actions.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        Action a = decide(post_of(i), cm);
        result.actions.push_back(a);
        result.total_cost += instance_cost(labels[i], a, cm);
        if (labels[i] == TrafficType::disallowed) {
            if (a == Action::disallow)
                result.report.true_positives++;
            else
                result.report.false_negatives++;
        } else {
            if (a == Action::disallow)
                result.report.false_positives++;
            else
                result.report.true_negatives++;
        }
    }
    fill_confusion(result.report);
    return result;
}

} // namespace

ClassificationResult classify_trace(const PosteriorModel& model, const CostMatrix& cm,
                                    const TrafficTrace& trace, const FeatureCatalog& catalog) {
    std::vector<TrafficType> labels;
    labels.reserve(trace.size());
    for (const Flow& f : trace) labels.push_back(f.true_type);
    return classify_common(model, cm, labels, [&](std::size_t i) {
        return posterior(model, trace[i], catalog);
    });
}

ClassificationResult classify_table(const PosteriorModel& model, const CostMatrix& cm,
                                    const FeatureTable& table) {
    return classify_common(model, cm, table.labels, [&](std::size_t i) {
        return posterior_from_row(model, table, i);
    });
}

namespace {

double estimated_subset_cost(const FeatureSet& fs, const FeatureTable& table,
                             const FeatureSet& prior, const CostMatrix& cm,
                             const EconomyConfig& econ, const FeatureCatalog& catalog,
                             int bins, double alpha) {
    PosteriorModel model = train_posterior(table, fs, bins, alpha);
    ClassificationResult r = classify_table(model, cm, table);
    return cycle_cost(fs, prior, r.total_cost, econ, catalog).total;
}

// smaller sets first, then lexicographic, for tie-breaking
bool set_precedes(const FeatureSet& a, const FeatureSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

} // namespace

FeatureSet select_feature_set(const FeatureCatalog& catalog, const FeatureSet& prior_features,
                              const TrafficTrace& training, const CostMatrix& cm,
                              const EconomyConfig& econ, SelectionStrategy strategy,
                              int bins, double alpha) {
    if (catalog.size() == 0) throw ConfigError("select_feature_set: empty catalog");
    FeatureSet all_ids;
    for (const Feature& f : catalog.features()) all_ids.push_back(f.id);
    FeatureTable table = build_feature_table(catalog, all_ids, training);

    auto cost_of = [&](const FeatureSet& fs) {
        return estimated_subset_cost(fs, table, prior_features, cm, econ, catalog, bins, alpha);
    };

    if (strategy == SelectionStrategy::exhaustive) {
        if (catalog.size() > 20)
            throw ConfigError("select_feature_set: exhaustive search limited to 20 features");
        FeatureSet best;
        double best_cost = cost_of(best);
        const std::size_t n = catalog.size();
        for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
            FeatureSet fs;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1ULL << i)) fs.push_back(all_ids[i]);
            double c = cost_of(fs);
            if (c < best_cost || (c == best_cost && set_precedes(fs, best))) {
                best = fs;
                best_cost = c;
            }
        }
        return best;
    }

    // greedy forward selection
    FeatureSet current;
    double current_cost = cost_of(current);
    while (current.size() < catalog.size()) {
        FeatureSet best_next;
        double best_cost = current_cost;
        bool improved = false;
        for (const std::string& id : all_ids) {
            if (std::binary_search(current.begin(), current.end(), id)) continue;
            FeatureSet candidate = current;
            candidate.push_back(id);
            std::sort(candidate.begin(), candidate.end());
            double c = cost_of(candidate);
            if (c < best_cost || (improved && c == best_cost && set_precedes(candidate, best_next))) {
                best_next = candidate;
                best_cost = c;
                improved = true;
            }
        }
        if (!improved) break;
        current = best_next;
        current_cost = best_cost;
    }
    return current;
}

std::string model_to_json(const PosteriorModel& model) {
    nlohmann::json j;
    j["feature_set"] = model.feature_set;
    j["priors"] = {model.priors[0], model.priors[1]};
    j["bins"] = model.bins;
    j["alpha"] = model.alpha;
    auto& tables = j["tables"] = nlohmann::json::object();
    for (const auto& [id, t] : model.tables) {
        nlohmann::json tj;
        tj["categorical"] = t.categorical;
        tj["edges"] = t.edges;
        tj["categories"] = t.categories;
        tj["probs_allowed"] = t.probs[0];
        tj["probs_disallowed"] = t.probs[1];
        tables[id] = std::move(tj);
    }
    return j.dump(2);
}

PosteriorModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PosteriorModel model;
    model.feature_set = j.at("feature_set").get<FeatureSet>();
    model.priors = {j.at("priors")[0].get<double>(), j.at("priors")[1].get<double>()};
    model.bins = j.at("bins").get<int>();
    model.alpha = j.at("alpha").get<double>();
    for (const auto& [id, tj] : j.at("tables").items()) {
        LikelihoodTable t;
        t.categorical = tj.at("categorical").get<bool>();
        t.edges = tj.at("edges").get<std::vector<double>>();
        t.categories = tj.at("categories").get<std::vector<std::string>>();
        t.probs[0] = tj.at("probs_allowed").get<std::vector<double>>();
        t.probs[1] = tj.at("probs_disallowed").get<std::vector<double>>();
        model.tables[id] = std::move(t);
    }
    return model;
}

} // namespace censim
