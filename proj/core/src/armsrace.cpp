#include "censim/armsrace.hpp"

#include <algorithm>

#include "censim/errors.hpp"

namespace censim {

const Tool& Scenario::tool_by_id(const std::string& id) const {
    for (const Tool& t : tools)
        if (t.id == id) return t;
    throw ConfigError("unknown tool id: " + id);
}

const Tool& Scenario::tool_for_cycle(int cycle) const {
    if (schedule.empty()) throw ConfigError("scenario: empty tool schedule");
    std::size_t idx = std::min(static_cast<std::size_t>(cycle), schedule.size() - 1);
    return tool_by_id(schedule[idx]);
}

void Scenario::validate() const {
    validate_spec(traffic);
    econ.validate();
    if (n_cycles < 1) throw ConfigError("scenario: n_cycles must be >= 1");
    if (schedule.empty()) throw ConfigError("scenario: tool schedule is empty");
    if (!(training_fraction > 0.0 && training_fraction < 1.0))
        throw ConfigError("scenario: training_fraction must lie in (0, 1)");
    if (demand.max_fn_rate < 0.0 || demand.max_fn_rate > 1.0)
        throw ConfigError("scenario: demand.max_fn_rate outside [0, 1]");
    if (demand.max_fp_rate < 0.0 || demand.max_fp_rate > 1.0)
        throw ConfigError("scenario: demand.max_fp_rate outside [0, 1]");
    for (const std::string& id : schedule)
        tool_by_id(id); // throws on unknown ids
    for (const Feature& f : catalog.features())
        for (const std::string& m : f.required_measurements)
            if (m.starts_with("probe:")) {
                std::string probe_id = m.substr(6);
                bool known = std::any_of(probes.begin(), probes.end(),
                                         [&](const Probe& p) { return p.id == probe_id; });
                if (!known)
                    throw ConfigError("catalog: feature " + f.id +
                                      " references undeclared probe " + probe_id);
            }
}

TrafficTrace cycle_traffic(const Scenario& s, const Tool& tool, int cycle) {
    TrafficSpec spec = s.traffic;
    // fresh flows each cycle
    spec.seed = mix64(s.traffic.seed ^ (0xc1c1e000ULL + static_cast<std::uint64_t>(cycle)));
    TrafficTrace trace = generate_traffic(spec);
    return apply_tool(tool, trace, s.traffic.allowed, s.probes, spec.seed);
}

void split_trace(const TrafficTrace& trace, double training_fraction,
                 TrafficTrace& train, TrafficTrace& eval) {
    for (TrafficType type : {TrafficType::allowed, TrafficType::disallowed}) {
        std::size_t n_type = 0;
        for (const Flow& f : trace)
            if (f.true_type == type) n_type++;
        auto n_train = static_cast<std::size_t>(
            std::llround(static_cast<double>(n_type) * training_fraction));
        n_train = std::min(n_train, n_type);
        std::size_t seen = 0;
        for (const Flow& f : trace) {
            if (f.true_type != type) continue;
            (seen < n_train ? train : eval).push_back(f);
            seen++;
        }
    }
}

CycleReport run_cycle(const Scenario& s, CensorState& state, int cycle, bool frozen) {
    const Tool& tool = s.tool_for_cycle(cycle);
    TrafficTrace trace = cycle_traffic(s, tool, cycle);
    TrafficTrace train, eval;
    split_trace(trace, s.training_fraction, train, eval);

    const bool reuse = frozen && state.trained;
    if (!reuse) {
        state.current_features =
            select_feature_set(s.catalog, state.accumulated_features, train, s.cost_matrix,
                               s.econ, s.strategy, s.bins, s.alpha);
        state.model = train_posterior(train, s.catalog, state.current_features, s.bins, s.alpha);
        state.trained = true;
    }

    ClassificationResult result = classify_trace(state.model, s.cost_matrix, eval, s.catalog);

    CycleReport report;
    report.cycle = cycle;
    report.tool_id = tool.id;
    report.feature_set = state.current_features;
    report.costs = cycle_cost(state.current_features, state.accumulated_features,
                              result.total_cost, s.econ, s.catalog);
    report.confusion = result.report;

    // features are implemented once per scenario
    FeatureSet merged = state.accumulated_features;
    merged.insert(merged.end(), state.current_features.begin(), state.current_features.end());
    state.accumulated_features = make_feature_set(std::move(merged));
    return report;
}

std::vector<CycleReport> run_scenario(const Scenario& s, bool frozen) {
    s.validate();
    CensorState state;
    std::vector<CycleReport> reports;
    reports.reserve(static_cast<std::size_t>(s.n_cycles));
    for (int cycle = 0; cycle < s.n_cycles; ++cycle)
        reports.push_back(run_cycle(s, state, cycle, frozen));
    return reports;
}

double grand_total(const std::vector<CycleReport>& reports) {
    double total = 0.0;
    for (const CycleReport& r : reports) total += r.costs.total;
    return total;
}

} // namespace censim
