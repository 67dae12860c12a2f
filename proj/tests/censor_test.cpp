#include <doctest.h>

#include <cmath>

#include "censim/censor.hpp"
#include "censim/errors.hpp"
#include "test_util.hpp"

using namespace censim;
using namespace censim::test;

namespace {

TypeDistribution dist(double allowed, double disallowed) {
    return TypeDistribution{allowed, disallowed};
}

Action brute_force_decide(const TypeDistribution& post, const CostMatrix& cm) {
    double ea = post[0] * cm.at(TrafficType::allowed, Action::allow) +
                post[1] * cm.at(TrafficType::disallowed, Action::allow);
    double ed = post[0] * cm.at(TrafficType::allowed, Action::disallow) +
                post[1] * cm.at(TrafficType::disallowed, Action::disallow);
    if (ed < ea) return Action::disallow;
    return Action::allow; // ties go to allow
}

// one categorical feature whose likelihood ratio at tag "hot" is
// disallowed:allowed = 9:1
PosteriorModel ratio_model() {
    PosteriorModel m;
    m.feature_set = {"f"};
    m.priors = {0.5, 0.5};
    LikelihoodTable t;
    t.categorical = true;
    t.categories = {"cold", "hot"};
    t.probs[0] = {0.9, 0.1, 0.0};
    t.probs[1] = {0.1, 0.9, 0.0};
    m.tables["f"] = t;
    return m;
}

FeatureTable one_row(const std::string& tag) {
    FeatureTable table;
    table.labels = {TrafficType::disallowed};
    table.columns["f"] = {FeatureValue{tag}};
    table.columns["g"] = {FeatureValue{tag}};
    return table;
}

} // namespace

TEST_CASE("symmetric tie resolves to allow") {
    CostMatrix cm(1.0, 1.0);
    CHECK(decide(dist(0.5, 0.5), cm) == Action::allow);
}

TEST_CASE("clear majority is blocked under symmetric costs") {
    CostMatrix cm(1.0, 1.0);
    CHECK(decide(dist(0.1, 0.9), cm) == Action::disallow);
}

TEST_CASE("expensive false positives tip the decision to allow") {
    CostMatrix cm(1.0, 10.0);
    // expected cost of allowing is 0.7, of disallowing 3.0
    CHECK(decide(dist(0.3, 0.7), cm) == Action::allow);
}

TEST_CASE("decide matches brute-force cost minimization on random inputs") {
    RngStream rng(101);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        double p = rng.uniform();
        TypeDistribution post = dist(1.0 - p, p);
        CostMatrix cm(rng.uniform(0.01, 10.0), rng.uniform(0.01, 10.0),
                      rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0));
        if (decide(post, cm) != brute_force_decide(post, cm)) mismatches++;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("scaling all costs by a positive constant never changes the action") {
    RngStream rng(103);
    for (int i = 0; i < 200; ++i) {
        double p = rng.uniform();
        TypeDistribution post = dist(1.0 - p, p);
        double da = rng.uniform(0.01, 5.0), ad = rng.uniform(0.01, 5.0);
        double dd = rng.uniform(0.0, 1.0), aa = rng.uniform(0.0, 1.0);
        double k = rng.uniform(0.1, 20.0);
        CostMatrix cm(da, ad, dd, aa);
        CostMatrix scaled(k * da, k * ad, k * dd, k * aa);
        CHECK(decide(post, cm) == decide(post, scaled));
    }
}

TEST_CASE("symmetric costs with zero diagonal reduce to most-probable-type") {
    RngStream rng(107);
    CostMatrix cm(3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        double p = rng.uniform();
        TypeDistribution post = dist(1.0 - p, p);
        Action map_action = p > 1.0 - p ? Action::disallow : Action::allow;
        CHECK(decide(post, cm) == map_action);
    }
}

TEST_CASE("instance cost is a table lookup") {
    CostMatrix cm(1.0, 2.5, 0.0, 0.0);
    CHECK(instance_cost(TrafficType::disallowed, Action::allow, cm) == doctest::Approx(1.0));
    CHECK(instance_cost(TrafficType::allowed, Action::allow, cm) == doctest::Approx(0.0));
    CHECK(instance_cost(TrafficType::allowed, Action::disallow, cm) == doctest::Approx(2.5));
}

TEST_CASE("cost matrix rejects non-positive error costs") {
    CHECK_THROWS_AS(CostMatrix(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(CostMatrix(1.0, -1.0), ConfigError);
}

TEST_CASE("empty feature set trains a priors-only model") {
    TrafficTrace trace = generate_traffic(separated_spec(100));
    FeatureCatalog catalog;
    PosteriorModel m = train_posterior(trace, catalog, {}, 16, 1.0);
    CHECK(m.priors[0] == doctest::Approx(0.5));
    for (const Flow& f : trace) {
        TypeDistribution post = posterior(m, f, catalog);
        CHECK(post[0] == doctest::Approx(0.5));
        CHECK(post[1] == doctest::Approx(0.5));
    }
}

TEST_CASE("a separated scalar feature yields near-certain posteriors") {
    // 150 flows per class, each class concentrated in a single bin: the
    // smoothed likelihood ratio is then (count+1):1, well past 99:1
    TrafficSpec spec = separated_spec(300, 19);
    spec.allowed = simple_class(600.0, 0.5);
    spec.disallowed = simple_class(1200.0, 0.5);
    TrafficTrace trace = generate_traffic(spec);
    FeatureCatalog catalog(
        {scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60)});
    FeatureSet fs = make_feature_set({"lengths"});
    PosteriorModel m = train_posterior(trace, catalog, fs, 16, 1.0);
    for (const Flow& f : trace) {
        TypeDistribution post = posterior(m, f, catalog);
        if (f.true_type == TrafficType::disallowed)
            CHECK(post[1] >= 0.99);
        else
            CHECK(post[0] >= 0.99);
    }
}

TEST_CASE("identical class distributions leave the posterior near the prior") {
    TrafficSpec spec = separated_spec(2000, 43);
    spec.disallowed = spec.allowed; // same generative model for both classes
    spec.disallowed.marker_probs = {{"none", 1.0}};
    TrafficTrace trace = generate_traffic(spec);
    TrafficTrace train(trace.begin(), trace.begin() + 1000);
    TrafficTrace held(trace.begin() + 1000, trace.end());
    FeatureCatalog catalog(
        {scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60)});
    PosteriorModel m = train_posterior(train, catalog, make_feature_set({"lengths"}), 16, 1.0);
    double sum = 0.0;
    for (const Flow& f : held) sum += posterior(m, f, catalog)[1];
    CHECK(std::abs(sum / static_cast<double>(held.size()) - m.priors[1]) < 0.05);
}

TEST_CASE("single-class training is an error") {
    TrafficTrace trace = generate_traffic(separated_spec(50));
    trace.erase(std::remove_if(trace.begin(), trace.end(),
                               [](const Flow& f) {
                                   return f.true_type == TrafficType::disallowed;
                               }),
                trace.end());
    FeatureCatalog catalog;
    CHECK_THROWS_AS(train_posterior(trace, catalog, {}, 16, 1.0), TrainingError);
}

TEST_CASE("posteriors are normalized") {
    TrafficTrace trace = generate_traffic(separated_spec(200, 53));
    FeatureCatalog catalog({
        scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60),
        scalar_feature("timings", "mean-interarrival", "pkt-timing", 16, 60),
    });
    PosteriorModel m =
        train_posterior(trace, catalog, make_feature_set({"lengths", "timings"}), 16, 1.0);
    for (const Flow& f : trace) {
        TypeDistribution post = posterior(m, f, catalog);
        CHECK(std::abs(post[0] + post[1] - 1.0) < 1e-9);
        CHECK(post[0] >= 0.0);
        CHECK(post[1] >= 0.0);
    }
}

TEST_CASE("a degenerate prior stays degenerate") {
    PosteriorModel m = ratio_model();
    m.priors = {1.0, 0.0};
    TypeDistribution post = posterior_from_row(m, one_row("hot"), 0);
    CHECK(post[0] == doctest::Approx(1.0));
    CHECK(post[1] == doctest::Approx(0.0));
}

TEST_CASE("posterior follows Bayes arithmetic for known likelihood ratios") {
    PosteriorModel m = ratio_model();
    TypeDistribution post = posterior_from_row(m, one_row("hot"), 0);
    CHECK(post[1] == doctest::Approx(0.9));

    // two independent 9:1 features
    PosteriorModel m2 = ratio_model();
    m2.feature_set = {"f", "g"};
    m2.tables["g"] = m2.tables["f"];
    post = posterior_from_row(m2, one_row("hot"), 0);
    CHECK(post[1] == doctest::Approx(81.0 / 82.0));
}

TEST_CASE("out-of-range scalar values clamp to the edge bins") {
    LikelihoodTable t;
    t.categorical = false;
    t.edges = {0.0, 1.0, 2.0};
    t.probs[0] = {0.5, 0.5};
    t.probs[1] = {0.5, 0.5};
    CHECK(t.bin_of(FeatureValue{-10.0}) == 0);
    CHECK(t.bin_of(FeatureValue{10.0}) == 1);
    CHECK(t.bin_of(FeatureValue{0.5}) == 0);
    CHECK(t.bin_of(FeatureValue{1.5}) == 1);
}

TEST_CASE("a model that always allows pays one unit per disallowed flow") {
    TrafficSpec spec = separated_spec(10);
    spec.disallowed_fraction = 0.3; // 3 disallowed flows
    TrafficTrace trace = generate_traffic(spec);
    PosteriorModel m;
    m.priors = {0.9, 0.1}; // empty feature set, allow-leaning prior
    FeatureCatalog catalog;
    CostMatrix cm(1.0, 1.0);
    ClassificationResult r = classify_trace(m, cm, trace, catalog);
    CHECK(r.total_cost == doctest::Approx(3.0));
    CHECK(r.report.fn_rate == doctest::Approx(1.0));
    CHECK(r.report.fp_rate == doctest::Approx(0.0));
}

TEST_CASE("perfect separation with free correct actions costs nothing") {
    TrafficTrace trace = generate_traffic(separated_spec(100, 59));
    FeatureCatalog catalog(
        {scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60)});
    PosteriorModel m = train_posterior(trace, catalog, make_feature_set({"lengths"}), 16, 1.0);
    ClassificationResult r = classify_trace(m, CostMatrix(5.0, 5.0), trace, catalog);
    CHECK(r.total_cost == doctest::Approx(0.0));
    CHECK(r.report.false_negatives == 0);
    CHECK(r.report.false_positives == 0);
}

TEST_CASE("classification totals equal the hand-summed per-flow costs") {
    TrafficSpec spec = separated_spec(10, 61);
    spec.allowed = simple_class(700.0, 80.0);
    spec.disallowed = simple_class(800.0, 80.0); // overlapping: mixed decisions
    TrafficTrace trace = generate_traffic(spec);
    FeatureCatalog catalog(
        {scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60)});
    PosteriorModel m = train_posterior(trace, catalog, make_feature_set({"lengths"}), 4, 1.0);
    CostMatrix cm(2.0, 3.0, 0.25, 0.125);
    ClassificationResult r = classify_trace(m, cm, trace, catalog);
    REQUIRE(r.actions.size() == trace.size());
    double expected = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i)
        expected += cm.at(trace[i].true_type, r.actions[i]);
    CHECK(r.total_cost == doctest::Approx(expected));
    CHECK(r.report.total() == trace.size());
}

TEST_CASE("classify_table agrees with classify_trace") {
    TrafficTrace trace = generate_traffic(separated_spec(100, 67));
    FeatureCatalog catalog(
        {scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60)});
    FeatureSet fs = make_feature_set({"lengths"});
    FeatureTable table = build_feature_table(catalog, fs, trace);
    PosteriorModel m = train_posterior(table, fs, 16, 1.0);
    CostMatrix cm(5.0, 5.0);
    ClassificationResult a = classify_trace(m, cm, trace, catalog);
    ClassificationResult b = classify_table(m, cm, table);
    CHECK(a.actions == b.actions);
    CHECK(a.total_cost == doctest::Approx(b.total_cost));
}

TEST_CASE("a useless expensive feature is not selected") {
    TrafficSpec spec = separated_spec(200, 71);
    spec.disallowed = spec.allowed; // classes indistinguishable
    spec.disallowed.marker_probs = {{"none", 1.0}};
    TrafficTrace trace = generate_traffic(spec);
    FeatureCatalog catalog(
        {scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 600)});
    FeatureSet fs = select_feature_set(catalog, {}, trace, CostMatrix(1.0, 1.0),
                                       simple_econ(), SelectionStrategy::exhaustive, 16, 1.0);
    CHECK(fs.empty());
}

TEST_CASE("a cheap separating feature is selected under a high miss cost") {
    TrafficTrace trace = generate_traffic(separated_spec(200, 73));
    FeatureCatalog catalog(
        {scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60)});
    FeatureSet fs = select_feature_set(catalog, {}, trace, CostMatrix(50.0, 50.0),
                                       simple_econ(), SelectionStrategy::exhaustive, 16, 1.0);
    CHECK(fs == make_feature_set({"lengths"}));
}

TEST_CASE("exhaustive selection achieves the minimum over all subsets") {
    TrafficTrace trace = generate_traffic(separated_spec(150, 79));
    FeatureCatalog catalog({
        scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60),
        scalar_feature("timings", "mean-interarrival", "pkt-timing", 16, 60),
        scalar_feature("spread", "stddev-packet-length", "pkt-length", 16, 80),
    });
    EconomyConfig econ = simple_econ();
    CostMatrix cm(10.0, 10.0);
    FeatureSet chosen =
        select_feature_set(catalog, {}, trace, cm, econ, SelectionStrategy::exhaustive, 16, 1.0);

    auto cost_of = [&](const FeatureSet& fs) {
        PosteriorModel m = train_posterior(trace, catalog, fs, 16, 1.0);
        ClassificationResult r = classify_trace(m, cm, trace, catalog);
        return cycle_cost(fs, {}, r.total_cost, econ, catalog).total;
    };
    double chosen_cost = cost_of(chosen);
    std::vector<std::string> ids{"lengths", "spread", "timings"};
    for (unsigned mask = 0; mask < 8; ++mask) {
        FeatureSet fs;
        for (unsigned i = 0; i < 3; ++i)
            if (mask & (1u << i)) fs.push_back(ids[i]);
        std::sort(fs.begin(), fs.end());
        CHECK(cost_of(fs) >= chosen_cost - 1e-12);
    }
}

TEST_CASE("greedy selection never beats exhaustive") {
    RngStream rng(83);
    for (int trial = 0; trial < 5; ++trial) {
        TrafficSpec spec = separated_spec(120, 900 + static_cast<std::uint64_t>(trial));
        TrafficTrace trace = generate_traffic(spec);
        std::vector<Feature> features;
        const char* extractors[] = {"mean-packet-length", "stddev-packet-length",
                                    "mean-interarrival", "connection-duration",
                                    "length-histogram-entropy", "total-bytes",
                                    "mean-payload-entropy", "handshake-marker"};
        const char* meas[] = {"pkt-length", "pkt-length", "pkt-timing", "pkt-timing",
                              "pkt-length", "pkt-length", "pkt-payload", "handshake"};
        for (int i = 0; i < 8; ++i)
            features.push_back(scalar_feature("f" + std::to_string(i), extractors[i], meas[i],
                                              static_cast<long>(rng.uniform(1, 60)),
                                              static_cast<long>(rng.uniform(10, 200))));
        FeatureCatalog catalog(features);
        EconomyConfig econ = simple_econ();
        CostMatrix cm(20.0, 20.0);
        FeatureSet ex = select_feature_set(catalog, {}, trace, cm, econ,
                                           SelectionStrategy::exhaustive, 8, 1.0);
        FeatureSet gr = select_feature_set(catalog, {}, trace, cm, econ,
                                           SelectionStrategy::greedy, 8, 1.0);
        auto cost_of = [&](const FeatureSet& fs) {
            PosteriorModel m = train_posterior(trace, catalog, fs, 8, 1.0);
            ClassificationResult r = classify_trace(m, cm, trace, catalog);
            return cycle_cost(fs, {}, r.total_cost, econ, catalog).total;
        };
        CHECK(cost_of(ex) <= cost_of(gr) + 1e-12);
    }
}

TEST_CASE("exhaustive selection refuses oversized catalogs") {
    std::vector<Feature> features;
    for (int i = 0; i < 21; ++i)
        features.push_back(scalar_feature("f" + std::to_string(i), "mean-packet-length",
                                          "pkt-length", 1, 1));
    FeatureCatalog catalog(features);
    TrafficTrace trace = generate_traffic(separated_spec(20));
    CHECK_THROWS_AS(select_feature_set(catalog, {}, trace, CostMatrix(1.0, 1.0), simple_econ(),
                                       SelectionStrategy::exhaustive, 4, 1.0),
                    ConfigError);
}

TEST_CASE("model JSON round-trips to identical decisions") {
    TrafficTrace trace = generate_traffic(separated_spec(100, 89));
    FeatureCatalog catalog({
        scalar_feature("lengths", "mean-packet-length", "pkt-length", 16, 60),
        scalar_feature("handshake", "handshake-marker", "handshake", 4, 20,
                       FeatureLevel::packet_level),
    });
    FeatureSet fs = make_feature_set({"handshake", "lengths"});
    PosteriorModel m = train_posterior(trace, catalog, fs, 16, 1.0);
    PosteriorModel back = model_from_json(model_to_json(m));
    CostMatrix cm(5.0, 5.0);
    ClassificationResult a = classify_trace(m, cm, trace, catalog);
    ClassificationResult b = classify_trace(back, cm, trace, catalog);
    CHECK(a.actions == b.actions);
    CHECK(a.total_cost == doctest::Approx(b.total_cost));
}
