#include <benchmark/benchmark.h>

#include "censim/armsrace.hpp"
#include "censim/censor.hpp"
#include "censim/scenario_io.hpp"
#include "censim/traffic.hpp"

namespace {

censim::Scenario scenario() {
    censim::Scenario s = censim::stock_scenario("figure1-polymorphism");
    s.traffic.n_flows = 500;
    return s;
}

void bm_generate_traffic(benchmark::State& state) {
    censim::Scenario s = scenario();
    s.traffic.n_flows = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        censim::TrafficTrace t = censim::generate_traffic(s.traffic);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(bm_generate_traffic)->Arg(200)->Arg(2000);

void bm_classify(benchmark::State& state) {
    censim::Scenario s = scenario();
    censim::TrafficTrace trace = censim::generate_traffic(s.traffic);
    censim::TrafficTrace train, eval;
    censim::split_trace(trace, s.training_fraction, train, eval);
    censim::FeatureSet fs =
        censim::make_feature_set({"lengths", "timings", "handshake"});
    censim::PosteriorModel model =
        censim::train_posterior(train, s.catalog, fs, s.bins, s.alpha);
    for (auto _ : state) {
        auto r = censim::classify_trace(model, s.cost_matrix, eval, s.catalog);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(bm_classify);

void bm_select_feature_set(benchmark::State& state) {
    censim::Scenario s = scenario();
    censim::TrafficTrace trace = censim::generate_traffic(s.traffic);
    for (auto _ : state) {
        censim::FeatureSet fs = censim::select_feature_set(
            s.catalog, censim::FeatureSet{}, trace, s.cost_matrix, s.econ,
            s.strategy, s.bins, s.alpha);
        benchmark::DoNotOptimize(fs);
    }
}
BENCHMARK(bm_select_feature_set);

} // namespace

BENCHMARK_MAIN();
