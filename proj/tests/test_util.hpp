#ifndef CENSIM_TEST_UTIL_HPP
#define CENSIM_TEST_UTIL_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "censim/economics.hpp"
#include "censim/features.hpp"
#include "censim/traffic.hpp"

namespace censim::test {

// Single-component attribute: per-flow location TN(mean, flow_sd) and
// per-packet TN(location, pkt_sd), both truncated to [lo, hi].
inline AttributeModel attr(double mean, double flow_sd, double pkt_sd, double lo, double hi) {
    AttributeModel m;
    m.flow_mixture = {{mean, flow_sd, lo, hi}};
    m.weights = {1.0};
    m.packet_dist = AttributeModel::PacketDist::truncated_normal;
    m.packet_stddev = pkt_sd;
    m.lo = lo;
    m.hi = hi;
    return m;
}

inline ClassSpec simple_class(double length_mean, double length_sd) {
    ClassSpec cls;
    cls.packets_per_flow = 50;
    cls.length = attr(length_mean, length_sd, length_sd, 1.0, 3000.0);
    cls.interarrival = attr(0.1, 0.02, 0.02, 0.001, 1.0);
    cls.entropy = attr(4.0, 0.5, 0.3, 0.0, 8.0);
    cls.marker_probs = {{"none", 1.0}};
    return cls;
}

// Two well-separated classes on packet length (600 vs 1200).
inline TrafficSpec separated_spec(int n_flows = 200, std::uint64_t seed = 7) {
    TrafficSpec spec;
    spec.n_flows = n_flows;
    spec.disallowed_fraction = 0.5;
    spec.seed = seed;
    spec.allowed = simple_class(600.0, 20.0);
    spec.disallowed = simple_class(1200.0, 20.0);
    spec.disallowed.marker_probs = {{"telltale", 1.0}};
    return spec;
}

inline Feature scalar_feature(const std::string& id, const std::string& extractor,
                              const std::string& measurement, long store_bytes, long impl_loc,
                              FeatureLevel level = FeatureLevel::flow_distributional) {
    Feature f;
    f.id = id;
    f.required_measurements = {measurement};
    f.level = level;
    f.extractor = extractor;
    f.store_bytes = store_bytes;
    f.impl_loc = impl_loc;
    return f;
}

inline EconomyConfig simple_econ() {
    EconomyConfig econ;
    econ.op_cost = {{"pkt-length", 0.1}, {"pkt-timing", 0.1}, {"pkt-payload", 0.2},
                    {"handshake", 0.05}};
    econ.store_rate = 0.01;
    econ.imp_rate = 0.1;
    econ.level_multipliers = {{FeatureLevel::packet_level, 1.0},
                              {FeatureLevel::flow_distributional, 2.0},
                              {FeatureLevel::stateful, 4.0},
                              {FeatureLevel::probe, 1.0}};
    return econ;
}

inline double flow_mean_length(const Flow& f) {
    double sum = 0.0;
    for (const Packet& p : f.packets) sum += p.length;
    return sum / static_cast<double>(f.packets.size());
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        double fa = static_cast<double>(i) / static_cast<double>(a.size());
        double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

} // namespace censim::test

#endif
