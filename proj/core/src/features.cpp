#include "censim/features.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "censim/errors.hpp"

namespace censim {

const char* to_string(FeatureLevel level) {
    switch (level) {
    case FeatureLevel::packet_level: return "packet-level";
    case FeatureLevel::flow_distributional: return "flow-distributional";
    case FeatureLevel::stateful: return "stateful";
    case FeatureLevel::probe: return "probe";
    }
    return "packet-level";
}

FeatureLevel feature_level_from_string(const std::string& s) {
    if (s == "packet-level") return FeatureLevel::packet_level;
    if (s == "flow-distributional") return FeatureLevel::flow_distributional;
    if (s == "stateful") return FeatureLevel::stateful;
    if (s == "probe") return FeatureLevel::probe;
    throw ConfigError("unknown feature level: " + s);
}

FeatureCatalog::FeatureCatalog(std::vector<Feature> features) : features_(std::move(features)) {
    std::sort(features_.begin(), features_.end(),
              [](const Feature& a, const Feature& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < features_.size(); ++i)
        if (features_[i].id == features_[i + 1].id)
            throw ConfigError("catalog: duplicate feature id " + features_[i].id);
    for (const Feature& f : features_)
        if (f.required_measurements.empty())
            throw ConfigError("catalog: feature " + f.id + " has no measurements");
}

const Feature& FeatureCatalog::at(const std::string& id) const {
    auto it = std::lower_bound(features_.begin(), features_.end(), id,
                               [](const Feature& f, const std::string& s) { return f.id < s; });
    if (it == features_.end() || it->id != id)
        throw ConfigError("feature not in catalog: " + id);
    return *it;
}

bool FeatureCatalog::contains(const std::string& id) const {
    auto it = std::lower_bound(features_.begin(), features_.end(), id,
                               [](const Feature& f, const std::string& s) { return f.id < s; });
    return it != features_.end() && it->id == id;
}

std::uint64_t FeatureCatalog::fingerprint() const {
    std::uint64_t h = 0x9ae16a3b2f90404fULL;
    auto mix = [&h](std::uint64_t v) { h = mix64(h ^ v); };
    for (const Feature& f : features_) {
        for (char c : f.id) mix(static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
        mix(static_cast<std::uint64_t>(f.store_bytes));
        mix(static_cast<std::uint64_t>(f.impl_loc));
        mix(static_cast<std::uint64_t>(f.level));
        for (const std::string& m : f.required_measurements)
            for (char c : m) mix(static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    }
    return h;
}

FeatureSet make_feature_set(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::set<std::string> measurements_of(const FeatureCatalog& catalog, const FeatureSet& fs) {
    std::set<std::string> meas;
    for (const std::string& id : fs) {
        const Feature& f = catalog.at(id);
        meas.insert(f.required_measurements.begin(), f.required_measurements.end());
    }
    return meas;
}

double histogram_entropy(const std::vector<double>& values, int bins, double lo, double hi) {
    if (values.empty() || bins < 1) return 0.0;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    double width = (hi - lo) / bins;
    for (double v : values) {
        int b = width > 0.0 ? static_cast<int>((v - lo) / width) : 0;
        b = std::clamp(b, 0, bins - 1);
        counts[static_cast<std::size_t>(b)]++;
    }
    double n = static_cast<double>(values.size());
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

constexpr int kEntropyBins = 16;

double mean_length(const Flow& f) {
    double s = 0.0;
    for (const Packet& p : f.packets) s += p.length;
    return s / static_cast<double>(f.packets.size());
}

double stddev_length(const Flow& f) {
    double m = mean_length(f);
    double s = 0.0;
    for (const Packet& p : f.packets) s += (p.length - m) * (p.length - m);
    return std::sqrt(s / static_cast<double>(f.packets.size()));
}

double mean_interarrival(const Flow& f) {
    if (f.packets.size() < 2) return 0.0;
    return f.packets.back().arrival_offset /
           static_cast<double>(f.packets.size() - 1);
}

double connection_duration(const Flow& f) {
    return f.packets.back().arrival_offset;
}

double mean_payload_entropy(const Flow& f) {
    double s = 0.0;
    for (const Packet& p : f.packets) s += p.payload_entropy;
    return s / static_cast<double>(f.packets.size());
}

double length_histogram_entropy(const Flow& f) {
    std::vector<double> lengths;
    lengths.reserve(f.packets.size());
    double lo = 1e300, hi = -1e300;
    for (const Packet& p : f.packets) {
        lengths.push_back(static_cast<double>(p.length));
        lo = std::min(lo, lengths.back());
        hi = std::max(hi, lengths.back());
    }
    if (hi <= lo) return 0.0;
    return histogram_entropy(lengths, kEntropyBins, lo, hi);
}

double total_bytes(const Flow& f) {
    double s = 0.0;
    for (const Packet& p : f.packets) s += p.length;
    return s;
}

using ScalarExtractor = double (*)(const Flow&);

const std::map<std::string, ScalarExtractor>& scalar_extractors() {
    static const std::map<std::string, ScalarExtractor> table = {
        {"mean-packet-length", &mean_length},
        {"stddev-packet-length", &stddev_length},
        {"mean-interarrival", &mean_interarrival},
        {"connection-duration", &connection_duration},
        {"mean-payload-entropy", &mean_payload_entropy},
        {"length-histogram-entropy", &length_histogram_entropy},
        {"total-bytes", &total_bytes},
    };
    return table;
}

} // namespace

std::vector<std::string> builtin_extractors() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : scalar_extractors()) names.push_back(name);
    names.push_back("handshake-marker");
    return names;
}

FeatureValue compute_feature(const Feature& feature, const Flow& flow) {
    if (feature.extractor == "handshake-marker")
        return flow.handshake_marker;
    if (feature.extractor.starts_with("probe:")) {
        std::string probe_id = feature.extractor.substr(6);
        auto it = flow.probe_responses.find(probe_id);
        if (it == flow.probe_responses.end())
            throw MeasurementUnavailable("flow " + std::to_string(flow.id) +
                                         " has no response for probe " + probe_id);
        return it->second;
    }
    auto it = scalar_extractors().find(feature.extractor);
    if (it == scalar_extractors().end())
        throw ConfigError("unknown extractor: " + feature.extractor);
    if (flow.packets.empty())
        throw MeasurementUnavailable("flow " + std::to_string(flow.id) + " has no packets");
    return it->second(flow);
}

} // namespace censim
