#ifndef CENSIM_FEATURES_HPP
#define CENSIM_FEATURES_HPP

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "censim/traffic.hpp"

namespace censim {

// The raw observation a feature needs.  Probe measurements are spelled
// "probe:<probe-id>" so operating cost can price active probing separately.
struct Measurement {
    std::string id;
    enum class Kind {
        per_packet_length,
        per_packet_timing,
        per_packet_payload,
        handshake_inspection,
        active_probe,
    } kind = Kind::per_packet_length;
};

enum class FeatureLevel { packet_level, flow_distributional, stateful, probe };

const char* to_string(FeatureLevel level);
FeatureLevel feature_level_from_string(const std::string& s);

// Scalar or categorical feature value.
using FeatureValue = std::variant<double, std::string>;

struct Feature {
    std::string id;
    std::set<std::string> required_measurements;
    FeatureLevel level = FeatureLevel::packet_level;
    std::string extractor;     // registered extractor name, or "probe:<id>"
    long store_bytes = 0;      // storage surrogate
    long impl_loc = 0;         // lines-of-code surrogate

    bool operator==(const Feature&) const = default;
};

class FeatureCatalog {
public:
    FeatureCatalog() = default;
    explicit FeatureCatalog(std::vector<Feature> features);

    const Feature& at(const std::string& id) const; // ConfigError if absent
    bool contains(const std::string& id) const;
    const std::vector<Feature>& features() const { return features_; }
    std::size_t size() const { return features_.size(); }

    // Identity fingerprint; tool scores from different catalogs must not
    // be compared, and this is how the comparison interface enforces it.
    std::uint64_t fingerprint() const;

    bool operator==(const FeatureCatalog&) const = default;

private:
    std::vector<Feature> features_; // sorted by id, unique
};

// Feature ids drawn from one catalog, kept sorted and duplicate-free.
using FeatureSet = std::vector<std::string>;

FeatureSet make_feature_set(std::vector<std::string> ids);

// Union of required measurements over a feature set (deduplicated).
std::set<std::string> measurements_of(const FeatureCatalog& catalog, const FeatureSet& fs);

// Deterministic pure extraction.  Probe features read the matching
// probe_responses entry and throw MeasurementUnavailable when it is missing.
FeatureValue compute_feature(const Feature& feature, const Flow& flow);

// Names of the built-in scalar/categorical extractors.
std::vector<std::string> builtin_extractors();

// Shannon entropy (bits) of the empirical histogram of values over
// equal-width bins spanning [lo, hi].  Exposed for the feature oracle tests.
double histogram_entropy(const std::vector<double>& values, int bins, double lo, double hi);

} // namespace censim

#endif
