#include "censim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "censim/errors.hpp"

namespace censim {

const char* to_string(TrafficType t) {
    return t == TrafficType::allowed ? "allowed" : "disallowed";
}

double AttributeModel::sample_flow_location(RngStream& rng) const {
    if (flow_mixture.empty())
        throw ConfigError("attribute model: empty flow_mixture");
    std::size_t k = flow_mixture.size() == 1
                        ? 0
                        : rng.categorical(std::span<const double>(weights));
    const TruncNormal& c = flow_mixture[k];
    return rng.truncated_normal(c.mean, c.stddev, c.lo, c.hi);
}

double AttributeModel::sample_packet_value(double flow_location, RngStream& rng) const {
    switch (packet_dist) {
    case PacketDist::exponential:
        return rng.exponential(std::max(flow_location, 1e-9));
    case PacketDist::truncated_normal:
    default:
        return rng.truncated_normal(flow_location, packet_stddev, lo, hi);
    }
}

namespace {

void check_model(const AttributeModel& m, const std::string& field) {
    if (m.flow_mixture.empty())
        throw ConfigError("traffic spec: " + field + ".flow_mixture is empty");
    if (m.flow_mixture.size() != m.weights.size())
        throw ConfigError("traffic spec: " + field + ".weights size mismatch");
    double total = 0.0;
    for (double w : m.weights) {
        if (w < 0.0) throw ConfigError("traffic spec: " + field + ".weights has negative entry");
        total += w;
    }
    if (total <= 0.0)
        throw ConfigError("traffic spec: " + field + ".weights sum to zero");
    for (const TruncNormal& c : m.flow_mixture) {
        if (c.lo > c.hi)
            throw ConfigError("traffic spec: " + field + ".flow_mixture has lo > hi");
        if (c.stddev < 0.0)
            throw ConfigError("traffic spec: " + field + ".flow_mixture has negative stddev");
    }
    if (m.lo > m.hi)
        throw ConfigError("traffic spec: " + field + " has lo > hi");
    if (m.packet_stddev < 0.0)
        throw ConfigError("traffic spec: " + field + ".packet_stddev is negative");
}

void check_probs(const std::map<std::string, double>& probs, const std::string& field) {
    if (probs.empty())
        throw ConfigError("traffic spec: " + field + " is empty");
    double total = 0.0;
    for (const auto& [k, p] : probs) {
        if (p < 0.0)
            throw ConfigError("traffic spec: " + field + "[" + k + "] is negative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw ConfigError("traffic spec: " + field + " probabilities do not sum to 1");
}

void check_class(const ClassSpec& cls, const std::string& prefix) {
    if (cls.packets_per_flow < 1)
        throw ConfigError("traffic spec: " + prefix + ".packets_per_flow must be >= 1");
    check_model(cls.length, prefix + ".length");
    check_model(cls.interarrival, prefix + ".interarrival");
    check_model(cls.entropy, prefix + ".entropy");
    if (cls.entropy.lo < 0.0 || cls.entropy.hi > 8.0)
        throw ConfigError("traffic spec: " + prefix + ".entropy bounds outside [0, 8]");
    check_probs(cls.marker_probs, prefix + ".markers");
    for (const auto& [probe, dist] : cls.probe_response_probs)
        check_probs(dist, prefix + ".probe_responses[" + probe + "]");
}

std::string sample_tag(const std::map<std::string, double>& probs, RngStream& rng) {
    std::vector<double> w;
    w.reserve(probs.size());
    for (const auto& [k, p] : probs) w.push_back(p);
    std::size_t idx = rng.categorical(w);
    auto it = probs.begin();
    std::advance(it, static_cast<long>(idx));
    return it->first;
}

} // namespace

void validate_spec(const TrafficSpec& spec) {
    if (spec.n_flows < 1)
        throw ConfigError("traffic spec: n_flows must be positive");
    if (!(spec.disallowed_fraction > 0.0 && spec.disallowed_fraction < 1.0))
        throw ConfigError("traffic spec: disallowed_fraction must lie in (0, 1)");
    check_class(spec.allowed, "allowed");
    check_class(spec.disallowed, "disallowed");
}

Flow generate_flow(const ClassSpec& cls, TrafficType type, std::uint64_t flow_id, RngStream& rng) {
    Flow flow;
    flow.id = flow_id;
    flow.true_type = type;

    double length_loc = cls.length.sample_flow_location(rng);
    double ia_loc = cls.interarrival.sample_flow_location(rng);
    double entropy_loc = cls.entropy.sample_flow_location(rng);

    flow.packets.resize(static_cast<std::size_t>(cls.packets_per_flow));
    double offset = 0.0;
    for (std::size_t p = 0; p < flow.packets.size(); ++p) {
        Packet& pkt = flow.packets[p];
        double len = cls.length.sample_packet_value(length_loc, rng);
        pkt.length = std::max(1, static_cast<int>(std::lround(len)));
        if (p > 0)
            offset += cls.interarrival.sample_packet_value(ia_loc, rng);
        pkt.arrival_offset = offset;
        double ent = cls.entropy.sample_packet_value(entropy_loc, rng);
        pkt.payload_entropy = std::clamp(ent, 0.0, 8.0);
    }

    flow.handshake_marker = sample_tag(cls.marker_probs, rng);
    for (const auto& [probe, dist] : cls.probe_response_probs)
        flow.probe_responses[probe] = sample_tag(dist, rng);
    return flow;
}

TrafficTrace generate_traffic(const TrafficSpec& spec) {
    validate_spec(spec);

    const auto n = static_cast<std::size_t>(spec.n_flows);
    const auto n_disallowed = static_cast<std::size_t>(
        std::llround(static_cast<double>(spec.n_flows) * spec.disallowed_fraction));

    // Deterministic label placement: Fisher-Yates on the type vector
    // from its own substream.
    std::vector<TrafficType> types(n, TrafficType::allowed);
    std::fill_n(types.begin(), n_disallowed, TrafficType::disallowed);
    RngStream perm = RngStream::substream(spec.seed, 0xa11ce5ULL);
    for (std::size_t i = n; i > 1; --i) {
        auto j = static_cast<std::size_t>(perm.next_u64() % i);
        std::swap(types[i - 1], types[j]);
    }

    TrafficTrace trace;
    trace.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng = RngStream::substream(spec.seed, 1, i);
        const ClassSpec& cls =
            types[i] == TrafficType::disallowed ? spec.disallowed : spec.allowed;
        trace.push_back(generate_flow(cls, types[i], i, rng));
    }
    return trace;
}

const std::string& apply_probe(const Flow& flow, const std::string& probe_id) {
    auto it = flow.probe_responses.find(probe_id);
    if (it == flow.probe_responses.end())
        throw ConfigError("unknown probe id: " + probe_id);
    return it->second;
}

std::string trace_to_ndjson(const TrafficTrace& trace) {
    std::ostringstream out;
    for (const Flow& flow : trace) {
        nlohmann::json rec;
        rec["id"] = flow.id;
        rec["true_type"] = to_string(flow.true_type);
        rec["handshake_marker"] = flow.handshake_marker;
        rec["probe_responses"] = flow.probe_responses;
        auto& lengths = rec["lengths"] = nlohmann::json::array();
        auto& offsets = rec["arrival_offsets"] = nlohmann::json::array();
        auto& entropies = rec["payload_entropies"] = nlohmann::json::array();
        for (const Packet& p : flow.packets) {
            lengths.push_back(p.length);
            offsets.push_back(p.arrival_offset);
            entropies.push_back(p.payload_entropy);
        }
        out << rec.dump() << '\n';
    }
    return out.str();
}

} // namespace censim
