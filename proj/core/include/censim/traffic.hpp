#ifndef CENSIM_TRAFFIC_HPP
#define CENSIM_TRAFFIC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "censim/rng.hpp"

namespace censim {

enum class TrafficType { allowed, disallowed };

const char* to_string(TrafficType t);

struct Packet {
    int length = 0;               // bytes, >= 1
    double arrival_offset = 0.0;  // seconds since flow start, non-decreasing
    double payload_entropy = 0.0; // bits/byte, in [0, 8]

    bool operator==(const Packet&) const = default;
};

// One simulated network flow.  true_type is the hidden label; censor-side
// code never reads it except through instance_cost / confusion accounting.
struct Flow {
    std::uint64_t id = 0;
    std::vector<Packet> packets;
    std::string handshake_marker;                        // e.g. "tls-telltale", "none", "cover-protocol-id"
    std::map<std::string, std::string> probe_responses;  // probe id -> response tag
    TrafficType true_type = TrafficType::allowed;

    bool operator==(const Flow&) const = default;
};

using TrafficTrace = std::vector<Flow>;

struct TruncNormal {
    double mean = 0.0;
    double stddev = 1.0;
    double lo = 0.0;
    double hi = 1.0;
};

// Generative model for one packet attribute.  Each flow first draws a
// per-flow location from a mixture of truncated normals, then draws
// per-packet values around that location.  The per-flow draw is what
// makes flow-distributional features non-degenerate across flows.
struct AttributeModel {
    enum class PacketDist { truncated_normal, exponential };

    std::vector<TruncNormal> flow_mixture; // per-flow location components
    std::vector<double> weights;           // same length as flow_mixture
    PacketDist packet_dist = PacketDist::truncated_normal;
    double packet_stddev = 0.0;            // per-packet spread (truncated_normal only)
    double lo = 0.0;                       // per-packet truncation bounds
    double hi = 1.0;

    double sample_flow_location(RngStream& rng) const;
    double sample_packet_value(double flow_location, RngStream& rng) const;
};

// Generative parameters for one traffic class.
struct ClassSpec {
    int packets_per_flow = 50;
    AttributeModel length;
    AttributeModel interarrival;
    AttributeModel entropy;
    std::map<std::string, double> marker_probs;                               // handshake marker -> probability
    std::map<std::string, std::map<std::string, double>> probe_response_probs; // probe id -> response -> probability
};

struct TrafficSpec {
    int n_flows = 0;
    double disallowed_fraction = 0.0; // in (0, 1)
    std::uint64_t seed = 0;
    ClassSpec allowed;
    ClassSpec disallowed;
};

// Validates spec invariants; throws ConfigError naming the offending field.
void validate_spec(const TrafficSpec& spec);

// Generates spec.n_flows flows.  Exactly round(n_flows * disallowed_fraction)
// of them carry true_type == disallowed; type placement and all sampling are
// functions of spec.seed only.
TrafficTrace generate_traffic(const TrafficSpec& spec);

// Generates one flow of the given class from its own substream.
Flow generate_flow(const ClassSpec& cls, TrafficType type, std::uint64_t flow_id, RngStream& rng);

// Returns the flow's pre-generated response for the probe.
// Unknown probe id -> ConfigError.
const std::string& apply_probe(const Flow& flow, const std::string& probe_id);

// One-flow-per-line debug export (line-delimited JSON records).
std::string trace_to_ndjson(const TrafficTrace& trace);

} // namespace censim

#endif
