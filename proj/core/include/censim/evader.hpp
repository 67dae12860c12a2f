#ifndef CENSIM_EVADER_HPP
#define CENSIM_EVADER_HPP

#include <map>
#include <string>
#include <vector>

#include "censim/traffic.hpp"

namespace censim {

// An active probe the censor can send.  tool_response is the telltale an
// unobfuscated tool produces; silent_response is what a client without the
// tool's behavior (or behind a password gate) produces.
struct Probe {
    std::string id;
    std::string tool_response;
    std::string silent_response;

    bool operator==(const Probe&) const = default;
};

enum class TransformTarget {
    packet_lengths,
    interarrivals,
    payload_entropy,
    handshake_marker,
    connection_profile, // packet count + timing profile of the cover class
};

const char* to_string(TransformTarget t);
TransformTarget transform_target_from_string(const std::string& s);

// One attribute rewrite.  Polymorphic mode redraws a fresh per-flow
// location uniformly over [low, high]; steganographic mode samples from
// the allowed class's generative model for the attribute; set_marker
// overwrites the handshake marker.
struct FeatureTransform {
    TransformTarget target = TransformTarget::packet_lengths;
    enum class Mode { polymorphic, steganographic, set_marker } mode = Mode::polymorphic;
    double low = 0.0;           // polymorphic range
    double high = 0.0;
    double packet_stddev = 0.0; // per-packet spread around the polymorphic location
    std::string marker_value;   // set_marker only

    bool operator==(const FeatureTransform&) const = default;
};

enum class ProbeBehavior { respond_as_tool, respond_as_cover, silent };

const char* to_string(ProbeBehavior b);
ProbeBehavior probe_behavior_from_string(const std::string& s);

// An evasion tool: an ordered list of attribute transforms plus a probe
// response policy.  Probes absent from the policy keep the flow's
// generated response.
struct Tool {
    std::string id;
    std::vector<FeatureTransform> transforms;
    std::map<std::string, ProbeBehavior> probe_policy;

    bool operator==(const Tool&) const = default;
};

// Applies the tool to one disallowed flow.  Allowed flows pass through
// unchanged.  Untouched attributes are preserved exactly; true_type never
// changes.
Flow transform_flow(const Tool& tool, const Flow& flow, const ClassSpec& allowed_ref,
                    const std::vector<Probe>& probes, RngStream& rng);

// Applies the tool across a trace with one substream per flow.
TrafficTrace apply_tool(const Tool& tool, const TrafficTrace& trace,
                        const ClassSpec& allowed_ref, const std::vector<Probe>& probes,
                        std::uint64_t seed);

// Composite presets: "plain-tor-like", "scramblesuit-like",
// "skypemorph-like", "stegotorus-like".  Unknown names -> ConfigError.
Tool tool_preset(const std::string& name);

std::vector<std::string> tool_preset_names();

} // namespace censim

#endif
