#include "censim/evader.hpp"

#include <algorithm>
#include <cmath>

#include "censim/errors.hpp"

namespace censim {

const char* to_string(TransformTarget t) {
    switch (t) {
    case TransformTarget::packet_lengths: return "packet-lengths";
    case TransformTarget::interarrivals: return "interarrivals";
    case TransformTarget::payload_entropy: return "payload-entropy";
    case TransformTarget::handshake_marker: return "handshake-marker";
    case TransformTarget::connection_profile: return "connection-profile";
    }
    return "packet-lengths";
}

TransformTarget transform_target_from_string(const std::string& s) {
    if (s == "packet-lengths") return TransformTarget::packet_lengths;
    if (s == "interarrivals") return TransformTarget::interarrivals;
    if (s == "payload-entropy") return TransformTarget::payload_entropy;
    if (s == "handshake-marker") return TransformTarget::handshake_marker;
    if (s == "connection-profile") return TransformTarget::connection_profile;
    throw ConfigError("unknown transform target: " + s);
}

const char* to_string(ProbeBehavior b) {
    switch (b) {
    case ProbeBehavior::respond_as_tool: return "respond-as-tool";
    case ProbeBehavior::respond_as_cover: return "respond-as-cover";
    case ProbeBehavior::silent: return "silent";
    }
    return "silent";
}

ProbeBehavior probe_behavior_from_string(const std::string& s) {
    if (s == "respond-as-tool") return ProbeBehavior::respond_as_tool;
    if (s == "respond-as-cover") return ProbeBehavior::respond_as_cover;
    if (s == "silent") return ProbeBehavior::silent;
    throw ConfigError("unknown probe behavior: " + s);
}

namespace {

void rewrite_lengths(Flow& flow, const FeatureTransform& tr, const ClassSpec& allowed_ref,
                     RngStream& rng) {
    const AttributeModel& ref = allowed_ref.length;
    double loc;
    double spread;
    if (tr.mode == FeatureTransform::Mode::polymorphic) {
        if (!(tr.high > tr.low))
            throw ConfigError("polymorphic transform on packet-lengths: degenerate range");
        loc = rng.uniform(tr.low, tr.high);
        spread = tr.packet_stddev;
    } else {
        loc = ref.sample_flow_location(rng);
        spread = ref.packet_stddev;
    }
    for (Packet& p : flow.packets) {
        double v = rng.truncated_normal(loc, spread, ref.lo, ref.hi);
        p.length = std::max(1, static_cast<int>(std::lround(v)));
    }
}

void rewrite_timings(Flow& flow, const FeatureTransform& tr, const ClassSpec& allowed_ref,
                     RngStream& rng) {
    const AttributeModel& ref = allowed_ref.interarrival;
    double loc;
    if (tr.mode == FeatureTransform::Mode::polymorphic) {
        if (!(tr.high > tr.low))
            throw ConfigError("polymorphic transform on interarrivals: degenerate range");
        loc = rng.uniform(tr.low, tr.high);
    } else {
        loc = ref.sample_flow_location(rng);
    }
    double offset = 0.0;
    for (std::size_t i = 0; i < flow.packets.size(); ++i) {
        if (i > 0) {
            double ia = tr.mode == FeatureTransform::Mode::polymorphic
                            ? rng.exponential(std::max(loc, 1e-9))
                            : ref.sample_packet_value(loc, rng);
            offset += ia;
        }
        flow.packets[i].arrival_offset = offset;
    }
}

void rewrite_entropy(Flow& flow, const FeatureTransform& tr, const ClassSpec& allowed_ref,
                     RngStream& rng) {
    const AttributeModel& ref = allowed_ref.entropy;
    double loc;
    double spread;
    if (tr.mode == FeatureTransform::Mode::polymorphic) {
        if (!(tr.high > tr.low))
            throw ConfigError("polymorphic transform on payload-entropy: degenerate range");
        loc = rng.uniform(tr.low, tr.high);
        spread = tr.packet_stddev;
    } else {
        loc = ref.sample_flow_location(rng);
        spread = ref.packet_stddev;
    }
    for (Packet& p : flow.packets) {
        double v = rng.truncated_normal(loc, spread, ref.lo, ref.hi);
        p.payload_entropy = std::clamp(v, 0.0, 8.0);
    }
}

// Adopts the cover class's connection shape: packet count and timing
// profile.  Extra packets reuse lengths/entropies drawn from the flow's
// own packets so per-packet attribute distributions are unaffected.
void rewrite_connection_profile(Flow& flow, const FeatureTransform& tr,
                                const ClassSpec& allowed_ref, RngStream& rng) {
    if (tr.mode != FeatureTransform::Mode::steganographic)
        throw ConfigError("connection-profile transform supports steganographic mode only");
    const std::size_t n_new = static_cast<std::size_t>(allowed_ref.packets_per_flow);
    const std::vector<Packet> old = flow.packets;
    flow.packets.resize(n_new);
    for (std::size_t i = old.size(); i < n_new; ++i) {
        std::size_t j = static_cast<std::size_t>(rng.next_u64() % old.size());
        flow.packets[i].length = old[j].length;
        flow.packets[i].payload_entropy = old[j].payload_entropy;
    }
    FeatureTransform timing{TransformTarget::interarrivals,
                            FeatureTransform::Mode::steganographic};
    rewrite_timings(flow, timing, allowed_ref, rng);
}

} // namespace

Flow transform_flow(const Tool& tool, const Flow& flow, const ClassSpec& allowed_ref,
                    const std::vector<Probe>& probes, RngStream& rng) {
    if (flow.true_type == TrafficType::allowed) return flow;
    if (flow.packets.empty())
        throw ConfigError("transform_flow: flow has no packets");

    Flow out = flow;
    for (const FeatureTransform& tr : tool.transforms) {
        switch (tr.target) {
        case TransformTarget::packet_lengths:
            rewrite_lengths(out, tr, allowed_ref, rng);
            break;
        case TransformTarget::interarrivals:
            rewrite_timings(out, tr, allowed_ref, rng);
            break;
        case TransformTarget::payload_entropy:
            rewrite_entropy(out, tr, allowed_ref, rng);
            break;
        case TransformTarget::handshake_marker:
            if (tr.mode != FeatureTransform::Mode::set_marker)
                throw ConfigError("handshake-marker transform supports set-marker mode only");
            out.handshake_marker = tr.marker_value;
            break;
        case TransformTarget::connection_profile:
            rewrite_connection_profile(out, tr, allowed_ref, rng);
            break;
        }
    }

    for (const Probe& probe : probes) {
        auto it = tool.probe_policy.find(probe.id);
        if (it == tool.probe_policy.end()) continue; // keep generated response
        switch (it->second) {
        case ProbeBehavior::respond_as_tool:
            out.probe_responses[probe.id] = probe.tool_response;
            break;
        case ProbeBehavior::silent:
            out.probe_responses[probe.id] = probe.silent_response;
            break;
        case ProbeBehavior::respond_as_cover: {
            auto dist = allowed_ref.probe_response_probs.find(probe.id);
            if (dist == allowed_ref.probe_response_probs.end()) {
                out.probe_responses[probe.id] = probe.silent_response;
            } else {
                std::vector<double> w;
                for (const auto& [k, p] : dist->second) w.push_back(p);
                std::size_t idx = rng.categorical(w);
                auto resp = dist->second.begin();
                std::advance(resp, static_cast<long>(idx));
                out.probe_responses[probe.id] = resp->first;
            }
            break;
        }
        }
    }
    return out;
}

TrafficTrace apply_tool(const Tool& tool, const TrafficTrace& trace,
                        const ClassSpec& allowed_ref, const std::vector<Probe>& probes,
                        std::uint64_t seed) {
    TrafficTrace out;
    out.reserve(trace.size());
    for (const Flow& flow : trace) {
        if (flow.true_type == TrafficType::allowed) {
            out.push_back(flow);
        } else {
            RngStream rng = RngStream::substream(seed, 0x70011ULL, flow.id);
            out.push_back(transform_flow(tool, flow, allowed_ref, probes, rng));
        }
    }
    return out;
}

namespace {

FeatureTransform poly(TransformTarget target, double low, double high, double stddev = 0.0) {
    FeatureTransform t;
    t.target = target;
    t.mode = FeatureTransform::Mode::polymorphic;
    t.low = low;
    t.high = high;
    t.packet_stddev = stddev;
    return t;
}

FeatureTransform steg(TransformTarget target) {
    FeatureTransform t;
    t.target = target;
    t.mode = FeatureTransform::Mode::steganographic;
    return t;
}

FeatureTransform marker(const std::string& value) {
    FeatureTransform t;
    t.target = TransformTarget::handshake_marker;
    t.mode = FeatureTransform::Mode::set_marker;
    t.marker_value = value;
    return t;
}

} // namespace

Tool tool_preset(const std::string& name) {
    Tool tool;
    tool.id = name;
    if (name == "plain-tor-like") {
        tool.transforms = {marker("tls-telltale")};
        tool.probe_policy = {{"tor-handshake", ProbeBehavior::respond_as_tool},
                             {"cover-anomaly", ProbeBehavior::silent}};
    } else if (name == "scramblesuit-like") {
        // polymorphic lengths and timings, no telltale handshake,
        // password-gated probe responses
        tool.transforms = {poly(TransformTarget::packet_lengths, 250.0, 1350.0, 25.0),
                           poly(TransformTarget::interarrivals, 0.02, 0.2),
                           marker("none")};
        tool.probe_policy = {{"tor-handshake", ProbeBehavior::silent},
                             {"cover-anomaly", ProbeBehavior::silent}};
    } else if (name == "skypemorph-like") {
        // mimics cover packet sizes and delays but fails to mimic the
        // cover protocol's error behavior
        tool.transforms = {steg(TransformTarget::packet_lengths),
                           steg(TransformTarget::interarrivals),
                           marker("cover-protocol-id")};
        tool.probe_policy = {{"tor-handshake", ProbeBehavior::silent},
                             {"cover-anomaly", ProbeBehavior::respond_as_tool}};
    } else if (name == "stegotorus-like") {
        // mimics connection shape, payloads, and packet sizes; same
        // probe weakness as other mimics
        tool.transforms = {steg(TransformTarget::connection_profile),
                           steg(TransformTarget::packet_lengths),
                           steg(TransformTarget::payload_entropy),
                           marker("cover-protocol-id")};
        tool.probe_policy = {{"tor-handshake", ProbeBehavior::silent},
                             {"cover-anomaly", ProbeBehavior::respond_as_tool}};
    } else {
        throw ConfigError("unknown tool preset: " + name);
    }
    return tool;
}

std::vector<std::string> tool_preset_names() {
    return {"plain-tor-like", "scramblesuit-like", "skypemorph-like", "stegotorus-like"};
}

} // namespace censim
