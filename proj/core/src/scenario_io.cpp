#include "censim/scenario_io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "censim/errors.hpp"

namespace censim {

using nlohmann::json;

namespace {

// ---- strict parsing helpers -------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("scenario: " + path + ": " + msg);
}

const json& expect_object(const json& j, const std::string& path,
                          std::initializer_list<const char*> required,
                          std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) fail(path, "expected an object");
    std::set<std::string> allowed;
    for (const char* k : required) allowed.insert(k);
    for (const char* k : optional) allowed.insert(k);
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) fail(path + "." + key, "unknown key");
    for (const char* k : required)
        if (!j.contains(k)) fail(path + "." + k, "missing required key");
    return j;
}

double get_number(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing required key");
    const json& v = j.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double opt_number(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

std::string get_string(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path + "." + key, "missing required key");
    const json& v = j.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::map<std::string, double> get_prob_map(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object of probabilities");
    std::map<std::string, double> out;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number()) fail(path + "." + key, "expected a number");
        out[key] = value.get<double>();
    }
    return out;
}

AttributeModel parse_attribute(const json& j, const std::string& path) {
    expect_object(j, path, {"flow_mixture", "weights", "packet_dist", "min", "max"},
                  {"packet_stddev"});
    AttributeModel m;
    const json& mix = j.at("flow_mixture");
    if (!mix.is_array() || mix.empty()) fail(path + ".flow_mixture", "expected a non-empty array");
    for (std::size_t i = 0; i < mix.size(); ++i) {
        std::string cpath = path + ".flow_mixture[" + std::to_string(i) + "]";
        expect_object(mix[i], cpath, {"mean", "stddev", "min", "max"});
        TruncNormal c;
        c.mean = get_number(mix[i], cpath, "mean");
        c.stddev = get_number(mix[i], cpath, "stddev");
        c.lo = get_number(mix[i], cpath, "min");
        c.hi = get_number(mix[i], cpath, "max");
        m.flow_mixture.push_back(c);
    }
    m.weights = j.at("weights").get<std::vector<double>>();
    std::string dist = get_string(j, path, "packet_dist");
    if (dist == "truncated-normal")
        m.packet_dist = AttributeModel::PacketDist::truncated_normal;
    else if (dist == "exponential")
        m.packet_dist = AttributeModel::PacketDist::exponential;
    else
        fail(path + ".packet_dist", "expected truncated-normal or exponential");
    m.packet_stddev = opt_number(j, "packet_stddev", 0.0);
    m.lo = get_number(j, path, "min");
    m.hi = get_number(j, path, "max");
    return m;
}

ClassSpec parse_class(const json& j, const std::string& path) {
    expect_object(j, path,
                  {"packets_per_flow", "length", "interarrival", "entropy", "markers",
                   "probe_responses"});
    ClassSpec cls;
    cls.packets_per_flow = static_cast<int>(get_number(j, path, "packets_per_flow"));
    cls.length = parse_attribute(j.at("length"), path + ".length");
    cls.interarrival = parse_attribute(j.at("interarrival"), path + ".interarrival");
    cls.entropy = parse_attribute(j.at("entropy"), path + ".entropy");
    cls.marker_probs = get_prob_map(j.at("markers"), path + ".markers");
    const json& pr = j.at("probe_responses");
    if (!pr.is_object()) fail(path + ".probe_responses", "expected an object");
    for (const auto& [probe, dist] : pr.items())
        cls.probe_response_probs[probe] = get_prob_map(dist, path + ".probe_responses." + probe);
    return cls;
}

FeatureTransform parse_transform(const json& j, const std::string& path) {
    expect_object(j, path, {"target", "mode"}, {"low", "high", "packet_stddev", "marker_value"});
    FeatureTransform t;
    t.target = transform_target_from_string(get_string(j, path, "target"));
    std::string mode = get_string(j, path, "mode");
    if (mode == "polymorphic")
        t.mode = FeatureTransform::Mode::polymorphic;
    else if (mode == "steganographic")
        t.mode = FeatureTransform::Mode::steganographic;
    else if (mode == "set-marker")
        t.mode = FeatureTransform::Mode::set_marker;
    else
        fail(path + ".mode", "expected polymorphic, steganographic, or set-marker");
    t.low = opt_number(j, "low", 0.0);
    t.high = opt_number(j, "high", 0.0);
    t.packet_stddev = opt_number(j, "packet_stddev", 0.0);
    if (j.contains("marker_value")) t.marker_value = j.at("marker_value").get<std::string>();
    return t;
}

Tool parse_tool(const json& j, const std::string& path) {
    if (j.is_object() && j.contains("preset")) {
        expect_object(j, path, {"preset"});
        return tool_preset(j.at("preset").get<std::string>());
    }
    expect_object(j, path, {"id", "transforms", "probe_policy"});
    Tool t;
    t.id = get_string(j, path, "id");
    const json& trs = j.at("transforms");
    if (!trs.is_array()) fail(path + ".transforms", "expected an array");
    for (std::size_t i = 0; i < trs.size(); ++i)
        t.transforms.push_back(
            parse_transform(trs[i], path + ".transforms[" + std::to_string(i) + "]"));
    const json& pp = j.at("probe_policy");
    if (!pp.is_object()) fail(path + ".probe_policy", "expected an object");
    for (const auto& [probe, behavior] : pp.items())
        t.probe_policy[probe] = probe_behavior_from_string(behavior.get<std::string>());
    return t;
}

json attribute_to_json(const AttributeModel& m) {
    json j;
    j["flow_mixture"] = json::array();
    for (const TruncNormal& c : m.flow_mixture)
        j["flow_mixture"].push_back(
            {{"mean", c.mean}, {"stddev", c.stddev}, {"min", c.lo}, {"max", c.hi}});
    j["weights"] = m.weights;
    j["packet_dist"] = m.packet_dist == AttributeModel::PacketDist::exponential
                           ? "exponential"
                           : "truncated-normal";
    j["packet_stddev"] = m.packet_stddev;
    j["min"] = m.lo;
    j["max"] = m.hi;
    return j;
}

json class_to_json(const ClassSpec& cls) {
    json j;
    j["packets_per_flow"] = cls.packets_per_flow;
    j["length"] = attribute_to_json(cls.length);
    j["interarrival"] = attribute_to_json(cls.interarrival);
    j["entropy"] = attribute_to_json(cls.entropy);
    j["markers"] = cls.marker_probs;
    j["probe_responses"] = cls.probe_response_probs;
    return j;
}

json tool_to_json(const Tool& t) {
    json j;
    j["id"] = t.id;
    j["transforms"] = json::array();
    for (const FeatureTransform& tr : t.transforms) {
        json tj;
        tj["target"] = to_string(tr.target);
        switch (tr.mode) {
        case FeatureTransform::Mode::polymorphic:
            tj["mode"] = "polymorphic";
            tj["low"] = tr.low;
            tj["high"] = tr.high;
            tj["packet_stddev"] = tr.packet_stddev;
            break;
        case FeatureTransform::Mode::steganographic:
            tj["mode"] = "steganographic";
            break;
        case FeatureTransform::Mode::set_marker:
            tj["mode"] = "set-marker";
            tj["marker_value"] = tr.marker_value;
            break;
        }
        j["transforms"].push_back(std::move(tj));
    }
    json pp = json::object();
    for (const auto& [probe, behavior] : t.probe_policy) pp[probe] = to_string(behavior);
    j["probe_policy"] = pp;
    return j;
}

std::string format_double(double v) {
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    expect_object(j, "$",
                  {"name", "seed", "traffic", "probes", "catalog", "cost_matrix", "economy",
                   "tools", "schedule", "n_cycles", "training_fraction"},
                  {"strategy", "bins", "alpha", "demand", "obfuscation_epsilon"});

    Scenario s;
    s.name = get_string(j, "$", "name");

    const json& tj = j.at("traffic");
    expect_object(tj, "$.traffic", {"n_flows", "disallowed_fraction", "allowed", "disallowed"});
    s.traffic.n_flows = static_cast<int>(get_number(tj, "$.traffic", "n_flows"));
    s.traffic.disallowed_fraction = get_number(tj, "$.traffic", "disallowed_fraction");
    s.traffic.seed = j.at("seed").get<std::uint64_t>();
    s.traffic.allowed = parse_class(tj.at("allowed"), "$.traffic.allowed");
    s.traffic.disallowed = parse_class(tj.at("disallowed"), "$.traffic.disallowed");

    const json& probes = j.at("probes");
    if (!probes.is_array()) fail("$.probes", "expected an array");
    for (std::size_t i = 0; i < probes.size(); ++i) {
        std::string path = "$.probes[" + std::to_string(i) + "]";
        expect_object(probes[i], path, {"id", "tool_response", "silent_response"});
        Probe p;
        p.id = get_string(probes[i], path, "id");
        p.tool_response = get_string(probes[i], path, "tool_response");
        p.silent_response = get_string(probes[i], path, "silent_response");
        s.probes.push_back(std::move(p));
    }

    const json& catalog = j.at("catalog");
    if (!catalog.is_array()) fail("$.catalog", "expected an array");
    std::vector<Feature> features;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        std::string path = "$.catalog[" + std::to_string(i) + "]";
        expect_object(catalog[i], path,
                      {"id", "level", "measurements", "extractor", "store_bytes", "impl_loc"});
        Feature f;
        f.id = get_string(catalog[i], path, "id");
        f.level = feature_level_from_string(get_string(catalog[i], path, "level"));
        for (const auto& m : catalog[i].at("measurements"))
            f.required_measurements.insert(m.get<std::string>());
        f.extractor = get_string(catalog[i], path, "extractor");
        f.store_bytes = static_cast<long>(get_number(catalog[i], path, "store_bytes"));
        f.impl_loc = static_cast<long>(get_number(catalog[i], path, "impl_loc"));
        features.push_back(std::move(f));
    }
    s.catalog = FeatureCatalog(std::move(features));

    const json& cm = j.at("cost_matrix");
    expect_object(cm, "$.cost_matrix", {"disallowed_allow", "allowed_disallow"},
                  {"disallowed_disallow", "allowed_allow"});
    s.cost_matrix = CostMatrix(get_number(cm, "$.cost_matrix", "disallowed_allow"),
                               get_number(cm, "$.cost_matrix", "allowed_disallow"),
                               opt_number(cm, "disallowed_disallow", 0.0),
                               opt_number(cm, "allowed_allow", 0.0));

    const json& econ = j.at("economy");
    expect_object(econ, "$.economy", {"op_cost", "store_rate", "imp_rate", "level_multipliers"});
    for (const auto& [m, c] : econ.at("op_cost").items())
        s.econ.op_cost[m] = c.get<double>();
    s.econ.store_rate = get_number(econ, "$.economy", "store_rate");
    s.econ.imp_rate = get_number(econ, "$.economy", "imp_rate");
    for (const auto& [level, mult] : econ.at("level_multipliers").items())
        s.econ.level_multipliers[feature_level_from_string(level)] = mult.get<double>();

    const json& tools = j.at("tools");
    if (!tools.is_array()) fail("$.tools", "expected an array");
    for (std::size_t i = 0; i < tools.size(); ++i)
        s.tools.push_back(parse_tool(tools[i], "$.tools[" + std::to_string(i) + "]"));

    s.schedule = j.at("schedule").get<std::vector<std::string>>();
    s.n_cycles = static_cast<int>(get_number(j, "$", "n_cycles"));
    s.training_fraction = get_number(j, "$", "training_fraction");

    std::string strategy = j.contains("strategy") ? j.at("strategy").get<std::string>()
                                                  : "exhaustive";
    if (strategy == "exhaustive")
        s.strategy = SelectionStrategy::exhaustive;
    else if (strategy == "greedy")
        s.strategy = SelectionStrategy::greedy;
    else
        fail("$.strategy", "expected exhaustive or greedy");
    s.bins = static_cast<int>(opt_number(j, "bins", 16));
    s.alpha = opt_number(j, "alpha", 1.0);
    if (j.contains("demand")) {
        expect_object(j.at("demand"), "$.demand", {"max_fn_rate", "max_fp_rate"});
        s.demand.max_fn_rate = get_number(j.at("demand"), "$.demand", "max_fn_rate");
        s.demand.max_fp_rate = get_number(j.at("demand"), "$.demand", "max_fp_rate");
    }
    s.obfuscation_epsilon = opt_number(j, "obfuscation_epsilon", 0.05);

    s.validate();
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["seed"] = s.traffic.seed;
    j["traffic"] = {{"n_flows", s.traffic.n_flows},
                    {"disallowed_fraction", s.traffic.disallowed_fraction},
                    {"allowed", class_to_json(s.traffic.allowed)},
                    {"disallowed", class_to_json(s.traffic.disallowed)}};
    j["probes"] = json::array();
    for (const Probe& p : s.probes)
        j["probes"].push_back({{"id", p.id},
                               {"tool_response", p.tool_response},
                               {"silent_response", p.silent_response}});
    j["catalog"] = json::array();
    for (const Feature& f : s.catalog.features())
        j["catalog"].push_back({{"id", f.id},
                                {"level", to_string(f.level)},
                                {"measurements",
                                 std::vector<std::string>(f.required_measurements.begin(),
                                                          f.required_measurements.end())},
                                {"extractor", f.extractor},
                                {"store_bytes", f.store_bytes},
                                {"impl_loc", f.impl_loc}});
    j["cost_matrix"] = {
        {"disallowed_allow", s.cost_matrix.at(TrafficType::disallowed, Action::allow)},
        {"allowed_disallow", s.cost_matrix.at(TrafficType::allowed, Action::disallow)},
        {"disallowed_disallow", s.cost_matrix.at(TrafficType::disallowed, Action::disallow)},
        {"allowed_allow", s.cost_matrix.at(TrafficType::allowed, Action::allow)}};
    json mult = json::object();
    for (const auto& [level, m] : s.econ.level_multipliers) mult[to_string(level)] = m;
    j["economy"] = {{"op_cost", s.econ.op_cost},
                    {"store_rate", s.econ.store_rate},
                    {"imp_rate", s.econ.imp_rate},
                    {"level_multipliers", mult}};
    j["tools"] = json::array();
    for (const Tool& t : s.tools) j["tools"].push_back(tool_to_json(t));
    j["schedule"] = s.schedule;
    j["n_cycles"] = s.n_cycles;
    j["training_fraction"] = s.training_fraction;
    j["strategy"] = s.strategy == SelectionStrategy::greedy ? "greedy" : "exhaustive";
    j["bins"] = s.bins;
    j["alpha"] = s.alpha;
    j["demand"] = {{"max_fn_rate", s.demand.max_fn_rate}, {"max_fp_rate", s.demand.max_fp_rate}};
    j["obfuscation_epsilon"] = s.obfuscation_epsilon;
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

std::string apply_overrides(const std::string& text, const std::vector<std::string>& overrides) {
    if (overrides.empty()) return text;
    json j = json::parse(text);
    for (const std::string& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override must look like key=value: " + ov);
        std::string path = ov.substr(0, eq);
        std::string raw = ov.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw; // treat as a string
        }
        json* node = &j;
        std::size_t start = 0;
        while (true) {
            std::size_t dot = path.find('.', start);
            std::string key = path.substr(start, dot - start);
            if (key.empty()) throw ConfigError("bad override path: " + path);
            if (dot == std::string::npos) {
                (*node)[key] = value;
                break;
            }
            node = &(*node)[key];
            start = dot + 1;
        }
    }
    return j.dump(2);
}

// ---- stock scenarios ---------------------------------------------------

namespace {

AttributeModel single_component(double mean, double stddev, double lo, double hi,
                                AttributeModel::PacketDist dist, double packet_stddev,
                                double plo, double phi) {
    AttributeModel m;
    m.flow_mixture = {TruncNormal{mean, stddev, lo, hi}};
    m.weights = {1.0};
    m.packet_dist = dist;
    m.packet_stddev = packet_stddev;
    m.lo = plo;
    m.hi = phi;
    return m;
}

// Diverse allowed traffic: per-flow behavior spread over a wide range so
// that a tool spreading its own behavior over the same range blends in.
ClassSpec stock_allowed() {
    ClassSpec cls;
    cls.packets_per_flow = 50;
    cls.length = single_component(800.0, 330.0, 250.0, 1350.0,
                                  AttributeModel::PacketDist::truncated_normal, 50.0, 64.0, 1500.0);
    cls.interarrival = single_component(0.11, 0.055, 0.02, 0.2,
                                        AttributeModel::PacketDist::exponential, 0.0, 0.0, 10.0);
    cls.entropy = single_component(4.0, 1.2, 0.5, 6.8,
                                   AttributeModel::PacketDist::truncated_normal, 0.3, 0.0, 8.0);
    cls.marker_probs = {{"none", 0.65}, {"cover-protocol-id", 0.35}};
    cls.probe_response_probs = {
        {"tor-handshake", {{"no-tor-response", 1.0}}},
        {"cover-anomaly", {{"cover-consistent", 0.9}, {"not-cover", 0.1}}},
    };
    return cls;
}

// Plain-Tor-like disallowed traffic: long concentrated flows with an
// encrypted payload and a telltale handshake.
ClassSpec stock_disallowed() {
    ClassSpec cls;
    cls.packets_per_flow = 200;
    cls.length = single_component(560.0, 10.0, 540.0, 580.0,
                                  AttributeModel::PacketDist::truncated_normal, 25.0, 64.0, 1500.0);
    cls.interarrival = single_component(0.011, 0.002, 0.006, 0.016,
                                        AttributeModel::PacketDist::exponential, 0.0, 0.0, 10.0);
    cls.entropy = single_component(7.7, 0.1, 7.3, 8.0,
                                   AttributeModel::PacketDist::truncated_normal, 0.1, 0.0, 8.0);
    cls.marker_probs = {{"tls-telltale", 1.0}};
    cls.probe_response_probs = {
        {"tor-handshake", {{"responds-as-tor", 1.0}}},
        {"cover-anomaly", {{"not-cover", 1.0}}},
    };
    return cls;
}

std::vector<Probe> stock_probes() {
    return {{"tor-handshake", "responds-as-tor", "no-tor-response"},
            {"cover-anomaly", "masquerade-revealed", "not-cover"}};
}

Feature make_feature(std::string id, FeatureLevel level, std::set<std::string> meas,
                     std::string extractor, long store_bytes, long impl_loc) {
    Feature f;
    f.id = std::move(id);
    f.level = level;
    f.required_measurements = std::move(meas);
    f.extractor = std::move(extractor);
    f.store_bytes = store_bytes;
    f.impl_loc = impl_loc;
    return f;
}

Feature stock_feature(const std::string& id) {
    if (id == "handshake")
        return make_feature("handshake", FeatureLevel::packet_level, {"handshake"},
                            "handshake-marker", 4, 20);
    if (id == "lengths")
        return make_feature("lengths", FeatureLevel::flow_distributional, {"pkt-length"},
                            "mean-packet-length", 16, 60);
    if (id == "timings")
        return make_feature("timings", FeatureLevel::flow_distributional, {"pkt-timing"},
                            "mean-interarrival", 16, 60);
    if (id == "connection-length")
        return make_feature("connection-length", FeatureLevel::flow_distributional,
                            {"pkt-timing"}, "connection-duration", 8, 40);
    if (id == "payload")
        return make_feature("payload", FeatureLevel::stateful, {"pkt-payload"},
                            "mean-payload-entropy", 64, 150);
    if (id == "cover-anomaly")
        return make_feature("cover-anomaly", FeatureLevel::probe, {"probe:cover-anomaly"},
                            "probe:cover-anomaly", 4, 30);
    throw ConfigError("unknown stock feature: " + id);
}

Scenario stock_base() {
    Scenario s;
    s.traffic.n_flows = 2000;
    s.traffic.disallowed_fraction = 0.15;
    s.traffic.seed = 1;
    s.traffic.allowed = stock_allowed();
    s.traffic.disallowed = stock_disallowed();
    s.probes = stock_probes();
    s.cost_matrix = CostMatrix(5.0, 5.0);
    s.econ.op_cost = {{"pkt-length", 0.5},          {"pkt-timing", 0.5},
                      {"pkt-payload", 1.0},         {"handshake", 0.2},
                      {"probe:tor-handshake", 2.0}, {"probe:cover-anomaly", 2.0}};
    s.econ.store_rate = 0.05;
    s.econ.imp_rate = 0.5;
    s.econ.level_multipliers = {{FeatureLevel::packet_level, 1.0},
                                {FeatureLevel::flow_distributional, 2.0},
                                {FeatureLevel::stateful, 4.0},
                                {FeatureLevel::probe, 1.0}};
    s.training_fraction = 0.5;
    s.strategy = SelectionStrategy::exhaustive;
    s.bins = 16;
    s.alpha = 1.0;
    s.demand = {0.05, 0.05};
    s.obfuscation_epsilon = 0.05;
    return s;
}

FeatureCatalog catalog_of(const std::vector<std::string>& ids) {
    std::vector<Feature> features;
    for (const std::string& id : ids) features.push_back(stock_feature(id));
    return FeatureCatalog(std::move(features));
}

} // namespace

std::vector<std::string> stock_scenario_names() {
    return {"figure1-polymorphism", "figure2-steganography", "blacklist-poly-vs-steg",
            "tool-reeval"};
}

Scenario stock_scenario(const std::string& name) {
    Scenario s = stock_base();
    s.name = name;
    if (name == "figure1-polymorphism") {
        s.catalog = catalog_of({"handshake", "lengths", "timings", "payload"});
        s.tools = {tool_preset("plain-tor-like"), tool_preset("scramblesuit-like")};
        s.schedule = {"plain-tor-like", "scramblesuit-like"};
        s.n_cycles = 2;
    } else if (name == "figure2-steganography") {
        s.catalog = catalog_of({"handshake", "lengths", "timings", "cover-anomaly"});
        s.tools = {tool_preset("plain-tor-like"), tool_preset("skypemorph-like")};
        s.schedule = {"plain-tor-like", "skypemorph-like"};
        s.n_cycles = 2;
    } else if (name == "blacklist-poly-vs-steg") {
        s.catalog =
            catalog_of({"handshake", "lengths", "timings", "connection-length", "cover-anomaly"});
        s.tools = {tool_preset("plain-tor-like"), tool_preset("scramblesuit-like"),
                   tool_preset("skypemorph-like")};
        s.schedule = {"plain-tor-like"};
        s.n_cycles = 1;
    } else if (name == "tool-reeval") {
        s.catalog = catalog_of({"handshake", "lengths", "timings", "connection-length", "payload",
                                "cover-anomaly"});
        s.tools = {tool_preset("plain-tor-like"), tool_preset("scramblesuit-like"),
                   tool_preset("skypemorph-like"), tool_preset("stegotorus-like")};
        s.schedule = {"plain-tor-like"};
        s.n_cycles = 1;
    } else {
        throw ConfigError("unknown stock scenario: " + name);
    }
    s.validate();
    return s;
}

// ---- report emission ---------------------------------------------------

std::string cycles_to_csv(const std::vector<CycleReport>& reports) {
    std::ostringstream out;
    out << "cycle,classification,operating,storage,implementation,total,fn_rate,fp_rate,"
           "feature_set,tool\n";
    for (const CycleReport& r : reports) {
        out << r.cycle << ',' << format_double(r.costs.classification) << ','
            << format_double(r.costs.operating) << ',' << format_double(r.costs.storage) << ','
            << format_double(r.costs.implementation) << ',' << format_double(r.costs.total) << ','
            << format_double(r.confusion.fn_rate) << ',' << format_double(r.confusion.fp_rate)
            << ',' << join(r.feature_set, ';') << ',' << r.tool_id << '\n';
    }
    return out.str();
}

std::string report_to_json(const Scenario& s, const std::vector<CycleReport>& reports,
                           bool frozen) {
    json j;
    j["scenario"] = s.name;
    j["seed"] = s.traffic.seed;
    j["frozen_classifier"] = frozen;
    j["cycles"] = json::array();
    for (const CycleReport& r : reports) {
        json cj;
        cj["cycle"] = r.cycle;
        cj["tool"] = r.tool_id;
        cj["feature_set"] = r.feature_set;
        cj["costs"] = {{"classification", r.costs.classification},
                       {"operating", r.costs.operating},
                       {"storage", r.costs.storage},
                       {"implementation", r.costs.implementation},
                       {"total", r.costs.total}};
        cj["confusion"] = {{"true_positives", r.confusion.true_positives},
                           {"false_positives", r.confusion.false_positives},
                           {"true_negatives", r.confusion.true_negatives},
                           {"false_negatives", r.confusion.false_negatives},
                           {"fn_rate", r.confusion.fn_rate},
                           {"fp_rate", r.confusion.fp_rate}};
        j["cycles"].push_back(std::move(cj));
    }
    j["grand_total"] = grand_total(reports);
    if (!reports.empty()) {
        j["final_fn_rate"] = reports.back().confusion.fn_rate;
        j["final_fp_rate"] = reports.back().confusion.fp_rate;
    }
    return j.dump(2) + "\n";
}

std::string tool_scores_to_csv(const std::vector<ToolScore>& scores) {
    std::ostringstream out;
    out << "rank,tool,feasible,score,feature_set,obfuscated_features\n";
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const ToolScore& s = scores[i];
        std::vector<std::string> flagged;
        for (const auto& [id, on] : s.obfuscated)
            if (on) flagged.push_back(id);
        out << (i + 1) << ',' << s.tool_id << ',' << (s.feasible ? "yes" : "no") << ','
            << (s.feasible ? format_double(s.costs.total) : std::string("infeasible")) << ','
            << join(s.feature_set, ';') << ',' << join(flagged, ';') << '\n';
    }
    return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace censim
