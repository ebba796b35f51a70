// Copyright 2026 The vecop Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vecop/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include <json.hpp>

namespace vecop {

using nlohmann::json;

std::string_view to_string(NodeKind kind)
{
    switch (kind) {
    case NodeKind::Vehicle: return "vehicle";
    case NodeKind::Edge: return "edge";
    case NodeKind::Cloud: return "cloud";
    }
    return "?";
}

std::string_view to_string(Medium medium)
{
    switch (medium) {
    case Medium::Dsrc: return "dsrc";
    case Medium::Wifi: return "wifi";
    case Medium::Fiber: return "fiber";
    }
    return "?";
}

std::string_view to_string(ProcessingSetting setting)
{
    switch (setting) {
    case ProcessingSetting::VehiclesOnly: return "vehicles_only";
    case ProcessingSetting::VehiclesAndEdge: return "vehicles_and_edge";
    case ProcessingSetting::CloudOnly: return "cloud_only";
    }
    return "?";
}

std::string_view to_string(ObjectivePreset preset)
{
    switch (preset) {
    case ObjectivePreset::PowerOnly: return "power_only";
    case ObjectivePreset::JointEqual: return "joint_equal";
    case ObjectivePreset::Custom: return "custom";
    }
    return "?";
}

std::string_view to_string(RadiatedPowerMode mode)
{
    return mode == RadiatedPowerMode::Minimum ? "minimum" : "maximum";
}

namespace {

template <typename Enum, std::size_t N>
Enum enum_from(std::string_view text, const Enum (&values)[N], std::string_view field)
{
    for (Enum v : values) {
        if (to_string(v) == text)
            return v;
    }
    throw ValidationError(std::string(field) + ": unknown value '" + std::string(text) + "'");
}

constexpr NodeKind kKinds[] = {NodeKind::Vehicle, NodeKind::Edge, NodeKind::Cloud};
constexpr Medium kMedia[] = {Medium::Dsrc, Medium::Wifi, Medium::Fiber};
constexpr ProcessingSetting kSettings[] = {ProcessingSetting::VehiclesOnly,
                                           ProcessingSetting::VehiclesAndEdge,
                                           ProcessingSetting::CloudOnly};
constexpr ObjectivePreset kPresets[] = {ObjectivePreset::PowerOnly, ObjectivePreset::JointEqual,
                                        ObjectivePreset::Custom};
constexpr RadiatedPowerMode kModes[] = {RadiatedPowerMode::Minimum, RadiatedPowerMode::Maximum};

}  // namespace

ProcessingSetting parse_processing_setting(std::string_view text)
{
    return enum_from(text, kSettings, "processing_setting");
}

ObjectivePreset parse_objective_preset(std::string_view text)
{
    return enum_from(text, kPresets, "objective.preset");
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(what), line_(line), column_(column)
{
}

const RadioSpec* NodeSpec::radio(Medium medium) const
{
    for (const auto& r : radios) {
        if (r.medium == medium)
            return &r;
    }
    return nullptr;
}

std::optional<std::size_t> Scenario::find_node(std::string_view id) const
{
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id == id)
            return i;
    }
    return std::nullopt;
}

const NodeSpec& Scenario::node(std::string_view id) const
{
    auto i = find_node(id);
    if (!i)
        throw ValidationError("unknown node '" + std::string(id) + "'");
    return nodes[*i];
}

double Scenario::load_mips(std::size_t demand) const
{
    const auto& d = demands.at(demand);
    return d.load_mips ? *d.load_mips : settings.mips_per_kbps * d.traffic_kbps;
}

// ----- validation -----

namespace {

void require(bool ok, const std::string& field, const char* why)
{
    if (!ok)
        throw ValidationError(field + ": " + why);
}

bool finite(double v) { return std::isfinite(v); }

void check_processor(const ProcessorSpec& p, const std::string& where)
{
    require(finite(p.capacity_mips) && p.capacity_mips > 0, where + ".capacity_mips",
            "must be positive");
    require(finite(p.power_idle_w) && p.power_idle_w > 0, where + ".power_idle_w",
            "must be positive");
    require(finite(p.power_max_w) && p.power_max_w >= p.power_idle_w, where + ".power_max_w",
            "must be at least power_idle_w");
}

void check_radio(const RadioSpec& r, const std::string& where)
{
    require(r.medium != Medium::Fiber, where + ".medium", "radios are dsrc or wifi");
    require(finite(r.bandwidth_bps) && r.bandwidth_bps > 0, where + ".bandwidth_bps",
            "must be positive");
    require(finite(r.freq_hz) && r.freq_hz > 0, where + ".freq_hz", "must be positive");
    require(finite(r.tx_power_max_dbm), where + ".tx_power_max_dbm", "must be finite");
    require(finite(r.rx_sensitivity_dbm), where + ".rx_sensitivity_dbm", "must be finite");
    require(finite(r.link_margin_db), where + ".link_margin_db", "must be finite");
    require(finite(r.power_idle_w) && r.power_idle_w > 0, where + ".power_idle_w",
            "must be positive");
    require(finite(r.power_max_w) && r.power_max_w >= r.power_idle_w, where + ".power_max_w",
            "must be at least power_idle_w");
}

}  // namespace

void validate(Scenario& s)
{
    require(finite(s.lot.width_m) && s.lot.width_m > 0, "lot.width_m", "must be positive");
    require(finite(s.lot.height_m) && s.lot.height_m > 0, "lot.height_m", "must be positive");

    std::sort(s.nodes.begin(), s.nodes.end(),
              [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
    std::sort(s.demands.begin(), s.demands.end(),
              [](const DemandSpec& a, const DemandSpec& b) { return a.id < b.id; });

    std::size_t clouds = 0;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& n = s.nodes[i];
        const std::string where = "nodes." + n.id;
        require(!n.id.empty(), "nodes[].id", "must not be empty");
        require(i == 0 || s.nodes[i - 1].id != n.id, where, "duplicate node id");
        check_processor(n.processor, where + ".processor");
        for (std::size_t r = 0; r < n.radios.size(); ++r) {
            check_radio(n.radios[r], where + ".radios[" + std::to_string(r) + "]");
            for (std::size_t q = 0; q < r; ++q)
                require(n.radios[q].medium != n.radios[r].medium, where + ".radios",
                        "duplicate medium");
        }
        switch (n.kind) {
        case NodeKind::Vehicle:
            require(n.position.has_value(), where + ".position", "missing");
            require(finite(n.position->x) && finite(n.position->y), where + ".position",
                    "must be finite");
            require(n.position->x >= 0 && n.position->x <= s.lot.width_m &&
                        n.position->y >= 0 && n.position->y <= s.lot.height_m,
                    where + ".position", "outside the lot");
            require(n.radio(Medium::Dsrc) != nullptr, where + ".radios", "missing dsrc radio");
            require(n.radio(Medium::Wifi) != nullptr, where + ".radios", "missing wifi radio");
            require(!n.onu.has_value(), where + ".onu", "only edge nodes carry an onu");
            break;
        case NodeKind::Edge:
            require(n.position.has_value(), where + ".position", "missing");
            require(finite(n.position->x) && finite(n.position->y), where + ".position",
                    "must be finite");
            require(n.radios.size() == 1 && n.radios[0].medium == Medium::Wifi,
                    where + ".radios", "edge node needs exactly one wifi access point");
            require(n.onu.has_value(), where + ".onu", "missing");
            require(finite(n.onu->power_idle_w) && n.onu->power_idle_w > 0,
                    where + ".onu.power_idle_w", "must be positive");
            require(finite(n.onu->power_max_w) && n.onu->power_max_w >= n.onu->power_idle_w,
                    where + ".onu.power_max_w", "must be at least power_idle_w");
            require(finite(n.onu->fiber_capacity_bps) && n.onu->fiber_capacity_bps > 0,
                    where + ".onu.fiber_capacity_bps", "must be positive");
            break;
        case NodeKind::Cloud:
            ++clouds;
            require(!n.position.has_value(), where + ".position", "cloud has no position");
            require(n.radios.empty(), where + ".radios", "cloud has no radios");
            require(!n.onu.has_value(), where + ".onu", "only edge nodes carry an onu");
            require(finite(n.fiber_length_m) && n.fiber_length_m > 0,
                    where + ".fiber_length_m", "must be positive");
            break;
        }
    }
    require(clouds <= 1, "nodes", "at most one cloud");

    const auto& st = s.settings;
    require(finite(st.packet_size_bytes) && st.packet_size_bytes > 0,
            "settings.packet_size_bytes", "must be positive");
    require(finite(st.rho_max) && st.rho_max > 0 && st.rho_max < 1, "settings.rho_max",
            "must lie in (0, 1)");
    require(st.bins >= 2, "settings.bins", "must be at least 2");
    require(finite(st.mips_per_kbps) && st.mips_per_kbps > 0, "settings.mips_per_kbps",
            "must be positive");
    require(finite(st.core_energy_per_bit_j) && st.core_energy_per_bit_j >= 0,
            "settings.core_energy_per_bit_j", "must be non-negative");
    const auto& w = st.objective;
    require(finite(w.w_power) && w.w_power >= 0, "settings.objective.w_power",
            "must be non-negative");
    require(finite(w.w_delay) && w.w_delay >= 0, "settings.objective.w_delay",
            "must be non-negative");
    require(w.w_power > 0 || w.w_delay > 0, "settings.objective", "weights are both zero");

    for (std::size_t i = 0; i < s.demands.size(); ++i) {
        auto& d = s.demands[i];
        const std::string where = "demands." + d.id;
        require(!d.id.empty(), "demands[].id", "must not be empty");
        require(i == 0 || s.demands[i - 1].id != d.id, where, "duplicate demand id");
        require(finite(d.traffic_kbps) && d.traffic_kbps > 0, where + ".traffic_kbps",
                "must be positive");
        auto src = s.find_node(d.source);
        require(src.has_value(), where + ".source", "unknown node reference");
        require(s.nodes[*src].kind == NodeKind::Vehicle, where + ".source",
                "source must be a vehicle");
        if (!d.load_mips)
            d.load_mips = st.mips_per_kbps * d.traffic_kbps;
        require(finite(*d.load_mips) && *d.load_mips > 0, where + ".load_mips",
                "must be positive");
    }

    require(!eligible_processors(s).empty(), "settings.processing_setting",
            "no eligible processor");
}

std::vector<std::size_t> eligible_processors(const Scenario& s)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const NodeKind k = s.nodes[i].kind;
        switch (s.settings.processing_setting) {
        case ProcessingSetting::VehiclesOnly:
            if (k == NodeKind::Vehicle)
                out.push_back(i);
            break;
        case ProcessingSetting::VehiclesAndEdge:
            if (k != NodeKind::Cloud)
                out.push_back(i);
            break;
        case ProcessingSetting::CloudOnly:
            if (k == NodeKind::Cloud)
                out.push_back(i);
            break;
        }
    }
    return out;
}

// ----- document I/O -----

namespace {

struct Reader {
    const json& j;
    std::string path;

    const json& at(const char* key) const
    {
        if (!j.is_object())
            throw ValidationError(path + ": expected an object");
        auto it = j.find(key);
        if (it == j.end())
            throw ValidationError(path + "." + key + ": missing");
        return *it;
    }

    bool has(const char* key) const { return j.is_object() && j.contains(key); }

    double number(const char* key) const
    {
        const auto& v = at(key);
        if (!v.is_number())
            throw ValidationError(path + "." + key + ": expected a number");
        return v.get<double>();
    }

    double number_or(const char* key, double fallback) const
    {
        return has(key) ? number(key) : fallback;
    }

    std::string text(const char* key) const
    {
        const auto& v = at(key);
        if (!v.is_string())
            throw ValidationError(path + "." + key + ": expected a string");
        return v.get<std::string>();
    }

    Reader child(const char* key) const { return Reader{at(key), path + "." + key}; }
};

ProcessorSpec read_processor(const Reader& r)
{
    return {r.number("capacity_mips"), r.number("power_idle_w"), r.number("power_max_w")};
}

RadioSpec read_radio(const Reader& r)
{
    RadioSpec out;
    out.medium = enum_from(r.text("medium"), kMedia, r.path + ".medium");
    out.bandwidth_bps = r.number("bandwidth_bps");
    out.freq_hz = r.number("freq_hz");
    out.tx_power_max_dbm = r.number("tx_power_max_dbm");
    out.rx_sensitivity_dbm = r.number("rx_sensitivity_dbm");
    out.power_idle_w = r.number("power_idle_w");
    out.power_max_w = r.number("power_max_w");
    out.link_margin_db = r.number_or("link_margin_db", 0.0);
    return out;
}

NodeSpec read_node(const Reader& r)
{
    NodeSpec n;
    n.id = r.text("id");
    const Reader named{r.j, "nodes." + n.id};
    n.kind = enum_from(named.text("kind"), kKinds, named.path + ".kind");
    if (named.has("position")) {
        auto p = named.child("position");
        n.position = Position{p.number("x"), p.number("y")};
    }
    n.processor = read_processor(named.child("processor"));
    if (named.has("radios")) {
        const auto& arr = named.at("radios");
        if (!arr.is_array())
            throw ValidationError(named.path + ".radios: expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            n.radios.push_back(read_radio({arr[i], named.path + ".radios[" + std::to_string(i) + "]"}));
    }
    if (named.has("onu")) {
        auto o = named.child("onu");
        n.onu = OnuSpec{o.number("power_idle_w"), o.number("power_max_w"),
                        o.number("fiber_capacity_bps")};
    }
    n.fiber_length_m = named.number_or("fiber_length_m", 0.0);
    return n;
}

json write_processor(const ProcessorSpec& p)
{
    return {{"capacity_mips", p.capacity_mips},
            {"power_idle_w", p.power_idle_w},
            {"power_max_w", p.power_max_w}};
}

json write_node(const NodeSpec& n)
{
    json j;
    j["id"] = n.id;
    j["kind"] = to_string(n.kind);
    if (n.position)
        j["position"] = {{"x", n.position->x}, {"y", n.position->y}};
    j["processor"] = write_processor(n.processor);
    if (!n.radios.empty()) {
        json arr = json::array();
        for (const auto& r : n.radios) {
            arr.push_back({{"medium", to_string(r.medium)},
                           {"bandwidth_bps", r.bandwidth_bps},
                           {"freq_hz", r.freq_hz},
                           {"tx_power_max_dbm", r.tx_power_max_dbm},
                           {"rx_sensitivity_dbm", r.rx_sensitivity_dbm},
                           {"power_idle_w", r.power_idle_w},
                           {"power_max_w", r.power_max_w},
                           {"link_margin_db", r.link_margin_db}});
        }
        j["radios"] = std::move(arr);
    }
    if (n.onu) {
        j["onu"] = {{"power_idle_w", n.onu->power_idle_w},
                    {"power_max_w", n.onu->power_max_w},
                    {"fiber_capacity_bps", n.onu->fiber_capacity_bps}};
    }
    if (n.kind == NodeKind::Cloud)
        j["fiber_length_m"] = n.fiber_length_m;
    return j;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Scenario parse_scenario(std::string_view document)
{
    json root;
    try {
        root = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(document, e.byte);
        throw ParseError("syntax error at line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + e.what(),
                         line, col);
    }

    const Reader top{root, "scenario"};
    Scenario s;
    auto lot = top.child("lot");
    s.lot = Lot{lot.number("width_m"), lot.number("height_m")};

    const auto& nodes = top.at("nodes");
    if (!nodes.is_array())
        throw ValidationError("nodes: expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        s.nodes.push_back(read_node({nodes[i], "nodes[" + std::to_string(i) + "]"}));

    const auto& demands = top.at("demands");
    if (!demands.is_array())
        throw ValidationError("demands: expected an array");
    for (std::size_t i = 0; i < demands.size(); ++i) {
        const Reader r{demands[i], "demands[" + std::to_string(i) + "]"};
        DemandSpec d;
        d.id = r.text("id");
        d.source = r.text("source");
        d.traffic_kbps = r.number("traffic_kbps");
        if (r.has("load_mips"))
            d.load_mips = r.number("load_mips");
        s.demands.push_back(std::move(d));
    }

    auto st = top.child("settings");
    s.settings.processing_setting = parse_processing_setting(st.text("processing_setting"));
    auto obj = st.child("objective");
    s.settings.objective.preset = parse_objective_preset(obj.text("preset"));
    s.settings.objective.w_power = obj.number("w_power");
    s.settings.objective.w_delay = obj.number("w_delay");
    s.settings.packet_size_bytes = st.number_or("packet_size_bytes", 1500.0);
    s.settings.rho_max = st.number_or("rho_max", 0.95);
    const double bins = st.number_or("bins", 64.0);
    if (bins != std::floor(bins) || bins < 0 || bins > 1e6)
        throw ValidationError("settings.bins: must be an integer");
    s.settings.bins = static_cast<int>(bins);
    s.settings.mips_per_kbps = st.number_or("mips_per_kbps", 1.0);
    s.settings.core_energy_per_bit_j = st.number_or("core_energy_per_bit_j", 2e-8);
    if (st.has("radiated_power"))
        s.settings.radiated_power =
            enum_from(st.text("radiated_power"), kModes, "settings.radiated_power");

    validate(s);
    return s;
}

std::string emit_scenario(const Scenario& s)
{
    json root;
    root["lot"] = {{"width_m", s.lot.width_m}, {"height_m", s.lot.height_m}};
    json nodes = json::array();
    for (const auto& n : s.nodes)
        nodes.push_back(write_node(n));
    root["nodes"] = std::move(nodes);
    json demands = json::array();
    for (const auto& d : s.demands) {
        json j{{"id", d.id}, {"source", d.source}, {"traffic_kbps", d.traffic_kbps}};
        if (d.load_mips)
            j["load_mips"] = *d.load_mips;
        demands.push_back(std::move(j));
    }
    root["demands"] = std::move(demands);
    const auto& st = s.settings;
    root["settings"] = {
        {"processing_setting", to_string(st.processing_setting)},
        {"objective",
         {{"preset", to_string(st.objective.preset)},
          {"w_power", st.objective.w_power},
          {"w_delay", st.objective.w_delay}}},
        {"packet_size_bytes", st.packet_size_bytes},
        {"rho_max", st.rho_max},
        {"bins", st.bins},
        {"mips_per_kbps", st.mips_per_kbps},
        {"core_energy_per_bit_j", st.core_energy_per_bit_j},
        {"radiated_power", to_string(st.radiated_power)},
    };
    return root.dump(2) + "\n";
}

std::string scenario_hash(const Scenario& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : emit_scenario(s)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ----- default instance -----

namespace {

RadioSpec dsrc_radio()
{
    using namespace defaults;
    return {Medium::Dsrc, kDsrcBandwidthBps, kDsrcFreqHz, kDsrcTxDbm, kDsrcRxDbm,
            kObuIdleW,    kObuMaxW,          0.0};
}

RadioSpec vehicle_wifi_radio()
{
    using namespace defaults;
    return {Medium::Wifi, kWifiBandwidthBps, kWifiFreqHz, kWifiTxDbm, kWifiRxDbm,
            kWifiIdleW,   kWifiMaxW,         0.0};
}

RadioSpec access_point_radio()
{
    using namespace defaults;
    return {Medium::Wifi, kWifiBandwidthBps, kWifiFreqHz, kApTxDbm, kApRxDbm,
            kApIdleW,     kApMaxW,           0.0};
}

}  // namespace

Scenario generate_default(std::uint64_t seed)
{
    using namespace defaults;
    std::mt19937_64 rng(seed);
    // 53 random bits mapped to [0, 1); portable across standard libraries.
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    Scenario s;
    for (int i = 1; i <= 8; ++i) {
        NodeSpec v;
        v.id = "v" + std::to_string(i);
        v.kind = NodeKind::Vehicle;
        const double x = uniform() * s.lot.width_m;
        const double y = uniform() * s.lot.height_m;
        v.position = Position{x, y};
        v.processor = {kVehicleMips, kObuIdleW, kObuMaxW};
        v.radios = {dsrc_radio(), vehicle_wifi_radio()};
        s.nodes.push_back(std::move(v));
    }
    const Position edge_positions[] = {{10.0, 20.0}, {30.0, 20.0}};
    for (int i = 0; i < 2; ++i) {
        NodeSpec e;
        e.id = "e" + std::to_string(i + 1);
        e.kind = NodeKind::Edge;
        e.position = edge_positions[i];
        e.processor = {kEdgeMips, kPiIdleW, kPiMaxW};
        e.radios = {access_point_radio()};
        e.onu = OnuSpec{kOnuIdleW, kOnuMaxW, kFiberCapacityBps};
        s.nodes.push_back(std::move(e));
    }
    NodeSpec cloud;
    cloud.id = "cloud";
    cloud.kind = NodeKind::Cloud;
    cloud.processor = {kCloudMips, kCloudIdleW, kCloudMaxW};
    cloud.fiber_length_m = kCloudFiberM;
    s.nodes.push_back(std::move(cloud));

    s.demands.push_back(DemandSpec{"d1", "v1", 1000.0, std::nullopt});
    validate(s);
    return s;
}

}  // namespace vecop
