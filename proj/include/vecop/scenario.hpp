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

// Data model of one experiment instance: a parking lot of vehicles, the
// edge nodes serving it, an optional cloud behind a fiber hop, the
// processing demands, and the knobs of the optimization.
//
// Units are SI unless the field name says otherwise: meters, watts, bit/s,
// Hz, seconds. Radio powers are in dBm, demand traffic in kbit/s and
// processing in MIPS, as in the scenario document.

#ifndef VECOP_SCENARIO_HPP
#define VECOP_SCENARIO_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vecop {

enum class NodeKind { Vehicle, Edge, Cloud };
enum class Medium { Dsrc, Wifi, Fiber };
enum class ProcessingSetting { VehiclesOnly, VehiclesAndEdge, CloudOnly };
enum class ObjectivePreset { PowerOnly, JointEqual, Custom };
enum class RadiatedPowerMode { Minimum, Maximum };

std::string_view to_string(NodeKind kind);
std::string_view to_string(Medium medium);
std::string_view to_string(ProcessingSetting setting);
std::string_view to_string(ObjectivePreset preset);
std::string_view to_string(RadiatedPowerMode mode);

ProcessingSetting parse_processing_setting(std::string_view text);
ObjectivePreset parse_objective_preset(std::string_view text);

/// Malformed scenario text. Carries the 1-based line and column.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed document that violates a model invariant. The message names
/// the offending field.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

struct ProcessorSpec {
    double capacity_mips = 0.0;
    double power_idle_w = 0.0;
    double power_max_w = 0.0;

    friend bool operator==(const ProcessorSpec&, const ProcessorSpec&) = default;
};

struct RadioSpec {
    Medium medium = Medium::Wifi;
    double bandwidth_bps = 0.0;
    double freq_hz = 0.0;
    double tx_power_max_dbm = 0.0;
    double rx_sensitivity_dbm = 0.0;
    double power_idle_w = 0.0;
    double power_max_w = 0.0;
    double link_margin_db = 0.0;

    friend bool operator==(const RadioSpec&, const RadioSpec&) = default;
};

struct OnuSpec {
    double power_idle_w = 0.0;
    double power_max_w = 0.0;
    double fiber_capacity_bps = 0.0;

    friend bool operator==(const OnuSpec&, const OnuSpec&) = default;
};

struct NodeSpec {
    std::string id;
    NodeKind kind = NodeKind::Vehicle;
    std::optional<Position> position;  // absent for the cloud
    ProcessorSpec processor;
    std::vector<RadioSpec> radios;     // vehicle: DSRC + WiFi; edge: the AP
    std::optional<OnuSpec> onu;        // edge only
    double fiber_length_m = 0.0;       // cloud only

    const RadioSpec* radio(Medium medium) const;

    friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct DemandSpec {
    std::string id;
    std::string source;
    double traffic_kbps = 0.0;
    std::optional<double> load_mips;  // filled from mips_per_kbps when unset

    friend bool operator==(const DemandSpec&, const DemandSpec&) = default;
};

struct ObjectiveWeights {
    double w_power = 1.0;  // 1/W
    double w_delay = 0.0;  // 1/s
    ObjectivePreset preset = ObjectivePreset::PowerOnly;

    friend bool operator==(const ObjectiveWeights&, const ObjectiveWeights&) = default;
};

struct Settings {
    ProcessingSetting processing_setting = ProcessingSetting::VehiclesAndEdge;
    ObjectiveWeights objective;
    double packet_size_bytes = 1500.0;
    double rho_max = 0.95;
    int bins = 64;
    double mips_per_kbps = 1.0;
    double core_energy_per_bit_j = 2e-8;
    RadiatedPowerMode radiated_power = RadiatedPowerMode::Minimum;

    friend bool operator==(const Settings&, const Settings&) = default;
};

struct Lot {
    double width_m = 40.0;
    double height_m = 40.0;

    friend bool operator==(const Lot&, const Lot&) = default;
};

/// A validated scenario keeps nodes and demands sorted by id; node and
/// demand indices used across the library refer to that order.
struct Scenario {
    Lot lot;
    std::vector<NodeSpec> nodes;
    std::vector<DemandSpec> demands;
    Settings settings;

    /// Index of the node with this id, or nullopt.
    std::optional<std::size_t> find_node(std::string_view id) const;
    const NodeSpec& node(std::string_view id) const;
    double load_mips(std::size_t demand) const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Checks every invariant, sorts nodes and demands by id and fills unset
/// demand loads. Idempotent.
void validate(Scenario& scenario);

Scenario parse_scenario(std::string_view document);
/// Canonical text: sorted keys, shortest round-trip floats, LF endings.
std::string emit_scenario(const Scenario& scenario);

/// The 8-vehicle / 2-edge / 1-cloud parking lot with seeded vehicle
/// positions. Pure function of the seed.
Scenario generate_default(std::uint64_t seed);

/// Node indices (ascending) that may process demands under the scenario's
/// processing setting.
std::vector<std::size_t> eligible_processors(const Scenario& scenario);

/// 64-bit FNV-1a of the canonical document, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

// Device figures.
namespace defaults {

inline constexpr double kVehicleMips = 800.0;
inline constexpr double kObuIdleW = 5.0;
inline constexpr double kObuMaxW = 10.0;
inline constexpr double kDsrcBandwidthBps = 27e6;
inline constexpr double kDsrcTxDbm = 22.0;
inline constexpr double kDsrcRxDbm = -77.0;
inline constexpr double kDsrcFreqHz = 5.9e9;
inline constexpr double kWifiIdleW = 0.000072;
inline constexpr double kWifiMaxW = 0.612;
inline constexpr double kWifiTxDbm = 14.0;
inline constexpr double kWifiRxDbm = -72.0;
inline constexpr double kWifiBandwidthBps = 150e6;
inline constexpr double kWifiFreqHz = 2.4e9;

inline constexpr double kEdgeMips = 1200.0;
inline constexpr double kPiIdleW = 2.0;
inline constexpr double kPiMaxW = 12.5;
inline constexpr double kApIdleW = 5.5;
inline constexpr double kApMaxW = 25.0;
inline constexpr double kApTxDbm = 22.0;
inline constexpr double kApRxDbm = -104.0;
inline constexpr double kOnuIdleW = 6.8;
inline constexpr double kOnuMaxW = 8.0;
inline constexpr double kFiberCapacityBps = 3.75e9;

// Placeholder figures for the cloud and core.
inline constexpr double kCloudMips = 50000.0;
inline constexpr double kCloudIdleW = 150.0;
inline constexpr double kCloudMaxW = 300.0;
inline constexpr double kCloudFiberM = 250e3;

}  // namespace defaults

}  // namespace vecop

#endif  // VECOP_SCENARIO_HPP
