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

// Directed link graph between the nodes of a scenario and the power-drawing
// devices the links terminate on.
//
// Every node owns a processor device. Vehicles own a DSRC and a WiFi radio,
// edge nodes an access point and an ONU. The server, AP and ONU of an edge
// node are joined by free internal connections, so a route that reaches an
// edge node's AP can be processed on its server or leave on its fiber.

#ifndef VECOP_LINKMODEL_HPP
#define VECOP_LINKMODEL_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vecop/scenario.hpp"

namespace vecop {

inline constexpr std::size_t kNoDevice = std::numeric_limits<std::size_t>::max();

inline constexpr double kRadioSpeed = 3e8;  // m/s
inline constexpr double kFiberSpeed = 2e8;  // m/s

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A demand source that can neither transmit nor process its own demand.
class IsolatedSourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DeviceRole { Processor, Dsrc, Wifi, AccessPoint, Onu };

struct Device {
    std::string id;  // "<node>.cpu", ".dsrc", ".wifi", ".ap", ".onu"
    std::size_t node = 0;
    DeviceRole role = DeviceRole::Processor;
    double power_idle_w = 0.0;
    double power_max_w = 0.0;
    double capacity = 0.0;  // MIPS for processors, bit/s for interfaces

    bool is_interface() const { return role != DeviceRole::Processor; }
};

struct Link {
    std::size_t id = 0;
    std::size_t tx_node = 0;
    std::size_t rx_node = 0;
    std::size_t tx_device = kNoDevice;
    std::size_t rx_device = kNoDevice;  // none when the receiver is the cloud
    Medium medium = Medium::Dsrc;
    double distance_m = 0.0;
    double capacity_bps = 0.0;
    double radiated_power_w = 0.0;
    double prop_delay_s = 0.0;
    double tx_delay_per_packet_s = 0.0;
};

struct LinkSet {
    std::vector<Device> devices;
    std::vector<Link> links;
    std::vector<bool> in_graph;                       // per node
    std::vector<std::size_t> processor_of;            // node -> device, or kNoDevice
    std::vector<std::vector<std::size_t>> out_links;  // node -> link ids, ascending
    std::vector<std::vector<std::size_t>> in_links;
    /// AP device -> WiFi links it transmits or receives on.
    std::map<std::size_t, std::vector<std::size_t>> cells;

    /// Devices the link draws power on (tx, then rx if any).
    std::vector<std::size_t> link_devices(std::size_t link) const;
};

/// Free-space path loss in dB.
double fspl_db(double distance_m, double freq_hz);

/// Transmit power needed to close a link at the receiver's sensitivity.
double required_tx_dbm(double distance_m, double freq_hz, double rx_sensitivity_dbm,
                       double margin_db);

double dbm_to_watts(double dbm);

LinkSet build_links(const Scenario& scenario);

/// CSV dump: tx,rx,medium,distance_m,capacity_bps,radiated_mW,prop_ns,txdelay_us
std::string links_csv(const Scenario& scenario, const LinkSet& links);

}  // namespace vecop

#endif  // VECOP_LINKMODEL_HPP
