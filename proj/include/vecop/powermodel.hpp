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

// Device power = idle on activation + load-proportional span, plus the
// radiated transmit power scaled by airtime for radio interfaces.

#ifndef VECOP_POWERMODEL_HPP
#define VECOP_POWERMODEL_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "vecop/allocation.hpp"
#include "vecop/linkmodel.hpp"

namespace vecop {

/// An allocation that loads a device or link beyond its capacity.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PowerSpec {
    double power_idle_w = 0.0;
    double power_max_w = 0.0;
};

struct DeviceLoad {
    std::size_t device = 0;
    bool active = false;
    double utilization = 0.0;
    double radiated_component_w = 0.0;
    // Point-to-point interfaces budget each link separately, so a radio
    // with n carrying links may reach utilization n.
    double utilization_cap = 1.0;
};

struct AllocationLoads {
    std::vector<double> link_traffic_bps;  // by link id
    std::vector<double> link_lambda_pps;
    std::vector<DeviceLoad> devices;  // by device id
    double fiber_traffic_bps = 0.0;
};

struct PowerBreakdown {
    double total_w = 0.0;
    std::map<std::string, double> per_device_w;  // device id -> W, plus "core"
};

double device_power(const PowerSpec& spec, const DeviceLoad& load);

/// Link, device and fiber loads implied by an allocation.
AllocationLoads compute_loads(const Scenario& scenario, const LinkSet& links,
                              const Allocation& allocation);

/// Throws CapacityError on a processor, link or AP cell loaded past 1.
PowerBreakdown system_power(const Scenario& scenario, const LinkSet& links,
                            const Allocation& allocation);

/// Power drawn per bit/s carried on a link: both ends' load-proportional
/// span, the radiated share and the core energy for fiber.
double link_watts_per_bps(const Scenario& scenario, const LinkSet& links, std::size_t link);

}  // namespace vecop

#endif  // VECOP_POWERMODEL_HPP
