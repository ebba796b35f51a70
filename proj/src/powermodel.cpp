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

#include "vecop/powermodel.hpp"

#include <algorithm>
#include <string>

namespace vecop {

namespace {
constexpr double kSlack = 1e-9;
}

double device_power(const PowerSpec& spec, const DeviceLoad& load)
{
    if (load.utilization < 0 || load.utilization > load.utilization_cap + kSlack)
        throw CapacityError("utilization " + std::to_string(load.utilization) +
                            " out of range for device " + std::to_string(load.device));
    if (!load.active)
        return 0.0;
    return spec.power_idle_w + (spec.power_max_w - spec.power_idle_w) * load.utilization +
           load.utilization * load.radiated_component_w;
}

AllocationLoads compute_loads(const Scenario& s, const LinkSet& ls, const Allocation& a)
{
    AllocationLoads out;
    out.link_traffic_bps.assign(ls.links.size(), 0.0);
    out.link_lambda_pps.assign(ls.links.size(), 0.0);
    out.devices.resize(ls.devices.size());
    for (std::size_t g = 0; g < ls.devices.size(); ++g)
        out.devices[g].device = g;

    std::vector<double> mips(ls.devices.size(), 0.0);
    for (std::size_t d = 0; d < a.demands.size(); ++d) {
        const auto& da = a.demands[d];
        const double bps = s.demands[d].traffic_kbps * 1e3;
        const double load = s.load_mips(d);
        for (std::size_t i = 0; i < da.targets.size(); ++i) {
            const std::size_t cpu = ls.processor_of.at(da.targets[i]);
            if (cpu == kNoDevice)
                throw CapacityError("node " + s.nodes[da.targets[i]].id + " has no processor");
            mips[cpu] += da.fractions[i] * load;
            out.devices[cpu].active = true;
            for (std::size_t l : da.routes[i])
                out.link_traffic_bps.at(l) += bps;
        }
    }

    const double packet_bits = 8.0 * s.settings.packet_size_bytes;
    std::vector<double> carried(ls.devices.size(), 0.0);
    std::vector<double> radiated_weighted(ls.devices.size(), 0.0);
    std::vector<int> carrying_links(ls.devices.size(), 0);
    for (const Link& l : ls.links) {
        const double t = out.link_traffic_bps[l.id];
        out.link_lambda_pps[l.id] = t / packet_bits;
        if (t <= 0)
            continue;
        if (l.medium == Medium::Fiber)
            out.fiber_traffic_bps += t;
        for (std::size_t g : ls.link_devices(l.id)) {
            auto& dl = out.devices[g];
            dl.active = true;
            dl.utilization += t / l.capacity_bps;
            carried[g] += t;
            ++carrying_links[g];
        }
        radiated_weighted[l.tx_device] += l.radiated_power_w * t;
    }

    for (std::size_t g = 0; g < ls.devices.size(); ++g) {
        auto& dl = out.devices[g];
        const Device& dev = ls.devices[g];
        if (!dev.is_interface()) {
            dl.utilization = mips[g] / dev.capacity;
            continue;
        }
        dl.utilization_cap = std::max(1, carrying_links[g]);
        if (carried[g] > 0)
            dl.radiated_component_w = radiated_weighted[g] / carried[g];
    }
    return out;
}

PowerBreakdown system_power(const Scenario& s, const LinkSet& ls, const Allocation& a)
{
    const AllocationLoads loads = compute_loads(s, ls, a);

    for (const Link& l : ls.links) {
        if (loads.link_traffic_bps[l.id] > l.capacity_bps * (1 + kSlack))
            throw CapacityError("link " + s.nodes[l.tx_node].id + "->" + s.nodes[l.rx_node].id +
                                " over capacity");
    }
    for (const auto& [ap, cell] : ls.cells) {
        double t = 0.0;
        for (std::size_t l : cell)
            t += loads.link_traffic_bps[l];
        if (t > ls.devices[ap].capacity * (1 + kSlack))
            throw CapacityError("cell of " + ls.devices[ap].id + " over capacity");
    }

    PowerBreakdown out;
    for (std::size_t g = 0; g < ls.devices.size(); ++g) {
        const Device& dev = ls.devices[g];
        const double p = device_power({dev.power_idle_w, dev.power_max_w}, loads.devices[g]);
        out.per_device_w[dev.id] = p;
        out.total_w += p;
    }
    const double core = s.settings.core_energy_per_bit_j * loads.fiber_traffic_bps;
    out.per_device_w["core"] = core;
    out.total_w += core;
    return out;
}

double link_watts_per_bps(const Scenario& s, const LinkSet& ls, std::size_t link)
{
    const Link& l = ls.links[link];
    double w = 0.0;
    for (std::size_t g : ls.link_devices(link)) {
        const Device& dev = ls.devices[g];
        w += (dev.power_max_w - dev.power_idle_w) / l.capacity_bps;
    }
    w += l.radiated_power_w / l.capacity_bps;
    if (l.medium == Medium::Fiber)
        w += s.settings.core_energy_per_bit_j;
    return w;
}

}  // namespace vecop
