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

#include "vecop/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vecop {

double fspl_db(double distance_m, double freq_hz)
{
    if (!(distance_m > 0) || !(freq_hz > 0))
        throw DomainError("fspl_db: distance and frequency must be positive");
    return 20.0 * std::log10(distance_m) + 20.0 * std::log10(freq_hz) - 147.55;
}

double required_tx_dbm(double distance_m, double freq_hz, double rx_sensitivity_dbm,
                       double margin_db)
{
    return rx_sensitivity_dbm + margin_db + fspl_db(distance_m, freq_hz);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

std::vector<std::size_t> LinkSet::link_devices(std::size_t link) const
{
    const Link& l = links[link];
    std::vector<std::size_t> out{l.tx_device};
    if (l.rx_device != kNoDevice)
        out.push_back(l.rx_device);
    return out;
}

namespace {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct NodeDevices {
    std::size_t dsrc = kNoDevice;
    std::size_t wifi = kNoDevice;  // vehicle radio or edge AP
    std::size_t onu = kNoDevice;
};

bool node_in_graph(const Scenario& s, const NodeSpec& n)
{
    return s.settings.processing_setting != ProcessingSetting::VehiclesOnly ||
           n.kind == NodeKind::Vehicle;
}

}  // namespace

LinkSet build_links(const Scenario& s)
{
    LinkSet ls;
    const std::size_t n_nodes = s.nodes.size();
    ls.in_graph.assign(n_nodes, false);
    ls.processor_of.assign(n_nodes, kNoDevice);
    ls.out_links.resize(n_nodes);
    ls.in_links.resize(n_nodes);
    std::vector<NodeDevices> dev(n_nodes);

    auto add_device = [&](std::size_t node, DeviceRole role, const std::string& suffix,
                          double idle, double max, double capacity) {
        ls.devices.push_back({s.nodes[node].id + "." + suffix, node, role, idle, max, capacity});
        return ls.devices.size() - 1;
    };

    for (std::size_t i = 0; i < n_nodes; ++i) {
        const NodeSpec& n = s.nodes[i];
        if (!node_in_graph(s, n))
            continue;
        ls.in_graph[i] = true;
        ls.processor_of[i] = add_device(i, DeviceRole::Processor, "cpu", n.processor.power_idle_w,
                                        n.processor.power_max_w, n.processor.capacity_mips);
        if (n.kind == NodeKind::Vehicle) {
            const RadioSpec* d = n.radio(Medium::Dsrc);
            const RadioSpec* w = n.radio(Medium::Wifi);
            dev[i].dsrc = add_device(i, DeviceRole::Dsrc, "dsrc", d->power_idle_w, d->power_max_w,
                                     d->bandwidth_bps);
            dev[i].wifi = add_device(i, DeviceRole::Wifi, "wifi", w->power_idle_w, w->power_max_w,
                                     w->bandwidth_bps);
        } else if (n.kind == NodeKind::Edge) {
            const RadioSpec& ap = n.radios.front();
            dev[i].wifi = add_device(i, DeviceRole::AccessPoint, "ap", ap.power_idle_w,
                                     ap.power_max_w, ap.bandwidth_bps);
            dev[i].onu = add_device(i, DeviceRole::Onu, "onu", n.onu->power_idle_w,
                                    n.onu->power_max_w, n.onu->fiber_capacity_bps);
        }
    }

    const bool max_power = s.settings.radiated_power == RadiatedPowerMode::Maximum;
    const double packet_bits = 8.0 * s.settings.packet_size_bytes;

    auto add_link = [&](std::size_t a, std::size_t b, Medium medium, std::size_t tx_dev,
                        std::size_t rx_dev, double dist, double capacity, double radiated) {
        Link l;
        l.id = ls.links.size();
        l.tx_node = a;
        l.rx_node = b;
        l.tx_device = tx_dev;
        l.rx_device = rx_dev;
        l.medium = medium;
        l.distance_m = dist;
        l.capacity_bps = capacity;
        l.radiated_power_w = radiated;
        l.prop_delay_s = dist / (medium == Medium::Fiber ? kFiberSpeed : kRadioSpeed);
        l.tx_delay_per_packet_s = packet_bits / capacity;
        ls.out_links[a].push_back(l.id);
        ls.in_links[b].push_back(l.id);
        ls.links.push_back(l);
    };

    // Wireless links close against the receiver's sensitivity; the radiated
    // power is the least that does so, or the radio maximum.
    auto try_radio = [&](std::size_t a, std::size_t b, const RadioSpec& tx, const RadioSpec& rx,
                         std::size_t tx_dev, std::size_t rx_dev) {
        const double dist = distance(*s.nodes[a].position, *s.nodes[b].position);
        // Co-located nodes: the budget is evaluated at 1 m.
        const double budget_dist = std::max(dist, 1.0);
        const double need = required_tx_dbm(budget_dist, tx.freq_hz, rx.rx_sensitivity_dbm,
                                            tx.link_margin_db);
        if (need > tx.tx_power_max_dbm)
            return;
        const double radiated = dbm_to_watts(max_power ? tx.tx_power_max_dbm : need);
        add_link(a, b, tx.medium, tx_dev, rx_dev, dist,
                 std::min(tx.bandwidth_bps, rx.bandwidth_bps), radiated);
    };

    for (std::size_t a = 0; a < n_nodes; ++a) {
        if (!ls.in_graph[a])
            continue;
        const NodeSpec& na = s.nodes[a];
        for (std::size_t b = 0; b < n_nodes; ++b) {
            if (a == b || !ls.in_graph[b])
                continue;
            const NodeSpec& nb = s.nodes[b];
            if (na.kind == NodeKind::Vehicle && nb.kind == NodeKind::Vehicle) {
                try_radio(a, b, *na.radio(Medium::Dsrc), *nb.radio(Medium::Dsrc), dev[a].dsrc,
                          dev[b].dsrc);
            } else if (na.kind != NodeKind::Cloud && nb.kind != NodeKind::Cloud) {
                // vehicle <-> AP and AP <-> AP over WiFi
                try_radio(a, b, *na.radio(Medium::Wifi), *nb.radio(Medium::Wifi), dev[a].wifi,
                          dev[b].wifi);
            } else if (na.kind == NodeKind::Edge && nb.kind == NodeKind::Cloud) {
                add_link(a, b, Medium::Fiber, dev[a].onu, kNoDevice, nb.fiber_length_m,
                         na.onu->fiber_capacity_bps, 0.0);
            }
        }
    }

    for (const Link& l : ls.links) {
        if (l.medium != Medium::Wifi)
            continue;
        for (std::size_t d : {l.tx_device, l.rx_device}) {
            if (ls.devices[d].role == DeviceRole::AccessPoint)
                ls.cells[d].push_back(l.id);
        }
    }

    // A source that cannot self-process must be able to transmit.
    const auto eligible = eligible_processors(s);
    for (const auto& d : s.demands) {
        const std::size_t src = *s.find_node(d.source);
        const bool self = std::find(eligible.begin(), eligible.end(), src) != eligible.end() &&
                          s.nodes[src].processor.capacity_mips >= s.load_mips(
                              static_cast<std::size_t>(&d - s.demands.data()));
        if (!self && ls.out_links[src].empty())
            throw IsolatedSourceError("isolated demand source: " + d.source + " (demand " + d.id +
                                      ")");
    }
    return ls;
}

std::string links_csv(const Scenario& s, const LinkSet& ls)
{
    std::string out = "tx,rx,medium,distance_m,capacity_bps,radiated_mW,prop_ns,txdelay_us\n";
    char buf[256];
    for (const Link& l : ls.links) {
        std::snprintf(buf, sizeof buf, "%s,%s,%s,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                      s.nodes[l.tx_node].id.c_str(), s.nodes[l.rx_node].id.c_str(),
                      std::string(to_string(l.medium)).c_str(), l.distance_m, l.capacity_bps,
                      l.radiated_power_w * 1e3, l.prop_delay_s * 1e9,
                      l.tx_delay_per_packet_s * 1e6);
        out += buf;
    }
    return out;
}

}  // namespace vecop
