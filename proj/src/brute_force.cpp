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

// Serial reference for the solver. Deliberately naive: lists every simple
// route up front, tries every serving set against every route combination,
// and scores each candidate with its own device-by-device arithmetic.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>

#include "vecop/solver.hpp"

namespace vecop {

namespace {

using Path = std::vector<std::size_t>;

void simple_paths(const LinkSet& ls, std::size_t at, std::size_t goal, std::vector<char>& seen,
                  Path& cur, std::vector<Path>& out)
{
    if (at == goal) {
        out.push_back(cur);
        return;
    }
    for (std::size_t l : ls.out_links[at]) {
        const std::size_t v = ls.links[l].rx_node;
        if (seen[v])
            continue;
        seen[v] = 1;
        cur.push_back(l);
        simple_paths(ls, v, goal, seen, cur, out);
        cur.pop_back();
        seen[v] = 0;
    }
}

struct Candidate {
    double power = 0.0;
    double delay = 0.0;
    std::vector<double> route_delay;
    std::map<std::string, double> per_device;
};

// Returns false when a capacity is exceeded.
bool score(const Scenario& s, const LinkSet& ls, const std::vector<DelayTable>& tables,
           const DemandAllocation& da, std::size_t src, bool detail, Candidate& out)
{
    const double bps = s.demands[0].traffic_kbps * 1e3;
    const double load = s.load_mips(0);
    const double bits = 8.0 * s.settings.packet_size_bytes;

    std::vector<double> t(ls.links.size(), 0.0);
    for (const Path& p : da.routes)
        for (std::size_t l : p)
            t[l] += bps;
    for (const Link& l : ls.links)
        if (t[l.id] > l.capacity_bps || t[l.id] / bits > tables[l.id].max_lambda())
            return false;
    for (const auto& [ap, cell] : ls.cells) {
        double sum = 0.0;
        for (std::size_t l : cell)
            sum += t[l];
        if (sum > ls.devices[ap].capacity)
            return false;
    }

    out = {};
    double core = 0.0;
    for (std::size_t g = 0; g < ls.devices.size(); ++g) {
        const Device& dev = ls.devices[g];
        const double span = dev.power_max_w - dev.power_idle_w;
        double p = 0.0;
        if (!dev.is_interface()) {
            for (std::size_t i = 0; i < da.targets.size(); ++i)
                if (ls.processor_of[da.targets[i]] == g)
                    p = dev.power_idle_w + span * (da.fractions[i] * load / dev.capacity);
        } else {
            bool used = false;
            for (const Link& l : ls.links) {
                if (t[l.id] == 0 || (l.tx_device != g && l.rx_device != g))
                    continue;
                used = true;
                const double u = t[l.id] / l.capacity_bps;
                p += span * u;
                if (l.tx_device == g)
                    p += u * l.radiated_power_w;
            }
            if (used)
                p += dev.power_idle_w;
        }
        if (detail)
            out.per_device[dev.id] = p;
        out.power += p;
    }
    for (const Link& l : ls.links)
        if (l.medium == Medium::Fiber)
            core += t[l.id] * s.settings.core_energy_per_bit_j;
    if (detail)
        out.per_device["core"] = core;
    out.power += core;

    for (std::size_t i = 0; i < da.targets.size(); ++i) {
        double d = 0.0;
        if (da.targets[i] != src)
            for (std::size_t l : da.routes[i]) {
                const Link& lk = ls.links[l];
                const double lambda = t[l] / bits;
                const DelayTable& tb = tables[l];
                std::size_t k = 0;
                while (tb.upper_pps[k] < lambda)
                    ++k;
                d += lk.prop_delay_s + lk.tx_delay_per_packet_s + tb.delay_s[k];
            }
        out.route_delay.push_back(d);
        out.delay = std::max(out.delay, d);
    }
    return true;
}

}  // namespace

SolveResult brute_force(const Scenario& s, const LinkSet& ls, const std::vector<DelayTable>& tables,
                        const ObjectiveWeights& w)
{
    const std::size_t graph = std::count(ls.in_graph.begin(), ls.in_graph.end(), true);
    if (graph > 6)
        throw LimitError("brute force handles at most 6 nodes, got " + std::to_string(graph));
    if (s.demands.size() != 1)
        throw LimitError("brute force handles a single demand");

    const std::size_t src = *s.find_node(s.demands[0].source);
    const double load = s.load_mips(0);
    std::vector<std::size_t> elig;
    for (std::size_t n : eligible_processors(s))
        if (ls.in_graph[n])
            elig.push_back(n);

    std::vector<std::vector<Path>> paths(s.nodes.size());
    for (std::size_t n : elig) {
        if (n == src) {
            paths[n] = {Path{}};
            continue;
        }
        std::vector<char> seen(s.nodes.size(), 0);
        seen[src] = 1;
        Path cur;
        simple_paths(ls, src, n, seen, cur, paths[n]);
    }

    SolveResult best;
    best.weights = w;
    best.status = SolveStatus::Infeasible;
    best.infeasible_reason = "no feasible allocation";
    std::vector<std::size_t> best_key;
    bool found = false;

    for (std::uint32_t mask = 1; mask < (1u << elig.size()); ++mask) {
        DemandAllocation da;
        for (std::size_t i = 0; i < elig.size(); ++i)
            if (mask >> i & 1u)
                da.targets.push_back(elig[i]);

        // Cheapest split: fill by marginal power per MIPS, first node wins ties.
        std::vector<std::size_t> fill = da.targets;
        std::stable_sort(fill.begin(), fill.end(), [&](std::size_t a, std::size_t b) {
            const auto& pa = s.nodes[a].processor;
            const auto& pb = s.nodes[b].processor;
            return (pa.power_max_w - pa.power_idle_w) / pa.capacity_mips <
                   (pb.power_max_w - pb.power_idle_w) / pb.capacity_mips;
        });
        da.fractions.assign(da.targets.size(), 0.0);
        double left = load;
        for (std::size_t n : fill) {
            const double take = std::min(left, s.nodes[n].processor.capacity_mips);
            const auto at = std::find(da.targets.begin(), da.targets.end(), n) - da.targets.begin();
            da.fractions[at] = take / load;
            left -= take;
        }
        if (left > 1e-9 * std::max(1.0, load))
            continue;

        std::vector<std::size_t> pick(da.targets.size(), 0);
        bool empty = false;
        for (std::size_t n : da.targets)
            empty = empty || paths[n].empty();
        if (empty)
            continue;
        while (true) {
            da.routes.clear();
            for (std::size_t i = 0; i < da.targets.size(); ++i)
                da.routes.push_back(paths[da.targets[i]][pick[i]]);
            Candidate c;
            if (score(s, ls, tables, da, src, false, c)) {
                const double obj = w.w_power * c.power + w.w_delay * c.delay;
                Allocation a;
                std::vector<std::size_t> key;
                if (!found || obj <= best.objective) {
                    a.demands.push_back(da);
                    key = allocation_key(a);
                }
                if (!found || obj < best.objective || (obj == best.objective && key < best_key)) {
                    found = true;
                    best_key = std::move(key);
                    best.status = SolveStatus::Optimal;
                    best.infeasible_reason.clear();
                    best.allocation = std::move(a);
                    best.total_power_w = c.power;
                    best.max_delay_s = c.delay;
                    best.objective = obj;
                    score(s, ls, tables, da, src, true, c);
                    best.per_device_power_w = c.per_device;
                    best.route_delays.clear();
                    for (std::size_t i = 0; i < da.targets.size(); ++i)
                        best.route_delays.push_back({0, da.targets[i], c.route_delay[i]});
                }
            }
            std::size_t i = 0;
            for (; i < pick.size(); ++i) {
                if (++pick[i] < paths[da.targets[i]].size())
                    break;
                pick[i] = 0;
            }
            if (i == pick.size())
                break;
        }
    }
    return best;
}

}  // namespace vecop
