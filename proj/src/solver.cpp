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

#include "vecop/solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vecop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxGraphNodes = 64;  // visited sets are 64-bit masks
constexpr std::size_t kMaxEligible = 24;
constexpr std::size_t kMaxCombos = 5'000'000;
constexpr double kRelTol = 1e-9;
constexpr double kValueTol = 1e-12;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double marginal_watts_per_mips(const NodeSpec& n)
{
    return (n.processor.power_max_w - n.processor.power_idle_w) / n.processor.capacity_mips;
}

// ----- static data shared by all threads -----

struct DemandData {
    std::size_t src = 0;
    double bps = 0.0;
    double load = 0.0;
};

struct Problem {
    const Scenario& s;
    const LinkSet& ls;
    const std::vector<DelayTable>& tables;
    ObjectiveWeights w;
    bool value_only = false;

    std::size_t nodes = 0;
    double packet_bits = 0.0;
    std::vector<std::size_t> eligible;
    std::vector<DemandData> dem;

    std::vector<double> wpb;    // per link, W per bit/s
    std::vector<double> fixed;  // per link, propagation + transmission
    std::vector<std::array<std::size_t, 2>> link_dev;
    std::vector<std::vector<std::size_t>> link_cells;  // link -> cell indices
    std::vector<double> cell_cap;
    std::vector<std::size_t> cell_device;

    std::vector<std::vector<double>> min_wpb;                 // [u][v]
    std::vector<std::vector<std::vector<double>>> min_delay;  // [d][u][v]

    // Devices one of which must be on when the node is a remote target.
    std::vector<std::vector<std::size_t>> entry_dev;
    std::vector<double> entry_min_idle;
    std::vector<std::vector<std::size_t>> entry_of_dev;  // device -> nodes

    // Out-links of u ordered for demand d heading to n: [d][n][u].
    std::vector<std::vector<std::vector<std::vector<std::size_t>>>> order;

    Problem(const Scenario& sc, const LinkSet& l, const std::vector<DelayTable>& t,
            const ObjectiveWeights& wt, bool vo)
        : s(sc), ls(l), tables(t), w(wt), value_only(vo)
    {
    }

    bool fits(std::size_t l, double bps) const
    {
        return bps <= ls.links[l].capacity_bps && bps / packet_bits <= tables[l].max_lambda();
    }
};

void floyd(std::vector<std::vector<double>>& m)
{
    const std::size_t n = m.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i][k] == kInf)
                continue;
            for (std::size_t j = 0; j < n; ++j)
                m[i][j] = std::min(m[i][j], m[i][k] + m[k][j]);
        }
}

void prepare(Problem& P)
{
    const Scenario& s = P.s;
    const LinkSet& ls = P.ls;
    const std::size_t N = s.nodes.size();
    const std::size_t L = ls.links.size();
    P.nodes = N;
    P.packet_bits = 8.0 * s.settings.packet_size_bytes;

    for (std::size_t n : eligible_processors(s))
        if (ls.in_graph[n])
            P.eligible.push_back(n);
    for (std::size_t d = 0; d < s.demands.size(); ++d)
        P.dem.push_back({*s.find_node(s.demands[d].source), s.demands[d].traffic_kbps * 1e3,
                         s.load_mips(d)});

    P.wpb.resize(L);
    P.fixed.resize(L);
    P.link_dev.resize(L);
    P.link_cells.resize(L);
    for (std::size_t l = 0; l < L; ++l) {
        const Link& lk = ls.links[l];
        P.wpb[l] = link_watts_per_bps(s, ls, l);
        P.fixed[l] = lk.prop_delay_s + lk.tx_delay_per_packet_s;
        P.link_dev[l] = {lk.tx_device, lk.rx_device};
    }
    for (const auto& [ap, cell] : ls.cells) {
        const std::size_t c = P.cell_cap.size();
        P.cell_cap.push_back(ls.devices[ap].capacity);
        P.cell_device.push_back(ap);
        for (std::size_t l : cell)
            P.link_cells[l].push_back(c);
    }

    P.min_wpb.assign(N, std::vector<double>(N, kInf));
    for (std::size_t u = 0; u < N; ++u)
        P.min_wpb[u][u] = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        auto& cell = P.min_wpb[ls.links[l].tx_node][ls.links[l].rx_node];
        cell = std::min(cell, P.wpb[l]);
    }
    floyd(P.min_wpb);

    P.min_delay.resize(P.dem.size());
    for (std::size_t d = 0; d < P.dem.size(); ++d) {
        auto& m = P.min_delay[d];
        m.assign(N, std::vector<double>(N, kInf));
        for (std::size_t u = 0; u < N; ++u)
            m[u][u] = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            if (!P.fits(l, P.dem[d].bps))
                continue;
            const double q = lookup(P.tables[l], P.dem[d].bps / P.packet_bits);
            auto& cell = m[ls.links[l].tx_node][ls.links[l].rx_node];
            cell = std::min(cell, P.fixed[l] + q);
        }
        floyd(m);
    }

    P.entry_dev.resize(N);
    P.entry_min_idle.assign(N, 0.0);
    P.entry_of_dev.resize(ls.devices.size());
    for (std::size_t n = 0; n < N; ++n) {
        auto& e = P.entry_dev[n];
        for (std::size_t l : ls.in_links[n]) {
            const Link& lk = ls.links[l];
            const std::size_t g = lk.rx_device != kNoDevice ? lk.rx_device : lk.tx_device;
            if (g != kNoDevice)
                e.push_back(g);
        }
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        double lo = e.empty() ? 0.0 : kInf;
        for (std::size_t g : e) {
            lo = std::min(lo, ls.devices[g].power_idle_w);
            P.entry_of_dev[g].push_back(n);
        }
        P.entry_min_idle[n] = lo;
    }

    P.order.resize(P.dem.size());
    for (std::size_t d = 0; d < P.dem.size(); ++d) {
        const double t = P.dem[d].bps;
        P.order[d].resize(N);
        for (std::size_t n : P.eligible) {
            P.order[d][n].resize(N);
            for (std::size_t u = 0; u < N; ++u) {
                std::vector<std::pair<double, std::size_t>> ranked;
                for (std::size_t l : ls.out_links[u]) {
                    const std::size_t v = ls.links[l].rx_node;
                    if (!P.fits(l, t) || P.min_delay[d][v][n] == kInf)
                        continue;
                    double idle = 0.0;
                    for (std::size_t g : P.link_dev[l])
                        if (g != kNoDevice)
                            idle += ls.devices[g].power_idle_w;
                    const double q = lookup(P.tables[l], t / P.packet_bits);
                    const double key =
                        P.w.w_power * (t * (P.wpb[l] + P.min_wpb[v][n]) + idle) +
                        P.w.w_delay * (P.fixed[l] + q + P.min_delay[d][v][n]);
                    ranked.emplace_back(key, l);
                }
                std::sort(ranked.begin(), ranked.end());
                for (const auto& [k, l] : ranked)
                    P.order[d][n][u].push_back(l);
            }
        }
    }
}

// ----- serving sets -----

struct Combo {
    std::vector<std::vector<std::size_t>> targets;  // per demand, ascending
    std::vector<std::vector<double>> fractions;
    double processing_w = 0.0;
    double lb = 0.0;
};

// Min-cost split of several demands over their serving sets: successive
// shortest paths on source -> demand -> node -> sink. Returns false when the
// sets cannot hold the loads.
bool flow_split(const Problem& P, Combo& c)
{
    const std::size_t D = c.targets.size();
    std::vector<std::size_t> nodes;
    for (const auto& t : c.targets)
        nodes.insert(nodes.end(), t.begin(), t.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    const std::size_t S = 0, T = 1 + D + nodes.size(), V = T + 1;
    struct Arc {
        std::size_t to;
        double cap, cost;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<std::size_t>> adj(V);
    auto add = [&](std::size_t a, std::size_t b, double cap, double cost) {
        adj[a].push_back(arcs.size());
        arcs.push_back({b, cap, cost});
        adj[b].push_back(arcs.size());
        arcs.push_back({a, 0.0, -cost});
    };
    double total = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
        add(S, 1 + d, P.dem[d].load, 0.0);
        total += P.dem[d].load;
    }
    std::vector<std::vector<std::size_t>> demand_arc(D);
    for (std::size_t d = 0; d < D; ++d)
        for (std::size_t n : c.targets[d]) {
            const std::size_t k = std::lower_bound(nodes.begin(), nodes.end(), n) - nodes.begin();
            demand_arc[d].push_back(arcs.size());
            add(1 + d, 1 + D + k, kInf, marginal_watts_per_mips(P.s.nodes[n]));
        }
    for (std::size_t k = 0; k < nodes.size(); ++k)
        add(1 + D + k, T, P.s.nodes[nodes[k]].processor.capacity_mips, 0.0);

    const double eps = 1e-9 * std::max(1.0, total);
    double sent = 0.0;
    while (sent < total - eps) {
        std::vector<double> dist(V, kInf);
        std::vector<std::size_t> via(V, kNone);
        dist[S] = 0.0;
        for (std::size_t round = 0; round < V; ++round) {
            bool changed = false;
            for (std::size_t a = 0; a < V; ++a) {
                if (dist[a] == kInf)
                    continue;
                for (std::size_t e : adj[a]) {
                    if (arcs[e].cap <= eps)
                        continue;
                    const double nd = dist[a] + arcs[e].cost;
                    if (nd < dist[arcs[e].to] - 1e-15) {
                        dist[arcs[e].to] = nd;
                        via[arcs[e].to] = e;
                        changed = true;
                    }
                }
            }
            if (!changed)
                break;
        }
        if (dist[T] == kInf)
            return false;
        double push = kInf;
        for (std::size_t v = T; v != S; v = arcs[via[v] ^ 1].to)
            push = std::min(push, arcs[via[v]].cap);
        for (std::size_t v = T; v != S; v = arcs[via[v] ^ 1].to) {
            arcs[via[v]].cap -= push;
            arcs[via[v] ^ 1].cap += push;
        }
        sent += push;
    }
    c.fractions.assign(D, {});
    for (std::size_t d = 0; d < D; ++d)
        for (std::size_t e : demand_arc[d])
            c.fractions[d].push_back(arcs[e ^ 1].cap / P.dem[d].load);
    return true;
}

double processing_power(const Problem& P, const Combo& c)
{
    std::vector<double> mips(P.nodes, 0.0);
    std::vector<char> on(P.nodes, 0);
    for (std::size_t d = 0; d < c.targets.size(); ++d)
        for (std::size_t i = 0; i < c.targets[d].size(); ++i) {
            mips[c.targets[d][i]] += c.fractions[d][i] * P.dem[d].load;
            on[c.targets[d][i]] = 1;
        }
    double p = 0.0;
    for (std::size_t n = 0; n < P.nodes; ++n) {
        if (!on[n])
            continue;
        const ProcessorSpec& cpu = P.s.nodes[n].processor;
        p += cpu.power_idle_w + (cpu.power_max_w - cpu.power_idle_w) * (mips[n] / cpu.capacity_mips);
    }
    return p;
}

double combo_bound(const Problem& P, const Combo& c)
{
    double pw = c.processing_w;
    double delay = 0.0;
    std::vector<char> seen(P.nodes, 0);
    for (std::size_t d = 0; d < c.targets.size(); ++d)
        for (std::size_t n : c.targets[d]) {
            const std::size_t src = P.dem[d].src;
            if (n == src)
                continue;
            pw += P.dem[d].bps * P.min_wpb[src][n];
            if (!seen[n]) {
                seen[n] = 1;
                pw += P.entry_min_idle[n];
            }
            delay = std::max(delay, P.min_delay[d][src][n]);
        }
    return P.w.w_power * pw + P.w.w_delay * delay;
}

struct SetsOutcome {
    std::vector<Combo> combos;
    std::string reason;  // set when empty
};

SetsOutcome serving_sets(const Problem& P)
{
    SetsOutcome out;
    const auto& E = P.eligible;
    const std::size_t m = E.size();
    if (m == 0) {
        out.reason = "C2: no eligible processor in the link graph";
        return out;
    }
    if (m > kMaxEligible)
        throw LimitError("too many eligible processors (" + std::to_string(m) + ")");
    const bool minimal_only = P.value_only && P.w.w_power == 0.0;

    std::vector<std::vector<std::uint32_t>> per_demand(P.dem.size());
    for (std::size_t d = 0; d < P.dem.size(); ++d) {
        const DemandData& dd = P.dem[d];
        double reachable_cap = 0.0, all_cap = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double cap = P.s.nodes[E[i]].processor.capacity_mips;
            all_cap += cap;
            if (P.min_delay[d][dd.src][E[i]] < kInf)
                reachable_cap += cap;
        }
        const std::string& did = P.s.demands[d].id;
        if (all_cap < dd.load) {
            out.reason = "C3: eligible processing capacity " + fmt(all_cap) +
                         " MIPS below load " + fmt(dd.load) + " MIPS of demand " + did;
            return out;
        }
        if (reachable_cap < dd.load) {
            // Tell a missing path apart from paths too narrow for the stream.
            std::vector<char> seen(P.s.nodes.size(), 0);
            std::vector<std::size_t> stack{dd.src};
            seen[dd.src] = 1;
            while (!stack.empty()) {
                const std::size_t u = stack.back();
                stack.pop_back();
                for (std::size_t l : P.ls.out_links[u])
                    if (!seen[P.ls.links[l].rx_node]) {
                        seen[P.ls.links[l].rx_node] = 1;
                        stack.push_back(P.ls.links[l].rx_node);
                    }
            }
            double linked_cap = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                if (seen[E[i]])
                    linked_cap += P.s.nodes[E[i]].processor.capacity_mips;
            if (linked_cap >= dd.load)
                out.reason = "C5/C7: links from " + P.s.nodes[dd.src].id + " cannot carry " +
                             fmt(dd.bps / 1e3) + " kbit/s of demand " + did +
                             " to enough processing (" + fmt(reachable_cap) + " of " +
                             fmt(dd.load) + " MIPS)";
            else
                out.reason = "C4: processors reachable from " + P.s.nodes[dd.src].id +
                             " hold " + fmt(reachable_cap) + " MIPS, demand " + did +
                             " needs " + fmt(dd.load);
            return out;
        }
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            double cap = 0.0, min_cap = kInf;
            bool ok = true;
            for (std::size_t i = 0; i < m && ok; ++i) {
                if (!(mask >> i & 1u))
                    continue;
                ok = P.min_delay[d][dd.src][E[i]] < kInf;
                const double c = P.s.nodes[E[i]].processor.capacity_mips;
                cap += c;
                min_cap = std::min(min_cap, c);
            }
            if (!ok || cap < dd.load)
                continue;
            // Dropping a target never raises the delay, so with no power
            // term only inclusion-minimal sets matter.
            if (minimal_only && cap - min_cap >= dd.load)
                continue;
            per_demand[d].push_back(mask);
        }
    }

    std::size_t count = 1;
    for (const auto& v : per_demand) {
        if (count > kMaxCombos / v.size())
            throw LimitError("serving-set space exceeds " + std::to_string(kMaxCombos));
        count *= v.size();
    }

    std::vector<std::size_t> digit(P.dem.size(), 0);
    for (std::size_t k = 0; k < count; ++k) {
        Combo c;
        c.targets.resize(P.dem.size());
        for (std::size_t d = 0; d < P.dem.size(); ++d)
            for (std::size_t i = 0; i < m; ++i)
                if (per_demand[d][digit[d]] >> i & 1u)
                    c.targets[d].push_back(E[i]);
        bool ok = true;
        if (P.dem.size() == 1) {
            c.fractions = {greedy_split(c.targets[0], P.dem[0].load, P.s)};
        } else {
            ok = flow_split(P, c);
        }
        if (ok) {
            c.processing_w = processing_power(P, c);
            c.lb = combo_bound(P, c);
            out.combos.push_back(std::move(c));
        }
        for (std::size_t d = 0; d < digit.size(); ++d) {
            if (++digit[d] < per_demand[d].size())
                break;
            digit[d] = 0;
        }
    }
    if (out.combos.empty())
        out.reason = "C3: serving sets cannot hold all demands together";
    return out;
}

// ----- route search -----

struct Best {
    bool found = false;
    double objective = kInf;
    double power_w = 0.0;
    double delay_s = 0.0;
    std::vector<std::size_t> key;
    std::size_t combo = 0;
    std::vector<std::vector<std::size_t>> paths;  // per slot
};

struct Shared {
    std::mutex mu;
    std::atomic<double> incumbent{kInf};
    std::atomic<std::uint64_t> nodes{0};
    Best best;
};

struct Slot {
    std::size_t d = 0;
    std::size_t target = 0;
    std::size_t src = 0;
    double bps = 0.0;
};

class Search {
public:
    Search(const Problem& p, Shared& sh) : P(p), shared_(sh)
    {
        link_bps_.assign(P.ls.links.size(), 0.0);
        link_q_.assign(P.ls.links.size(), 0.0);
        dev_ref_.assign(P.ls.devices.size(), 0);
        entry_on_.assign(P.nodes, 0);
        cell_bps_.assign(P.cell_cap.size(), 0.0);
        stamp_.assign(P.nodes, 0);
    }

    void run(const std::vector<Combo>& combos, std::size_t index)
    {
        const Combo& c = combos[index];
        if (pruned(c.lb))
            return;
        combo_ = &c;
        combo_index_ = index;
        slots_.clear();
        for (std::size_t d = 0; d < c.targets.size(); ++d)
            for (std::size_t n : c.targets[d])
                if (n != P.dem[d].src)
                    slots_.push_back({d, n, P.dem[d].src, P.dem[d].bps});
        const std::size_t k = slots_.size();
        paths_.assign(k, {});
        suffix_wpb_.assign(k + 1, 0.0);
        suffix_delay_.assign(k + 1, 0.0);
        for (std::size_t i = k; i-- > 0;) {
            const Slot& sl = slots_[i];
            suffix_wpb_[i] = suffix_wpb_[i + 1] + sl.bps * P.min_wpb[sl.src][sl.target];
            suffix_delay_[i] =
                std::max(suffix_delay_[i + 1], P.min_delay[sl.d][sl.src][sl.target]);
        }
        start(0);
    }

    std::uint64_t explored = 0;

private:
    const Problem& P;
    Shared& shared_;
    const Combo* combo_ = nullptr;
    std::size_t combo_index_ = 0;
    std::vector<Slot> slots_;
    std::vector<std::vector<std::size_t>> paths_;
    std::vector<double> suffix_wpb_, suffix_delay_;

    std::vector<double> link_bps_, link_q_, cell_bps_;
    std::vector<int> dev_ref_, entry_on_;
    double route_idle_ = 0.0, route_dyn_ = 0.0;
    std::vector<int> stamp_;
    int stamp_id_ = 0;

    bool pruned(double bound) const
    {
        const double inc = shared_.incumbent.load(std::memory_order_relaxed);
        if (inc == kInf)
            return false;
        if (P.value_only)
            return bound >= inc - kValueTol * std::abs(inc);
        return bound > inc + kRelTol * std::abs(inc);
    }

    struct Saved {
        double bps, q, idle, dyn;
        double cell[2];
    };

    bool admissible(std::size_t l, double t) const
    {
        if (!P.fits(l, link_bps_[l] + t))
            return false;
        for (std::size_t c : P.link_cells[l])
            if (cell_bps_[c] + t > P.cell_cap[c])
                return false;
        return true;
    }

    Saved apply(std::size_t l, double t)
    {
        Saved sv{link_bps_[l], link_q_[l], route_idle_, route_dyn_, {0.0, 0.0}};
        link_bps_[l] += t;
        if (P.w.w_delay > 0)
            link_q_[l] = lookup(P.tables[l], link_bps_[l] / P.packet_bits);
        route_dyn_ += t * P.wpb[l];
        for (std::size_t g : P.link_dev[l]) {
            if (g == kNoDevice || dev_ref_[g]++ > 0)
                continue;
            route_idle_ += P.ls.devices[g].power_idle_w;
            for (std::size_t n : P.entry_of_dev[g])
                ++entry_on_[n];
        }
        for (std::size_t i = 0; i < P.link_cells[l].size(); ++i) {
            sv.cell[i] = cell_bps_[P.link_cells[l][i]];
            cell_bps_[P.link_cells[l][i]] += t;
        }
        return sv;
    }

    void undo(std::size_t l, const Saved& sv)
    {
        link_bps_[l] = sv.bps;
        link_q_[l] = sv.q;
        route_idle_ = sv.idle;
        route_dyn_ = sv.dyn;
        for (std::size_t g : P.link_dev[l]) {
            if (g == kNoDevice || --dev_ref_[g] > 0)
                continue;
            for (std::size_t n : P.entry_of_dev[g])
                --entry_on_[n];
        }
        for (std::size_t i = 0; i < P.link_cells[l].size(); ++i)
            cell_bps_[P.link_cells[l][i]] = sv.cell[i];
    }

    double route_delay(const std::vector<std::size_t>& path) const
    {
        double t = 0.0;
        for (std::size_t l : path)
            t += P.fixed[l] + link_q_[l];
        return t;
    }

    // Lower bound with slot i's partial route standing at v.
    double bound(std::size_t i, std::size_t v)
    {
        const Slot& sl = slots_[i];
        const bool arrived = v == sl.target;
        double pw = combo_->processing_w + route_idle_ + route_dyn_ + suffix_wpb_[i + 1];
        if (!arrived)
            pw += sl.bps * P.min_wpb[v][sl.target];
        ++stamp_id_;
        for (std::size_t j = arrived ? i + 1 : i; j < slots_.size(); ++j) {
            const std::size_t n = slots_[j].target;
            if (stamp_[n] == stamp_id_)
                continue;
            stamp_[n] = stamp_id_;
            if (entry_on_[n] == 0)
                pw += P.entry_min_idle[n];
        }
        double obj = P.w.w_power * pw;
        if (P.w.w_delay > 0) {
            double t = suffix_delay_[i + 1];
            for (std::size_t j = 0; j < i; ++j)
                t = std::max(t, route_delay(paths_[j]));
            double cur = route_delay(paths_[i]);
            if (!arrived)
                cur += P.min_delay[sl.d][v][sl.target];
            obj += P.w.w_delay * std::max(t, cur);
        }
        return obj;
    }

    void start(std::size_t i)
    {
        if (i == slots_.size()) {
            leaf();
            return;
        }
        extend(i, slots_[i].src, std::uint64_t{1} << slots_[i].src);
    }

    void extend(std::size_t i, std::size_t u, std::uint64_t visited)
    {
        const Slot& sl = slots_[i];
        for (std::size_t l : P.order[sl.d][sl.target][u]) {
            const std::size_t v = P.ls.links[l].rx_node;
            if (visited >> v & 1u)
                continue;
            if (!admissible(l, sl.bps))
                continue;
            ++explored;
            const Saved sv = apply(l, sl.bps);
            paths_[i].push_back(l);
            if (!pruned(bound(i, v))) {
                if (v == sl.target)
                    start(i + 1);
                else
                    extend(i, v, visited | std::uint64_t{1} << v);
            }
            paths_[i].pop_back();
            undo(l, sv);
        }
    }

    std::vector<std::size_t> key() const
    {
        std::vector<std::size_t> k;
        std::size_t slot = 0;
        for (std::size_t d = 0; d < combo_->targets.size(); ++d) {
            const auto& targets = combo_->targets[d];
            k.insert(k.end(), targets.begin(), targets.end());
            k.push_back(kNone);
            for (std::size_t n : targets) {
                if (n != P.dem[d].src) {
                    const auto& p = paths_[slot++];
                    k.insert(k.end(), p.begin(), p.end());
                }
                k.push_back(kNone);
            }
        }
        return k;
    }

    // Scores the complete assignment from scratch, in a fixed order, so the
    // value does not depend on the path the search took to get here.
    void leaf()
    {
        std::vector<char> on(P.ls.devices.size(), 0);
        double power = combo_->processing_w;
        for (std::size_t l = 0; l < P.ls.links.size(); ++l)
            if (link_bps_[l] > 0)
                for (std::size_t g : P.link_dev[l])
                    if (g != kNoDevice)
                        on[g] = 1;
        for (std::size_t g = 0; g < on.size(); ++g)
            if (on[g])
                power += P.ls.devices[g].power_idle_w;
        for (std::size_t l = 0; l < P.ls.links.size(); ++l)
            power += link_bps_[l] * P.wpb[l];

        double delay = 0.0;
        for (const auto& path : paths_) {
            double t = 0.0;
            for (std::size_t l : path)
                t += P.fixed[l] + lookup(P.tables[l], link_bps_[l] / P.packet_bits);
            delay = std::max(delay, t);
        }
        const double obj = P.w.w_power * power + P.w.w_delay * delay;
        if (obj > shared_.incumbent.load(std::memory_order_relaxed))
            return;

        std::vector<std::size_t> k = key();
        std::lock_guard lock(shared_.mu);
        Best& b = shared_.best;
        const bool better = !b.found || obj < b.objective ||
                            (!P.value_only && obj == b.objective && k < b.key);
        if (!better)
            return;
        b.found = true;
        b.objective = obj;
        b.power_w = power;
        b.delay_s = delay;
        b.key = std::move(k);
        b.combo = combo_index_;
        b.paths = paths_;
        shared_.incumbent.store(obj, std::memory_order_relaxed);
    }
};

// Per-device breakdown and route delays of the winning assignment, from the
// solver's own link-level bookkeeping.
void report(const Problem& P, const Combo& c, const Best& b, SolveResult& r)
{
    const LinkSet& ls = P.ls;
    std::vector<double> bps(ls.links.size(), 0.0);
    std::size_t slot = 0;
    Allocation& a = r.allocation;
    a.demands.resize(c.targets.size());
    for (std::size_t d = 0; d < c.targets.size(); ++d) {
        DemandAllocation& da = a.demands[d];
        da.targets = c.targets[d];
        da.fractions = c.fractions[d];
        for (std::size_t n : c.targets[d]) {
            if (n == P.dem[d].src) {
                da.routes.emplace_back();
                continue;
            }
            da.routes.push_back(b.paths[slot++]);
            for (std::size_t l : da.routes.back())
                bps[l] += P.dem[d].bps;
        }
    }

    std::vector<double> watts(ls.devices.size(), 0.0);
    std::vector<double> mips(ls.devices.size(), 0.0);
    std::vector<char> on(ls.devices.size(), 0);
    for (std::size_t d = 0; d < c.targets.size(); ++d)
        for (std::size_t i = 0; i < c.targets[d].size(); ++i) {
            const std::size_t cpu = ls.processor_of[c.targets[d][i]];
            mips[cpu] += c.fractions[d][i] * P.dem[d].load;
            on[cpu] = 1;
        }
    double fiber = 0.0;
    for (std::size_t l = 0; l < ls.links.size(); ++l) {
        if (bps[l] <= 0)
            continue;
        const Link& lk = ls.links[l];
        if (lk.medium == Medium::Fiber)
            fiber += bps[l];
        for (std::size_t g : P.link_dev[l]) {
            if (g == kNoDevice)
                continue;
            const Device& dev = ls.devices[g];
            on[g] = 1;
            watts[g] += (dev.power_max_w - dev.power_idle_w) * bps[l] / lk.capacity_bps;
        }
        watts[lk.tx_device] += lk.radiated_power_w * bps[l] / lk.capacity_bps;
    }
    for (std::size_t g = 0; g < ls.devices.size(); ++g) {
        const Device& dev = ls.devices[g];
        double p = 0.0;
        if (on[g]) {
            p = dev.power_idle_w + watts[g];
            if (!dev.is_interface())
                p += (dev.power_max_w - dev.power_idle_w) * (mips[g] / dev.capacity);
        }
        r.per_device_power_w[dev.id] = p;
    }
    r.per_device_power_w["core"] = P.s.settings.core_energy_per_bit_j * fiber;

    for (std::size_t d = 0; d < a.demands.size(); ++d) {
        const auto& da = a.demands[d];
        for (std::size_t i = 0; i < da.targets.size(); ++i) {
            double t = 0.0;
            for (std::size_t l : da.routes[i])
                t += P.fixed[l] + lookup(P.tables[l], bps[l] / P.packet_bits);
            r.route_delays.push_back({d, da.targets[i], t});
        }
    }
}

}  // namespace

std::vector<double> greedy_split(std::span<const std::size_t> targets, double load_mips,
                                 const Scenario& s)
{
    std::vector<std::size_t> idx(targets.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double ca = marginal_watts_per_mips(s.nodes[targets[a]]);
        const double cb = marginal_watts_per_mips(s.nodes[targets[b]]);
        if (ca != cb)
            return ca < cb;
        return s.nodes[targets[a]].id < s.nodes[targets[b]].id;
    });
    std::vector<double> out(targets.size(), 0.0);
    double left = load_mips;
    for (std::size_t i : idx) {
        if (left <= 0)
            break;
        const double take = std::min(left, s.nodes[targets[i]].processor.capacity_mips);
        out[i] = take / load_mips;
        left -= take;
    }
    if (left > 1e-9 * std::max(1.0, load_mips))
        throw InsufficientCapacity("serving set holds " + fmt(load_mips - left) + " of " +
                                   fmt(load_mips) + " MIPS");
    return out;
}

std::vector<std::size_t> allocation_key(const Allocation& a)
{
    std::vector<std::size_t> k;
    for (const auto& da : a.demands) {
        k.insert(k.end(), da.targets.begin(), da.targets.end());
        k.push_back(kNone);
        for (const auto& route : da.routes) {
            k.insert(k.end(), route.begin(), route.end());
            k.push_back(kNone);
        }
    }
    return k;
}

SolveResult solve(const Scenario& s, const LinkSet& ls, const std::vector<DelayTable>& tables,
                  const ObjectiveWeights& w, const SolverLimits& limits)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (!(w.w_power >= 0) || !(w.w_delay >= 0) || (w.w_power == 0 && w.w_delay == 0))
        throw FormulationError("objective weights must be non-negative and not both zero");
    const std::size_t graph = std::count(ls.in_graph.begin(), ls.in_graph.end(), true);
    if (graph > limits.max_nodes && !limits.force)
        throw LimitError("instance has " + std::to_string(graph) + " nodes, limit " +
                         std::to_string(limits.max_nodes) + " (use --force)");
    if (graph > kMaxGraphNodes || s.nodes.size() > kMaxGraphNodes)
        throw LimitError("instance has more than " + std::to_string(kMaxGraphNodes) + " nodes");

    Problem P(s, ls, tables, w, limits.value_only);
    prepare(P);

    SolveResult r;
    r.weights = w;
    int threads = 1;
#ifdef _OPENMP
    threads = limits.threads > 0 ? limits.threads : omp_get_max_threads();
#endif
    r.stats.threads = threads;

    SetsOutcome sets = serving_sets(P);
    r.stats.serving_sets = sets.combos.size();
    auto finish = [&] {
        r.stats.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    if (sets.combos.empty()) {
        r.status = SolveStatus::Infeasible;
        r.infeasible_reason = sets.reason;
        finish();
        return r;
    }

    std::vector<std::size_t> order(sets.combos.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sets.combos[a].lb < sets.combos[b].lb;
    });

    Shared shared;
    const long count = static_cast<long>(order.size());
#pragma omp parallel num_threads(threads)
    {
        Search search(P, shared);
#pragma omp for schedule(dynamic, 1)
        for (long i = 0; i < count; ++i)
            search.run(sets.combos, order[static_cast<std::size_t>(i)]);
        shared.nodes.fetch_add(search.explored, std::memory_order_relaxed);
    }
    r.stats.nodes_explored = shared.nodes.load();

    const Best& b = shared.best;
    if (!b.found) {
        r.status = SolveStatus::Infeasible;
        r.infeasible_reason =
            "C5/C7: every route set overloads a link, an access-point cell or a queue rate cap";
        finish();
        return r;
    }
    r.total_power_w = b.power_w;
    r.max_delay_s = b.delay_s;
    r.objective = b.objective;
    report(P, sets.combos[b.combo], b, r);
    finish();
    return r;
}

}  // namespace vecop
