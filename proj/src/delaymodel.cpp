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

#include "vecop/delaymodel.hpp"

#include <algorithm>
#include <string>

namespace vecop {

double mm1_delay(double lambda_pps, double mu_pps)
{
    if (lambda_pps < 0)
        throw QueueError("negative arrival rate");
    if (lambda_pps >= mu_pps)
        throw QueueError("unstable queue");
    return 1.0 / (mu_pps - lambda_pps);
}

DelayTable build_table(const QueueSpec& q, int bins)
{
    if (bins < 2)
        throw QueueError("a delay table needs at least 2 bins");
    if (!(q.mu_pps > 0) || !(q.rho_max > 0) || !(q.rho_max < 1))
        throw QueueError("invalid queue spec");
    DelayTable t;
    t.mu_pps = q.mu_pps;
    t.upper_pps.resize(static_cast<std::size_t>(bins));
    t.delay_s.resize(static_cast<std::size_t>(bins));
    const double cap = q.rho_max * q.mu_pps;
    for (int k = 1; k <= bins; ++k) {
        // (k * cap) / K keeps the edges of K and 2K tables bit-identical.
        const double upper = (k * cap) / bins;
        t.upper_pps[k - 1] = upper;
        t.delay_s[k - 1] = 1.0 / (q.mu_pps - upper);
    }
    return t;
}

std::size_t DelayTable::bin_of(double lambda_pps) const
{
    if (lambda_pps < 0)
        throw QueueError("negative arrival rate");
    auto it = std::lower_bound(upper_pps.begin(), upper_pps.end(), lambda_pps);
    if (it == upper_pps.end())
        throw QueueError("arrival rate " + std::to_string(lambda_pps) + " exceeds rho_max");
    return static_cast<std::size_t>(it - upper_pps.begin());
}

double lookup(const DelayTable& table, double lambda_pps)
{
    return table.delay_s[table.bin_of(lambda_pps)];
}

std::vector<DelayTable> build_tables(const Scenario& s, const LinkSet& ls)
{
    std::vector<DelayTable> out;
    out.reserve(ls.links.size());
    const double packet_bits = 8.0 * s.settings.packet_size_bytes;
    for (const Link& l : ls.links)
        out.push_back(build_table({l.capacity_bps / packet_bits, s.settings.rho_max},
                                  s.settings.bins));
    return out;
}

double path_delay(std::span<const std::size_t> path, const LinkSet& ls,
                  const std::vector<DelayTable>& tables, std::span<const double> lambda_pps)
{
    double total = 0.0;
    for (std::size_t l : path) {
        const Link& link = ls.links[l];
        total += link.prop_delay_s + link.tx_delay_per_packet_s + lookup(tables[l], lambda_pps[l]);
    }
    return total;
}

}  // namespace vecop
