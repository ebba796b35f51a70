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

// Instance builders shared by the unit and acceptance tests.

#ifndef VECOP_TESTS_SUPPORT_HPP
#define VECOP_TESTS_SUPPORT_HPP

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "vecop/experiment.hpp"

namespace vecop::testing {

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

inline std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Scenario golden()
{
    Scenario s = parse_scenario(read_text(VECOP_SOURCE_DIR "/scenarios/parking-lot-8v2e.json"));
    validate(s);
    return s;
}

/// Default nodes trimmed to the given counts; vehicles re-placed uniformly
/// in the lot. One demand from v1.
inline Scenario small_instance(std::uint64_t seed, int vehicles, int edges, bool cloud,
                               double traffic_kbps, ProcessingSetting setting)
{
    const Scenario base = generate_default(seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> u(0.0, 40.0);
    Scenario s;
    s.lot = base.lot;
    s.settings = base.settings;
    s.settings.processing_setting = setting;
    for (const NodeSpec& n : base.nodes) {
        if (n.kind == NodeKind::Vehicle && n.id <= "v" + std::to_string(vehicles)) {
            NodeSpec v = n;
            v.position = Position{u(rng), u(rng)};
            s.nodes.push_back(v);
        } else if (n.kind == NodeKind::Edge && n.id <= "e" + std::to_string(edges)) {
            s.nodes.push_back(n);
        } else if (n.kind == NodeKind::Cloud && cloud) {
            s.nodes.push_back(n);
        }
    }
    s.demands.push_back({"d1", "v1", traffic_kbps, std::nullopt});
    validate(s);
    return s;
}

struct Built {
    Scenario s;
    LinkSet ls;
    std::vector<DelayTable> tables;
};

inline Built build(Scenario s)
{
    validate(s);
    LinkSet ls = build_links(s);
    auto tables = build_tables(s, ls);
    return {std::move(s), std::move(ls), std::move(tables)};
}

inline std::size_t link_between(const Scenario& s, const LinkSet& ls, const std::string& tx,
                                const std::string& rx)
{
    const std::size_t a = *s.find_node(tx), b = *s.find_node(rx);
    for (const Link& l : ls.links)
        if (l.tx_node == a && l.rx_node == b)
            return l.id;
    throw std::runtime_error("no link " + tx + "->" + rx);
}

}  // namespace vecop::testing

#endif  // VECOP_TESTS_SUPPORT_HPP
