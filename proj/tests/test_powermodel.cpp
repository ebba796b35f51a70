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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace vecop;
using namespace vecop::testing;

namespace {

double sum_of(const PowerBreakdown& p)
{
    double s = 0;
    for (const auto& [id, w] : p.per_device_w)
        s += w;
    return s;
}

}  // namespace

TEST_CASE("OBU device power")
{
    const PowerSpec obu{5, 10};
    CHECK(device_power(obu, {0, true, 0.0, 0.0, 1.0}) == 5.0);
    CHECK(device_power(obu, {0, true, 1.0, 0.0, 1.0}) == 10.0);
    CHECK(device_power(obu, {0, true, 0.5, 0.0, 1.0}) == 7.5);
    CHECK(device_power(obu, {0, false, 0.0, 0.0, 1.0}) == 0.0);
    CHECK(device_power(obu, {0, true, 0.5, 0.2, 1.0}) == doctest::Approx(7.6));
    CHECK_THROWS_AS(device_power(obu, {0, true, 1.1, 0.0, 1.0}), CapacityError);
    CHECK_THROWS_AS(device_power(obu, {0, true, -0.1, 0.0, 1.0}), CapacityError);
}

TEST_CASE("empty allocation draws nothing")
{
    const Built b = build(golden());
    Allocation a;
    a.demands.resize(1);
    const PowerBreakdown p = system_power(b.s, b.ls, a);
    CHECK(p.total_w == 0.0);
}

TEST_CASE("local processing: OBU power only")
{
    Scenario s = golden();
    s.demands[0].load_mips = 600;
    const Built b = build(s);
    const std::size_t v1 = *b.s.find_node("v1");
    Allocation a{{{{v1}, {1.0}, {{}}}}};
    const PowerBreakdown p = system_power(b.s, b.ls, a);
    CHECK(p.total_w == doctest::Approx(8.75).epsilon(1e-14));  // 5 + 5 * 600/800
    CHECK(p.per_device_w.at("v1.cpu") == doctest::Approx(8.75));
    CHECK(sum_of(p) == doctest::Approx(p.total_w).epsilon(1e-12));
}

TEST_CASE("cloud allocation activates AP and ONU and pays the core")
{
    Scenario s = golden();
    s.settings.processing_setting = ProcessingSetting::CloudOnly;
    const Built b = build(s);
    const std::size_t cloud = *b.s.find_node("cloud");
    const std::size_t up = link_between(b.s, b.ls, "v1", "e2");
    const std::size_t fiber = link_between(b.s, b.ls, "e2", "cloud");
    Allocation a{{{{cloud}, {1.0}, {{up, fiber}}}}};
    const PowerBreakdown p = system_power(b.s, b.ls, a);
    const double t = 1e6;  // 1000 kbit/s
    const Link& w = b.ls.links[up];
    CHECK(p.per_device_w.at("e2.ap") == doctest::Approx(5.5 + 19.5 * t / w.capacity_bps));
    CHECK(p.per_device_w.at("e2.onu") == doctest::Approx(6.8 + 1.2 * t / 3.75e9));
    CHECK(p.per_device_w.at("v1.wifi") ==
          doctest::Approx(0.000072 + (0.612 - 0.000072) * t / w.capacity_bps +
                          w.radiated_power_w * t / w.capacity_bps));
    CHECK(p.per_device_w.at("core") == doctest::Approx(2e-8 * t));
    CHECK(p.per_device_w.at("cloud.cpu") == doctest::Approx(150 + 150 * 1000.0 / 50000));
    CHECK(p.per_device_w.at("e1.ap") == 0.0);
    CHECK(sum_of(p) == doctest::Approx(p.total_w).epsilon(1e-12));
}

TEST_CASE("over-capacity allocations are rejected")
{
    Scenario s = golden();
    s.demands[0].traffic_kbps = 30000;  // > 27 Mbit/s DSRC
    s.demands[0].load_mips = 100;
    const Built b = build(s);
    const std::size_t v2 = *b.s.find_node("v2");
    Allocation a{{{{v2}, {1.0}, {{link_between(b.s, b.ls, "v1", "v2")}}}}};
    CHECK_THROWS_AS(system_power(b.s, b.ls, a), CapacityError);
}

TEST_CASE("more utilization never lowers power")
{
    const PowerSpec spec{5.5, 25};
    double prev = 0;
    for (double u = 0; u <= 1.0; u += 0.05) {
        const double p = device_power(spec, {0, true, u, 0.1, 1.0});
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("DSRC costs more energy per bit than WiFi at full load")
{
    const Built b = build(golden());
    // Same endpoints at the same distance class: compare per-bit costs of
    // the two media on the default scenario.
    const double dsrc = link_watts_per_bps(b.s, b.ls, link_between(b.s, b.ls, "v1", "v2"));
    const double wifi = link_watts_per_bps(b.s, b.ls, link_between(b.s, b.ls, "v1", "e2"));
    CHECK(dsrc > wifi);
    // Full-load figures from tests/oracles/derive.py.
    CHECK(3.7624034515726338e-7 > 1.3424697909543397e-7);
    CHECK(dsrc == doctest::Approx(10.0 / 27e6 + b.ls.links[link_between(b.s, b.ls, "v1", "v2")]
                                                        .radiated_power_w / 27e6));
}
