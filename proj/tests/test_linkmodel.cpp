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

#include <cmath>
#include <set>

using namespace vecop;
using namespace vecop::testing;

// Reference values: tests/oracles/derive.py (50-digit arithmetic).

TEST_CASE("free-space path loss")
{
    CHECK(fspl_db(1, 1) == doctest::Approx(-147.55).epsilon(1e-12));
    CHECK(fspl_db(56.57, 5.9e9) == doctest::Approx(82.918763807651068).epsilon(1e-12));
    CHECK(std::abs(fspl_db(56.57, 5.9e9) - 82.92) <= 0.01);
    CHECK(fspl_db(40, 2.4e9) == doctest::Approx(72.095424660791368).epsilon(1e-12));
    CHECK_THROWS_AS(fspl_db(0, 1e9), DomainError);
    CHECK_THROWS_AS(fspl_db(1, -1), DomainError);
}

TEST_CASE("required transmit power")
{
    CHECK(required_tx_dbm(56.57, 5.9e9, -77, 0) == doctest::Approx(5.9187638076510682));
    CHECK(required_tx_dbm(40, 2.4e9, -104, 0) == doctest::Approx(-31.904575339208632));
    // 1 m at 5.9 GHz is 47.87 dB of loss; 67.87 dB is reached at 10 m.
    CHECK(required_tx_dbm(1, 5.9e9, -77, 0) == doctest::Approx(-29.132959767157116));
    CHECK(required_tx_dbm(10, 5.9e9, -77, 0) == doctest::Approx(-9.132959767157116));
    CHECK(required_tx_dbm(40, 2.4e9, -104, 3) == doctest::Approx(-28.904575339208632));
}

TEST_CASE("dBm to watts")
{
    CHECK(dbm_to_watts(0) == doctest::Approx(0.001).epsilon(1e-15));
    CHECK(std::abs(dbm_to_watts(22) - 0.15849) <= 1e-5);
    CHECK(dbm_to_watts(22) == doctest::Approx(0.15848931924611135).epsilon(1e-14));
    CHECK(std::abs(dbm_to_watts(14) - 0.02512) <= 1e-5);
}

TEST_CASE("default scenario: every vehicle pair is DSRC-feasible")
{
    const Built b = build(golden());
    std::set<std::pair<std::size_t, std::size_t>> dsrc;
    for (const Link& l : b.ls.links)
        if (l.medium == Medium::Dsrc)
            dsrc.insert({l.tx_node, l.rx_node});
    CHECK(dsrc.size() == 8 * 7);
    for (const Link& l : b.ls.links) {
        CHECK(l.tx_node != l.rx_node);
        CHECK(l.capacity_bps > 0);
        if (l.medium == Medium::Dsrc) {
            CHECK(l.capacity_bps == 27e6);
            CHECK(l.distance_m <= 56.5686);
            CHECK(l.radiated_power_w <= dbm_to_watts(22) * (1 + 1e-12));
        }
    }
}

TEST_CASE("link delays")
{
    const Built b = build(golden());
    for (const Link& l : b.ls.links) {
        const double speed = l.medium == Medium::Fiber ? 2e8 : 3e8;
        CHECK(l.prop_delay_s == doctest::Approx(l.distance_m / speed).epsilon(1e-15));
        CHECK(l.tx_delay_per_packet_s == doctest::Approx(12000 / l.capacity_bps).epsilon(1e-15));
        if (l.medium == Medium::Fiber) {
            CHECK(std::abs(l.prop_delay_s - 1.25e-3) <= 1e-12);
            CHECK(l.capacity_bps == 3.75e9);
            CHECK(l.radiated_power_w == 0);
            CHECK(l.rx_device == kNoDevice);
        }
        if (l.medium == Medium::Wifi && l.capacity_bps == 150e6)
            CHECK(l.tx_delay_per_packet_s == doctest::Approx(80e-6).epsilon(1e-14));
    }
    const std::size_t wifi = link_between(b.s, b.ls, "e1", "e2");
    CHECK(b.ls.links[wifi].distance_m == 20.0);
    CHECK(b.ls.links[wifi].prop_delay_s == doctest::Approx(20.0 / 3e8));
}

TEST_CASE("links follow the topology rules")
{
    const Built b = build(golden());
    for (const Link& l : b.ls.links) {
        const NodeKind tx = b.s.nodes[l.tx_node].kind, rx = b.s.nodes[l.rx_node].kind;
        switch (l.medium) {
        case Medium::Dsrc:
            CHECK((tx == NodeKind::Vehicle && rx == NodeKind::Vehicle));
            break;
        case Medium::Wifi:
            CHECK(tx != NodeKind::Cloud);
            CHECK(rx != NodeKind::Cloud);
            CHECK((tx == NodeKind::Edge || rx == NodeKind::Edge));
            break;
        case Medium::Fiber:
            CHECK(tx == NodeKind::Edge);
            CHECK(rx == NodeKind::Cloud);
            break;
        }
    }
    // Every AP cell holds exactly the WiFi links touching that AP.
    for (const auto& [ap, cell] : b.ls.cells)
        for (std::size_t l : cell) {
            const Link& lk = b.ls.links[l];
            CHECK(lk.medium == Medium::Wifi);
            CHECK((lk.tx_device == ap || lk.rx_device == ap));
        }
}

TEST_CASE("asymmetric budgets: a link exists iff the transmitter closes it")
{
    // Vehicle WiFi (+14 dBm) against AP sensitivity -104 dBm reaches far;
    // AP (+22 dBm) against vehicle sensitivity -72 dBm reaches ~498 m at
    // 2.4 GHz. Stretch the lot so a vehicle sits between the two limits.
    Scenario s = golden();
    s.lot = {2000, 2000};
    auto& v = s.nodes[*s.find_node("v2")];
    v.position = Position{10 + 1000, 20};
    const Built b = build(s);
    CHECK_NOTHROW(link_between(b.s, b.ls, "v2", "e1"));
    CHECK_THROWS(link_between(b.s, b.ls, "e1", "v2"));
}

TEST_CASE("radiated power grows with distance")
{
    const double f = 5.9e9;
    double prev = 0;
    for (double d = 1; d <= 56; d += 5) {
        const double w = dbm_to_watts(required_tx_dbm(d, f, -77, 0));
        CHECK(w >= prev);
        prev = w;
    }
}

TEST_CASE("VEHICLES_ONLY keeps edge and cloud out of the graph")
{
    Scenario s = golden();
    s.settings.processing_setting = ProcessingSetting::VehiclesOnly;
    const Built b = build(s);
    for (const Link& l : b.ls.links) {
        CHECK(b.s.nodes[l.tx_node].kind == NodeKind::Vehicle);
        CHECK(b.s.nodes[l.rx_node].kind == NodeKind::Vehicle);
    }
    CHECK(b.ls.links.size() == 56);
}

TEST_CASE("removing a node never adds links")
{
    const Built full = build(golden());
    std::set<std::pair<std::string, std::string>> all;
    for (const Link& l : full.ls.links)
        all.insert({full.s.nodes[l.tx_node].id, full.s.nodes[l.rx_node].id});
    for (const char* gone : {"v3", "e2"}) {
        Scenario s = golden();
        s.nodes.erase(s.nodes.begin() + static_cast<long>(*s.find_node(gone)));
        const Built b = build(s);
        CHECK(b.ls.links.size() < full.ls.links.size());
        for (const Link& l : b.ls.links)
            CHECK(all.count({b.s.nodes[l.tx_node].id, b.s.nodes[l.rx_node].id}) == 1);
    }
}

TEST_CASE("isolated demand source")
{
    // Source far from everyone and unable to process locally.
    Scenario s = golden();
    s.lot = {10000, 10000};
    s.nodes[*s.find_node("v1")].position = Position{9000, 9000};
    s.settings.processing_setting = ProcessingSetting::CloudOnly;
    validate(s);
    CHECK_THROWS_WITH_AS(build_links(s), doctest::Contains("isolated demand source"),
                         IsolatedSourceError);
    // The same source may still process locally when it has the capacity.
    s.settings.processing_setting = ProcessingSetting::VehiclesOnly;
    validate(s);
    CHECK_THROWS_AS(build_links(s), IsolatedSourceError);
    s.demands[0].load_mips = 500;
    CHECK_NOTHROW(build_links(s));
}

TEST_CASE("links CSV")
{
    const Built b = build(golden());
    const std::string csv = links_csv(b.s, b.ls);
    CHECK(csv.rfind("tx,rx,medium,distance_m,capacity_bps,radiated_mW,prop_ns,txdelay_us\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(b.ls.links.size() + 1));
    CHECK(csv.find("e1,cloud,fiber,250000,3.75e+09,0,1250000,") != std::string::npos);
}

TEST_CASE("maximum radiated power mode")
{
    Scenario s = golden();
    s.settings.radiated_power = RadiatedPowerMode::Maximum;
    const Built b = build(s);
    const Link& l = b.ls.links[link_between(b.s, b.ls, "v1", "v2")];
    CHECK(l.radiated_power_w == doctest::Approx(dbm_to_watts(22)));
}
