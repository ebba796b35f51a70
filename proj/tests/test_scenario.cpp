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

#include <algorithm>
#include <string>

using namespace vecop;
using vecop::testing::golden;

namespace {

std::string golden_text()
{
    return vecop::testing::read_text(VECOP_SOURCE_DIR "/scenarios/parking-lot-8v2e.json");
}

std::string error_of(const std::string& doc)
{
    try {
        Scenario s = parse_scenario(doc);
        validate(s);
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

std::string replace(std::string text, const std::string& from, const std::string& to)
{
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("golden scenario has 8 vehicles, 2 edge nodes and a cloud")
{
    const Scenario s = golden();
    auto count = [&](NodeKind k) {
        return std::count_if(s.nodes.begin(), s.nodes.end(),
                             [&](const NodeSpec& n) { return n.kind == k; });
    };
    CHECK(count(NodeKind::Vehicle) == 8);
    CHECK(count(NodeKind::Edge) == 2);
    CHECK(count(NodeKind::Cloud) == 1);
}

TEST_CASE("golden file is what gen --seed 42 emits")
{
    CHECK(emit_scenario(generate_default(42)) == golden_text());
}

TEST_CASE("generate_default is a pure function of the seed")
{
    CHECK(emit_scenario(generate_default(42)) == emit_scenario(generate_default(42)));
    CHECK(emit_scenario(generate_default(7)) != emit_scenario(generate_default(42)));
}

TEST_CASE("default device figures")
{
    const Scenario s = generate_default(3);
    for (const NodeSpec& n : s.nodes) {
        if (n.kind == NodeKind::Vehicle) {
            CHECK(n.processor.capacity_mips == 800.0);
            CHECK(n.processor.power_idle_w == 5.0);
            CHECK(n.processor.power_max_w == 10.0);
            REQUIRE(n.radio(Medium::Dsrc));
            CHECK(n.radio(Medium::Dsrc)->bandwidth_bps == 27e6);
            CHECK(n.radio(Medium::Dsrc)->tx_power_max_dbm == 22.0);
            CHECK(n.radio(Medium::Dsrc)->rx_sensitivity_dbm == -77.0);
            CHECK(n.radio(Medium::Wifi)->bandwidth_bps == 150e6);
            CHECK(n.position->x >= 0);
            CHECK(n.position->x <= 40);
            CHECK(n.position->y >= 0);
            CHECK(n.position->y <= 40);
        } else if (n.kind == NodeKind::Edge) {
            CHECK(n.processor.capacity_mips == 1200.0);
            CHECK(n.processor.power_idle_w == 2.0);
            CHECK(n.processor.power_max_w == 12.5);
            CHECK(n.radio(Medium::Wifi)->power_idle_w == 5.5);
            CHECK(n.radio(Medium::Wifi)->power_max_w == 25.0);
            CHECK(n.radio(Medium::Wifi)->rx_sensitivity_dbm == -104.0);
            CHECK(n.onu->power_idle_w == 6.8);
            CHECK(n.onu->power_max_w == 8.0);
            CHECK(n.onu->fiber_capacity_bps == 3.75e9);
        } else {
            CHECK(n.fiber_length_m >= 200e3);
            CHECK(n.fiber_length_m <= 300e3);
        }
    }
    CHECK(s.node("e1").position->x == 10.0);
    CHECK(s.node("e1").position->y == 20.0);
    CHECK(s.node("e2").position->x == 30.0);
    CHECK(s.node("e2").position->y == 20.0);
}

TEST_CASE("round trip: parse(emit(s)) == s, byte-stable")
{
    for (std::uint64_t seed : {1u, 2u, 42u, 99u}) {
        Scenario s = generate_default(seed);
        s.settings.rho_max = 0.9;
        s.settings.mips_per_kbps = 1.1;
        s.demands.push_back({"d2", "v3", 250.5, 999.0});
        validate(s);
        const std::string text = emit_scenario(s);
        Scenario back = parse_scenario(text);
        validate(back);
        CHECK(back == s);
        CHECK(emit_scenario(back) == text);
    }
}

TEST_CASE("validation fills load from mips_per_kbps and is idempotent")
{
    Scenario s = generate_default(5);
    s.demands[0].load_mips.reset();
    s.demands[0].traffic_kbps = 2500;
    s.settings.mips_per_kbps = 1.1;
    validate(s);
    CHECK(*s.demands[0].load_mips == doctest::Approx(2750.0));
    const Scenario once = s;
    validate(s);
    CHECK(s == once);
}

TEST_CASE("eligible processors per setting")
{
    Scenario s = golden();
    s.settings.processing_setting = ProcessingSetting::VehiclesOnly;
    CHECK(eligible_processors(s).size() == 8);
    s.settings.processing_setting = ProcessingSetting::CloudOnly;
    const auto cloud = eligible_processors(s);
    REQUIRE(cloud.size() == 1);
    CHECK(s.nodes[cloud[0]].id == "cloud");
    s.settings.processing_setting = ProcessingSetting::VehiclesAndEdge;
    CHECK(eligible_processors(s).size() == 10);
}

TEST_CASE("semantic errors name the field")
{
    const std::string doc = golden_text();
    CHECK(error_of(replace(doc, "\"source\": \"v1\"", "\"source\": \"e1\"")).find(
              "source must be a vehicle") != std::string::npos);
    CHECK(error_of(replace(doc, "\"source\": \"v1\"", "\"source\": \"v42\"")).find(
              "demands.d1.source: unknown node reference") != std::string::npos);
    CHECK(error_of(replace(doc, "\"capacity_mips\": 50000.0", "\"capacity_mips\": -1.0"))
              .find("capacity_mips: must be positive") != std::string::npos);

    // No cloud but CLOUD_ONLY.
    Scenario s = golden();
    s.nodes.erase(s.nodes.begin());
    s.settings.processing_setting = ProcessingSetting::CloudOnly;
    CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("no eligible processor"), ValidationError);
}

TEST_CASE("missing device is reported")
{
    Scenario s = golden();
    s.nodes[*s.find_node("v2")].radios.pop_back();
    CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("nodes.v2.radios: missing wifi radio"),
                         ValidationError);
    Scenario t = golden();
    t.nodes[*t.find_node("e1")].onu.reset();
    CHECK_THROWS_WITH_AS(validate(t), doctest::Contains("nodes.e1.onu: missing"), ValidationError);
}

TEST_CASE("syntax errors carry a position")
{
    try {
        parse_scenario("{\n  \"lot\": {\n  \"width_m\": 40,,\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 0);
    }
}

TEST_CASE("settings invariants")
{
    Scenario s = golden();
    s.settings.rho_max = 1.0;
    CHECK_THROWS_AS(validate(s), ValidationError);
    s = golden();
    s.settings.bins = 1;
    CHECK_THROWS_AS(validate(s), ValidationError);
    s = golden();
    s.settings.objective = {0, 0, ObjectivePreset::Custom};
    CHECK_THROWS_AS(validate(s), ValidationError);
    s = golden();
    s.nodes[*s.find_node("v3")].position->x = 41;
    CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("nodes.v3.position"), ValidationError);
}

TEST_CASE("scenario hash is stable and content-sensitive")
{
    const Scenario a = golden();
    Scenario b = a;
    CHECK(scenario_hash(a) == scenario_hash(b));
    CHECK(scenario_hash(a).size() == 16);
    b.settings.bins = 32;
    CHECK(scenario_hash(a) != scenario_hash(b));
}
