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

const ObjectiveWeights kPower{1.0, 0.0, ObjectivePreset::PowerOnly};
const ObjectiveWeights kJoint{0.05, 500.0, ObjectivePreset::Custom};

Allocation local(const Scenario& s)
{
    return {{{{*s.find_node("v1")}, {1.0}, {{}}}}};
}

}  // namespace

TEST_CASE("census matches the closed form")
{
    for (auto setting : {ProcessingSetting::VehiclesOnly, ProcessingSetting::VehiclesAndEdge,
                         ProcessingSetting::CloudOnly}) {
        Scenario sc = small_instance(3, 3, 1, true, 1000, setting);
        const Built b = build(sc);
        const MilpModel m = formulate(b.s, b.ls, b.tables, kPower);
        ModelCensus c = census(m);

        const std::size_t D = b.s.demands.size();
        const std::size_t E = eligible_processors(b.s).size();
        const std::size_t G = b.ls.devices.size();
        const std::size_t L = b.ls.links.size();
        const std::size_t K = static_cast<std::size_t>(b.s.settings.bins);
        const std::size_t V = std::count(b.ls.in_graph.begin(), b.ls.in_graph.end(), true);
        const std::size_t src = *b.s.find_node("v1");

        std::size_t streams = 0, r = 0, rx_dev = 0;
        for (std::size_t n : eligible_processors(b.s)) {
            if (n == src)
                continue;
            ++streams;
            for (const Link& l : b.ls.links)
                if (l.rx_node != src && l.tx_node != n) {
                    ++r;
                    rx_dev += l.rx_device != kNoDevice;
                }
        }
        CHECK(c.variables.at("x") == D * E);
        CHECK(c.variables.at("y") == D * E);
        CHECK(c.variables.at("a") == G);
        CHECK(c.variables.at("lam") == L);
        CHECK(c.variables.at("Q") == L);
        CHECK(c.variables.at("z") == L * K);
        CHECK(c.variables["r"] == r);
        CHECK(c.variables["q"] == r);
        CHECK(c.variables.at("T") == 1);
        CHECK(c.total_variables == 2 * D * E + G + L * (2 + K) + 2 * r + 1);

        CHECK(c.constraints.at("C1") == D);
        CHECK(c.constraints.at("C2x") == D * E);
        CHECK(c.constraints.at("C2a") == D * E);
        CHECK(c.constraints.at("C3") == E);
        CHECK(c.constraints["C4"] == streams * V);
        CHECK(c.constraints["C4s"] == streams * V);
        CHECK(c.constraints.at("C5a") == L);
        CHECK(c.constraints["C5b"] == b.ls.cells.size());
        CHECK(c.constraints["C6t"] == r);
        CHECK(c.constraints["C6r"] == rx_dev);
        for (const char* f : {"C7z", "C7l", "C7c", "C7q"})
            CHECK(c.constraints.at(f) == L);
        CHECK(c.constraints["C8"] == r);
        CHECK(c.constraints["C9"] == streams);
        CHECK(m.big_m.size() == r);
    }
}

TEST_CASE("cloud-only model has one assignment term per demand")
{
    Scenario sc = golden();
    sc.settings.processing_setting = ProcessingSetting::CloudOnly;
    const Built b = build(sc);
    const MilpModel m = formulate(b.s, b.ls, b.tables, kPower);
    REQUIRE(census(m).constraints.at("C1") == 1);
    for (const Constraint& c : m.constraints)
        if (c.name == "C1_d1") {
            REQUIRE(c.terms.size() == 1);
            CHECK(m.variables[c.terms[0].first].name == "x_d1_cloud");
        }
}

TEST_CASE("objective coefficients follow the weights")
{
    const Built b = build(golden());
    const MilpModel p = formulate(b.s, b.ls, b.tables, kPower);
    CHECK(p.objective_coefficient("T") == 0.0);
    CHECK(p.objective_coefficient("a_v1.cpu") == 5.0);
    // x coefficient: span per MIPS times load.
    CHECK(p.objective_coefficient("x_d1_v1") == doctest::Approx(5.0 / 800 * 1000));

    const MilpModel j = formulate(b.s, b.ls, b.tables, kJoint);
    CHECK(j.objective_coefficient("T") == 500.0);
    CHECK(j.objective_coefficient("a_v1.cpu") == doctest::Approx(0.25));

    const ObjectiveWeights seven{7.0, 0.0, ObjectivePreset::Custom};
    const MilpModel s7 = formulate(b.s, b.ls, b.tables, seven);
    REQUIRE(s7.objective.size() == p.objective.size());
    for (std::size_t i = 0; i < p.objective.size(); ++i)
        CHECK(s7.objective[i].second == doctest::Approx(7 * p.objective[i].second));
}

TEST_CASE("evaluate names the violated family")
{
    Scenario sc = golden();
    sc.demands[0].load_mips = 500;
    const Built b = build(sc);
    Allocation a = local(b.s);
    a.demands[0].fractions[0] = 0.9;
    CHECK_THROWS_WITH_AS(evaluate(b.s, b.ls, b.tables, a, kPower),
                         "C1, demand d1, deficit 0.1", ConstraintViolation);
    try {
        evaluate(b.s, b.ls, b.tables, a, kPower);
    } catch (const ConstraintViolation& e) {
        CHECK(e.family() == "C1");
        CHECK(e.amount() == doctest::Approx(0.1));
    }

    // Route that does not reach its target.
    const std::size_t v2 = *b.s.find_node("v2");
    const std::size_t v3 = *b.s.find_node("v3");
    Allocation bad{{{{v2}, {1.0}, {{link_between(b.s, b.ls, "v1", "v3")}}}}};
    (void)v3;
    CHECK_THROWS_WITH_AS(evaluate(b.s, b.ls, b.tables, bad, kPower),
                         doctest::Contains("C4"), ConstraintViolation);

    // Overloaded processor.
    Scenario big = golden();
    big.demands[0].load_mips = 900;
    const Built bb = build(big);
    CHECK_THROWS_WITH_AS(evaluate(bb.s, bb.ls, bb.tables, local(bb.s), kPower),
                         doctest::Contains("C3, node v1"), ConstraintViolation);
}

TEST_CASE("local processing has no delay")
{
    Scenario sc = golden();
    sc.demands[0].load_mips = 600;
    const Built b = build(sc);
    const SolveResult r = evaluate(b.s, b.ls, b.tables, local(b.s), kJoint);
    CHECK(r.max_delay_s == 0.0);
    CHECK(r.total_power_w == doctest::Approx(8.75));
    CHECK(r.objective == doctest::Approx(0.05 * 8.75));
}

TEST_CASE("delay does not depend on the split, power does")
{
    Scenario sc = golden();
    sc.demands[0].load_mips = 1000;
    const Built b = build(sc);
    const std::size_t v1 = *b.s.find_node("v1"), v2 = *b.s.find_node("v2");
    const std::size_t l = link_between(b.s, b.ls, "v1", "v2");
    std::vector<std::size_t> t{v1, v2};
    std::sort(t.begin(), t.end());
    const auto make = [&](double f1) {
        DemandAllocation da{t, {}, {}};
        for (std::size_t n : t) {
            da.fractions.push_back(n == v1 ? f1 : 1 - f1);
            da.routes.push_back(n == v1 ? std::vector<std::size_t>{}
                                        : std::vector<std::size_t>{l});
        }
        return Allocation{{da}};
    };
    const SolveResult a = evaluate(b.s, b.ls, b.tables, make(0.6), kJoint);
    const SolveResult c = evaluate(b.s, b.ls, b.tables, make(0.4), kJoint);
    CHECK(a.max_delay_s == c.max_delay_s);
    CHECK(a.total_power_w == doctest::Approx(c.total_power_w));  // identical OBUs
    CHECK(a.max_delay_s > 0);
}

TEST_CASE("tabulated delay is never below exact M/M/1")
{
    Scenario sc = golden();
    sc.demands[0].load_mips = 500;
    for (double kbps : {1000.0, 5000.0, 15000.0}) {
        sc.demands[0].traffic_kbps = kbps;
        const Built b = build(sc);
        const std::size_t l = link_between(b.s, b.ls, "v1", "v2");
        Allocation a{{{{*b.s.find_node("v2")}, {1.0}, {{l}}}}};
        const SolveResult r = evaluate(b.s, b.ls, b.tables, a, kJoint);
        const Link& k = b.ls.links[l];
        const double lam = kbps * 1e3 / (8 * 1500);
        const double exact = k.prop_delay_s + k.tx_delay_per_packet_s +
                             mm1_delay(lam, b.tables[l].mu_pps);
        CHECK(r.max_delay_s >= exact);
    }
}

TEST_CASE("make_weights")
{
    const ObjectiveWeights j = make_weights(ObjectivePreset::JointEqual, 10.0, 1e-3);
    CHECK(j.w_power == doctest::Approx(0.05));
    CHECK(j.w_delay == doctest::Approx(500));
    const ObjectiveWeights c = make_weights(ObjectivePreset::Custom, 0, 0, 2, 3);
    CHECK(c.w_power == 2);
    CHECK(c.w_delay == 3);
    CHECK(make_weights(ObjectivePreset::PowerOnly, 0, 0) == kPower);
    CHECK_THROWS_AS(make_weights(ObjectivePreset::JointEqual, 0.0, 1e-3), FormulationError);
    CHECK_THROWS_AS(make_weights(ObjectivePreset::Custom, 0, 0, 0, 0), FormulationError);
    CHECK_THROWS_AS(make_weights(ObjectivePreset::Custom, 0, 0, -1, 1), FormulationError);
}

TEST_CASE("LP export round trip")
{
    const Built b = build(small_instance(5, 3, 1, true, 2000, ProcessingSetting::VehiclesAndEdge));
    const MilpModel m = formulate(b.s, b.ls, b.tables, kJoint);
    const std::string text = export_lp(m);
    CHECK(text.find("Binary") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    const MilpModel back = read_lp(text);
    CHECK(structurally_equal(m, back));
    // Variable order follows first use after reading; stable from then on.
    const std::string again = export_lp(back);
    CHECK(export_lp(read_lp(again)) == again);
}

TEST_CASE("empty model exports a zero objective")
{
    const std::string text = export_lp(MilpModel{});
    CHECK(text.find("obj: 0") != std::string::npos);
    CHECK_THROWS_AS(read_lp("garbage"), LpParseError);
}

TEST_CASE("isolated source is rejected")
{
    Scenario sc = small_instance(1, 2, 0, false, 1000, ProcessingSetting::VehiclesOnly);
    sc.lot = {4000, 4000};
    for (NodeSpec& n : sc.nodes)
        if (n.id == "v2")
            n.position = Position{3000, 3000};
    sc.demands[0].load_mips = 5000;
    CHECK_THROWS_AS(build(sc), std::exception);
}
