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
#include "json.hpp"

using namespace vecop;
using namespace vecop::testing;

namespace {

SweepRow row(double kbps, ProcessingSetting st, const char* obj, double power_w, double delay_s)
{
    SweepRow r;
    r.demand_kbps = kbps;
    r.setting = st;
    r.objective = obj;
    r.total_power_w = power_w;
    r.max_delay_s = delay_s;
    r.verified = true;
    return r;
}

const ReportEntry* find(const Report& r, std::string_view fam, std::string_view setting,
                        std::string_view obj, double kbps)
{
    for (const ReportEntry& e : r.entries)
        if (e.family == fam && e.setting == setting && e.objective == obj && e.demand_kbps == kbps)
            return &e;
    return nullptr;
}

// Small but complete sweep reused by several cases.
const ResultTable& small_table()
{
    static const ResultTable t = [] {
        SweepSpec spec;
        spec.demands_kbps = {1000, 4000};
        return sweep(golden(), spec);
    }();
    return t;
}

}  // namespace

TEST_CASE("percent change")
{
    CHECK(percent_change(10, 12) == doctest::Approx(20));
    CHECK(percent_change(10, 8) == doctest::Approx(-20));
    CHECK(percent_change(-4, -2) == doctest::Approx(-50));
    CHECK(percent_change(3, 3) == 0.0);
    CHECK_THROWS_AS(percent_change(0, 1), std::domain_error);
}

TEST_CASE("objective names")
{
    CHECK(parse_objective("power").preset == ObjectivePreset::PowerOnly);
    CHECK(parse_objective("joint_equal").preset == ObjectivePreset::JointEqual);
    const ObjectiveChoice c = parse_objective("custom:0.5,200");
    CHECK(c.w_power == 0.5);
    CHECK(c.w_delay == 200);
    CHECK(objective_label(c) == "custom:0.5;200");
    for (const char* bad : {"", "delay", "custom:", "custom:1", "custom:a,b", "custom:0,0",
                            "custom:-1,2", "custom:1,2x"})
        CHECK_THROWS_AS(parse_objective(bad), ValidationError);
}

TEST_CASE("report on a synthetic table")
{
    ResultTable t;
    using PS = ProcessingSetting;
    t.rows = {row(1000, PS::VehiclesOnly, "power_only", 20, 4e-3),
              row(1000, PS::VehiclesOnly, "joint_equal", 25, 1e-3),
              row(1000, PS::VehiclesAndEdge, "power_only", 40, 2e-3),
              row(1000, PS::VehiclesAndEdge, "joint_equal", 42, 1e-3),
              row(1000, PS::CloudOnly, "power_only", 100, 5e-3),
              row(1000, PS::CloudOnly, "joint_equal", 100, 5e-3)};
    const Report r = report(t);
    const auto* saving = find(r, kFamilyPowerSaving, "vehicles_only", "power_only", 1000);
    REQUIRE(saving);
    CHECK(*saving->percent == doctest::Approx(80));
    CHECK(*find(r, kFamilyPowerIncrease, "vehicles_only", "joint_equal", 1000)->percent ==
          doctest::Approx(25));
    CHECK(*find(r, kFamilyDelayReduction, "vehicles_only", "joint_equal", 1000)->percent ==
          doctest::Approx(75));
    CHECK(*find(r, kFamilyDelayVsCloud, "vehicles_and_edge", "joint_equal", 1000)->percent ==
          doctest::Approx(80));
    // Cloud-only joint vs power is defined and zero.
    CHECK(*find(r, kFamilyPowerIncrease, "cloud_only", "joint_equal", 1000)->percent == 0.0);

    const std::string csv = report_csv(r);
    CHECK(csv.rfind("family,setting,objective,demand_kbps,percent,reference_band\n", 0) == 0);
    CHECK(csv.find("power_saving_vs_cloud,vehicles_only,power_only,1000,80,") !=
          std::string::npos);
    const auto parsed = nlohmann::json::parse(report_json(r));
    CHECK(parsed.is_object());
}

TEST_CASE("infeasible cells leave the entry empty")
{
    ResultTable t;
    using PS = ProcessingSetting;
    t.rows = {row(6000, PS::VehiclesOnly, "power_only", 0, 0),
              row(6000, PS::CloudOnly, "power_only", 100, 5e-3)};
    t.rows[0].status = CellStatus::Infeasible;
    const Report r = report(t);
    const auto* e = find(r, kFamilyPowerSaving, "vehicles_only", "power_only", 6000);
    REQUIRE(e);
    CHECK_FALSE(e->percent.has_value());
    CHECK(report_csv(r).find("power_saving_vs_cloud,vehicles_only,power_only,6000,,") !=
          std::string::npos);
}

TEST_CASE("report needs the cloud baseline")
{
    ResultTable t;
    t.rows = {row(1000, ProcessingSetting::VehiclesOnly, "power_only", 20, 1e-3)};
    CHECK_THROWS_WITH_AS(report(t), doctest::Contains("baseline absent"), ReportError);
}

TEST_CASE("reference bands")
{
    CHECK(reference_band(kFamilyPowerIncrease, "vehicles_only") == "22%-34%");
    CHECK(reference_band(kFamilyPowerIncrease, "vehicles_and_edge") == "3%-6%");
    CHECK(reference_band(kFamilyPowerIncrease, "cloud_only").empty());
}

TEST_CASE("empty demand list gives an empty table")
{
    SweepSpec spec;
    spec.demands_kbps.clear();
    const ResultTable t = sweep(golden(), spec);
    CHECK(t.rows.empty());
    const std::string csv = table_csv(t);
    CHECK(read_table_csv(csv).rows.empty());
}

TEST_CASE("sweep rows are verified and ordered")
{
    const ResultTable& t = small_table();
    REQUIRE(t.rows.size() == 2 * 3 * 2);
    CHECK(t.rows[0].demand_kbps == 1000);
    CHECK(t.rows[0].setting == ProcessingSetting::VehiclesOnly);
    CHECK(t.rows[0].objective == "power_only");
    CHECK(t.rows[1].objective == "joint_equal");
    for (const SweepRow& r : t.rows) {
        CHECK(r.status == CellStatus::Optimal);
        CHECK(r.verified);
    }
    const auto hash = std::find_if(t.provenance.begin(), t.provenance.end(),
                                   [](const std::string& p) { return p.rfind("scenario_hash=", 0) == 0; });
    CHECK(hash != t.provenance.end());
}

TEST_CASE("CSV round trip")
{
    const ResultTable& t = small_table();
    const std::string csv = table_csv(t);
    CHECK(csv.find("\r") == std::string::npos);
    CHECK(csv.find("# scenario_hash=") == 0);
    const ResultTable back = read_table_csv(csv);
    CHECK(back.provenance == t.provenance);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(back.rows[i].objective == t.rows[i].objective);
        CHECK(back.rows[i].targets == t.rows[i].targets);
        CHECK(rel_diff(back.rows[i].total_power_w, t.rows[i].total_power_w) < 1e-8);
    }
    CHECK(table_csv(back) == csv);
    CHECK_THROWS(read_table_csv("demand_kbps,setting\n1,2\n"));
}

TEST_CASE("report does not depend on row order")
{
    const ResultTable& t = small_table();
    ResultTable shuffled = t;
    std::reverse(shuffled.rows.begin(), shuffled.rows.end());
    std::rotate(shuffled.rows.begin(), shuffled.rows.begin() + 5, shuffled.rows.end());
    CHECK(report_csv(report(shuffled)) == report_csv(report(t)));
}

TEST_CASE("plot data")
{
    const std::string p = plotdata_csv(small_table());
    CHECK(p.rfind("figure,setting,objective,demand_kbps,value\n", 0) == 0);
    CHECK(p.find("power_w,vehicles_only,power_only,1000,") != std::string::npos);
    CHECK(p.find("delay_ms,cloud_only,joint_equal,4000,") != std::string::npos);
}

TEST_CASE("result document")
{
    const Built b = build(golden());
    const SolveResult r = solve_with(b.s, b.ls, b.tables, parse_objective("joint"));
    const auto doc = nlohmann::json::parse(result_json(b.s, b.ls, r));
    CHECK(doc["status"] == "optimal");
    CHECK(doc["weights"]["w_power"].get<double>() > 0);
    CHECK(doc.contains("allocation"));
    CHECK(doc.contains("stats"));
}
