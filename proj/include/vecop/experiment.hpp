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

// Demand sweeps over processing settings and objectives, the comparison
// metrics computed from them, and their file formats.

#ifndef VECOP_EXPERIMENT_HPP
#define VECOP_EXPERIMENT_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vecop/solver.hpp"

namespace vecop {

struct ObjectiveChoice {
    ObjectivePreset preset = ObjectivePreset::PowerOnly;
    double w_power = 0.0;  // custom only
    double w_delay = 0.0;

    friend bool operator==(const ObjectiveChoice&, const ObjectiveChoice&) = default;
};

/// "power" | "power_only" | "joint" | "joint_equal" | "custom:WP,WD".
ObjectiveChoice parse_objective(std::string_view text);
std::string objective_label(const ObjectiveChoice& choice);

/// Weights for a preset on this instance. JOINT_EQUAL solves the
/// power-only and delay-only problems for its normalizers and throws
/// FormulationError when either is infeasible.
ObjectiveWeights resolve_weights(const Scenario& scenario, const LinkSet& links,
                                 const std::vector<DelayTable>& tables,
                                 const ObjectiveChoice& choice, const SolverLimits& limits = {});

/// Solves under a preset. JOINT_EQUAL first solves power-only and
/// delay-only for its normalizers; if either is infeasible so is the joint
/// problem.
SolveResult solve_with(const Scenario& scenario, const LinkSet& links,
                       const std::vector<DelayTable>& tables, const ObjectiveChoice& choice,
                       const SolverLimits& limits = {});

/// Full result document: allocation by node and link id, per-device power,
/// per-target delays, weights and solver statistics.
std::string result_json(const Scenario& scenario, const LinkSet& links, const SolveResult& result);

struct SweepSpec {
    std::vector<double> demands_kbps{1000, 2000, 3000, 4000, 5000, 6000};
    std::vector<ProcessingSetting> settings{ProcessingSetting::VehiclesOnly,
                                            ProcessingSetting::VehiclesAndEdge,
                                            ProcessingSetting::CloudOnly};
    std::vector<ObjectiveChoice> objectives{{ObjectivePreset::PowerOnly},
                                            {ObjectivePreset::JointEqual}};
    SolverLimits limits;
};

enum class CellStatus { Optimal, Infeasible, Error };
std::string_view to_string(CellStatus status);

struct SweepRow {
    double demand_kbps = 0.0;
    ProcessingSetting setting = ProcessingSetting::VehiclesOnly;
    std::string objective;  // objective_label
    CellStatus status = CellStatus::Optimal;
    double total_power_w = 0.0;
    double max_delay_s = 0.0;
    double objective_value = 0.0;
    double w_power = 0.0;
    double w_delay = 0.0;
    std::string targets;    // node ids joined by ';'
    std::string fractions;  // parallel to targets
    int max_hops = 0;
    bool verified = false;  // evaluate() agrees within 1e-9 relative
    std::string detail;     // infeasibility reason or error text
    SolveResult result;     // full result; not part of the CSV
};

struct ResultTable {
    std::vector<std::string> provenance;  // "key=value", no leading '#'
    std::vector<SweepRow> rows;
};

/// One row per (demand, setting, objective), in that nesting order. Every
/// demand of the scenario is set to the traffic value with its load
/// derived from mips_per_kbps. Cell failures are recorded, not thrown.
ResultTable sweep(const Scenario& base, const SweepSpec& spec);

/// 100 * (variant - baseline) / baseline.
double percent_change(double baseline, double variant);

/// Fixed columns, 9 significant digits, LF, '#' provenance lines first.
/// Solver statistics (timing, node counts) are left out on purpose: they
/// vary with the thread count.
std::string table_csv(const ResultTable& table);
ResultTable read_table_csv(std::string_view text);
std::string table_json(const ResultTable& table);

/// Long format: figure,setting,objective,demand_kbps,value.
std::string plotdata_csv(const ResultTable& table);

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ReportEntry {
    std::string family;
    std::string setting;
    std::string objective;
    double demand_kbps = 0.0;
    std::optional<double> percent;  // empty when a cell is infeasible or undefined
};

struct Report {
    std::vector<ReportEntry> entries;
};

inline constexpr std::string_view kFamilyPowerIncrease = "power_increase_joint_vs_power";
inline constexpr std::string_view kFamilyPowerSaving = "power_saving_vs_cloud";
inline constexpr std::string_view kFamilyDelayReduction = "delay_reduction_joint_vs_power";
inline constexpr std::string_view kFamilyDelayVsCloud = "delay_reduction_vs_cloud_joint";

/// Reference band quoted for a family and setting, or "" when none.
std::string_view reference_band(std::string_view family, std::string_view setting);

/// The four comparison families per demand. Requires cloud_only rows.
Report report(const ResultTable& table);
std::string report_csv(const Report& report);
std::string report_json(const Report& report);

}  // namespace vecop

#endif  // VECOP_EXPERIMENT_HPP
