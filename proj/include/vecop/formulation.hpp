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

// The mixed-integer model of the allocation problem and an evaluator that
// scores an allocation against it without going through the model.
//
// Variables (d demand, n eligible node, l link, g device, k table bin):
//   x_d_n    share of demand d processed on n             continuous [0,1]
//   y_d_n    n serves d                                    binary
//   a_g      device g is active                            binary
//   r_d_n_l  the stream of d towards n crosses l           binary
//   q_d_n_l  queueing delay of that stream on l            continuous >= 0
//   lam_l    arrival rate on l (packets/s)                 continuous >= 0
//   z_l_k    lam_l falls in bin k                          binary
//   Q_l      table delay of l                              continuous >= 0
//   T        largest source-to-target delay                continuous >= 0
//
// Constraint families:
//   C1   every demand is fully placed
//   C2   x <= y, y <= a(processor)
//   C3   processor capacity
//   C4   one simple path per served remote target (flow conservation)
//   C5a  link capacity; C5b shared WiFi cell per access point
//   C6   a stream activates the devices at both ends of each hop
//   C7   bin selection, arrival rate, rate cap and table delay per link
//   C8   q >= Q - M(1 - r), M = last table entry of the link
//   C9   T >= propagation + transmission + queueing along each route

#ifndef VECOP_FORMULATION_HPP
#define VECOP_FORMULATION_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vecop/allocation.hpp"
#include "vecop/delaymodel.hpp"
#include "vecop/linkmodel.hpp"
#include "vecop/powermodel.hpp"
#include "vecop/scenario.hpp"

namespace vecop {

// ----- model -----

enum class VarKind { Binary, Continuous };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
};

using Terms = std::vector<std::pair<std::size_t, double>>;  // (variable, coefficient)

struct Constraint {
    std::string name;
    Terms terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

struct MilpModel {
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    Terms objective;  // minimized
    std::map<std::string, double> big_m;  // constraint name -> M

    std::size_t add_variable(std::string name, VarKind kind, double lower, double upper);
    std::size_t variable(std::string_view name) const;  // throws when absent
    bool has_variable(std::string_view name) const;
    double objective_coefficient(std::string_view name) const;

private:
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// Variable and constraint counts per family (name prefix before '_').
struct ModelCensus {
    std::map<std::string, std::size_t> variables;
    std::map<std::string, std::size_t> constraints;
    std::size_t total_variables = 0;
    std::size_t total_constraints = 0;
};

ModelCensus census(const MilpModel& model);

/// Same variables, constraints and objective, coefficients within `tol`.
bool structurally_equal(const MilpModel& a, const MilpModel& b, double tol = 1e-12);

// ----- results -----

enum class SolveStatus { Optimal, Infeasible };

struct RouteDelay {
    std::size_t demand = 0;
    std::size_t target = 0;
    double delay_s = 0.0;
};

struct SolverStats {
    std::uint64_t nodes_explored = 0;
    std::uint64_t serving_sets = 0;
    double wall_time_s = 0.0;
    int threads = 1;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Optimal;
    std::string infeasible_reason;  // binding constraint family and detail
    Allocation allocation;
    double total_power_w = 0.0;
    double max_delay_s = 0.0;
    double objective = 0.0;
    ObjectiveWeights weights;
    SolverStats stats;
    std::map<std::string, double> per_device_power_w;
    std::vector<RouteDelay> route_delays;

    bool feasible() const { return status == SolveStatus::Optimal; }
};

/// A constraint an allocation breaks: family ("C1"..), entity and amount.
class ConstraintViolation : public std::runtime_error {
public:
    ConstraintViolation(std::string family, std::string entity, std::string measure,
                        double amount);
    const std::string& family() const noexcept { return family_; }
    const std::string& entity() const noexcept { return entity_; }
    double amount() const noexcept { return amount_; }

private:
    std::string family_;
    std::string entity_;
    double amount_;
};

class FormulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ----- operations -----

MilpModel formulate(const Scenario& scenario, const LinkSet& links,
                    const std::vector<DelayTable>& tables, const ObjectiveWeights& weights);

/// Scores an allocation from first principles: checks every constraint
/// family, then power via system_power and delay via path_delay.
SolveResult evaluate(const Scenario& scenario, const LinkSet& links,
                     const std::vector<DelayTable>& tables, const Allocation& allocation,
                     const ObjectiveWeights& weights);

/// POWER_ONLY -> (1, 0); JOINT_EQUAL -> (0.5/P*, 0.5/T*); CUSTOM -> as given.
ObjectiveWeights make_weights(ObjectivePreset preset, double power_optimum_w,
                              double delay_optimum_s, double custom_power = 0.0,
                              double custom_delay = 0.0);

// ----- CPLEX LP text -----

class LpParseError : public std::runtime_error {
public:
    LpParseError(const std::string& what, std::size_t line);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

std::string export_lp(const MilpModel& model);
MilpModel read_lp(std::string_view text);

}  // namespace vecop

#endif  // VECOP_FORMULATION_HPP
