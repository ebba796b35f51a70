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

// Exact optimizer for desk-scale instances.
//
// The search enumerates serving sets (one subset of the eligible nodes per
// demand), orders them by a lower bound, and for each explores the simple
// source-to-target routes depth first. For a fixed serving set and routes
// the cheapest processing split is known in closed form (greedy fill by
// marginal power), and the delay does not depend on the split, so only
// routes need searching. Subtrees are cut on
//   - processing + activation + cheapest-remaining-route power,
//   - capacity (link, AP cell, queue rate cap),
//   - the delay already committed plus the fastest remaining routes.
//
// Serving sets are independent and are shared out over OpenMP threads. The
// winner is the smallest (objective, allocation_key) pair; pruning keeps
// every candidate within a relative 1e-9 of the incumbent, so the answer
// is the same for any thread count.

#ifndef VECOP_SOLVER_HPP
#define VECOP_SOLVER_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "vecop/formulation.hpp"

namespace vecop {

/// The instance exceeds the solver's size guard.
class LimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientCapacity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverLimits {
    std::size_t max_nodes = 12;  // nodes in the link graph
    bool force = false;          // ignore max_nodes
    int threads = 0;             // 0: OpenMP default
    /// Only the optimal value matters: ties may be pruned and the returned
    /// allocation is any optimum. Used for normalizing pre-solves.
    bool value_only = false;
};

SolveResult solve(const Scenario& scenario, const LinkSet& links,
                  const std::vector<DelayTable>& tables, const ObjectiveWeights& weights,
                  const SolverLimits& limits = {});

/// Cheapest split of `load_mips` over `targets` (node indices): fill in
/// ascending (P_max - P_idle) / capacity, ties by node id. Fractions are
/// parallel to `targets`.
std::vector<double> greedy_split(std::span<const std::size_t> targets, double load_mips,
                                 const Scenario& scenario);

/// Exhaustive reference: every serving set times every combination of
/// simple routes, no pruning, single thread. At most 6 graph nodes and a
/// single demand.
SolveResult brute_force(const Scenario& scenario, const LinkSet& links,
                        const std::vector<DelayTable>& tables, const ObjectiveWeights& weights);

/// Tie-break order: per demand the serving set (node indices ascending),
/// then each route's link ids.
std::vector<std::size_t> allocation_key(const Allocation& allocation);

}  // namespace vecop

#endif  // VECOP_SOLVER_HPP
