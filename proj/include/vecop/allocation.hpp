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

#ifndef VECOP_ALLOCATION_HPP
#define VECOP_ALLOCATION_HPP

#include <cstddef>
#include <vector>

namespace vecop {

/// Where one demand is processed. The three vectors run in parallel over
/// the serving set (node indices, ascending). Each serving node receives
/// the full traffic stream over its route; the source's own route is empty.
struct DemandAllocation {
    std::vector<std::size_t> targets;
    std::vector<double> fractions;
    std::vector<std::vector<std::size_t>> routes;  // link ids, source to target

    friend bool operator==(const DemandAllocation&, const DemandAllocation&) = default;
};

/// Structural decision, one entry per scenario demand. Loads, power and
/// delay are always derived from this, never stored alongside it.
struct Allocation {
    std::vector<DemandAllocation> demands;

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

}  // namespace vecop

#endif  // VECOP_ALLOCATION_HPP
