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

// Per-hop delay: propagation + packet transmission + M/M/1 queueing.
//
// The optimizer cannot use 1/(mu - lambda) directly, so every transmitting
// interface gets a table of K arrival-rate bins. Bin k covers
// (L_{k-1}, L_k] with L_k = k * rho_max * mu / K and is charged the delay at
// its upper edge, 1/(mu - L_k). The table therefore never under-estimates
// the M/M/1 sojourn time and is exact at the bin edges.

#ifndef VECOP_DELAYMODEL_HPP
#define VECOP_DELAYMODEL_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "vecop/linkmodel.hpp"

namespace vecop {

class QueueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QueueSpec {
    double mu_pps = 0.0;  // capacity / (8 * packet size)
    double rho_max = 0.95;
};

struct DelayTable {
    double mu_pps = 0.0;
    std::vector<double> upper_pps;  // L_1 < ... < L_K = rho_max * mu
    std::vector<double> delay_s;    // 1 / (mu - L_k)

    std::size_t bins() const { return upper_pps.size(); }
    double max_lambda() const { return upper_pps.back(); }
    /// 0-based bin holding lambda; throws past the last bin.
    std::size_t bin_of(double lambda_pps) const;
};

double mm1_delay(double lambda_pps, double mu_pps);

DelayTable build_table(const QueueSpec& queue, int bins);

double lookup(const DelayTable& table, double lambda_pps);

/// One table per link, indexed by link id.
std::vector<DelayTable> build_tables(const Scenario& scenario, const LinkSet& links);

/// Sum of propagation, transmission and table queueing delay along a path.
/// `lambda_pps` is indexed by link id. An empty path costs nothing.
double path_delay(std::span<const std::size_t> path, const LinkSet& links,
                  const std::vector<DelayTable>& tables, std::span<const double> lambda_pps);

}  // namespace vecop

#endif  // VECOP_DELAYMODEL_HPP
