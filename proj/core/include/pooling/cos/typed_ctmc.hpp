// Copyright 2026 The pooling authors
//
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

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pooling/cos/assignment_rates.hpp"
#include "pooling/cos/dispatch.hpp"

namespace pooling::cos {

struct TypedCtmcResult {
    ServerClasses classes;
    int buffer_cap = 0;
    std::size_t states = 0;           // recurrent typed states
    std::size_t scan_nodes = 0;       // auxiliary nodes resolving the FCFS scan
    std::array<double, 2> wait{};     // arrival sees every eligible server busy
    std::array<double, 2> delay{};    // Little's law on admitted jobs
    std::array<double, 2> mean_in_system{};
    std::array<double, 2> throughput{};
    std::vector<double> occupancy;    // marginal over (x1, x2, x3), indexed by classes.index
    double tail_bound = 0.0;          // alpha_max^B / (1 - alpha_max)
    double residual = 0.0;            // max row residual of the solved system
};

// Largest alpha(x) = lambda(x) / (|x| nu) over blocking occupancies.
double max_alpha(const ProviderPair& pp, const SharingConfig& cfg);
// Smallest queue cap B with alpha_max^B / (1 - alpha_max) < tail.
int certified_buffer_cap(const ProviderPair& pp, const SharingConfig& cfg, double tail = 1e-8);

// Typed FCFS central-queue chain; waiting jobs keep provider tags. The cap must certify 1e-8.
TypedCtmcResult typed_ctmc_oracle(const ProviderPair& pp, const SharingConfig& cfg, int buffer_cap,
                                  DispatchRule rule = DispatchRule::assignment_rates);

} // namespace pooling::cos
