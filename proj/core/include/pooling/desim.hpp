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
#include <cstdint>

#include "pooling/cos/dispatch.hpp"
#include "pooling/params.hpp"

namespace pooling::sim {

struct SimScenario {
    ProviderPair providers{};
    SharingConfig config{};
    Policy policy = Policy::cos;
    std::uint64_t horizon = 1'000'000; // arrivals generated per replication
    std::uint64_t warmup = 100'000;    // leading arrivals excluded from estimates
    std::uint64_t seed = 1;
    int replications = 1;
    int batches = 30;
    cos::DispatchRule dispatch = cos::DispatchRule::assignment_rates;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    friend bool operator==(const Estimate&, const Estimate&) = default;
};

struct ProviderEstimate {
    Estimate wait;
    Estimate delay;
    std::uint64_t jobs = 0;
    friend bool operator==(const ProviderEstimate&, const ProviderEstimate&) = default;
};

struct SimResult {
    std::array<ProviderEstimate, 2> providers{};
    std::uint64_t jobs = 0;
    std::uint64_t seed = 0;
    int replications = 1;
    friend bool operator==(const SimResult&, const SimResult&) = default;
};

// splitmix64 child seed for a replication.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replication) noexcept;

void validate(const SimScenario& scn);

// Integer configuration; replications run on up to `threads` threads.
SimResult simulate(const SimScenario& scn, unsigned threads = 1);

// Time-sharing between the integer corners around (k1, k2), switching by arrival counts.
SimResult simulate_mixed(const SimScenario& scn, double k1, double k2, int switch_epochs, unsigned threads = 1);

} // namespace pooling::sim
