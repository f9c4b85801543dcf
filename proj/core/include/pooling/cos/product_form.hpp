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
#include <vector>

#include "pooling/cos/assignment_rates.hpp"

namespace pooling::cos {

// Stationary law of the c.o.s. system aggregated to busy-server occupancy.
struct CosStationaryDescription {
    ServerClasses classes;
    double nu = 1.0;
    double empty_probability = 0.0;     // pi(0)
    std::vector<double> rate_product;   // Pi(x) along any class-label path
    std::vector<double> path_weight;    // sum over label paths of prod 1/(1 - alpha) at each prefix
    std::vector<double> alpha;          // lambda(x) / (|x| nu), 0 at x = 0
    std::vector<double> probability;    // P(x), waiting jobs summed out

    double probability_at(const Occupancy& x) const { return probability.at(classes.index(x)); }
    double total_mass() const;
    double max_alpha() const;
};

CosStationaryDescription stationary_normalization(const ProviderPair& pp, const SharingConfig& cfg,
                                                  const AssignmentRateTable& rates);
CosStationaryDescription stationary_description(const ProviderPair& pp, const SharingConfig& cfg);

// Sum of P(x) over occupancies blocking provider i.
std::array<double, 2> waiting_probabilities(const CosStationaryDescription& d);
std::array<double, 2> waiting_probabilities(const ProviderPair& pp, const SharingConfig& cfg);

// Closed nested sums for the blocked masses, evaluated next to the path aggregation.
struct PrintedSumCheck {
    std::array<double, 2> only_blocked_path{};    // provider i blocked, other provider not
    std::array<double, 2> only_blocked_printed{};
    double both_blocked_path = 0.0;
    double both_blocked_printed = 0.0;

    double max_discrepancy() const;
};

PrintedSumCheck printed_sum_cross_check(const ProviderPair& pp, const SharingConfig& cfg);

} // namespace pooling::cos
