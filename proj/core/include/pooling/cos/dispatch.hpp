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

#include <string_view>

#include "pooling/cos/assignment_rates.hpp"

namespace pooling::cos {

enum class DispatchRule {
    assignment_rates, // idle-server choice drawn from the assignment-rate table
    uniform,          // uniform over idle eligible servers
};

std::string_view to_string(DispatchRule r) noexcept;
DispatchRule parse_dispatch_rule(std::string_view s);

// Class probabilities for an arriving provider-i job at occupancy x. Both zero when it must wait.
struct DispatchProbabilities {
    double dedicated = 0.0;
    double shared = 0.0;
};

DispatchProbabilities dispatch_probabilities(const AssignmentRateTable& table, const Occupancy& x, Provider i,
                                             DispatchRule rule);

} // namespace pooling::cos
