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

#include "pooling/cos/dispatch.hpp"

#include <algorithm>
#include <string>

#include "pooling/errors.hpp"

namespace pooling::cos {

std::string_view to_string(DispatchRule r) noexcept {
    return r == DispatchRule::uniform ? "uniform" : "assignment_rates";
}

DispatchRule parse_dispatch_rule(std::string_view s) {
    if (s == "assignment_rates") return DispatchRule::assignment_rates;
    if (s == "uniform") return DispatchRule::uniform;
    throw config_error("unknown dispatch rule '" + std::string(s) + "' (expected assignment_rates or uniform)");
}

DispatchProbabilities dispatch_probabilities(const AssignmentRateTable& table, const Occupancy& x, Provider i,
                                             DispatchRule rule) {
    const auto& cls = table.classes();
    const std::size_t own = index(i);
    const int idle_own = cls.idle(x, own);
    const int idle_shared = cls.idle(x, 2);
    if (idle_own + idle_shared == 0) return {};
    if (idle_shared == 0) return {1.0, 0.0};
    if (idle_own == 0) return {0.0, 1.0};
    double p = 0.0;
    if (rule == DispatchRule::uniform) {
        p = static_cast<double>(idle_own) / (idle_own + idle_shared);
    } else {
        p = std::clamp(idle_own * table.rates(x)[own] / table.lambda()[own], 0.0, 1.0);
    }
    return {p, 1.0 - p};
}

} // namespace pooling::cos
