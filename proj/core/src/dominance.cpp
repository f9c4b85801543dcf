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

#include "pooling/dominance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace pooling {

bool dominates(const Objective& a, const Objective& b, double tol) noexcept {
    const bool weak = a[0] <= b[0] + tol && a[1] <= b[1] + tol;
    const bool strict = a[0] < b[0] - tol || a[1] < b[1] - tol;
    return weak && strict;
}

std::vector<bool> undominated_mask(std::span<const Objective> points, double tol) {
    const std::size_t n = points.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return points[a][0] < points[b][0]; });

    std::vector<double> key(n);
    std::vector<double> prefix_min(n + 1, std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < n; ++j) {
        key[j] = points[order[j]][0];
        prefix_min[j + 1] = std::min(prefix_min[j], points[order[j]][1]);
    }

    std::vector<bool> mask(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = points[i];
        const auto below = static_cast<std::size_t>(
            std::lower_bound(key.begin(), key.end(), p[0] - tol) - key.begin());
        const auto within = static_cast<std::size_t>(
            std::upper_bound(key.begin(), key.end(), p[0] + tol) - key.begin());
        if (prefix_min[below] <= p[1] + tol || prefix_min[within] < p[1] - tol) mask[i] = false;
    }
    return mask;
}

std::vector<bool> undominated_mask_exhaustive(std::span<const Objective> points, double tol) {
    std::vector<bool> mask(points.size(), true);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i != j && dominates(points[j], points[i], tol)) {
                mask[i] = false;
                break;
            }
        }
    }
    return mask;
}

bool individually_rational(const Objective& point, const Objective& baseline, double tol) noexcept {
    return point[0] < baseline[0] - tol && point[1] < baseline[1] - tol;
}

} // namespace pooling
