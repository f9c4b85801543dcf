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
#include <span>
#include <vector>

namespace pooling {

using Objective = std::array<double, 2>;

// a weakly better in both coordinates and better by more than tol in one (smaller is better).
bool dominates(const Objective& a, const Objective& b, double tol = 0.0) noexcept;

// true where no other point dominates; O(n log n).
std::vector<bool> undominated_mask(std::span<const Objective> points, double tol = 1e-12);

// Quadratic reference used for audits.
std::vector<bool> undominated_mask_exhaustive(std::span<const Objective> points, double tol = 1e-12);

// Strictly better than the baseline in both coordinates.
bool individually_rational(const Objective& point, const Objective& baseline, double tol = 0.0) noexcept;

} // namespace pooling
