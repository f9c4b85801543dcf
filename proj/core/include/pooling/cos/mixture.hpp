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
#include <functional>
#include <vector>

#include "pooling/params.hpp"

namespace pooling::cos {

using CornerFn = std::function<std::array<double, 2>(int k1, int k2)>;
using Gradient = std::array<std::array<double, 2>, 2>; // [provider][axis]

// Bilinear time-sharing between adjacent integer configurations.
class CornerMixture {
public:
    CornerMixture(std::array<int, 2> servers, const CornerFn& corner);

    std::array<double, 2> operator()(double k1, double k2) const;
    std::array<double, 2> operator()(const SharingConfig& k) const { return (*this)(k.k1, k.k2); }
    // Partial derivatives in the cell entered by moving in direction (s1, s2), s_i = +1 or -1.
    Gradient gradient(double k1, double k2, int s1, int s2) const;
    const std::array<double, 2>& corner(int k1, int k2) const;
    std::array<int, 2> servers() const noexcept { return servers_; }

private:
    std::array<int, 2> servers_;
    std::vector<std::array<double, 2>> corners_;
};

// Corner values from waiting_probabilities.
CornerMixture waiting_mixture(const ProviderPair& pp);
// Corner values from the typed chain's mean response times.
CornerMixture delay_mixture(const ProviderPair& pp);

std::array<double, 2> mixed_config_metrics(const ProviderPair& pp, double k1, double k2);
// Mean response times, corners from the typed chain.
std::array<double, 2> mixed_config_delay(const ProviderPair& pp, double k1, double k2);

} // namespace pooling::cos
