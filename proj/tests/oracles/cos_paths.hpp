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
#include <map>
#include <vector>

#include "pooling/cos/assignment_rates.hpp"

namespace pooling::testing {

struct PathOracleResult {
    std::map<std::array<int, 3>, double> mass; // normalised, by occupancy
    std::array<double, 2> wait{};
    double max_path_spread = 0.0; // relative spread of rate products over labelled orders
};

// Stationary occupancy mass by explicit enumeration of labelled activation orders and class paths.
inline PathOracleResult cos_path_oracle(const ProviderPair& pp, const SharingConfig& k) {
    const auto table = cos::solve_assignment_rates(pp, k);
    const std::array<int, 3> d{pp[0].servers - k.k1_int(), pp[1].servers - k.k2_int(), k.k1_int() + k.k2_int()};
    const double l1 = pp[0].lambda;
    const double l2 = pp[1].lambda;
    const double nu = pp[0].nu;
    auto blocked = [&](const std::array<int, 3>& x) {
        double b = 0.0;
        if (x[0] == d[0] && x[2] == d[2]) b += l1;
        if (x[1] == d[1] && x[2] == d[2]) b += l2;
        return b;
    };

    std::vector<int> label_class;
    for (int c = 0; c < 3; ++c) {
        for (int j = 0; j < d[static_cast<std::size_t>(c)]; ++j) label_class.push_back(c);
    }
    const auto m = label_class.size();

    // Sum over labelled orders of the assignment-rate products; track min and max per occupancy.
    std::map<std::array<int, 3>, double> rate_sum;
    std::map<std::array<int, 3>, std::array<double, 2>> rate_range;
    std::vector<bool> used(m, false);
    std::function<void(std::array<int, 3>, double)> labelled = [&](std::array<int, 3> x, double prod) {
        rate_sum[x] += prod;
        auto [it, fresh] = rate_range.try_emplace(x, std::array<double, 2>{prod, prod});
        if (!fresh) {
            it->second[0] = std::min(it->second[0], prod);
            it->second[1] = std::max(it->second[1], prod);
        }
        for (std::size_t s = 0; s < m; ++s) {
            if (used[s]) continue;
            const auto c = static_cast<std::size_t>(label_class[s]);
            const double r = table.rates(cos::Occupancy{x[0], x[1], x[2]})[c];
            used[s] = true;
            auto y = x;
            ++y[c];
            labelled(y, prod * r);
            used[s] = false;
        }
    };
    labelled({0, 0, 0}, 1.0);

    // Sum over class paths of the geometric queue factors.
    std::map<std::array<int, 3>, double> geo;
    std::function<void(std::array<int, 3>, double)> classes = [&](std::array<int, 3> x, double prod) {
        geo[x] += prod;
        const int n = x[0] + x[1] + x[2];
        for (std::size_t c = 0; c < 3; ++c) {
            if (x[c] == d[c]) continue;
            auto y = x;
            ++y[c];
            const double alpha = blocked(y) / ((n + 1) * nu);
            classes(y, prod / (1.0 - alpha));
        }
    };
    classes({0, 0, 0}, 1.0);

    PathOracleResult out;
    double total = 0.0;
    for (const auto& [x, rs] : rate_sum) {
        const int n = x[0] + x[1] + x[2];
        double fact = 1.0;
        for (int j = 1; j <= n; ++j) fact *= j * nu;
        // Each class path is realised by the same number of labelled orders.
        double orders = 1.0;
        for (std::size_t c = 0; c < 3; ++c) {
            for (int j = 0; j < x[c]; ++j) orders *= d[c] - j;
        }
        double multinom = 1.0;
        {
            double num = 1.0;
            for (int j = 1; j <= n; ++j) num *= j;
            double den = 1.0;
            for (std::size_t c = 0; c < 3; ++c) {
                for (int j = 1; j <= x[c]; ++j) den *= j;
            }
            multinom = num / den;
        }
        const double per_order = rs / (orders * multinom);
        const double w = orders * per_order / fact * geo[x];
        out.mass[x] = w;
        total += w;
        const auto& rr = rate_range[x];
        if (rr[1] > 0.0) out.max_path_spread = std::max(out.max_path_spread, (rr[1] - rr[0]) / rr[1]);
    }
    for (auto& [x, w] : out.mass) {
        w /= total;
        if (x[0] == d[0] && x[2] == d[2]) out.wait[0] += w;
        if (x[1] == d[1] && x[2] == d[2]) out.wait[1] += w;
    }
    return out;
}

} // namespace pooling::testing
