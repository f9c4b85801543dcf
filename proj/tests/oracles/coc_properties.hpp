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

#include <cmath>
#include <string>
#include <vector>

#include "pooling/coc_bf.hpp"

namespace pooling::testing {

// Violations of the three monotonicity statements on the full integer grid.
inline std::vector<std::string> coc_monotonicity_violations(const ProviderPair& pp, double margin = 1e-12,
                                                            double flat = 1e-12) {
    std::vector<std::string> bad;
    const int n[2] = {pp[0].servers, pp[1].servers};
    auto d = [&](int a, int b) { return coc::mean_response_coc(pp, {double(a), double(b)}); };
    auto note = [&](const char* what, int a, int b) {
        bad.push_back(std::string(what) + " at (" + std::to_string(a) + "," + std::to_string(b) + ")");
    };
    for (int a = 0; a <= n[0]; ++a) {
        for (int b = 0; b <= n[1]; ++b) {
            const auto here = d(a, b);
            if (b < n[1]) {
                const auto up = d(a, b + 1);
                if (!(here[0] - up[0] > margin)) note("D1 not decreasing in k2", a, b);
                if (a < n[0] && !(up[1] - here[1] > margin)) note("D2 not increasing in k2", a, b);
            }
            if (a < n[0]) {
                const auto up = d(a + 1, b);
                if (!(here[1] - up[1] > margin)) note("D2 not decreasing in k1", a, b);
                if (b < n[1] && !(up[0] - here[0] > margin)) note("D1 not increasing in k1", a, b);
            }
        }
    }
    // Insensitivity once the other provider shares everything.
    for (int a = 0; a < n[0]; ++a) {
        if (std::abs(d(a + 1, n[1])[0] - d(a, n[1])[0]) > flat) note("D1 varies in k1", a, n[1]);
    }
    for (int b = 0; b < n[1]; ++b) {
        if (std::abs(d(n[0], b + 1)[1] - d(n[0], b)[1]) > flat) note("D2 varies in k2", n[0], b);
    }
    return bad;
}

} // namespace pooling::testing
