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
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "pooling/params.hpp"

namespace pooling::cos {

enum class ServerClass : int { dedicated1 = 0, dedicated2 = 1, shared = 2 };

// Busy-server counts (dedicated-1, dedicated-2, shared).
struct Occupancy {
    int x1 = 0;
    int x2 = 0;
    int x3 = 0;

    int operator[](std::size_t c) const noexcept { return c == 0 ? x1 : (c == 1 ? x2 : x3); }
    int& operator[](std::size_t c) noexcept { return c == 0 ? x1 : (c == 1 ? x2 : x3); }
    int size() const noexcept { return x1 + x2 + x3; }
    friend auto operator<=>(const Occupancy&, const Occupancy&) = default;
};

struct ServerClasses {
    int d1 = 0;
    int d2 = 0;
    int shared = 0;

    int operator[](std::size_t c) const noexcept { return c == 0 ? d1 : (c == 1 ? d2 : shared); }
    int total() const noexcept { return d1 + d2 + shared; }
    Occupancy full() const noexcept { return {d1, d2, shared}; }
    std::size_t states() const noexcept {
        return static_cast<std::size_t>(d1 + 1) * static_cast<std::size_t>(d2 + 1) *
               static_cast<std::size_t>(shared + 1);
    }
    bool contains(const Occupancy& x) const noexcept;
    // Lexicographic (x1, x2, x3) rank.
    std::size_t index(const Occupancy& x) const noexcept {
        return (static_cast<std::size_t>(x.x1) * (d2 + 1) + x.x2) * (shared + 1) + x.x3;
    }
    Occupancy occupancy(std::size_t idx) const noexcept;
    int idle(const Occupancy& x, std::size_t c) const noexcept { return (*this)[c] - x[c]; }
    // All servers able to take a provider-i job are busy.
    bool blocks(const Occupancy& x, Provider i) const noexcept {
        return x.x3 == shared && (i == Provider::first ? x.x1 == d1 : x.x2 == d2);
    }
};

ServerClasses server_classes(const ProviderPair& pp, const SharingConfig& cfg);

// Rate of arrivals that find every eligible server busy.
double blocked_rate(const Occupancy& x, const ProviderPair& pp, const ServerClasses& classes);
double unblocked_rate(const Occupancy& x, const ProviderPair& pp, const ServerClasses& classes);

class AssignmentRateTable {
public:
    AssignmentRateTable(ServerClasses classes, std::array<double, 2> lambda,
                        std::vector<std::array<double, 3>> rates);

    const ServerClasses& classes() const noexcept { return classes_; }
    const std::array<double, 2>& lambda() const noexcept { return lambda_; }
    const std::array<double, 3>& rates(const Occupancy& x) const { return rates_.at(classes_.index(x)); }
    double rate(const Occupancy& x, ServerClass c) const { return rates(x)[static_cast<std::size_t>(c)]; }
    std::size_t size() const noexcept { return rates_.size(); }

    // One line "x1 x2 x3 r1 r2 r3" per occupancy, lexicographic order.
    void write(std::ostream& os) const;

private:
    ServerClasses classes_;
    std::array<double, 2> lambda_;
    std::vector<std::array<double, 3>> rates_;
};

// Backward recursion from full occupancy; integer cfg, stable params.
AssignmentRateTable solve_assignment_rates(const ProviderPair& pp, const SharingConfig& cfg);

struct RateTableAudit {
    double min_rate = 0.0;
    double balance = 0.0;           // max |sum_c idle_c r_c - r(x)|
    double consistency = 0.0;       // max relative violation over the three ratio families
    double boundary = 0.0;          // max deviation at full - e_c
    double dispatch_excess = 0.0;   // max (idle_i r_i - lambda_i)
};

RateTableAudit audit(const AssignmentRateTable& table);

} // namespace pooling::cos
