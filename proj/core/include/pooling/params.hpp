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
#include <cstddef>
#include <string>
#include <string_view>

namespace pooling {

enum class Provider : int { first = 0, second = 1 };

constexpr std::size_t index(Provider p) noexcept { return static_cast<std::size_t>(p); }
constexpr Provider other(Provider p) noexcept {
    return p == Provider::first ? Provider::second : Provider::first;
}

struct ProviderParams {
    double lambda = 0.0; // arrival rate
    double nu = 1.0;     // service rate per server
    int servers = 1;

    double load() const noexcept { return lambda / nu; }
};

// Throws domain_error on nonpositive rates or server count, instability_error if load >= servers.
void validate(const ProviderParams& p);

using ProviderPair = std::array<ProviderParams, 2>;

ProviderPair swapped(const ProviderPair& pp) noexcept;
void validate(const ProviderPair& pp);

// Number of servers each provider contributes to the shared pool.
struct SharingConfig {
    double k1 = 0.0;
    double k2 = 0.0;

    double operator[](std::size_t i) const noexcept { return i == 0 ? k1 : k2; }
    bool integral() const noexcept;
    int k1_int() const;
    int k2_int() const;
    SharingConfig swapped() const noexcept { return {k2, k1}; }
    friend bool operator==(const SharingConfig&, const SharingConfig&) = default;
};

// 0 <= k_i <= N_i; throws domain_error, also when integral is required and k is not.
void validate(const SharingConfig& k, const ProviderPair& pp, bool require_integral);

inline SharingConfig no_sharing() noexcept { return {0.0, 0.0}; }
inline SharingConfig full_sharing(const ProviderPair& pp) noexcept {
    return {static_cast<double>(pp[0].servers), static_cast<double>(pp[1].servers)};
}

enum class Policy { coc, cos };
enum class Metric { wait, delay };
enum class Provenance { analytic, ctmc, simulation };

std::string_view to_string(Policy p) noexcept;
std::string_view to_string(Metric m) noexcept;
std::string_view to_string(Provenance p) noexcept;
Policy parse_policy(std::string_view s);
Metric parse_metric(std::string_view s);

struct MetricPair {
    std::array<double, 2> value{};
    Metric metric = Metric::wait;
    Provenance provenance = Provenance::analytic;

    double operator[](std::size_t i) const noexcept { return value[i]; }
};

} // namespace pooling
