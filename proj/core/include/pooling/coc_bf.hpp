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

#include "pooling/params.hpp"

namespace pooling::coc {

// Polymatroid capacity region of the two-class balanced-fairness system.
struct RateRegion {
    double cap1 = 0.0;      // N1 + k2
    double cap2 = 0.0;      // N2 + k1
    double cap_total = 0.0; // N1 + N2
};

RateRegion rate_region(const ProviderPair& pp, const SharingConfig& cfg);
// Same region with service capacities mu_i in place of server counts.
RateRegion single_server_region(double mu1, double mu2, const SharingConfig& cfg);
void validate(const RateRegion& region);

// G split by the set of nonempty classes.
struct NormalizationTerms {
    double empty = 1.0;
    double only1 = 0.0;
    double only2 = 0.0;
    double both = 0.0;
    double total() const noexcept { return empty + only1 + only2 + both; }
};

NormalizationTerms normalization_terms(double rho1, double rho2, const RateRegion& region);
double normalization_closed_form(double rho1, double rho2, const RateRegion& region);
// Per-class mean number in system, rho_i dG/drho_i / G.
std::array<double, 2> mean_occupancy(double rho1, double rho2, const RateRegion& region);

double normalization_G(const ProviderPair& pp, const SharingConfig& cfg);

double mean_response_coc(const ProviderPair& pp, const SharingConfig& cfg, Provider i);
std::array<double, 2> mean_response_coc(const ProviderPair& pp, const SharingConfig& cfg);
// Closed form for provider 1 written without derivatives.
double mean_response_first_closed(const ProviderPair& pp, const SharingConfig& cfg);

// Arrival-weighted mean response time, from the aggregate H / L expression.
double mean_response_overall(const ProviderPair& pp, const SharingConfig& cfg);

struct BfOracleResult {
    int truncation = 0;
    std::vector<double> distribution; // row-major (n1, n2), size (T+1)^2
    std::array<double, 2> mean_occupancy{};
    std::array<double, 2> busy_probability{}; // P(n_i > 0)
    double tail_estimate = 0.0;

    double at(int n1, int n2) const { return distribution[static_cast<std::size_t>(n1) * (truncation + 1) + n2]; }
};

// Balance-function recursion over the truncated box [0, T]^2.
BfOracleResult bf_occupancy_oracle(double rho1, double rho2, const RateRegion& region, int truncation);
BfOracleResult bf_occupancy_oracle(const ProviderPair& pp, const RateRegion& region, int truncation);
// Smallest truncation whose geometric tail bound is below tail.
int bf_truncation(double rho1, double rho2, const RateRegion& region, double tail = 1e-9);

// Pareto-optimal integer configurations, audited exhaustively.
std::vector<SharingConfig> pareto_coc(const ProviderPair& pp);

// Capacity-mu variant with real k_i in [0, mu_i]; wait is P(n_i > 0).
MetricPair single_server_metrics(double mu1, double mu2, const ProviderPair& pp, const SharingConfig& cfg,
                                 Metric metric);
// Undominated individually rational configurations on the grid k_i = mu_i j step.
std::vector<SharingConfig> single_server_frontier(double mu1, double mu2, const ProviderPair& pp, Metric metric,
                                                  double grid_step);

} // namespace pooling::coc
