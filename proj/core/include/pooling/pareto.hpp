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
#include <optional>
#include <span>
#include <vector>

#include "pooling/cos/mixture.hpp"
#include "pooling/params.hpp"

namespace pooling::pareto {

struct ParetoPoint {
    SharingConfig config;
    std::array<double, 2> metrics{};
    bool individually_rational = false;
    bool undominated = false;

    bool on_frontier() const noexcept { return individually_rational && undominated; }
};

// Metric of a policy as a function of the configuration.
class MetricSurface {
public:
    static MetricSurface make(const ProviderPair& pp, Policy policy, Metric metric);

    std::array<double, 2> operator()(const SharingConfig& k) const;
    bool continuous() const noexcept { return mixture_.has_value(); }
    const cos::CornerMixture* mixture() const noexcept { return mixture_ ? &*mixture_ : nullptr; }
    std::array<int, 2> servers() const noexcept { return servers_; }
    Policy policy() const noexcept { return policy_; }
    Metric metric() const noexcept { return metric_; }

private:
    MetricSurface() = default;
    std::array<int, 2> servers_{};
    Policy policy_ = Policy::cos;
    Metric metric_ = Metric::wait;
    std::function<std::array<double, 2>(const SharingConfig&)> eval_;
    std::optional<cos::CornerMixture> mixture_;
};

struct FrontierResult {
    Policy policy = Policy::cos;
    Metric metric = Metric::wait;
    double grid_step = 0.0;
    std::array<double, 2> baseline{};
    std::vector<ParetoPoint> grid;
    std::vector<SharingConfig> indifferent; // grid points equal to the baseline for some provider

    // Frontier points ordered by increasing B1.
    std::vector<ParetoPoint> frontier() const;
};

// 0.01 when both providers have one server, else 0.05.
double default_grid_step(const ProviderPair& pp);

// Configurations k_i = N_i j step for real-valued surfaces, all integers otherwise.
std::vector<SharingConfig> configuration_grid(const ProviderPair& pp, bool continuous, double grid_step);

FrontierResult pareto_frontier(const ProviderPair& pp, Policy policy, Metric metric, double grid_step);
FrontierResult pareto_frontier(const MetricSurface& surface, double grid_step);

// A feasible direction decreasing both metrics to first order exists at k.
bool first_order_improvable(const cos::CornerMixture& mixture, const SharingConfig& k);

enum class FrontierCase {
    both_benefit,         // two arms through full pooling
    first_benefits_only,  // arm k1 = 1, k2 in (lower, upper)
    second_benefits_only, // arm k2 = 1, k1 in (lower, upper)
};

std::string_view to_string(FrontierCase c) noexcept;

struct Arm {
    SharingConfig from; // smaller B1 end
    SharingConfig to;
    bool from_open = true;
    bool to_open = true;
};

// Exact waiting-probability frontier for one server per provider.
struct FrontierStructure {
    FrontierCase kind = FrontierCase::both_benefit;
    double x1_hat = 0.0; // both_benefit thresholds
    double x2_hat = 0.0;
    double lower = 0.0;  // one-arm interval on the free coordinate
    double upper = 0.0;
    bool upper_equality = false; // upper endpoint is an exact indifference point, excluded
    std::array<std::array<double, 2>, 4> corners{}; // C at (0,0), (1,0), (0,1), (1,1)

    std::vector<Arm> arms() const;
    bool contains(const SharingConfig& k, double tol = 1e-12) const;
    double length() const;
};

FrontierStructure unit_server_frontier_closed_form(const ProviderPair& pp);

// Symmetric Hausdorff distance between the closed-form frontier and frontier grid points.
double hausdorff_distance(const FrontierStructure& s, std::span<const ParetoPoint> points);

struct DirectionCertificate {
    double theta_low = 0.0;
    double theta_high = 0.0;
    double theta = 0.0;
    double cross_term = 0.0; // dC1/dk2 dC2/dk1 - dC1/dk1 dC2/dk2
    cos::Gradient gradient{};
};

// Interior k (k_i < 1): direction (1, theta) lowers both waiting probabilities.
DirectionCertificate boundary_direction_check(const ProviderPair& pp, const SharingConfig& k);

struct UnitServerConstants {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double alpha = 0.0; // from corner differences
    double beta = 0.0;
    double gamma = 0.0;
    double alpha_printed = 0.0;
    double beta_printed = 0.0;
    double gamma_printed = 0.0;
    // Corner differences of C1: measured, closed form.
    std::array<double, 4> c1_differences{};        // (1,0)-(0,0), (1,1)-(0,1), (0,1)-(0,0), (1,1)-(1,0)
    std::array<double, 4> c1_differences_closed{};
};

UnitServerConstants unit_server_constants(const ProviderPair& pp);

struct ConjectureReport {
    double grid_step = 0.0;
    std::size_t frontier_points = 0;
    std::vector<ParetoPoint> counterexamples;
    bool holds() const noexcept { return counterexamples.empty(); }
};

ConjectureReport conjecture_check(const ProviderPair& pp, double grid_step);

struct KsbsResult {
    ParetoPoint point;
    std::array<double, 2> baseline{};
    std::array<double, 2> ideal{};
    double residual = 0.0;
    std::size_t roots = 1;
    bool unique() const noexcept { return roots == 1; }
};

KsbsResult ksbs(const ProviderPair& pp, Policy policy, Metric metric, double grid_step);
KsbsResult ksbs(const MetricSurface& surface, const FrontierResult& frontier);

} // namespace pooling::pareto
