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

#include "pooling/cos/product_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "pooling/errors.hpp"

namespace pooling::cos {

namespace {

void require_equal_rates(const ProviderPair& pp) {
    if (pp[0].nu != pp[1].nu) throw domain_error("cancel-on-start analysis requires nu1 == nu2");
}

std::vector<std::size_t> by_size(const ServerClasses& cls) {
    std::vector<std::size_t> order(cls.states());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cls.occupancy(a).size() < cls.occupancy(b).size();
    });
    return order;
}

double falling(int n, int k) {
    double v = 1.0;
    for (int j = 0; j < k; ++j) v *= n - j;
    return v;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) { return falling(n, k) / factorial(k); }

} // namespace

double CosStationaryDescription::total_mass() const {
    return std::accumulate(probability.begin(), probability.end(), 0.0);
}

double CosStationaryDescription::max_alpha() const {
    return alpha.empty() ? 0.0 : *std::max_element(alpha.begin(), alpha.end());
}

CosStationaryDescription stationary_normalization(const ProviderPair& pp, const SharingConfig& cfg,
                                                  const AssignmentRateTable& rates) {
    validate(pp);
    require_equal_rates(pp);
    const auto cls = server_classes(pp, cfg);
    if (rates.classes().d1 != cls.d1 || rates.classes().d2 != cls.d2 || rates.classes().shared != cls.shared) {
        throw domain_error("assignment-rate table belongs to a different configuration");
    }
    const double nu = pp[0].nu;
    const std::size_t n = cls.states();

    CosStationaryDescription d;
    d.classes = cls;
    d.nu = nu;
    d.rate_product.assign(n, 0.0);
    d.path_weight.assign(n, 0.0);
    d.alpha.assign(n, 0.0);
    d.probability.assign(n, 0.0);

    // term(x) = FF(x) Pi(x) / (|x|! nu^|x|), built one server at a time.
    std::vector<double> term(n, 0.0);
    for (std::size_t idx : by_size(cls)) {
        const auto x = cls.occupancy(idx);
        const int size = x.size();
        if (size == 0) {
            d.rate_product[idx] = 1.0;
            d.path_weight[idx] = 1.0;
            term[idx] = 1.0;
            d.probability[idx] = 1.0;
            continue;
        }
        std::size_t first = 0;
        while (x[first] == 0) ++first;
        Occupancy prev = x;
        prev[first] -= 1;
        const std::size_t pidx = cls.index(prev);
        const double r = rates.rates(prev)[first];
        d.rate_product[idx] = d.rate_product[pidx] * r;
        term[idx] = term[pidx] * cls.idle(prev, first) * r / (size * nu);

        const double a = blocked_rate(x, pp, cls) / (size * nu);
        if (!(a < 1.0)) {
            std::ostringstream os;
            os << "unstable: alpha = " << a << " at occupancy (" << x.x1 << ", " << x.x2 << ", " << x.x3 << ")";
            throw instability_error(os.str());
        }
        d.alpha[idx] = a;
        double w = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            if (x[c] == 0) continue;
            Occupancy y = x;
            y[c] -= 1;
            w += d.path_weight[cls.index(y)];
        }
        d.path_weight[idx] = w / (1.0 - a);
        d.probability[idx] = term[idx] * d.path_weight[idx];
    }

    const double z = d.total_mass();
    for (double& p : d.probability) p /= z;
    d.empty_probability = d.probability[cls.index({0, 0, 0})];
    return d;
}

CosStationaryDescription stationary_description(const ProviderPair& pp, const SharingConfig& cfg) {
    return stationary_normalization(pp, cfg, solve_assignment_rates(pp, cfg));
}

std::array<double, 2> waiting_probabilities(const CosStationaryDescription& d) {
    std::array<double, 2> c{0.0, 0.0};
    for (std::size_t idx = 0; idx < d.probability.size(); ++idx) {
        const auto x = d.classes.occupancy(idx);
        if (d.classes.blocks(x, Provider::first)) c[0] += d.probability[idx];
        if (d.classes.blocks(x, Provider::second)) c[1] += d.probability[idx];
    }
    return c;
}

std::array<double, 2> waiting_probabilities(const ProviderPair& pp, const SharingConfig& cfg) {
    // fixed provider order, so swapped inputs give bit-identical mirrored outputs
    if (std::pair{pp[1].lambda, pp[1].servers} < std::pair{pp[0].lambda, pp[0].servers}) {
        const auto w = waiting_probabilities(stationary_description(swapped(pp), cfg.swapped()));
        return {w[1], w[0]};
    }
    return waiting_probabilities(stationary_description(pp, cfg));
}

double PrintedSumCheck::max_discrepancy() const {
    return std::max({std::abs(only_blocked_path[0] - only_blocked_printed[0]),
                     std::abs(only_blocked_path[1] - only_blocked_printed[1]),
                     std::abs(both_blocked_path - both_blocked_printed)});
}

PrintedSumCheck printed_sum_cross_check(const ProviderPair& pp, const SharingConfig& cfg) {
    validate(pp);
    require_equal_rates(pp);
    // Time rescaled to unit service rate.
    ProviderPair unit = pp;
    for (auto& p : unit) {
        p.lambda = p.load();
        p.nu = 1.0;
    }

    PrintedSumCheck out;
    auto one_side = [](const ProviderPair& q, const SharingConfig& k, double& path, double& printed) {
        const auto rates = solve_assignment_rates(q, k);
        const auto d = stationary_normalization(q, k, rates);
        const auto& cls = d.classes;
        const int a = q[0].servers + k.k2_int();
        const double l1 = q[0].lambda;
        path = 0.0;
        printed = 0.0;
        for (int x2 = 0; x2 < cls.d2; ++x2) {
            path += d.probability_at({cls.d1, x2, cls.shared});
            double inner = 0.0;
            for (int w = 0; w <= x2; ++w) {
                double prod = 1.0;
                for (int v = 0; v <= w; ++v) prod *= (a + x2 - w + v) / (a + x2 - w + v - l1);
                inner += binomial(x2, w) * factorial(w) * a * factorial(a + x2 - w - 1) * prod;
            }
            printed += d.rate_product[cls.index({cls.d1, x2, cls.shared})] * d.empty_probability /
                       factorial(a + x2) * binomial(cls.d2, x2) * inner;
        }
    };
    one_side(unit, cfg, out.only_blocked_path[0], out.only_blocked_printed[0]);
    one_side(swapped(unit), cfg.swapped(), out.only_blocked_path[1], out.only_blocked_printed[1]);

    const auto d = stationary_description(unit, cfg);
    const auto& cls = d.classes;
    const int n1 = unit[0].servers;
    const int n = n1 + unit[1].servers;
    const int a = n1 + cfg.k2_int();
    const double l1 = unit[0].lambda;
    const double l2 = unit[1].lambda;
    out.both_blocked_path = d.probability_at(cls.full());
    double inner = 0.0;
    for (int w = 0; w <= cls.d2; ++w) {
        double prod = 1.0;
        for (int v = 0; v < w; ++v) prod *= (n - w + v) / (n - w + v - l1);
        inner += binomial(cls.d2, w) * factorial(w) * a * factorial(n - w - 1) * prod;
    }
    out.both_blocked_printed = d.rate_product[cls.index(cls.full())] * d.empty_probability /
                               (factorial(n - 1) * (n - l1 - l2)) * inner;
    return out;
}

} // namespace pooling::cos
