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

#include "pooling/cos/assignment_rates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pooling/errors.hpp"

namespace pooling::cos {

bool ServerClasses::contains(const Occupancy& x) const noexcept {
    return x.x1 >= 0 && x.x2 >= 0 && x.x3 >= 0 && x.x1 <= d1 && x.x2 <= d2 && x.x3 <= shared;
}

Occupancy ServerClasses::occupancy(std::size_t idx) const noexcept {
    Occupancy x;
    x.x3 = static_cast<int>(idx % static_cast<std::size_t>(shared + 1));
    idx /= static_cast<std::size_t>(shared + 1);
    x.x2 = static_cast<int>(idx % static_cast<std::size_t>(d2 + 1));
    x.x1 = static_cast<int>(idx / static_cast<std::size_t>(d2 + 1));
    return x;
}

ServerClasses server_classes(const ProviderPair& pp, const SharingConfig& cfg) {
    validate(cfg, pp, true);
    const int k1 = cfg.k1_int();
    const int k2 = cfg.k2_int();
    return {pp[0].servers - k1, pp[1].servers - k2, k1 + k2};
}

double blocked_rate(const Occupancy& x, const ProviderPair& pp, const ServerClasses& classes) {
    double r = 0.0;
    if (classes.blocks(x, Provider::first)) r += pp[0].lambda;
    if (classes.blocks(x, Provider::second)) r += pp[1].lambda;
    return r;
}

double unblocked_rate(const Occupancy& x, const ProviderPair& pp, const ServerClasses& classes) {
    return pp[0].lambda + pp[1].lambda - blocked_rate(x, pp, classes);
}

AssignmentRateTable::AssignmentRateTable(ServerClasses classes, std::array<double, 2> lambda,
                                         std::vector<std::array<double, 3>> rates)
    : classes_(classes), lambda_(lambda), rates_(std::move(rates)) {
    if (rates_.size() != classes_.states()) throw domain_error("rate table size does not match server classes");
}

void AssignmentRateTable::write(std::ostream& os) const {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    for (std::size_t i = 0; i < rates_.size(); ++i) {
        const auto x = classes_.occupancy(i);
        const auto& r = rates_[i];
        os << x.x1 << ' ' << x.x2 << ' ' << x.x3 << ' ' << r[0] << ' ' << r[1] << ' ' << r[2] << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

AssignmentRateTable solve_assignment_rates(const ProviderPair& pp, const SharingConfig& cfg) {
    validate(pp);
    const auto cls = server_classes(pp, cfg);
    const std::array<double, 2> lambda{pp[0].lambda, pp[1].lambda};
    std::vector<std::array<double, 3>> rates(cls.states(), {0.0, 0.0, 0.0});

    std::vector<std::size_t> order(cls.states());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cls.occupancy(a).size() > cls.occupancy(b).size();
    });

    auto at = [&](Occupancy x) -> const std::array<double, 3>& { return rates[cls.index(x)]; };

    for (std::size_t idx : order) {
        const auto x = cls.occupancy(idx);
        const int i1 = cls.idle(x, 0);
        const int i2 = cls.idle(x, 1);
        const int i3 = cls.idle(x, 2);
        auto& r = rates[idx];
        if (i1 + i2 + i3 == 0) continue;
        if (i3 == 0) {
            r = {i1 > 0 ? lambda[0] / i1 : 0.0, i2 > 0 ? lambda[1] / i2 : 0.0, 0.0};
            continue;
        }
        const Occupancy up3{x.x1, x.x2, x.x3 + 1};
        double a1 = 0.0;
        double a2 = 0.0;
        if (i1 > 0) a1 = at(up3)[0] / at({x.x1 + 1, x.x2, x.x3})[2];
        if (i2 > 0) a2 = at(up3)[1] / at({x.x1, x.x2 + 1, x.x3})[2];
        const double r3 = unblocked_rate(x, pp, cls) / (i1 * a1 + i2 * a2 + i3);
        r = {a1 * r3, a2 * r3, r3};
    }

    AssignmentRateTable table(cls, lambda, std::move(rates));
    const auto a = audit(table);
    const double scale = lambda[0] + lambda[1];
    if (a.min_rate < 0.0 || !std::isfinite(a.min_rate)) {
        throw infeasible_rates_error("negative assignment rate");
    }
    if (a.balance > 1e-9 * scale) {
        std::ostringstream os;
        os << "assignment-rate balance residual " << a.balance;
        throw infeasible_rates_error(os.str());
    }
    if (a.dispatch_excess > 1e-9 * scale) {
        throw infeasible_rates_error("dedicated assignment rate exceeds arrival rate");
    }
    return table;
}

RateTableAudit audit(const AssignmentRateTable& table) {
    const auto& cls = table.classes();
    const auto& lambda = table.lambda();
    ProviderPair pp{ProviderParams{lambda[0], 1.0, 1}, ProviderParams{lambda[1], 1.0, 1}};

    RateTableAudit out;
    out.min_rate = std::numeric_limits<double>::infinity();
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); };

    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        const auto x = cls.occupancy(idx);
        const auto& r = table.rates(x);
        for (double v : r) out.min_rate = std::min(out.min_rate, v);

        double flow = 0.0;
        for (std::size_t c = 0; c < 3; ++c) flow += cls.idle(x, c) * r[c];
        out.balance = std::max(out.balance, std::abs(flow - unblocked_rate(x, pp, cls)));
        out.dispatch_excess = std::max({out.dispatch_excess, cls.idle(x, 0) * r[0] - lambda[0],
                                        cls.idle(x, 1) * r[1] - lambda[1]});

        // r_a(x) r_b(x + e_a) = r_b(x) r_a(x + e_b)
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = a + 1; b < 3; ++b) {
                Occupancy xa = x, xb = x;
                xa[a] += 1;
                xb[b] += 1;
                if (!cls.contains(xa) || !cls.contains(xb)) continue;
                const double lhs = r[a] * table.rates(xa)[b];
                const double rhs = r[b] * table.rates(xb)[a];
                out.consistency = std::max(out.consistency, rel(lhs, rhs));
            }
        }
    }

    const auto full = cls.full();
    const double expected[3] = {lambda[0], lambda[1], lambda[0] + lambda[1]};
    for (std::size_t c = 0; c < 3; ++c) {
        if (cls[c] == 0) continue;
        Occupancy y = full;
        y[c] -= 1;
        out.boundary = std::max(out.boundary, std::abs(table.rates(y)[c] - expected[c]));
    }
    return out;
}

} // namespace pooling::cos
