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

#include "pooling/cos/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pooling/cos/product_form.hpp"
#include "pooling/cos/typed_ctmc.hpp"
#include "pooling/errors.hpp"

namespace pooling::cos {

namespace {

struct Cell {
    int lo = 0;
    double frac = 0.0;
};

Cell locate(double k, int n) {
    if (!(k >= 0.0 && k <= n)) throw domain_error("k outside [0, N]");
    int lo = static_cast<int>(std::floor(k));
    if (lo >= n) lo = n - 1;
    return {lo, k - lo};
}

Cell locate_directed(double k, int n, int s) {
    if (!(k >= 0.0 && k <= n)) throw domain_error("k outside [0, N]");
    int lo = s > 0 ? static_cast<int>(std::floor(k)) : static_cast<int>(std::ceil(k)) - 1;
    lo = std::clamp(lo, 0, n - 1);
    return {lo, k - lo};
}

} // namespace

CornerMixture::CornerMixture(std::array<int, 2> servers, const CornerFn& corner) : servers_(servers) {
    if (servers[0] < 1 || servers[1] < 1) throw domain_error("server counts must be positive");
    corners_.resize(static_cast<std::size_t>(servers[0] + 1) * static_cast<std::size_t>(servers[1] + 1));
    for (int a = 0; a <= servers[0]; ++a) {
        for (int b = 0; b <= servers[1]; ++b) {
            corners_[static_cast<std::size_t>(a) * (servers[1] + 1) + b] = corner(a, b);
        }
    }
}

const std::array<double, 2>& CornerMixture::corner(int k1, int k2) const {
    if (k1 < 0 || k2 < 0 || k1 > servers_[0] || k2 > servers_[1]) throw domain_error("corner outside grid");
    return corners_[static_cast<std::size_t>(k1) * (servers_[1] + 1) + k2];
}

std::array<double, 2> CornerMixture::operator()(double k1, double k2) const {
    const auto c1 = locate(k1, servers_[0]);
    const auto c2 = locate(k2, servers_[1]);
    if (c1.frac == 0.0 && c2.frac == 0.0) return corner(c1.lo, c2.lo);
    const auto& v00 = corner(c1.lo, c2.lo);
    const auto& v10 = corner(c1.lo + 1, c2.lo);
    const auto& v01 = corner(c1.lo, c2.lo + 1);
    const auto& v11 = corner(c1.lo + 1, c2.lo + 1);
    const double f1 = c1.frac;
    const double f2 = c2.frac;
    std::array<double, 2> out{};
    for (std::size_t i = 0; i < 2; ++i) {
        out[i] = (1 - f1) * (1 - f2) * v00[i] + f1 * (1 - f2) * v10[i] + (1 - f1) * f2 * v01[i] + f1 * f2 * v11[i];
    }
    return out;
}

Gradient CornerMixture::gradient(double k1, double k2, int s1, int s2) const {
    const auto c1 = locate_directed(k1, servers_[0], s1);
    const auto c2 = locate_directed(k2, servers_[1], s2);
    const auto& v00 = corner(c1.lo, c2.lo);
    const auto& v10 = corner(c1.lo + 1, c2.lo);
    const auto& v01 = corner(c1.lo, c2.lo + 1);
    const auto& v11 = corner(c1.lo + 1, c2.lo + 1);
    const double f1 = c1.frac;
    const double f2 = c2.frac;
    Gradient g{};
    for (std::size_t i = 0; i < 2; ++i) {
        g[i][0] = (1 - f2) * (v10[i] - v00[i]) + f2 * (v11[i] - v01[i]);
        g[i][1] = (1 - f1) * (v01[i] - v00[i]) + f1 * (v11[i] - v10[i]);
    }
    return g;
}

namespace {

std::array<double, 2> corner_delay(const ProviderPair& pp, int a, int b) {
    const SharingConfig k{static_cast<double>(a), static_cast<double>(b)};
    if (std::pair{pp[1].lambda, pp[1].servers} < std::pair{pp[0].lambda, pp[0].servers}) {
        const auto q = swapped(pp);
        const auto d = typed_ctmc_oracle(q, k.swapped(), certified_buffer_cap(q, k.swapped(), 1e-10)).delay;
        return {d[1], d[0]};
    }
    return typed_ctmc_oracle(pp, k, certified_buffer_cap(pp, k, 1e-10)).delay;
}

} // namespace

CornerMixture waiting_mixture(const ProviderPair& pp) {
    validate(pp);
    return CornerMixture({pp[0].servers, pp[1].servers}, [&](int a, int b) {
        return waiting_probabilities(pp, SharingConfig{static_cast<double>(a), static_cast<double>(b)});
    });
}

CornerMixture delay_mixture(const ProviderPair& pp) {
    validate(pp);
    return CornerMixture({pp[0].servers, pp[1].servers}, [&](int a, int b) { return corner_delay(pp, a, b); });
}

namespace {

std::array<double, 2> local_mixture(const ProviderPair& pp, double k1, double k2, const CornerFn& corner) {
    validate(pp);
    validate(SharingConfig{k1, k2}, pp, false);
    const auto c1 = locate(k1, pp[0].servers);
    const auto c2 = locate(k2, pp[1].servers);
    // Only the four surrounding corners are needed.
    std::array<std::array<double, 2>, 4> v{};
    for (int da = 0; da < 2; ++da) {
        for (int db = 0; db < 2; ++db) {
            const bool need = (da == 0 || c1.frac > 0.0) && (db == 0 || c2.frac > 0.0);
            if (!need) continue;
            v[static_cast<std::size_t>(2 * da + db)] = corner(c1.lo + da, c2.lo + db);
        }
    }
    const double f1 = c1.frac;
    const double f2 = c2.frac;
    if (f1 == 0.0 && f2 == 0.0) return v[0];
    std::array<double, 2> out{};
    for (std::size_t i = 0; i < 2; ++i) {
        out[i] = (1 - f1) * (1 - f2) * v[0][i] + (1 - f1) * f2 * v[1][i] + f1 * (1 - f2) * v[2][i] + f1 * f2 * v[3][i];
    }
    return out;
}

} // namespace

std::array<double, 2> mixed_config_metrics(const ProviderPair& pp, double k1, double k2) {
    return local_mixture(pp, k1, k2, [&](int a, int b) {
        return waiting_probabilities(pp, SharingConfig{static_cast<double>(a), static_cast<double>(b)});
    });
}

std::array<double, 2> mixed_config_delay(const ProviderPair& pp, double k1, double k2) {
    return local_mixture(pp, k1, k2, [&](int a, int b) { return corner_delay(pp, a, b); });
}

} // namespace pooling::cos
