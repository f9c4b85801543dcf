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

#include <doctest.h>

#include <cmath>
#include <set>

#include "pooling/coc_bf.hpp"
#include "pooling/cos/mixture.hpp"
#include "pooling/cos/product_form.hpp"
#include "pooling/cos/typed_ctmc.hpp"
#include "pooling/desim.hpp"
#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"

using namespace pooling;
using namespace pooling::sim;

namespace {

ProviderPair pair(double l1, double l2, int n1, int n2) {
    return {ProviderParams{l1, 1.0, n1}, ProviderParams{l2, 1.0, n2}};
}

SimScenario scenario(const ProviderPair& pp, SharingConfig k, Policy policy, std::uint64_t jobs, std::uint64_t seed) {
    SimScenario s;
    s.providers = pp;
    s.config = k;
    s.policy = policy;
    s.horizon = jobs + jobs / 10;
    s.warmup = jobs / 10;
    s.seed = seed;
    return s;
}

bool within(const Estimate& e, double truth, double se = 3.0) { return std::abs(e.value - truth) <= se * e.std_error; }

} // namespace

TEST_CASE("seed derivation") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 1000; ++r) seen.insert(derive_seed(42, r));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(42, 3) == derive_seed(42, 3));
    CHECK(derive_seed(42, 3) != derive_seed(43, 3));
}

TEST_CASE("single server without sharing is M/M/1") {
    const auto r = simulate(scenario(pair(0.5, 0.5, 1, 1), {0, 0}, Policy::cos, 1'000'000, 7));
    for (const auto& p : r.providers) {
        CHECK(within(p.wait, 0.5));
        CHECK(within(p.delay, 2.0));
        CHECK(p.wait.ci_low < p.wait.value);
        CHECK(p.wait.value < p.wait.ci_high);
        CHECK(std::isfinite(p.wait.ci_high - p.wait.ci_low));
    }
    CHECK(r.providers[0].jobs + r.providers[1].jobs == 1'000'000);
}

TEST_CASE("cancel-on-start against the product form and the typed chain") {
    SUBCASE("published full-sharing row") {
        const auto pp = pair(0.1, 0.5, 1, 1);
        const auto r = simulate(scenario(pp, {1, 1}, Policy::cos, 1'000'000, 11));
        CHECK(within(r.providers[0].wait, 0.1385));
        CHECK(within(r.providers[1].wait, 0.1385));
    }
    SUBCASE("two servers each") {
        const auto pp = pair(1.1, 0.7, 2, 2);
        for (SharingConfig k : {SharingConfig{1, 0}, SharingConfig{1, 2}}) {
            const auto r = simulate(scenario(pp, k, Policy::cos, 400'000, 12));
            const auto c = cos::waiting_probabilities(pp, k);
            const auto t = cos::typed_ctmc_oracle(pp, k, cos::certified_buffer_cap(pp, k));
            for (std::size_t i = 0; i < 2; ++i) {
                CHECK(within(r.providers[i].wait, c[i]));
                CHECK(within(r.providers[i].delay, t.delay[i]));
            }
        }
    }
}

TEST_CASE("cancel-on-complete against balanced fairness") {
    SUBCASE("full replication, five servers each") {
        const auto pp = pair(invert_erlang_c(0.05, 5), invert_erlang_c(0.10, 5), 5, 5);
        const auto r = simulate(scenario(pp, {5, 5}, Policy::coc, 300'000, 13));
        CHECK(within(r.providers[0].delay, coc::mean_response_coc(pp, {5, 5})[0]));
        CHECK(within(r.providers[1].delay, coc::mean_response_coc(pp, {5, 5})[1]));
        CHECK(std::abs(r.providers[0].delay.value - 0.1730) < 3 * r.providers[0].delay.std_error + 1e-3);
    }
    SUBCASE("partial replication") {
        const auto pp = pair(1.3, 0.9, 2, 3);
        for (SharingConfig k : {SharingConfig{0, 0}, SharingConfig{1, 2}, SharingConfig{2, 1}}) {
            const auto r = simulate(scenario(pp, k, Policy::coc, 300'000, 14));
            const auto d = coc::mean_response_coc(pp, k);
            CHECK(within(r.providers[0].delay, d[0]));
            CHECK(within(r.providers[1].delay, d[1]));
        }
    }
}

TEST_CASE("determinism") {
    auto s = scenario(pair(0.6, 0.8, 2, 1), {1, 1}, Policy::cos, 50'000, 99);
    s.replications = 3;
    const auto a = simulate(s, 1);
    const auto b = simulate(s, 1);
    const auto c = simulate(s, 3);
    CHECK(a == b);
    CHECK(a == c);
    s.seed = 100;
    CHECK_FALSE(simulate(s, 1) == a);
    s.policy = Policy::coc;
    CHECK(simulate(s, 2) == simulate(s, 1));
}

TEST_CASE("replications") {
    auto s = scenario(pair(0.4, 0.4, 1, 1), {0, 0}, Policy::cos, 100'000, 5);
    s.replications = 8;
    const auto r = simulate(s, 2);
    CHECK(r.replications == 8);
    CHECK(r.jobs == 8 * 100'000);
    CHECK(within(r.providers[0].wait, 0.4));
    CHECK(within(r.providers[1].wait, 0.4));
}

TEST_CASE("time-shared configurations") {
    SUBCASE("integral input is plain simulation") {
        const auto s = scenario(pair(0.3, 0.2, 1, 1), {1, 0}, Policy::cos, 40'000, 3);
        CHECK(simulate_mixed(s, 1.0, 0.0, 50) == simulate(s));
    }
    SUBCASE("published bargaining point") {
        const auto pp = pair(0.1, 0.5, 1, 1);
        const auto r = simulate_mixed(scenario(pp, {0, 0}, Policy::cos, 2'000'000, 17), 0.37, 1.0, 100);
        CHECK(within(r.providers[0].wait, 0.0826));
        CHECK(within(r.providers[0].wait, cos::mixed_config_metrics(pp, 0.37, 1.0)[0]));
    }
    SUBCASE("symmetric centre") {
        const auto pp = pair(0.4, 0.4, 1, 1);
        const auto r = simulate_mixed(scenario(pp, {0, 0}, Policy::cos, 2'000'000, 19), 0.5, 0.5, 100);
        const auto m = cos::mixed_config_metrics(pp, 0.5, 0.5);
        CHECK(within(r.providers[0].wait, m[0]));
        CHECK(within(r.providers[1].wait, m[1]));
    }
    SUBCASE("rejections") {
        const auto s = scenario(pair(0.3, 0.2, 1, 1), {0, 0}, Policy::coc, 40'000, 3);
        CHECK_THROWS_AS(simulate_mixed(s, 0.5, 0.5, 10), config_error);
        auto c = s;
        c.policy = Policy::cos;
        CHECK_THROWS_AS(simulate_mixed(c, 0.5, 0.5, 0), domain_error);
        CHECK_THROWS_AS(simulate_mixed(c, 1.5, 0.5, 10), domain_error);
    }
}

TEST_CASE("scenario validation") {
    auto s = scenario(pair(0.3, 0.2, 1, 1), {0, 0}, Policy::cos, 1000, 3);
    auto bad = s;
    bad.warmup = bad.horizon;
    CHECK_THROWS_AS(simulate(bad), domain_error);
    bad = s;
    bad.replications = 0;
    CHECK_THROWS_AS(simulate(bad), domain_error);
    bad = s;
    bad.batches = 1;
    CHECK_THROWS_AS(simulate(bad), domain_error);
    bad = s;
    bad.config = {0.5, 0};
    CHECK_THROWS_AS(simulate(bad), domain_error);
    bad = s;
    bad.providers[0].lambda = 1.2;
    CHECK_THROWS_AS(simulate(bad), instability_error);
    CHECK_NOTHROW(simulate(s));
}

TEST_CASE("uniform idle-server choice") {
    // The assignment-rate rule reproduces the product form, the uniform rule does not.
    const auto pp = pair(0.4, 0.7, 1, 1);
    auto s = scenario(pp, {1, 0}, Policy::cos, 1'000'000, 23);
    const auto c = cos::waiting_probabilities(pp, {1, 0});
    const auto t = cos::typed_ctmc_oracle(pp, {1, 0}, cos::certified_buffer_cap(pp, {1, 0}), cos::DispatchRule::uniform);
    s.dispatch = cos::DispatchRule::uniform;
    const auto u = simulate(s);
    CHECK(within(u.providers[1].wait, t.wait[1]));
    CHECK(std::abs(t.wait[1] - c[1]) > 1e-4);
}
