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

#include "oracles/erlang_direct.hpp"
#include "oracles/generators.hpp"
#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"

using namespace pooling;
using pooling::testing::erlang_c_direct;
using pooling::testing::Gen;

TEST_CASE("erlang_c agrees with direct summation") {
    double worst = 0.0;
    for (int n = 1; n <= 100; ++n) {
        for (int j = 1; j <= 40; ++j) {
            const double rho = 0.999 * n * j / 40.0;
            const double a = erlang_c(rho, n);
            const double b = erlang_c_direct(rho, n);
            worst = std::max(worst, std::abs(a - b) / b);
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("erlang_c special values") {
    CHECK(erlang_c(0.0, 7) == 0.0);
    for (double rho : {0.01, 0.3, 0.5, 0.77, 0.999}) CHECK(erlang_c(rho, 1) == doctest::Approx(rho).epsilon(1e-15));
    CHECK(erlang_c(16, 20) == doctest::Approx(erlang_c_direct(16, 20)).epsilon(1e-12));
    CHECK(std::abs(erlang_c(44, 50) - 0.28) <= 0.005);
    CHECK(std::abs(erlang_c(28, 30) - 0.62) <= 0.005);
}

TEST_CASE("erlang_c rejects loads outside [0, n)") {
    CHECK_THROWS_AS(erlang_c(-0.1, 3), domain_error);
    CHECK_THROWS_AS(erlang_c(3.0, 3), instability_error);
    CHECK_THROWS_AS(erlang_c(3.5, 3), domain_error);
    CHECK_THROWS_AS(erlang_c(1.0, 0), domain_error);
}

TEST_CASE("erlang_c is increasing in load and decreasing in servers") {
    for (int n = 1; n <= 50; ++n) {
        double prev = -1.0;
        for (int j = 0; j < 100; ++j) {
            const double rho = n * j / 100.0;
            const double c = erlang_c(rho, n);
            CHECK(c > prev);
            prev = c;
            if (j > 0) CHECK(c > erlang_c(rho, n + 1));
        }
    }
}

TEST_CASE("standalone_delay") {
    CHECK(standalone_delay({0.5, 1.0, 1}) == doctest::Approx(2.0).epsilon(1e-14));
    const double d = standalone_delay({16.0, 1.0, 20});
    CHECK(d == doctest::Approx(1.0 + erlang_c_direct(16, 20) / 4.0).epsilon(1e-12));
    CHECK(std::abs(d - 1.0625) <= 0.002);
    CHECK(standalone_delay({0.0, 2.5, 3}) == doctest::Approx(0.4));
    // Scaling both rates leaves waiting unchanged and shrinks time.
    CHECK(standalone_delay({3.0, 2.0, 2}) == doctest::Approx(standalone_delay({1.5, 1.0, 2}) / 2.0));
}

TEST_CASE("invert_erlang_c") {
    CHECK(invert_erlang_c(0.1, 1) == doctest::Approx(0.1).epsilon(1e-10));
    const double rho = invert_erlang_c(0.05, 5);
    CHECK(std::abs(erlang_c_direct(rho, 5) - 0.05) < 1e-10);
    CHECK(std::abs(invert_erlang_c(0.62, 30) - 28.0) <= 0.5);
    CHECK_THROWS_AS(invert_erlang_c(0.0, 3), domain_error);
    CHECK_THROWS_AS(invert_erlang_c(1.0, 3), domain_error);
    CHECK_THROWS_AS(invert_erlang_c(0.5, 0), domain_error);
}

TEST_CASE("invert_erlang_c round trip on random inputs") {
    Gen g(20261016);
    for (int t = 0; t < 2000; ++t) {
        const int n = g.integer(1, 100);
        const double r = g.uniform(0.05, 0.99) * n;
        CHECK(std::abs(invert_erlang_c(erlang_c(r, n), n) - r) < 1e-8);
    }
}

TEST_CASE("erlang_mean_queue is the M/M/1 queue length for one server") {
    for (double rho : {0.1, 0.5, 0.9}) CHECK(erlang_mean_queue(rho, 1) == doctest::Approx(rho * rho / (1 - rho)));
}
