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

#include "pooling/erlang.hpp"

#include <cmath>
#include <sstream>

#include "pooling/errors.hpp"

namespace pooling {

namespace {

void check_load(double rho, int n) {
    if (n < 1) throw domain_error("server count must be at least 1");
    if (!std::isfinite(rho) || rho < 0.0) throw domain_error("load must be nonnegative");
    if (!(rho < n)) {
        std::ostringstream os;
        os << "unstable: load " << rho << " >= " << n << " servers";
        throw instability_error(os.str());
    }
}

} // namespace

double erlang_b(double rho, int n) {
    if (n < 0) throw domain_error("server count must be nonnegative");
    if (!std::isfinite(rho) || rho < 0.0) throw domain_error("load must be nonnegative");
    double b = 1.0;
    for (int k = 1; k <= n; ++k) b = rho * b / (k + rho * b);
    return b;
}

double erlang_c(double rho, int n) {
    check_load(rho, n);
    if (rho == 0.0) return 0.0;
    const double b = erlang_b(rho, n);
    return b / (1.0 - (rho / n) * (1.0 - b));
}

double standalone_delay(const ProviderParams& p) {
    const double rho = p.load();
    if (!(p.nu > 0.0)) throw domain_error("service rate must be positive");
    const double c = erlang_c(rho, p.servers);
    return 1.0 / p.nu + c / (p.nu * (p.servers - rho));
}

double erlang_mean_queue(double rho, int n) { return erlang_c(rho, n) * rho / (n - rho); }

double invert_erlang_c(double target, int n) {
    if (n < 1) throw domain_error("server count must be at least 1");
    if (!(target > 0.0 && target < 1.0)) throw domain_error("target probability must lie in (0, 1)");
    double lo = 0.0;
    double hi = static_cast<double>(n);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (erlang_c(mid, n) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace pooling
