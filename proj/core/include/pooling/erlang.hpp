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

#include "pooling/params.hpp"

namespace pooling {

// Erlang-B blocking probability, by the recurrence B(k) = rho B(k-1) / (k + rho B(k-1)).
double erlang_b(double rho, int n);

// Probability that an arrival waits in M/M/n with offered load rho. Requires 0 <= rho < n.
double erlang_c(double rho, int n);

// Mean response time of a stand-alone M/M/N provider.
double standalone_delay(const ProviderParams& p);

// Load rho in (0, n) with |erlang_c(rho, n) - target| < 1e-10.
double invert_erlang_c(double target, int n);

// Mean number waiting in M/M/n, C rho / (n - rho).
double erlang_mean_queue(double rho, int n);

} // namespace pooling
