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

#include <stdexcept>
#include <string>

namespace pooling {

// Invalid parameter values (nonpositive rates, k out of range, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Offered load at or above capacity.
class instability_error : public domain_error {
public:
    using domain_error::domain_error;
};

// Truncated state space cannot certify the requested tail mass.
class truncation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Assignment-rate recursion produced an infeasible rate.
class infeasible_rates_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Linear solve failed.
class singular_system_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Neither provider gains from full pooling.
class no_frontier_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent study configuration.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace pooling
