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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "pooling/cli/config.hpp"
#include "pooling/cli/table.hpp"
#include "pooling/pareto.hpp"

namespace pooling::cli {

struct RunOptions {
    std::optional<std::uint64_t> seed; // overrides sim.seed
    unsigned jobs = 1;
    std::optional<std::filesystem::path> dump_rates; // c.o.s. assignment-rate tables
    bool printed_sums = false;
    std::ostream* diagnostics = nullptr;
};

// policy,k1,k2,metric,source,B1,B2,B1_stderr,B2_stderr
Table cmd_metrics(const StudyConfig& cfg, const RunOptions& opt);
// k1,k2,B1,B2,undominated,is_ksbs; every grid point plus the KSBS point
Table cmd_frontier(const StudyConfig& cfg, const RunOptions& opt);
// Same schema, KSBS point only.
Table cmd_ksbs(const StudyConfig& cfg, const RunOptions& opt);
// policy,k1,k2,metric,estimate,stderr,ci_lo,ci_hi,jobs,seed
Table cmd_simulate(const StudyConfig& cfg, const RunOptions& opt);

Table frontier_table(const pareto::FrontierResult& fr, const pareto::KsbsResult* ksbs);

// Analytic metric pair at one configuration, with its provenance.
MetricPair analytic_metrics(const ProviderPair& pp, Policy policy, Metric metric, const SharingConfig& k);

} // namespace pooling::cli
