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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pooling/cli/table.hpp"
#include "pooling/cos/dispatch.hpp"
#include "pooling/params.hpp"

namespace pooling::cli {

struct SimSettings {
    std::uint64_t horizon = 1'000'000;
    std::optional<std::uint64_t> warmup; // default: a tenth of the horizon
    int replications = 1;
    int batches = 30;
    std::uint64_t seed = 1;
    cos::DispatchRule dispatch = cos::DispatchRule::assignment_rates;
    int switch_epochs = 100;
};

struct StudyConfig {
    ProviderPair providers{};
    std::array<std::optional<double>, 2> standalone_wait{}; // targets the loads were solved from
    Policy policy = Policy::cos;
    Metric metric = Metric::wait;
    std::vector<SharingConfig> configs; // explicit "k"
    std::optional<double> grid_step;    // "k": {"grid": step}
    std::optional<SimSettings> sim;
    std::optional<std::string> out;
    std::optional<Format> format;
};

// Throws config_error with a "source:line:col:" prefix on malformed JSON and a JSON-pointer
// prefix on schema violations; instability_error if a provider is overloaded.
StudyConfig parse_config(std::string_view text, std::string_view source = "config");
StudyConfig load_config(const std::filesystem::path& path);

} // namespace pooling::cli
