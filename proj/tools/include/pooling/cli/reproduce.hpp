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
#include <optional>
#include <span>
#include <string_view>

#include "pooling/cli/table.hpp"

namespace pooling::cli {

struct ReproduceReport {
    Table table; // target,case,quantity,computed,published,abs_dev,tolerance,ok
    bool ok = true;
};

std::span<const std::string_view> reproduce_targets() noexcept;

// Figure targets also write per-panel frontier CSVs into data_dir when given.
ReproduceReport reproduce(std::string_view target, const std::optional<std::filesystem::path>& data_dir = {});

} // namespace pooling::cli
