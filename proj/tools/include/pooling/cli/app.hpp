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

#include <iosfwd>

namespace pooling::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_deviation = 1,   // reproduce: a value outside tolerance
    exit_config = 2,      // bad flags, malformed or invalid config
    exit_instability = 3, // a provider or the pooled system is overloaded
    exit_numerical = 4,   // truncation, singular system, empty frontier
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pooling::cli
