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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pooling::cli {

using Cell = std::variant<std::monostate, std::string, double, std::int64_t, std::uint64_t, bool>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

enum class Format { csv, json };

Format parse_format(std::string_view s);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

void write(const Table& t, Format f, std::ostream& os);

// Header plus string cells; throws config_error on ragged rows.
struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvData read_csv(std::istream& is);

} // namespace pooling::cli
