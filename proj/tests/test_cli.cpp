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
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pooling/cli/app.hpp"
#include "pooling/cli/reproduce.hpp"
#include "pooling/cli/table.hpp"

namespace fs = std::filesystem;
using namespace pooling::cli;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"pooling"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : owned) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const std::string& text) {
    const auto dir = fs::temp_directory_path() / "pooling_cli_test";
    fs::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << text;
    return path.string();
}

CsvData parse(const std::string& text) {
    std::istringstream is(text);
    return read_csv(is);
}

std::size_t column(const CsvData& d, const std::string& name) {
    for (std::size_t i = 0; i < d.header.size(); ++i) {
        if (d.header[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
}

double num(const std::vector<std::string>& row, std::size_t i) { return std::stod(row.at(i)); }

} // namespace

TEST_CASE("metrics") {
    SUBCASE("replication delays from standalone targets") {
        const auto cfg = write_config("table1.json", R"({"providers":[{"standalone_wait":0.05,"n":5},{"standalone_wait":0.10,"n":5}],
            "policy":"coc","metric":"delay","k":[0,0]})");
        const auto r = invoke({"--config", cfg, "metrics"});
        REQUIRE(r.code == exit_ok);
        const auto d = parse(r.out);
        REQUIRE(d.rows.size() == 1);
        CHECK(std::abs(num(d.rows[0], column(d, "B1")) - 0.3231) <= 1e-3);
        CHECK(std::abs(num(d.rows[0], column(d, "B2")) - 0.3722) <= 1e-3);
    }
    SUBCASE("full sharing waiting probability") {
        const auto cfg = write_config("t2.json", R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.1,"n":1}],"k":[1,1]})");
        const auto r = invoke({"--config", cfg, "metrics"});
        REQUIRE(r.code == exit_ok);
        const auto d = parse(r.out);
        CHECK(std::abs(100 * num(d.rows[0], column(d, "B1")) - 1.82) <= 0.05);
        CHECK(d.rows[0][column(d, "policy")] == "cos");
        CHECK(d.rows[0][column(d, "metric")] == "wait");
    }
    SUBCASE("default configurations") {
        const auto cfg = write_config("def.json", R"({"providers":[{"lambda":0.7,"n":2},{"lambda":0.4,"n":1}]})");
        const auto d = parse(invoke({"--config", cfg, "metrics"}).out);
        REQUIRE(d.rows.size() == 2);
        CHECK(d.rows[1][column(d, "k1")] == "2");
        CHECK(d.rows[1][column(d, "k2")] == "1");
    }
}

TEST_CASE("exit codes") {
    SUBCASE("malformed JSON names the line and column") {
        const auto cfg = write_config("bad.json", "{\"providers\":[\n{\"lambda\":0.1,\"n\":1},\n{\"lambda\":0.1 \"n\":1}]}");
        const auto r = invoke({"--config", cfg, "metrics"});
        CHECK(r.code == exit_config);
        CHECK(r.err.find("bad.json:3:") != std::string::npos);
    }
    SUBCASE("schema violations") {
        for (const char* text : {R"({"providers":[{"lambda":0.1,"n":1}]})",
                                 R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.1,"standalone_wait":0.1,"n":1}]})",
                                 R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.1,"n":1}],"colour":1})",
                                 R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.1,"n":1}],"policy":"fifo"})",
                                 R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.1,"n":1}],"k":[2,0]})",
                                 R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.1,"n":1}],"k":{"grid":0}})"}) {
            CAPTURE(text);
            CHECK(invoke({"--config", write_config("schema.json", text), "metrics"}).code == exit_config);
        }
        CHECK(invoke({"metrics"}).code == exit_config);
        CHECK(invoke({"bogus"}).code == exit_config);
        CHECK(invoke({"reproduce", "table9"}).code == exit_config);
        CHECK(invoke({"--config", "/nonexistent/x.json", "metrics"}).code == exit_config);
    }
    SUBCASE("coc waiting probability has no analytic path") {
        const auto cfg = write_config("cocw.json", R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.1,"n":1}],"policy":"coc","metric":"wait"})");
        CHECK(invoke({"--config", cfg, "metrics"}).code == exit_config);
    }
    SUBCASE("overload") {
        const auto cfg = write_config("unstable.json", R"({"providers":[{"lambda":1.1,"n":1},{"lambda":0.1,"n":1}]})");
        CHECK(invoke({"--config", cfg, "metrics"}).code == exit_instability);
    }
    SUBCASE("empty frontier") {
        const auto cfg = write_config("empty.json", R"({"providers":[{"lambda":0.95,"n":1},{"lambda":0.02,"n":1}],"k":{"grid":0.01}})");
        CHECK(invoke({"--config", cfg, "ksbs"}).code == exit_numerical);
    }
}

TEST_CASE("reproduce") {
    for (const auto& target : reproduce_targets()) {
        CAPTURE(target);
        const auto a = invoke({"reproduce", std::string(target)});
        const auto b = invoke({"reproduce", std::string(target)});
        CHECK(a.out == b.out);
        const auto d = parse(a.out);
        REQUIRE_FALSE(d.rows.empty());
        const auto ok = column(d, "ok");
        bool all = true;
        for (const auto& row : d.rows) all = all && row[ok] == "1";
        CHECK(a.code == (all ? exit_ok : exit_deviation));
    }
    SUBCASE("table shapes") {
        const auto t1 = parse(invoke({"reproduce", "table1"}).out);
        std::vector<std::string> cases;
        for (const auto& row : t1.rows) {
            if (cases.empty() || cases.back() != row[column(t1, "case")]) cases.push_back(row[column(t1, "case")]);
        }
        CHECK(cases.size() == 4);
        const auto t2 = parse(invoke({"reproduce", "table2"}).out);
        std::size_t ksbs_rows = 0;
        for (const auto& row : t2.rows) ksbs_rows += row[column(t2, "quantity")] == "k1_ksbs";
        CHECK(ksbs_rows == 3);
        CHECK(parse(invoke({"reproduce", "intro"}).out).rows.size() == 3);
    }
    SUBCASE("figure data files") {
        const auto dir = fs::temp_directory_path() / "pooling_cli_test" / "fig";
        fs::remove_all(dir);
        CHECK(invoke({"reproduce", "fig3", "--data-dir", dir.string()}).code == exit_ok);
        for (const char* f : {"fig3a.csv", "fig3b.csv"}) {
            std::ifstream in(dir / f);
            REQUIRE(in.good());
            const auto d = read_csv(in);
            CHECK_FALSE(d.rows.empty());
        }
    }
}

TEST_CASE("frontier and bargaining") {
    const auto cfg = write_config("fig3a.json", R"({"providers":[{"standalone_wait":0.3,"n":1},{"standalone_wait":0.1,"n":1}],"k":{"grid":0.01}})");
    const auto r = invoke({"--config", cfg, "frontier"});
    REQUIRE(r.code == exit_ok);
    const auto d = parse(r.out);
    const auto k1 = column(d, "k1");
    const auto k2 = column(d, "k2");
    const auto und = column(d, "undominated");
    const auto ks = column(d, "is_ksbs");
    std::size_t frontier = 0;
    std::size_t ksbs_rows = 0;
    for (const auto& row : d.rows) {
        if (row[ks] == "1") {
            ++ksbs_rows;
            continue;
        }
        if (row[und] != "1") continue;
        ++frontier;
        CHECK((num(row, k1) == 1.0 || num(row, k2) == 1.0));
    }
    CHECK(frontier > 10);
    CHECK(ksbs_rows == 1);
    CHECK(d.rows.size() == 101 * 101 + 1);

    const auto c2 = write_config("t2r2.json", R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.3,"n":1}],"k":{"grid":0.01}})");
    const auto k = parse(invoke({"--config", c2, "ksbs"}).out);
    REQUIRE(k.rows.size() == 1);
    CHECK(std::abs(num(k.rows[0], column(k, "k1")) - 0.69) <= 0.01);
    CHECK(std::abs(num(k.rows[0], column(k, "k2")) - 1.0) <= 0.01);
}

TEST_CASE("simulate") {
    const auto cfg = write_config("sim.json", R"({"providers":[{"lambda":0.1,"n":1},{"lambda":0.5,"n":1}],"k":[1,1],
        "sim":{"horizon":1100000,"warmup":100000}})");
    const auto r = invoke({"--config", cfg, "--seed", "5", "simulate"});
    REQUIRE(r.code == exit_ok);
    const auto d = parse(r.out);
    REQUIRE(d.rows.size() == 4);
    for (const auto& row : d.rows) {
        CHECK(row[column(d, "seed")] == "5");
        if (row[column(d, "metric")] == "wait_1" || row[column(d, "metric")] == "wait_2") {
            CHECK(num(row, column(d, "ci_lo")) <= 0.1385);
            CHECK(0.1385 <= num(row, column(d, "ci_hi")));
        }
    }
    CHECK(invoke({"--config", cfg, "--seed", "5", "simulate"}).out == r.out);
}

TEST_CASE("output formats") {
    const auto cfg = write_config("fmt.json", R"({"providers":[{"lambda":0.4,"n":2},{"lambda":0.9,"n":2}],"k":[[0,0],[1,1],[0.5,2]]})");
    const auto csv = parse(invoke({"--config", cfg, "metrics"}).out);
    const auto r = invoke({"--config", cfg, "--format", "json", "metrics"});
    REQUIRE(r.code == exit_ok);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == csv.rows.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        CHECK(j[i]["B1"].get<double>() == std::stod(csv.rows[i][column(csv, "B1")]));
        CHECK(j[i]["k1"].get<double>() == std::stod(csv.rows[i][column(csv, "k1")]));
    }
    CHECK(invoke({"--config", cfg, "--format", "xml", "metrics"}).code == exit_config);

    const auto path = (fs::temp_directory_path() / "pooling_cli_test" / "out.csv").string();
    fs::remove(path);
    const auto w = invoke({"--config", cfg, "--out", path, "metrics"});
    CHECK(w.code == exit_ok);
    CHECK(w.out.empty());
    std::ifstream in(path);
    CHECK(read_csv(in).rows.size() == csv.rows.size());
}

TEST_CASE("csv round trip") {
    Table t;
    t.header = {"name", "value", "flag", "count"};
    t.add({std::string("plain"), 0.1, true, std::int64_t{-3}});
    t.add({std::string("with,comma"), 1e-300, false, std::uint64_t{7}});
    t.add({std::string("quote \"q\""), std::nan(""), true, std::monostate{}});
    std::ostringstream os;
    write(t, Format::csv, os);
    const auto d = parse(os.str());
    REQUIRE(d.rows.size() == 3);
    CHECK(d.header == t.header);
    CHECK(d.rows[0][0] == "plain");
    CHECK(std::stod(d.rows[0][1]) == 0.1);
    CHECK(d.rows[0][2] == "1");
    CHECK(d.rows[1][0] == "with,comma");
    CHECK(std::stod(d.rows[1][1]) == 1e-300);
    CHECK(d.rows[2][0] == "quote \"q\"");
    CHECK(d.rows[2][1] == "nan");
    CHECK(d.rows[2][3].empty());
    std::istringstream ragged("a,b\n1\n");
    CHECK_THROWS(read_csv(ragged));
}
