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

#include "pooling/cli/app.hpp"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "pooling/cli/commands.hpp"
#include "pooling/cli/config.hpp"
#include "pooling/cli/reproduce.hpp"
#include "pooling/errors.hpp"

namespace pooling::cli {

namespace {

void init_logging(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    auto logger = std::make_shared<spdlog::logger>("pooling", sink);
    logger->set_pattern("[%l] %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("POOLING_LOG"); env && *env) level = spdlog::level::from_str(env);
    logger->set_level(level);
    spdlog::set_default_logger(std::move(logger));
}

struct Args {
    std::string config;
    std::string out;
    std::string format;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
    std::string dump_rates;
    bool printed_sums = false;
    std::string target;
    std::string data_dir;
};

void emit(const Table& t, const Args& a, const StudyConfig* cfg, std::ostream& out) {
    Format f = Format::csv;
    if (!a.format.empty()) f = parse_format(a.format);
    else if (cfg && cfg->format) f = *cfg->format;
    std::string path = a.out;
    if (path.empty() && cfg && cfg->out) path = *cfg->out;
    if (path.empty()) {
        write(t, f, out);
        return;
    }
    std::ofstream os(path);
    if (!os) throw config_error(path + ": cannot open output file");
    write(t, f, os);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    init_logging(err);
    CLI::App app{"Partial resource pooling between two service providers"};
    app.require_subcommand(1);
    app.fallthrough();
    Args a;
    app.add_option("--config", a.config, "JSON study config")->check(CLI::ExistingFile);
    app.add_option("--out", a.out, "Output file (default stdout)");
    app.add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", a.seed, "Simulation seed");
    app.add_option("--jobs", a.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));

    auto* metrics = app.add_subcommand("metrics", "Metric pairs at the configured k");
    metrics->add_option("--dump-rates", a.dump_rates, "Write c.o.s. assignment rates to this file");
    metrics->add_flag("--printed-sums", a.printed_sums, "Compare the printed blocking sums with the product form");
    auto* frontier = app.add_subcommand("frontier", "Grid Pareto frontier");
    auto* ksbs = app.add_subcommand("ksbs", "Kalai-Smorodinsky bargaining point");
    auto* simulate = app.add_subcommand("simulate", "Discrete-event simulation");
    auto* reproduce_cmd = app.add_subcommand("reproduce", "Published tables and figure data");
    reproduce_cmd->add_option("target", a.target, "intro, table1, table2, fig3 or fig4")->required();
    reproduce_cmd->add_option("--data-dir", a.data_dir, "Directory for figure frontier CSVs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    }

    try {
        if (reproduce_cmd->parsed()) {
            std::optional<std::filesystem::path> dir;
            if (!a.data_dir.empty()) dir = a.data_dir;
            const auto report = reproduce(a.target, dir);
            emit(report.table, a, nullptr, out);
            return report.ok ? exit_ok : exit_deviation;
        }
        if (a.config.empty()) throw config_error("--config is required for this subcommand");
        const auto cfg = load_config(a.config);
        RunOptions opt;
        opt.seed = a.seed;
        opt.jobs = a.jobs;
        if (!a.dump_rates.empty()) opt.dump_rates = a.dump_rates;
        opt.printed_sums = a.printed_sums;
        opt.diagnostics = &err;
        Table t;
        if (metrics->parsed()) t = cmd_metrics(cfg, opt);
        else if (frontier->parsed()) t = cmd_frontier(cfg, opt);
        else if (ksbs->parsed()) t = cmd_ksbs(cfg, opt);
        else if (simulate->parsed()) t = cmd_simulate(cfg, opt);
        emit(t, a, &cfg, out);
        return exit_ok;
    } catch (const instability_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_instability;
    } catch (const config_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace pooling::cli
