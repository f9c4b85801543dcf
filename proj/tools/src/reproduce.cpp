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

#include "pooling/cli/reproduce.hpp"

#include <spdlog/spdlog.h>

#include <array>
#include <cmath>
#include <fstream>
#include <string>

#include "pooling/cli/commands.hpp"
#include "pooling/coc_bf.hpp"
#include "pooling/cos/product_form.hpp"
#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"
#include "pooling/pareto.hpp"

namespace pooling::cli {

namespace {

constexpr std::array<std::string_view, 5> kTargets{"intro", "table1", "table2", "fig3", "fig4"};

class Report {
public:
    explicit Report(std::string_view target) : target_(target) {
        r_.table.header = {"target", "case", "quantity", "computed", "published", "abs_dev", "tolerance", "ok"};
    }

    void check(const std::string& case_name, const std::string& quantity, double computed, double published, double tol) {
        const double dev = std::abs(computed - published);
        const bool ok = dev <= tol;
        r_.ok = r_.ok && ok;
        r_.table.add({std::string(target_), case_name, quantity, computed, published, dev, tol, ok});
        if (!ok) spdlog::warn("{} {} {}: computed {} vs {}", target_, case_name, quantity, computed, published);
    }

    ReproduceReport take() { return std::move(r_); }

private:
    std::string_view target_;
    ReproduceReport r_;
};

ProviderPair pair_from_targets(double w1, double w2, int n) {
    return {ProviderParams{invert_erlang_c(w1, n), 1.0, n}, ProviderParams{invert_erlang_c(w2, n), 1.0, n}};
}

void write_frontier(const std::optional<std::filesystem::path>& dir, const std::string& name,
                    const pareto::MetricSurface& surface, const pareto::FrontierResult& fr) {
    if (!dir) return;
    std::filesystem::create_directories(*dir);
    std::optional<pareto::KsbsResult> k;
    if (!fr.frontier().empty()) k = pareto::ksbs(surface, fr);
    const auto path = *dir / (name + ".csv");
    std::ofstream os(path);
    if (!os) throw config_error(path.string() + ": cannot write");
    write(frontier_table(fr, k ? &*k : nullptr), Format::csv, os);
}

ReproduceReport intro() {
    Report r("intro");
    const std::array<std::array<double, 3>, 3> rows{{{16, 20, 0.25}, {28, 30, 0.62}, {44, 50, 0.28}}};
    for (const auto& row : rows) {
        const auto n = static_cast<int>(row[1]);
        r.check("rho=" + format_double(row[0]) + ",N=" + std::to_string(n), "erlang_c", erlang_c(row[0], n), row[2],
                0.005);
    }
    return r.take();
}

ReproduceReport table1() {
    Report r("table1");
    struct Row {
        int n;
        std::array<double, 6> published; // D1 coc, D1 plain, D2 coc, D2 plain, full coc, naive full
    };
    const std::array<Row, 4> rows{{
        {5, {0.3231, 1.0161, 0.3722, 1.0372, 0.1730, 1.0220}},
        {10, {0.2121, 1.0106, 0.2491, 1.0249, 0.1145, 1.0015}},
        {15, {0.1679, 1.0084, 0.1988, 1.0199, 0.0910, 1.0012}},
        {20, {0.1428, 1.0071, 0.1699, 1.0170, 0.0776, 1.0011}},
    }};
    constexpr double tol = 1e-3;
    for (const auto& row : rows) {
        const auto pp = pair_from_targets(0.05, 0.10, row.n);
        const std::string c = "N=" + std::to_string(row.n);
        const auto standalone = coc::mean_response_coc(pp, no_sharing());
        const auto full = coc::mean_response_coc(pp, full_sharing(pp));
        const ProviderParams merged{pp[0].lambda + pp[1].lambda, 1.0, 2 * row.n};
        r.check(c, "D1_coc_standalone", standalone[0], row.published[0], tol);
        r.check(c, "D1_standalone", standalone_delay(pp[0]), row.published[1], tol);
        r.check(c, "D2_coc_standalone", standalone[1], row.published[2], tol);
        r.check(c, "D2_standalone", standalone_delay(pp[1]), row.published[3], tol);
        r.check(c, "D1_coc_full", full[0], row.published[4], tol);
        r.check(c, "D2_coc_full", full[1], row.published[4], tol);
        r.check(c, "D_naive_full", standalone_delay(merged), row.published[5], tol);
        const double closed = 1.0 / (2 * row.n - pp[0].load() - pp[1].load());
        r.check(c, "D_coc_full_identity_gap", std::abs(full[0] - closed), 0.0, 1e-12);
    }
    return r.take();
}

ReproduceReport table2() {
    Report r("table2");
    struct Row {
        double w2;
        double full;
        std::array<double, 4> ksbs; // k1, k2, C1, C2 (percent)
    };
    const std::array<Row, 3> rows{{
        {0.10, 1.82, {1.0, 1.0, 1.82, 1.82}},
        {0.30, 6.65, {0.69, 1.0, 5.54, 14.54}},
        {0.50, 13.85, {0.37, 1.0, 8.26, 37.30}},
    }};
    for (const auto& row : rows) {
        const auto pp = pair_from_targets(0.10, row.w2, 1);
        const std::string c = "10|" + format_double(std::round(row.w2 * 100));
        const auto full = cos::waiting_probabilities(pp, full_sharing(pp));
        r.check(c, "C1_full_pct", 100 * full[0], row.full, 0.05);
        r.check(c, "C2_full_pct", 100 * full[1], row.full, 0.05);
        const auto k = pareto::ksbs(pp, Policy::cos, Metric::wait, 0.01);
        r.check(c, "k1_ksbs", k.point.config.k1, row.ksbs[0], 0.01);
        r.check(c, "k2_ksbs", k.point.config.k2, row.ksbs[1], 0.01);
        r.check(c, "C1_ksbs_pct", 100 * k.point.metrics[0], row.ksbs[2], 0.05);
        r.check(c, "C2_ksbs_pct", 100 * k.point.metrics[1], row.ksbs[3], 0.05);
    }
    return r.take();
}

std::size_t off_boundary(const std::vector<pareto::ParetoPoint>& pts, const ProviderPair& pp) {
    std::size_t n = 0;
    for (const auto& p : pts) {
        const bool on = std::abs(p.config.k1 - pp[0].servers) < 1e-9 || std::abs(p.config.k2 - pp[1].servers) < 1e-9;
        n += on ? 0 : 1;
    }
    return n;
}

ReproduceReport fig3(const std::optional<std::filesystem::path>& dir) {
    Report r("fig3");
    struct Panel {
        std::string name;
        double w1, w2;
        pareto::FrontierCase expected;
        bool full_pooling;
    };
    const std::array<Panel, 2> panels{{
        {"a", 0.30, 0.10, pareto::FrontierCase::both_benefit, true},
        {"b", 0.50, 0.10, pareto::FrontierCase::first_benefits_only, false},
    }};
    constexpr double step = 0.01;
    for (const auto& p : panels) {
        const auto pp = pair_from_targets(p.w1, p.w2, 1);
        const auto s = pareto::unit_server_frontier_closed_form(pp);
        const auto surface = pareto::MetricSurface::make(pp, Policy::cos, Metric::wait);
        const auto fr = pareto::pareto_frontier(surface, step);
        const auto pts = fr.frontier();
        r.check(p.name, "frontier_case", static_cast<double>(s.kind), static_cast<double>(p.expected), 0.0);
        r.check(p.name, "full_pooling_on_frontier", s.contains(full_sharing(pp)) ? 1.0 : 0.0, p.full_pooling ? 1.0 : 0.0,
                0.0);
        r.check(p.name, "hausdorff_to_closed_form", pareto::hausdorff_distance(s, pts), 0.0, step);
        r.check(p.name, "off_boundary_points", static_cast<double>(off_boundary(pts, pp)), 0.0, 0.0);
        write_frontier(dir, "fig3" + p.name, surface, fr);
    }
    return r.take();
}

ReproduceReport fig4(const std::optional<std::filesystem::path>& dir) {
    Report r("fig4");
    const std::array<std::array<double, 2>, 2> panels{{{0.10, 0.50}, {0.20, 0.50}}};
    constexpr double step = 0.05;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const std::string name(1, static_cast<char>('a' + i));
        const auto pp = pair_from_targets(panels[i][0], panels[i][1], 2);
        const auto report = pareto::conjecture_check(pp, step);
        r.check(name, "frontier_nonempty", report.frontier_points > 0 ? 1.0 : 0.0, 1.0, 0.0);
        r.check(name, "off_boundary_points", static_cast<double>(report.counterexamples.size()), 0.0, 0.0);
        if (dir) {
            const auto surface = pareto::MetricSurface::make(pp, Policy::cos, Metric::wait);
            write_frontier(dir, "fig4" + name, surface, pareto::pareto_frontier(surface, step));
        }
    }
    return r.take();
}

} // namespace

std::span<const std::string_view> reproduce_targets() noexcept { return kTargets; }

ReproduceReport reproduce(std::string_view target, const std::optional<std::filesystem::path>& data_dir) {
    if (target == "intro") return intro();
    if (target == "table1") return table1();
    if (target == "table2") return table2();
    if (target == "fig3") return fig3(data_dir);
    if (target == "fig4") return fig4(data_dir);
    throw config_error("unknown reproduce target '" + std::string(target) +
                       "' (expected intro, table1, table2, fig3 or fig4)");
}

} // namespace pooling::cli
