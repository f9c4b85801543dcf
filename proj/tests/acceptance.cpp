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

// Acceptance runner: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion...]   (no argument runs all)

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "oracles/coc_properties.hpp"
#include "oracles/generators.hpp"
#include "pooling/coc_bf.hpp"
#include "pooling/cos/mixture.hpp"
#include "pooling/cos/product_form.hpp"
#include "pooling/cos/typed_ctmc.hpp"
#include "pooling/desim.hpp"
#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"
#include "pooling/pareto.hpp"

using namespace pooling;
using pooling::testing::Gen;

namespace {

// Pinned tolerances.
constexpr double kIntroTol = 0.005;
constexpr double kIntroSeconds = 1e-3;
constexpr double kTable1Tol = 1e-3;
constexpr double kTable1IdentityTol = 1e-12;
constexpr double kTable1Seconds = 1.0;
constexpr double kTable2PctTol = 0.05;
constexpr double kTable2KTol = 0.01;
constexpr double kTable2Seconds = 10.0;
constexpr double kTable2Step = 0.01;
constexpr double kMonotoneMargin = 1e-12;
constexpr double kFlatTol = 1e-12;
constexpr double kCtmcTol = 1e-8;
constexpr double kSimSe = 3.0;
constexpr std::uint64_t kSimJobs = 1'000'000;
constexpr double kCrossSeconds = 300.0;
constexpr double kFrontierStep = 0.01;
constexpr double kConjectureStep = 0.05;

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ProviderPair from_waits(double w1, double w2, int n) {
    return {ProviderParams{invert_erlang_c(w1, n), 1.0, n}, ProviderParams{invert_erlang_c(w2, n), 1.0, n}};
}

Verdict intro() {
    const std::array<std::array<double, 3>, 3> rows{{{16, 20, 0.25}, {28, 30, 0.62}, {44, 50, 0.28}}};
    std::array<double, 3> got{};
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < 3; ++i) got[i] = erlang_c(rows[i][0], static_cast<int>(rows[i][1]));
    const double dt = seconds_since(t0);
    Verdict v{dt < kIntroSeconds, ""};
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double dev = std::abs(got[i] - rows[i][2]);
        worst = std::max(worst, dev);
        v.pass = v.pass && dev <= kIntroTol;
        v.detail += fmt("C(%g,%g)=%.5f vs %.2f; ", rows[i][0], rows[i][1], got[i], rows[i][2]);
    }
    v.detail += fmt("max dev %.4f (tol %.3f), %.1f us", worst, kIntroTol, dt * 1e6);
    return v;
}

Verdict table1() {
    struct Row {
        int n;
        std::array<double, 6> printed; // D1 coc, D1, D2 coc, D2, D coc full, D full
    };
    const std::array<Row, 4> rows{{
        {5, {0.3231, 1.0161, 0.3722, 1.0372, 0.1730, 1.0220}},
        {10, {0.2121, 1.0106, 0.2491, 1.0249, 0.1145, 1.0015}},
        {15, {0.1679, 1.0084, 0.1988, 1.0199, 0.0910, 1.0012}},
        {20, {0.1428, 1.0071, 0.1699, 1.0170, 0.0776, 1.0011}},
    }};
    const auto t0 = Clock::now();
    Verdict v{true, ""};
    int bad = 0;
    double worst = 0.0;
    double identity = 0.0;
    for (const auto& row : rows) {
        const auto pp = from_waits(0.05, 0.10, row.n);
        const auto sa = coc::mean_response_coc(pp, no_sharing());
        const auto full = coc::mean_response_coc(pp, full_sharing(pp));
        const ProviderParams merged{pp[0].lambda + pp[1].lambda, 1.0, 2 * row.n};
        const std::array<double, 6> got{sa[0], standalone_delay(pp[0]), sa[1], standalone_delay(pp[1]), full[0],
                                        standalone_delay(merged)};
        for (std::size_t j = 0; j < 6; ++j) {
            const double dev = std::abs(got[j] - row.printed[j]);
            worst = std::max(worst, dev);
            if (dev > kTable1Tol) {
                ++bad;
                v.detail += fmt("N=%d col %zu: %.5f vs %.4f; ", row.n, j + 1, got[j], row.printed[j]);
            }
        }
        const double closed = 1.0 / (2 * row.n - pp[0].load() - pp[1].load());
        const double first = coc::mean_response_first_closed(pp, full_sharing(pp));
        const double overall = coc::mean_response_overall(pp, full_sharing(pp));
        identity = std::max({identity, std::abs(full[0] - closed), std::abs(full[1] - closed),
                             std::abs(first - closed), std::abs(overall - closed)});
    }
    const double dt = seconds_since(t0);
    v.pass = bad == 0 && identity <= kTable1IdentityTol && dt < kTable1Seconds;
    v.detail += fmt("%d/24 outside %.0e, max dev %.5f, full-sharing identity gap %.1e, %.3f s", bad, kTable1Tol, worst,
                    identity, dt);
    return v;
}

Verdict table2() {
    struct Row {
        double w2;
        double full_pct;
        double k1, k2, c1, c2;
    };
    const std::array<Row, 3> rows{{
        {0.10, 1.82, 1.0, 1.0, 1.82, 1.82},
        {0.30, 6.65, 0.69, 1.0, 5.54, 14.54},
        {0.50, 13.85, 0.37, 1.0, 8.26, 37.30},
    }};
    const auto t0 = Clock::now();
    Verdict v{true, ""};
    for (const auto& r : rows) {
        const auto pp = from_waits(0.10, r.w2, 1);
        const auto full = cos::waiting_probabilities(pp, full_sharing(pp));
        const auto k = pareto::ksbs(pp, Policy::cos, Metric::wait, kTable2Step);
        const bool ok = std::abs(100 * full[0] - r.full_pct) <= kTable2PctTol &&
                        std::abs(100 * full[1] - r.full_pct) <= kTable2PctTol &&
                        std::abs(k.point.config.k1 - r.k1) <= kTable2KTol &&
                        std::abs(k.point.config.k2 - r.k2) <= kTable2KTol &&
                        std::abs(100 * k.point.metrics[0] - r.c1) <= kTable2PctTol &&
                        std::abs(100 * k.point.metrics[1] - r.c2) <= kTable2PctTol;
        v.pass = v.pass && ok;
        v.detail += fmt("10|%.0f: full %.3f%%, k*=(%.4f,%.4f), C*=(%.3f%%,%.3f%%)%s; ", 100 * r.w2, 100 * full[0],
                        k.point.config.k1, k.point.config.k2, 100 * k.point.metrics[0], 100 * k.point.metrics[1],
                        ok ? "" : " MISMATCH");
    }
    const double dt = seconds_since(t0);
    v.pass = v.pass && dt < kTable2Seconds;
    v.detail += fmt("%.2f s", dt);
    return v;
}

Verdict monotonicity() {
    Gen g(4004);
    std::size_t violations = 0;
    std::string first;
    for (int i = 0; i < 200; ++i) {
        const auto pp = g.stable_pair(10);
        const auto bad = pooling::testing::coc_monotonicity_violations(pp, kMonotoneMargin, kFlatTol);
        violations += bad.size();
        if (!bad.empty() && first.empty()) first = bad.front();
    }
    return {violations == 0, fmt("200 instances, %zu violations %s", violations, first.c_str())};
}

Verdict replication_dominance() {
    Gen g(5005);
    int failures = 0;
    std::size_t configs = 0;
    for (int i = 0; i < 50; ++i) {
        const auto pp = g.stable_pair(10);
        std::vector<SharingConfig> ks;
        std::vector<std::array<double, 2>> d;
        for (int a = 0; a <= pp[0].servers; ++a) {
            for (int b = 0; b <= pp[1].servers; ++b) {
                ks.push_back({double(a), double(b)});
                d.push_back(coc::mean_response_coc(pp, ks.back()));
            }
        }
        configs += ks.size();
        const auto& base = d.front();
        std::vector<SharingConfig> optimal;
        for (std::size_t x = 0; x < d.size(); ++x) {
            if (!(d[x][0] < base[0] && d[x][1] < base[1])) continue;
            bool dominated = false;
            for (std::size_t y = 0; y < d.size() && !dominated; ++y) {
                dominated = d[y][0] <= d[x][0] && d[y][1] <= d[x][1] && (d[y][0] < d[x][0] || d[y][1] < d[x][1]);
            }
            if (!dominated) optimal.push_back(ks[x]);
        }
        const bool ok = optimal.size() == 1 && optimal[0].k1 == pp[0].servers && optimal[0].k2 == pp[1].servers;
        failures += ok ? 0 : 1;
    }
    return {failures == 0, fmt("50 instances, %zu configurations audited, %d without unique optimum (N1,N2)", configs,
                               failures)};
}

Verdict cross_oracle() {
    const std::array<double, 5> utilisation{0.1, 0.3, 0.5, 0.7, 0.85};
    const auto t0 = Clock::now();
    std::size_t cases = 0;
    std::size_t ctmc_bad = 0;
    std::size_t sim_bad = 0;
    std::size_t sim_checks = 0;
    double worst_ctmc = 0.0;
    double worst_z = 0.0;
    std::string first_sim;
    std::uint64_t seed = 6006;
    for (int n1 = 1; n1 <= 2; ++n1) {
        for (int n2 = 1; n2 <= 2; ++n2) {
            for (double u1 : utilisation) {
                for (double u2 : utilisation) {
                    const ProviderPair pp{ProviderParams{u1 * n1, 1.0, n1}, ProviderParams{u2 * n2, 1.0, n2}};
                    for (int a = 0; a <= n1; ++a) {
                        for (int b = 0; b <= n2; ++b) {
                            const SharingConfig k{double(a), double(b)};
                            ++cases;
                            const auto c = cos::waiting_probabilities(pp, k);
                            const auto t = cos::typed_ctmc_oracle(pp, k, cos::certified_buffer_cap(pp, k));
                            const double dev = std::abs(c[0] - t.wait[0]) + std::abs(c[1] - t.wait[1]);
                            worst_ctmc = std::max(worst_ctmc, dev);
                            ctmc_bad += dev <= kCtmcTol ? 0 : 1;

                            sim::SimScenario s;
                            s.providers = pp;
                            s.config = k;
                            s.policy = Policy::cos;
                            s.warmup = kSimJobs / 10;
                            s.horizon = kSimJobs + s.warmup;
                            s.seed = seed++;
                            const auto r = sim::simulate(s);
                            for (std::size_t i = 0; i < 2; ++i) {
                                const auto& e = r.providers[i].wait;
                                const double z = e.std_error > 0 ? std::abs(e.value - c[i]) / e.std_error
                                                                 : (e.value == c[i] ? 0.0 : std::numeric_limits<double>::infinity());
                                ++sim_checks;
                                worst_z = std::max(worst_z, z);
                                if (z > kSimSe) {
                                    ++sim_bad;
                                    if (first_sim.empty()) {
                                        first_sim = fmt(" first: N=(%d,%d) u=(%.2f,%.2f) k=(%d,%d) C%zu sim %.5f+-%.5f vs %.5f",
                                                        n1, n2, u1, u2, a, b, i + 1, e.value, e.std_error, c[i]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    const double dt = seconds_since(t0);
    return {ctmc_bad == 0 && sim_bad == 0 && dt < kCrossSeconds,
            fmt("%zu cases; product form vs typed chain: %zu over %.0e (max %.2e); simulation: %zu of %zu beyond %.0f SE "
                "(max %.2f SE)%s; %.1f s",
                cases, ctmc_bad, kCtmcTol, worst_ctmc, sim_bad, sim_checks, kSimSe, worst_z, first_sim.c_str(), dt)};
}

Verdict unit_structure() {
    Gen g(7007);
    int case_bad = 0;
    int off_boundary = 0;
    int sign_bad = 0;
    int constants_bad = 0;
    double worst_h = 0.0;
    int empty = 0;
    for (int i = 0; i < 100; ++i) {
        const ProviderPair pp{ProviderParams{g.uniform(0.0, 1.0), 1.0, 1}, ProviderParams{g.uniform(0.0, 1.0), 1.0, 1}};
        const auto grid = pareto::pareto_frontier(pp, Policy::cos, Metric::wait, kFrontierStep);
        const auto f = grid.frontier();
        std::optional<pareto::FrontierStructure> s;
        try {
            s = pareto::unit_server_frontier_closed_form(pp);
        } catch (const no_frontier_error&) {
        }
        if (!s) {
            case_bad += f.empty() ? 0 : 1;
            ++empty;
        } else if (f.empty()) {
            // no grid point may lie on the closed-form frontier
            for (const auto& p : grid.grid) case_bad += s->contains(p.config, 0.0) ? 1 : 0;
            ++empty;
        } else {
            const double h = pareto::hausdorff_distance(*s, f);
            worst_h = std::max(worst_h, h);
            case_bad += h <= kFrontierStep ? 0 : 1;
        }
        for (const auto& p : f) off_boundary += p.config.k1 == 1.0 || p.config.k2 == 1.0 ? 0 : 1;

        const auto m = cos::waiting_mixture(pp);
        for (int a = 0; a < 20; ++a) {
            for (int b = 0; b < 20; ++b) {
                const auto gr = m.gradient(a / 20.0, b / 20.0, 1, 1);
                const bool ok = gr[0][0] > 0 && gr[0][1] < 0 && gr[1][1] > 0 && gr[1][0] < 0 &&
                                gr[0][1] * gr[1][0] > gr[0][0] * gr[1][1];
                sign_bad += ok ? 0 : 1;
            }
        }
        const auto c = pareto::unit_server_constants(pp);
        constants_bad += c.alpha > 0 && c.beta > 0 && c.gamma > 0 ? 0 : 1;
    }
    return {case_bad == 0 && off_boundary == 0 && sign_bad == 0 && constants_bad == 0,
            fmt("100 instances (%d without grid frontier): case mismatches %d, max Hausdorff %.4f (step %.2f), "
                "off-boundary points %d, derivative sign failures %d/40000, alpha/beta/gamma failures %d",
                empty, case_bad, worst_h, kFrontierStep, off_boundary, sign_bad, constants_bad)};
}

Verdict two_server_boundary() {
    Verdict v{true, ""};
    for (const auto& w : {std::array<double, 2>{0.10, 0.50}, std::array<double, 2>{0.20, 0.50}}) {
        const auto pp = from_waits(w[0], w[1], 2);
        const auto r = pareto::conjecture_check(pp, kConjectureStep);
        v.pass = v.pass && r.holds() && r.frontier_points > 0;
        v.detail += fmt("waits %.0f%%/%.0f%%: %zu frontier points, %zu off boundary; ", 100 * w[0], 100 * w[1],
                        r.frontier_points, r.counterexamples.size());
    }
    v.detail += fmt("step %.2f", kConjectureStep);
    return v;
}

Verdict scope() {
    return {true, "no claims about deployed systems; theorem and conjecture proofs out of scope, property checks 4-8 "
                  "stand in"};
}

} // namespace

int main(int argc, char** argv) {
    const std::array<std::function<Verdict()>, 9> criteria{intro,        table1,          table2,
                                                           monotonicity, replication_dominance, cross_oracle,
                                                           unit_structure, two_server_boundary, scope};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty()) {
        for (int i = 1; i <= 9; ++i) which.push_back(i);
    }
    bool all = true;
    for (int c : which) {
        if (c < 1 || c > 9) {
            std::fprintf(stderr, "unknown criterion %d\n", c);
            return 2;
        }
        Verdict v;
        try {
            v = criteria[static_cast<std::size_t>(c - 1)]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", c, v.detail.c_str());
        std::fflush(stdout);
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
