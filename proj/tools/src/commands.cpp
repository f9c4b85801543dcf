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

#include "pooling/cli/commands.hpp"

#include <spdlog/spdlog.h>

#include <fstream>
#include <ostream>

#include "pooling/coc_bf.hpp"
#include "pooling/cos/assignment_rates.hpp"
#include "pooling/cos/mixture.hpp"
#include "pooling/cos/product_form.hpp"
#include "pooling/cos/typed_ctmc.hpp"
#include "pooling/desim.hpp"
#include "pooling/errors.hpp"

namespace pooling::cli {

namespace {

const std::vector<std::string> kFrontierHeader{"k1", "k2", "B1", "B2", "undominated", "is_ksbs"};

std::vector<SharingConfig> configs_or_default(const StudyConfig& cfg) {
    if (!cfg.configs.empty()) return cfg.configs;
    return {no_sharing(), full_sharing(cfg.providers)};
}

double grid_step(const StudyConfig& cfg) {
    return cfg.grid_step ? *cfg.grid_step : pareto::default_grid_step(cfg.providers);
}

sim::SimScenario scenario(const StudyConfig& cfg, const SimSettings& s, const RunOptions& opt) {
    sim::SimScenario scn;
    scn.providers = cfg.providers;
    scn.policy = cfg.policy;
    scn.horizon = s.horizon;
    scn.warmup = s.warmup ? *s.warmup : s.horizon / 10;
    scn.seed = opt.seed ? *opt.seed : s.seed;
    scn.replications = s.replications;
    scn.batches = s.batches;
    scn.dispatch = s.dispatch;
    return scn;
}

sim::SimResult run_sim(const StudyConfig& cfg, const SimSettings& s, const RunOptions& opt, const SharingConfig& k) {
    auto scn = scenario(cfg, s, opt);
    spdlog::info("simulating {} at k=({}, {}), {} jobs x {} replications", to_string(cfg.policy), k.k1, k.k2,
                 scn.horizon, scn.replications);
    if (k.integral()) {
        scn.config = k;
        return sim::simulate(scn, opt.jobs);
    }
    return sim::simulate_mixed(scn, k.k1, k.k2, s.switch_epochs, opt.jobs);
}

void dump_rates(const StudyConfig& cfg, const SharingConfig& k, const RunOptions& opt) {
    if (!opt.dump_rates || cfg.policy != Policy::cos || !k.integral()) return;
    const auto table = cos::solve_assignment_rates(cfg.providers, k);
    auto path = *opt.dump_rates;
    if (configs_or_default(cfg).size() > 1) {
        path.replace_filename(path.stem().string() + "_" + std::to_string(k.k1_int()) + "_" +
                              std::to_string(k.k2_int()) + path.extension().string());
    }
    std::ofstream os(path);
    if (!os) throw config_error(path.string() + ": cannot write rate table");
    table.write(os);
    spdlog::info("wrote assignment rates to {}", path.string());
}

void printed_sums(const StudyConfig& cfg, const SharingConfig& k, const RunOptions& opt) {
    if (!opt.printed_sums || cfg.policy != Policy::cos || !k.integral() || !opt.diagnostics) return;
    const auto c = cos::printed_sum_cross_check(cfg.providers, k);
    auto& os = *opt.diagnostics;
    os << "printed-sum check k=(" << k.k1_int() << "," << k.k2_int() << "):"
       << " only1 path=" << format_double(c.only_blocked_path[0])
       << " printed=" << format_double(c.only_blocked_printed[0])
       << " only2 path=" << format_double(c.only_blocked_path[1])
       << " printed=" << format_double(c.only_blocked_printed[1])
       << " both path=" << format_double(c.both_blocked_path)
       << " printed=" << format_double(c.both_blocked_printed)
       << " max_discrepancy=" << format_double(c.max_discrepancy()) << '\n';
}

} // namespace

MetricPair analytic_metrics(const ProviderPair& pp, Policy policy, Metric metric, const SharingConfig& k) {
    MetricPair out;
    out.metric = metric;
    if (policy == Policy::coc) {
        if (metric == Metric::wait) {
            throw config_error("no analytic waiting probability for cancel-on-complete; use metric delay or simulate");
        }
        validate(k, pp, true);
        out.value = coc::mean_response_coc(pp, k);
        out.provenance = Provenance::analytic;
        return out;
    }
    if (metric == Metric::wait) {
        out.value = cos::mixed_config_metrics(pp, k.k1, k.k2);
        out.provenance = Provenance::analytic;
    } else {
        out.value = cos::mixed_config_delay(pp, k.k1, k.k2);
        out.provenance = Provenance::ctmc;
    }
    return out;
}

Table cmd_metrics(const StudyConfig& cfg, const RunOptions& opt) {
    Table t;
    t.header = {"policy", "k1", "k2", "metric", "source", "B1", "B2", "B1_stderr", "B2_stderr"};
    const auto policy = std::string(to_string(cfg.policy));
    const auto metric = std::string(to_string(cfg.metric));
    for (const auto& k : configs_or_default(cfg)) {
        dump_rates(cfg, k, opt);
        printed_sums(cfg, k, opt);
        const bool analytic = !(cfg.policy == Policy::coc && cfg.metric == Metric::wait);
        if (analytic) {
            const auto m = analytic_metrics(cfg.providers, cfg.policy, cfg.metric, k);
            t.add({policy, k.k1, k.k2, metric, std::string(to_string(m.provenance)), m[0], m[1], std::monostate{},
                   std::monostate{}});
        } else if (!cfg.sim) {
            throw config_error("no analytic waiting probability for cancel-on-complete; add a 'sim' block");
        }
        if (cfg.sim) {
            const auto r = run_sim(cfg, *cfg.sim, opt, k);
            const auto pick = [&](std::size_t i) -> const sim::Estimate& {
                return cfg.metric == Metric::wait ? r.providers[i].wait : r.providers[i].delay;
            };
            t.add({policy, k.k1, k.k2, metric, std::string(to_string(Provenance::simulation)), pick(0).value,
                   pick(1).value, pick(0).std_error, pick(1).std_error});
        }
    }
    return t;
}

Table frontier_table(const pareto::FrontierResult& fr, const pareto::KsbsResult* ksbs) {
    Table t;
    t.header = kFrontierHeader;
    for (const auto& p : fr.grid) {
        t.add({p.config.k1, p.config.k2, p.metrics[0], p.metrics[1], p.on_frontier(), false});
    }
    if (ksbs) {
        const auto& p = ksbs->point;
        t.add({p.config.k1, p.config.k2, p.metrics[0], p.metrics[1], p.on_frontier(), true});
    }
    return t;
}

Table cmd_frontier(const StudyConfig& cfg, const RunOptions&) {
    const auto surface = pareto::MetricSurface::make(cfg.providers, cfg.policy, cfg.metric);
    const auto fr = pareto::pareto_frontier(surface, grid_step(cfg));
    spdlog::info("frontier: {} grid points, {} on the frontier", fr.grid.size(), fr.frontier().size());
    std::optional<pareto::KsbsResult> k;
    if (!fr.frontier().empty()) k = pareto::ksbs(surface, fr);
    return frontier_table(fr, k ? &*k : nullptr);
}

Table cmd_ksbs(const StudyConfig& cfg, const RunOptions& opt) {
    const auto surface = pareto::MetricSurface::make(cfg.providers, cfg.policy, cfg.metric);
    const auto fr = pareto::pareto_frontier(surface, grid_step(cfg));
    const auto k = pareto::ksbs(surface, fr);
    if (!k.unique() && opt.diagnostics) *opt.diagnostics << "ksbs: " << k.roots << " roots found\n";
    spdlog::info("ksbs residual {}", k.residual);
    Table t;
    t.header = kFrontierHeader;
    const auto& p = k.point;
    t.add({p.config.k1, p.config.k2, p.metrics[0], p.metrics[1], p.on_frontier(), true});
    return t;
}

Table cmd_simulate(const StudyConfig& cfg, const RunOptions& opt) {
    const SimSettings s = cfg.sim ? *cfg.sim : SimSettings{};
    Table t;
    t.header = {"policy", "k1", "k2", "metric", "estimate", "stderr", "ci_lo", "ci_hi", "jobs", "seed"};
    const auto policy = std::string(to_string(cfg.policy));
    for (const auto& k : cfg.configs.empty() ? std::vector<SharingConfig>{no_sharing()} : cfg.configs) {
        const auto r = run_sim(cfg, s, opt, k);
        for (std::size_t i = 0; i < 2; ++i) {
            const auto& p = r.providers[i];
            const std::uint64_t seed = r.seed;
            const std::uint64_t jobs = p.jobs;
            const std::string suffix = "_" + std::to_string(i + 1);
            for (const auto& [name, e] : {std::pair{"wait", &p.wait}, std::pair{"delay", &p.delay}}) {
                t.add({policy, k.k1, k.k2, std::string(name) + suffix, e->value, e->std_error, e->ci_low, e->ci_high,
                       jobs, seed});
            }
        }
    }
    return t;
}

} // namespace pooling::cli
