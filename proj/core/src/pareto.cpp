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

#include "pooling/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pooling/coc_bf.hpp"
#include "pooling/cos/product_form.hpp"
#include "pooling/dominance.hpp"
#include "pooling/errors.hpp"

namespace pooling::pareto {

namespace {

constexpr double kDominanceTol = 1e-12;

std::vector<double> fractions(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw domain_error("grid step must lie in (0, 1]");
    const auto m = static_cast<int>(std::floor(1.0 / step + 1e-9));
    std::vector<double> f;
    f.reserve(static_cast<std::size_t>(m) + 1);
    for (int j = 0; j < m; ++j) f.push_back(j * step);
    if (f.empty() || f.back() < 1.0 - 1e-12) f.push_back(1.0);
    return f;
}

using Corners = std::array<std::array<double, 2>, 4>;

Corners unit_corners(const cos::CornerMixture& m) {
    return {m.corner(0, 0), m.corner(1, 0), m.corner(0, 1), m.corner(1, 1)};
}

FrontierStructure structure_from_corners(const Corners& c) {
    const auto& c00 = c[0];
    const auto& c10 = c[1];
    const auto& c01 = c[2];
    const auto& c11 = c[3];
    FrontierStructure s;
    s.corners = c;
    const bool first = c11[0] < c00[0];
    const bool second = c11[1] < c00[1];
    // C1 on (1, x) meets C1(0,0); C2 on (x, 1) meets C2(0,0).
    const double first_ir = (c10[0] - c00[0]) / (c10[0] - c11[0]);
    const double second_ir = (c01[1] - c00[1]) / (c01[1] - c11[1]);
    if (first && second) {
        s.kind = FrontierCase::both_benefit;
        s.x1_hat = second_ir;
        s.x2_hat = first_ir;
        s.lower = 0.0;
        s.upper = 1.0;
    } else if (first) {
        s.kind = FrontierCase::first_benefits_only;
        s.lower = first_ir;
        s.upper = (c00[1] - c10[1]) / (c11[1] - c10[1]);
        s.upper_equality = c11[1] == c00[1];
    } else if (second) {
        s.kind = FrontierCase::second_benefits_only;
        s.lower = second_ir;
        s.upper = (c00[0] - c01[0]) / (c11[0] - c01[0]);
        s.upper_equality = c11[0] == c00[0];
    } else {
        throw no_frontier_error("neither provider gains from full pooling");
    }
    if (s.kind != FrontierCase::both_benefit && !(s.lower < s.upper)) {
        throw no_frontier_error("empty individually rational interval");
    }
    return s;
}

double dist(const SharingConfig& a, const SharingConfig& b) { return std::hypot(a.k1 - b.k1, a.k2 - b.k2); }

double dist_to_segment(const SharingConfig& p, const SharingConfig& a, const SharingConfig& b) {
    const double dx = b.k1 - a.k1;
    const double dy = b.k2 - a.k2;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.k1 - a.k1) * dx + (p.k2 - a.k2) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, {a.k1 + t * dx, a.k2 + t * dy});
}

SharingConfig lerp(const SharingConfig& a, const SharingConfig& b, double t) {
    return {a.k1 + t * (b.k1 - a.k1), a.k2 + t * (b.k2 - a.k2)};
}

} // namespace

MetricSurface MetricSurface::make(const ProviderPair& pp, Policy policy, Metric metric) {
    validate(pp);
    MetricSurface s;
    s.servers_ = {pp[0].servers, pp[1].servers};
    s.policy_ = policy;
    s.metric_ = metric;
    if (policy == Policy::coc) {
        if (metric == Metric::wait) {
            throw config_error("no analytic waiting probability for cancel-on-complete; use metric delay or simulate");
        }
        s.eval_ = [pp](const SharingConfig& k) { return coc::mean_response_coc(pp, k); };
        return s;
    }
    s.mixture_.emplace(metric == Metric::wait ? cos::waiting_mixture(pp) : cos::delay_mixture(pp));
    return s;
}

std::array<double, 2> MetricSurface::operator()(const SharingConfig& k) const {
    if (mixture_) return (*mixture_)(k);
    return eval_(k);
}

std::vector<ParetoPoint> FrontierResult::frontier() const {
    std::vector<ParetoPoint> out;
    for (const auto& p : grid) {
        if (p.on_frontier()) out.push_back(p);
    }
    std::stable_sort(out.begin(), out.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.metrics[0] != b.metrics[0]) return a.metrics[0] < b.metrics[0];
        if (a.config.k1 != b.config.k1) return a.config.k1 < b.config.k1;
        return a.config.k2 < b.config.k2;
    });
    return out;
}

double default_grid_step(const ProviderPair& pp) {
    return pp[0].servers == 1 && pp[1].servers == 1 ? 0.01 : 0.05;
}

std::vector<SharingConfig> configuration_grid(const ProviderPair& pp, bool continuous, double grid_step) {
    std::vector<SharingConfig> out;
    if (!continuous) {
        for (int a = 0; a <= pp[0].servers; ++a) {
            for (int b = 0; b <= pp[1].servers; ++b) {
                out.push_back({static_cast<double>(a), static_cast<double>(b)});
            }
        }
        return out;
    }
    const auto f = fractions(grid_step);
    for (double a : f) {
        for (double b : f) {
            const double k1 = a == 1.0 ? pp[0].servers : a * pp[0].servers;
            const double k2 = b == 1.0 ? pp[1].servers : b * pp[1].servers;
            out.push_back({k1, k2});
        }
    }
    return out;
}

bool first_order_improvable(const cos::CornerMixture& mixture, const SharingConfig& k) {
    const auto n = mixture.servers();
    for (int s1 : {1, -1}) {
        for (int s2 : {1, -1}) {
            const bool f1 = s1 > 0 ? k.k1 < n[0] : k.k1 > 0.0;
            const bool f2 = s2 > 0 ? k.k2 < n[1] : k.k2 > 0.0;
            if (!f1 && !f2) continue;
            const auto g = mixture.gradient(k.k1, k.k2, s1, s2);
            const double scale =
                std::max({std::abs(g[0][0]), std::abs(g[0][1]), std::abs(g[1][0]), std::abs(g[1][1])});
            const double eps = 1e-12 * scale;
            std::vector<std::array<double, 2>> cand;
            const std::array<double, 2> ea{static_cast<double>(s1), 0.0};
            const std::array<double, 2> eb{0.0, static_cast<double>(s2)};
            if (f1) cand.push_back(ea);
            if (f2) cand.push_back(eb);
            if (f1 && f2) {
                std::vector<double> phis{0.0, std::numbers::pi / 2};
                for (const auto& gi : g) {
                    const double a = gi[0] * ea[0] + gi[1] * ea[1];
                    const double b = gi[0] * eb[0] + gi[1] * eb[1];
                    if (a * b < 0.0) phis.push_back(std::atan(-a / b));
                }
                std::sort(phis.begin(), phis.end());
                for (std::size_t j = 0; j + 1 < phis.size(); ++j) {
                    const double m = 0.5 * (phis[j] + phis[j + 1]);
                    cand.push_back({std::cos(m) * ea[0] + std::sin(m) * eb[0],
                                    std::cos(m) * ea[1] + std::sin(m) * eb[1]});
                }
            }
            for (const auto& d : cand) {
                const double d1 = g[0][0] * d[0] + g[0][1] * d[1];
                const double d2 = g[1][0] * d[0] + g[1][1] * d[1];
                if (d1 < -eps && d2 < -eps) return true;
            }
        }
    }
    return false;
}

FrontierResult pareto_frontier(const ProviderPair& pp, Policy policy, Metric metric, double grid_step) {
    return pareto_frontier(MetricSurface::make(pp, policy, metric), grid_step);
}

FrontierResult pareto_frontier(const MetricSurface& surface, double grid_step) {
    FrontierResult res;
    res.policy = surface.policy();
    res.metric = surface.metric();
    res.grid_step = grid_step;
    const auto srv = surface.servers();
    ProviderPair shape{ProviderParams{1.0, 1.0, srv[0]}, ProviderParams{1.0, 1.0, srv[1]}};
    const auto configs = configuration_grid(shape, surface.continuous(), grid_step);

    std::vector<Objective> values;
    values.reserve(configs.size());
    for (const auto& k : configs) values.push_back(surface(k));
    res.baseline = surface(no_sharing());

    const auto mask = undominated_mask(values, kDominanceTol);
    res.grid.reserve(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        ParetoPoint p;
        p.config = configs[i];
        p.metrics = values[i];
        p.individually_rational = individually_rational(values[i], res.baseline);
        p.undominated = mask[i];
        if (p.undominated && surface.continuous() && first_order_improvable(*surface.mixture(), p.config)) {
            p.undominated = false;
        }
        const bool origin = configs[i] == no_sharing();
        if (!origin && (values[i][0] == res.baseline[0] || values[i][1] == res.baseline[1])) {
            res.indifferent.push_back(configs[i]);
        }
        res.grid.push_back(p);
    }
    return res;
}

std::string_view to_string(FrontierCase c) noexcept {
    switch (c) {
    case FrontierCase::both_benefit: return "both_benefit";
    case FrontierCase::first_benefits_only: return "first_benefits_only";
    case FrontierCase::second_benefits_only: return "second_benefits_only";
    }
    return "both_benefit";
}

std::vector<Arm> FrontierStructure::arms() const {
    switch (kind) {
    case FrontierCase::both_benefit:
        return {Arm{{x1_hat, 1.0}, {1.0, 1.0}, true, false}, Arm{{1.0, 1.0}, {1.0, x2_hat}, false, true}};
    case FrontierCase::first_benefits_only:
        return {Arm{{1.0, upper}, {1.0, lower}, true, true}};
    case FrontierCase::second_benefits_only:
        return {Arm{{lower, 1.0}, {upper, 1.0}, true, true}};
    }
    return {};
}

bool FrontierStructure::contains(const SharingConfig& k, double tol) const {
    switch (kind) {
    case FrontierCase::both_benefit:
        return (std::abs(k.k2 - 1.0) <= tol && k.k1 > x1_hat - tol && k.k1 <= 1.0 + tol) ||
               (std::abs(k.k1 - 1.0) <= tol && k.k2 > x2_hat - tol && k.k2 <= 1.0 + tol);
    case FrontierCase::first_benefits_only:
        return std::abs(k.k1 - 1.0) <= tol && k.k2 > lower - tol && k.k2 < upper + tol;
    case FrontierCase::second_benefits_only:
        return std::abs(k.k2 - 1.0) <= tol && k.k1 > lower - tol && k.k1 < upper + tol;
    }
    return false;
}

double FrontierStructure::length() const {
    double len = 0.0;
    for (const auto& a : arms()) len += dist(a.from, a.to);
    return len;
}

FrontierStructure unit_server_frontier_closed_form(const ProviderPair& pp) {
    validate(pp);
    if (pp[0].servers != 1 || pp[1].servers != 1) throw domain_error("closed-form frontier needs N1 = N2 = 1");
    return structure_from_corners(unit_corners(cos::waiting_mixture(pp)));
}

double hausdorff_distance(const FrontierStructure& s, std::span<const ParetoPoint> points) {
    if (points.empty()) return std::numeric_limits<double>::infinity();
    const auto arms = s.arms();
    double d = 0.0;
    for (const auto& p : points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : arms) best = std::min(best, dist_to_segment(p.config, a.from, a.to));
        d = std::max(d, best);
    }
    constexpr int samples = 2000;
    for (const auto& a : arms) {
        for (int j = 0; j <= samples; ++j) {
            const auto q = lerp(a.from, a.to, static_cast<double>(j) / samples);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : points) best = std::min(best, dist(q, p.config));
            d = std::max(d, best);
        }
    }
    return d;
}

DirectionCertificate boundary_direction_check(const ProviderPair& pp, const SharingConfig& k) {
    validate(pp);
    if (pp[0].servers != 1 || pp[1].servers != 1) throw domain_error("direction check needs N1 = N2 = 1");
    if (!(k.k1 >= 0.0 && k.k1 < 1.0 && k.k2 >= 0.0 && k.k2 < 1.0)) {
        throw domain_error("direction check needs an interior configuration");
    }
    const auto m = cos::waiting_mixture(pp);
    DirectionCertificate c;
    c.gradient = m.gradient(k.k1, k.k2, 1, 1);
    const auto& g = c.gradient;
    c.theta_low = -g[0][0] / g[0][1];
    c.theta_high = -g[1][0] / g[1][1];
    c.theta = 0.5 * (c.theta_low + c.theta_high);
    c.cross_term = g[0][1] * g[1][0] - g[0][0] * g[1][1];
    return c;
}

UnitServerConstants unit_server_constants(const ProviderPair& pp) {
    validate(pp);
    if (pp[0].servers != 1 || pp[1].servers != 1) throw domain_error("constants defined for N1 = N2 = 1");
    const auto m = cos::waiting_mixture(pp);
    const auto c = unit_corners(m);
    const auto& c00 = c[0];
    const auto& c10 = c[1];
    const auto& c01 = c[2];
    const auto& c11 = c[3];
    const double l1 = pp[0].load();
    const double l2 = pp[1].load();

    UnitServerConstants u;
    u.omega1 = (l1 + l2 + l2 * l2) * (1 - l1) + l1 * (1 - l1 * l2) + 3 * l2 + l2 * l2;
    u.omega2 = (l1 + l2 + l1 * l1) * (1 - l2) + l2 * (1 - l1 * l2) + 3 * l1 + l1 * l1;
    u.alpha = (c10[0] - c00[0]) * (c01[1] - c11[1]) - (c11[0] - c01[0]) * (c00[1] - c10[1]);
    u.beta = (c10[0] - c11[0]) * (c01[1] - c00[1]) - (c00[0] - c01[0]) * (c11[1] - c10[1]);
    u.gamma = (c00[0] - c01[0]) * (c00[1] - c10[1]) - (c10[0] - c00[0]) * (c01[1] - c00[1]);
    const double oo = u.omega1 * u.omega2;
    const double s = 2 + l1 + l2;
    u.alpha_printed = 2 * (1 - l1) * (2 - l1 - l2) * (2 + l1 - l2 + l1 * l1 + l1 * l2) / (s * oo);
    u.beta_printed = 2 * (1 - l2) * (2 - l1 - l2) * (2 + l2 - l1 + l2 * l2 + l1 * l2) / (s * oo);
    u.gamma_printed = 4 * l1 * l2 * (1 - l1) * (1 - l2) * (2 - l1 - l2) / oo;

    u.c1_differences = {c10[0] - c00[0], c11[0] - c01[0], c01[0] - c00[0], c11[0] - c10[0]};
    const double sum = l1 + l2;
    u.c1_differences_closed = {
        (2 - l1 + l2 - l1 * l2 - l1 * l1) * l2 * l2 / u.omega1,
        (2 - l1 - l2) * l2 * sum * sum / (s * u.omega2),
        l1 * (1 - l2) * (l1 * (l2 - 4) + l2 * (l2 - 2)) / u.omega2,
        (l1 * l2 + l2 * l2 + 2 * l1 - 4) * sum * sum / (s * u.omega1),
    };
    return u;
}

ConjectureReport conjecture_check(const ProviderPair& pp, double grid_step) {
    const auto res = pareto_frontier(pp, Policy::cos, Metric::wait, grid_step);
    ConjectureReport rep;
    rep.grid_step = grid_step;
    const auto f = res.frontier();
    rep.frontier_points = f.size();
    for (const auto& p : f) {
        const bool b1 = std::abs(p.config.k1 - pp[0].servers) <= grid_step * pp[0].servers + 1e-9;
        const bool b2 = std::abs(p.config.k2 - pp[1].servers) <= grid_step * pp[1].servers + 1e-9;
        if (!b1 && !b2) rep.counterexamples.push_back(p);
    }
    return rep;
}

KsbsResult ksbs(const ProviderPair& pp, Policy policy, Metric metric, double grid_step) {
    const auto surface = MetricSurface::make(pp, policy, metric);
    return ksbs(surface, pareto_frontier(surface, grid_step));
}

KsbsResult ksbs(const MetricSurface& surface, const FrontierResult& frontier) {
    const auto pts = frontier.frontier();
    if (pts.empty()) throw no_frontier_error("empty Pareto frontier");

    KsbsResult out;
    out.baseline = frontier.baseline;
    out.ideal = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const auto& p : frontier.grid) {
        out.ideal[0] = std::min(out.ideal[0], p.metrics[0]);
        out.ideal[1] = std::min(out.ideal[1], p.metrics[1]);
    }
    const auto& b0 = out.baseline;
    const double u1 = b0[0] - out.ideal[0];
    const double u2 = b0[1] - out.ideal[1];
    auto gap = [&](const std::array<double, 2>& v) { return u2 * (b0[0] - v[0]) - u1 * (b0[1] - v[1]); };

    std::vector<SharingConfig> path;
    const auto srv = surface.servers();
    if (surface.continuous() && srv[0] == 1 && srv[1] == 1 && surface.metric() == Metric::wait) {
        const auto s = structure_from_corners(unit_corners(*surface.mixture()));
        for (const auto& a : s.arms()) {
            if (path.empty() || !(path.back() == a.from)) path.push_back(a.from);
            path.push_back(a.to);
        }
    } else {
        for (const auto& p : pts) path.push_back(p.config);
    }

    std::vector<double> g(path.size());
    for (std::size_t j = 0; j < path.size(); ++j) g[j] = gap(surface(path[j]));

    SharingConfig best = path.front();
    std::size_t roots = 0;
    bool found = false;
    for (std::size_t j = 0; j < path.size(); ++j) {
        if (g[j] == 0.0) {
            if (!found) best = path[j];
            found = true;
            ++roots;
            continue;
        }
        if (j + 1 < path.size() && g[j + 1] != 0.0 && (g[j] > 0.0) != (g[j + 1] > 0.0)) {
            // orient by a swap-invariant key so mirrored problems bisect identically
            SharingConfig a = path[j];
            SharingConfig b = path[j + 1];
            bool lo_positive = g[j] > 0.0;
            auto key = [](const SharingConfig& k) {
                return std::pair{std::max(k.k1, k.k2), std::min(k.k1, k.k2)};
            };
            if (key(b) < key(a)) {
                std::swap(a, b);
                lo_positive = !lo_positive;
            }
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double v = gap(surface(lerp(a, b, mid)));
                if (v == 0.0) {
                    lo = hi = mid;
                    break;
                }
                ((v > 0.0) == lo_positive ? lo : hi) = mid;
            }
            if (!found) best = lerp(a, b, 0.5 * (lo + hi));
            found = true;
            ++roots;
        }
    }
    if (!found) {
        // Single-point frontier or no sign change: closest point to the ratio line.
        std::size_t arg = 0;
        for (std::size_t j = 1; j < path.size(); ++j) {
            if (std::abs(g[j]) < std::abs(g[arg])) arg = j;
        }
        best = path[arg];
        roots = 1;
    }

    out.roots = roots;
    out.point.config = best;
    out.point.metrics = surface(best);
    out.point.individually_rational = individually_rational(out.point.metrics, b0);
    out.point.undominated = true;
    const double ratio = (b0[0] - out.point.metrics[0]) / (b0[1] - out.point.metrics[1]);
    out.residual = std::abs(ratio - u1 / u2);
    return out;
}

} // namespace pooling::pareto
