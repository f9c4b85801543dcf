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

#include "pooling/coc_bf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pooling/dominance.hpp"
#include "pooling/errors.hpp"

namespace pooling::coc {

namespace {

struct Derivative {
    double dG = 0.0;
    double G = 0.0;
};

// dG/drho_a with class a and class b in symmetric roles.
Derivative derivative(double ra, double ca, double rb, double cb, double c) {
    const double ga = ra / (ca - ra);
    const double gb = rb / (cb - rb);
    const double dga = ca / ((ca - ra) * (ca - ra));
    const double slack = c - ra - rb;
    const double num = ra * gb + rb * ga;
    const double both = num / slack;
    const double dboth = (gb + rb * dga) / slack + num / (slack * slack);
    return {dga + dboth, 1.0 + ga + gb + both};
}

void check_stability(double rho1, double rho2, const RateRegion& r) {
    if (rho1 < 0.0 || rho2 < 0.0) throw domain_error("loads must be nonnegative");
    if (!(rho1 < r.cap1) || !(rho2 < r.cap2) || !(rho1 + rho2 < r.cap_total)) {
        std::ostringstream os;
        os << "unstable: loads (" << rho1 << ", " << rho2 << ") outside capacity region (" << r.cap1 << ", "
           << r.cap2 << ", " << r.cap_total << ")";
        throw instability_error(os.str());
    }
}

// D_i; with cap_i = C the derivative reduces to 1/(C - rho1 - rho2) exactly.
double response(double ra, double ca, double rb, double cb, double c, double nu) {
    if (ca == c) return 1.0 / (nu * (c - ra - rb));
    const auto d = derivative(ra, ca, rb, cb, c);
    return d.dG / (nu * d.G);
}

RateRegion checked_region(const ProviderPair& pp, const SharingConfig& cfg) {
    validate(pp);
    validate(cfg, pp, true);
    auto r = rate_region(pp, cfg);
    check_stability(pp[0].load(), pp[1].load(), r);
    return r;
}

std::vector<double> fractions(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw domain_error("grid step must lie in (0, 1]");
    const auto m = static_cast<int>(std::floor(1.0 / step + 1e-9));
    std::vector<double> f;
    for (int j = 0; j < m; ++j) f.push_back(j * step);
    f.push_back(1.0);
    return f;
}

} // namespace

RateRegion rate_region(const ProviderPair& pp, const SharingConfig& cfg) {
    const double n1 = pp[0].servers;
    const double n2 = pp[1].servers;
    return {n1 + cfg.k2, n2 + cfg.k1, n1 + n2};
}

RateRegion single_server_region(double mu1, double mu2, const SharingConfig& cfg) {
    return {mu1 + cfg.k2, mu2 + cfg.k1, mu1 + mu2};
}

void validate(const RateRegion& r) {
    if (!(r.cap1 > 0.0 && r.cap2 > 0.0)) throw domain_error("capacities must be positive");
    const double eps = 1e-12 * r.cap_total;
    if (r.cap1 > r.cap_total + eps || r.cap2 > r.cap_total + eps || r.cap1 + r.cap2 < r.cap_total - eps) {
        throw domain_error("capacity region is not a polymatroid");
    }
}

NormalizationTerms normalization_terms(double rho1, double rho2, const RateRegion& region) {
    validate(region);
    check_stability(rho1, rho2, region);
    NormalizationTerms t;
    t.only1 = rho1 / (region.cap1 - rho1);
    t.only2 = rho2 / (region.cap2 - rho2);
    t.both = (rho1 * t.only2 + rho2 * t.only1) / (region.cap_total - rho1 - rho2);
    return t;
}

double normalization_closed_form(double rho1, double rho2, const RateRegion& region) {
    validate(region);
    check_stability(rho1, rho2, region);
    const double c = region.cap_total;
    const double bracket = (1.0 - rho1 / c) / (1.0 - rho1 / region.cap1) +
                           (1.0 - rho2 / c) / (1.0 - rho2 / region.cap2) - 1.0;
    return bracket / (1.0 - (rho1 + rho2) / c);
}

std::array<double, 2> mean_occupancy(double rho1, double rho2, const RateRegion& region) {
    validate(region);
    check_stability(rho1, rho2, region);
    const auto a = derivative(rho1, region.cap1, rho2, region.cap2, region.cap_total);
    const auto b = derivative(rho2, region.cap2, rho1, region.cap1, region.cap_total);
    return {rho1 * a.dG / a.G, rho2 * b.dG / b.G};
}

double normalization_G(const ProviderPair& pp, const SharingConfig& cfg) {
    const auto r = checked_region(pp, cfg);
    return normalization_closed_form(pp[0].load(), pp[1].load(), r);
}

double mean_response_coc(const ProviderPair& pp, const SharingConfig& cfg, Provider i) {
    return mean_response_coc(pp, cfg)[index(i)];
}

std::array<double, 2> mean_response_coc(const ProviderPair& pp, const SharingConfig& cfg) {
    const auto r = checked_region(pp, cfg);
    const double rho1 = pp[0].load();
    const double rho2 = pp[1].load();
    return {response(rho1, r.cap1, rho2, r.cap2, r.cap_total, pp[0].nu),
            response(rho2, r.cap2, rho1, r.cap1, r.cap_total, pp[1].nu)};
}

double mean_response_first_closed(const ProviderPair& pp, const SharingConfig& cfg) {
    const auto r = checked_region(pp, cfg);
    const double rho1 = pp[0].load();
    const double rho2 = pp[1].load();
    const double c = r.cap_total;
    const double h = (1.0 - rho1 / c) / (1.0 - rho1 / r.cap1) + (1.0 - rho2 / c) / (1.0 - rho2 / r.cap2) - 1.0;
    const double u = 1.0 - rho1 / r.cap1;
    const double inner = (1.0 - rho1 / c) / r.cap1 / (u * u) - (1.0 / c) / u;
    return (1.0 / (c - rho1 - rho2) + inner / h) / pp[0].nu;
}

double mean_response_overall(const ProviderPair& pp, const SharingConfig& cfg) {
    const auto r = checked_region(pp, cfg);
    const double rho1 = pp[0].load();
    const double rho2 = pp[1].load();
    const double c = r.cap_total;
    const double h = (1.0 - rho1 / c) / (1.0 - rho1 / r.cap1) + (1.0 - rho2 / c) / (1.0 - rho2 / r.cap2) - 1.0;
    auto l = [c](double rho, double cap) {
        const double u = 1.0 - rho / cap;
        return (rho / cap - rho / c) / (u * u);
    };
    const double in_system = (rho1 + rho2) / (c - rho1 - rho2) + (l(rho1, r.cap1) + l(rho2, r.cap2)) / h;
    return in_system / (pp[0].lambda + pp[1].lambda);
}

int bf_truncation(double rho1, double rho2, const RateRegion& region, double tail) {
    validate(region);
    check_stability(rho1, rho2, region);
    const double ratio =
        std::max({rho1 / region.cap1, rho2 / region.cap2, (rho1 + rho2) / region.cap_total});
    if (ratio <= 0.0) return 1;
    const double t = std::log(tail * (1.0 - ratio)) / std::log(ratio);
    const double cap = std::ceil(std::max(t, 1.0)) + 20.0;
    if (cap > 6000.0) throw truncation_error("balanced-fairness truncation exceeds 6000 per class");
    return static_cast<int>(cap);
}

BfOracleResult bf_occupancy_oracle(double rho1, double rho2, const RateRegion& region, int truncation) {
    validate(region);
    check_stability(rho1, rho2, region);
    if (truncation < 1) throw domain_error("truncation must be positive");
    const int t = truncation;
    const auto side = static_cast<std::size_t>(t + 1);
    std::vector<double> p(side * side, 0.0);
    auto at = [&](int a, int b) -> double& { return p[static_cast<std::size_t>(a) * side + b]; };

    // p(n) = Phi(n) rho^n, Phi from the polymatroid balance recursion.
    at(0, 0) = 1.0;
    for (int a = 0; a <= t; ++a) {
        for (int b = 0; b <= t; ++b) {
            if (a == 0 && b == 0) continue;
            if (b == 0) {
                at(a, 0) = rho1 * at(a - 1, 0) / region.cap1;
            } else if (a == 0) {
                at(0, b) = rho2 * at(0, b - 1) / region.cap2;
            } else {
                const double x = rho1 * at(a - 1, b);
                const double y = rho2 * at(a, b - 1);
                at(a, b) = std::max({x / region.cap1, y / region.cap2, (x + y) / region.cap_total});
            }
        }
    }

    double total = 0.0;
    double boundary = 0.0;
    for (int a = 0; a <= t; ++a) {
        for (int b = 0; b <= t; ++b) {
            total += at(a, b);
            if (a == t || b == t) boundary += at(a, b);
        }
    }

    BfOracleResult res;
    res.truncation = t;
    const double ratio =
        std::max({rho1 / region.cap1, rho2 / region.cap2, (rho1 + rho2) / region.cap_total});
    res.tail_estimate = boundary / total / (1.0 - ratio);
    if (res.tail_estimate > 1e-9) {
        std::ostringstream os;
        os << "truncation " << t << " leaves estimated tail mass " << res.tail_estimate;
        throw truncation_error(os.str());
    }

    double l1 = 0.0, l2 = 0.0, idle1 = 0.0, idle2 = 0.0;
    for (int a = 0; a <= t; ++a) {
        for (int b = 0; b <= t; ++b) {
            double& v = at(a, b);
            v /= total;
            l1 += a * v;
            l2 += b * v;
            if (a == 0) idle1 += v;
            if (b == 0) idle2 += v;
        }
    }
    res.mean_occupancy = {l1, l2};
    res.busy_probability = {1.0 - idle1, 1.0 - idle2};
    res.distribution = std::move(p);
    return res;
}

BfOracleResult bf_occupancy_oracle(const ProviderPair& pp, const RateRegion& region, int truncation) {
    return bf_occupancy_oracle(pp[0].load(), pp[1].load(), region, truncation);
}

std::vector<SharingConfig> pareto_coc(const ProviderPair& pp) {
    validate(pp);
    std::vector<SharingConfig> configs;
    std::vector<Objective> values;
    for (int a = 0; a <= pp[0].servers; ++a) {
        for (int b = 0; b <= pp[1].servers; ++b) {
            const SharingConfig k{static_cast<double>(a), static_cast<double>(b)};
            configs.push_back(k);
            values.push_back(mean_response_coc(pp, k));
        }
    }
    const Objective baseline = values.front();
    const auto fast = undominated_mask(values);
    const auto audit = undominated_mask_exhaustive(values);
    if (fast != audit) throw std::logic_error("dominance sweep disagrees with exhaustive audit");

    std::vector<SharingConfig> frontier;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (fast[i] && individually_rational(values[i], baseline)) frontier.push_back(configs[i]);
    }
    return frontier;
}

MetricPair single_server_metrics(double mu1, double mu2, const ProviderPair& pp, const SharingConfig& cfg,
                                 Metric metric) {
    if (!(mu1 > 0.0 && mu2 > 0.0)) throw domain_error("service capacities must be positive");
    for (std::size_t i = 0; i < 2; ++i) {
        if (!(pp[i].lambda > 0.0 && pp[i].nu > 0.0)) throw domain_error("rates must be positive");
    }
    const double mu[2] = {mu1, mu2};
    for (std::size_t i = 0; i < 2; ++i) {
        if (!(cfg[i] >= 0.0 && cfg[i] <= mu[i])) throw domain_error("k_i must lie in [0, mu_i]");
        if (!(pp[i].load() < mu[i])) throw instability_error("unstable: load >= mu_i");
    }
    const auto r = single_server_region(mu1, mu2, cfg);
    const double rho1 = pp[0].load();
    const double rho2 = pp[1].load();

    MetricPair out;
    out.metric = metric;
    out.provenance = Provenance::analytic;
    check_stability(rho1, rho2, r);
    if (metric == Metric::delay) {
        out.value = {response(rho1, r.cap1, rho2, r.cap2, r.cap_total, pp[0].nu),
                     response(rho2, r.cap2, rho1, r.cap1, r.cap_total, pp[1].nu)};
    } else {
        const auto t = normalization_terms(rho1, rho2, r);
        const double g = t.total();
        out.value = {1.0 - (1.0 + t.only2) / g, 1.0 - (1.0 + t.only1) / g};
    }
    return out;
}

std::vector<SharingConfig> single_server_frontier(double mu1, double mu2, const ProviderPair& pp, Metric metric,
                                                  double grid_step) {
    const auto f = fractions(grid_step);
    std::vector<SharingConfig> configs;
    std::vector<Objective> values;
    for (double a : f) {
        for (double b : f) {
            const SharingConfig k{a * mu1, b * mu2};
            configs.push_back(k);
            values.push_back(single_server_metrics(mu1, mu2, pp, k, metric).value);
        }
    }
    const Objective baseline = values.front();
    const auto mask = undominated_mask(values);
    std::vector<SharingConfig> frontier;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (mask[i] && individually_rational(values[i], baseline)) frontier.push_back(configs[i]);
    }
    return frontier;
}

} // namespace pooling::coc
