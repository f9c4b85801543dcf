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

#include "pooling/cos/typed_ctmc.hpp"

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "pooling/errors.hpp"

namespace pooling::cos {

namespace {

constexpr std::size_t kMaxNodes = 4'000'000;
constexpr int kMaxCap = 4000;

// Queue: run of a jobs of type h; if second, one job of the other type and then b i.i.d. tagged jobs.
// Scan nodes hold a known run h^a followed by b unread i.i.d. jobs.
struct Node {
    bool scan = false;
    int x1 = 0, x2 = 0, x31 = 0, x32 = 0;
    int h = 0;
    int a = 0;
    bool second = false;
    int b = 0;

    int queue() const { return h == 0 ? 0 : a + (second ? 1 + b : 0); }
    bool has(int t) const { return h != 0 && (h == t || second); }
    int busy(int t) const { return t == 1 ? x1 : x2; }
    int& busy(int t) { return t == 1 ? x1 : x2; }
    int& shared(int t) { return t == 1 ? x31 : x32; }
    int shared(int t) const { return t == 1 ? x31 : x32; }

    std::uint64_t key() const {
        std::uint64_t k = scan ? 1u : 0u;
        k = (k << 8) | static_cast<std::uint64_t>(x1);
        k = (k << 8) | static_cast<std::uint64_t>(x2);
        k = (k << 8) | static_cast<std::uint64_t>(x31);
        k = (k << 8) | static_cast<std::uint64_t>(x32);
        k = (k << 2) | static_cast<std::uint64_t>(h);
        k = (k << 12) | static_cast<std::uint64_t>(a);
        k = (k << 1) | (second ? 1u : 0u);
        k = (k << 12) | static_cast<std::uint64_t>(b);
        return k;
    }
};

class Builder {
public:
    Builder(const ProviderPair& pp, const ServerClasses& cls, const AssignmentRateTable& table, DispatchRule rule,
            int cap)
        : pp_(pp), cls_(cls), table_(table), rule_(rule), cap_(cap) {
        const double total = pp[0].lambda + pp[1].lambda;
        p_[1] = pp[0].lambda / total;
        p_[2] = pp[1].lambda / total;
    }

    void build() {
        id(Node{});
        while (!pending_.empty()) {
            const auto i = pending_.front();
            pending_.pop_front();
            const Node n = nodes_[i];
            if (n.scan) expand_scan(i, n);
            else expand(i, n);
        }
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Eigen::Triplet<double>>& triplets() const { return trips_; }
    const std::vector<double>& diagonal() const { return diag_; }

private:
    std::uint32_t id(const Node& n) {
        const auto [it, inserted] = ids_.try_emplace(n.key(), static_cast<std::uint32_t>(nodes_.size()));
        if (inserted) {
            if (nodes_.size() >= kMaxNodes) throw truncation_error("typed chain exceeds the state budget");
            nodes_.push_back(n);
            diag_.push_back(0.0);
            pending_.push_back(it->second);
        }
        return it->second;
    }

    void add(std::uint32_t from, const Node& to, double w) {
        if (w <= 0.0) return;
        const auto j = id(to);
        trips_.emplace_back(static_cast<int>(j), static_cast<int>(from), -w);
        if (!nodes_[from].scan) diag_[from] += w;
    }

    static void append(Node& m, int t) {
        if (m.h == 0) {
            m.h = t;
            m.a = 1;
        } else if (m.second) {
            ++m.b;
        } else if (t == m.h) {
            ++m.a;
        } else {
            m.second = true;
            m.b = 0;
        }
    }

    void extend(std::uint32_t from, Node ctx, int h, int a, int b, double w) {
        ctx.h = h;
        ctx.a = a;
        ctx.b = b;
        ctx.second = false;
        if (b == 0) {
            ctx.scan = false;
        } else {
            ctx.scan = true;
        }
        add(from, ctx, w);
    }

    void pop_head(std::uint32_t from, Node m, double w) {
        if (m.a > 1) {
            --m.a;
            add(from, m, w);
        } else if (!m.second) {
            m.h = 0;
            m.a = 0;
            m.b = 0;
            add(from, m, w);
        } else {
            extend(from, m, 3 - m.h, 1, m.b, w);
        }
    }

    void expand(std::uint32_t i, const Node& n) {
        const Occupancy x{n.x1, n.x2, n.x31 + n.x32};
        const double nu = pp_[0].nu;
        for (int t = 1; t <= 2; ++t) {
            const double lam = pp_[static_cast<std::size_t>(t - 1)].lambda;
            const Provider prov = t == 1 ? Provider::first : Provider::second;
            if (!cls_.blocks(x, prov)) {
                const auto dp = dispatch_probabilities(table_, x, prov, rule_);
                Node m = n;
                ++m.busy(t);
                add(i, m, lam * dp.dedicated);
                m = n;
                ++m.shared(t);
                add(i, m, lam * dp.shared);
            } else if (n.queue() < cap_) {
                Node m = n;
                append(m, t);
                add(i, m, lam);
            }
        }
        for (int t = 1; t <= 2; ++t) {
            const double rate = nu * n.busy(t);
            if (rate <= 0.0) continue;
            if (!n.has(t)) {
                Node m = n;
                --m.busy(t);
                add(i, m, rate);
            } else if (n.h == t) {
                pop_head(i, n, rate);
            } else {
                extend(i, n, n.h, n.a, n.b, rate);
            }
        }
        for (int u = 1; u <= 2; ++u) {
            const double rate = nu * n.shared(u);
            if (rate <= 0.0) continue;
            Node m = n;
            --m.shared(u);
            if (n.h == 0) {
                add(i, m, rate);
            } else {
                ++m.shared(n.h);
                pop_head(i, m, rate);
            }
        }
    }

    void expand_scan(std::uint32_t i, const Node& n) {
        diag_[i] = 1.0;
        Node stop = n;
        stop.scan = false;
        stop.second = true;
        stop.b = n.b - 1;
        add(i, stop, p_[3 - n.h]);
        extend(i, n, n.h, n.a + 1, n.b - 1, p_[n.h]);
    }

    const ProviderPair& pp_;
    const ServerClasses& cls_;
    const AssignmentRateTable& table_;
    DispatchRule rule_;
    int cap_;
    double p_[3] = {0.0, 0.0, 0.0};
    std::unordered_map<std::uint64_t, std::uint32_t> ids_;
    std::vector<Node> nodes_;
    std::deque<std::uint32_t> pending_;
    std::vector<Eigen::Triplet<double>> trips_;
    std::vector<double> diag_;
};

} // namespace

double max_alpha(const ProviderPair& pp, const SharingConfig& cfg) {
    validate(pp);
    const auto cls = server_classes(pp, cfg);
    double best = 0.0;
    for (std::size_t idx = 0; idx < cls.states(); ++idx) {
        const auto x = cls.occupancy(idx);
        if (x.size() == 0) continue;
        const double a = blocked_rate(x, pp, cls) / (x.size() * pp[0].nu);
        best = std::max(best, a);
    }
    if (!(best < 1.0)) throw instability_error("unstable: alpha_max >= 1");
    return best;
}

int certified_buffer_cap(const ProviderPair& pp, const SharingConfig& cfg, double tail) {
    if (!(tail > 0.0 && tail < 1.0)) throw domain_error("tail bound must lie in (0, 1)");
    const double a = max_alpha(pp, cfg);
    if (a <= 0.0) return 1;
    const double b = std::log(tail * (1.0 - a)) / std::log(a);
    int cap = std::max(1, static_cast<int>(std::ceil(b)));
    while (std::pow(a, cap) / (1.0 - a) >= tail) ++cap;
    if (cap > kMaxCap) throw truncation_error("certified queue cap exceeds the supported maximum");
    return cap;
}

TypedCtmcResult typed_ctmc_oracle(const ProviderPair& pp, const SharingConfig& cfg, int buffer_cap,
                                  DispatchRule rule) {
    validate(pp);
    if (pp[0].nu != pp[1].nu) throw domain_error("cancel-on-start analysis requires nu1 == nu2");
    if (buffer_cap < 1 || buffer_cap > kMaxCap) throw domain_error("queue cap outside [1, 4000]");
    const auto cls = server_classes(pp, cfg);
    if (cls.d1 > 255 || cls.d2 > 255 || cls.shared > 255) throw domain_error("typed chain supports at most 255 servers per class");

    TypedCtmcResult res;
    res.classes = cls;
    res.buffer_cap = buffer_cap;
    const double a = max_alpha(pp, cfg);
    res.tail_bound = std::pow(a, buffer_cap) / (1.0 - a);
    if (!(res.tail_bound < 1e-8)) {
        std::ostringstream os;
        os << "queue cap " << buffer_cap << " certifies tail " << res.tail_bound << ", need < 1e-8";
        throw truncation_error(os.str());
    }

    const auto table = solve_assignment_rates(pp, cfg);
    Builder builder(pp, cls, table, rule, buffer_cap);
    builder.build();
    const auto& nodes = builder.nodes();
    const auto n = static_cast<int>(nodes.size());

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(builder.triplets().size() + 2 * nodes.size());
    for (const auto& t : builder.triplets()) {
        if (t.row() != 0) trips.push_back(t);
    }
    // row 0 pins the empty state; normalized afterwards
    trips.emplace_back(0, 0, 1.0);
    for (int i = 1; i < n; ++i) trips.emplace_back(i, i, builder.diagonal()[static_cast<std::size_t>(i)]);
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(0) = 1.0;

    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
    solver.preconditioner().setDroptol(1e-3);
    solver.preconditioner().setFillfactor(20);
    solver.setTolerance(1e-14);
    solver.setMaxIterations(5000);
    solver.compute(m);
    Eigen::VectorXd z;
    if (solver.info() == Eigen::Success) z = solver.solve(rhs);
    if (solver.info() != Eigen::Success || !z.allFinite()) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(m);
        lu.factorize(m);
        if (lu.info() != Eigen::Success) throw singular_system_error("typed chain factorization failed");
        z = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !z.allFinite()) throw singular_system_error("typed chain solve failed");
    }
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!nodes[static_cast<std::size_t>(i)].scan) mass += z(i);
    }
    if (!(mass > 0.0)) throw singular_system_error("typed chain has no probability mass");
    res.residual = (m * z - rhs).cwiseAbs().maxCoeff() / mass;
    z /= mass;
    if (res.residual > 1e-9) {
        std::ostringstream os;
        os << "typed chain residual " << res.residual;
        throw singular_system_error(os.str());
    }

    const double p1 = pp[0].lambda / (pp[0].lambda + pp[1].lambda);
    const double ptype[3] = {0.0, p1, 1.0 - p1};
    res.occupancy.assign(cls.states(), 0.0);
    std::array<double, 2> dropped{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const auto& s = nodes[static_cast<std::size_t>(i)];
        if (s.scan) {
            ++res.scan_nodes;
            continue;
        }
        ++res.states;
        const double pr = z(i);
        const Occupancy x{s.x1, s.x2, s.x31 + s.x32};
        res.occupancy[cls.index(x)] += pr;
        for (int t = 1; t <= 2; ++t) {
            const auto ti = static_cast<std::size_t>(t - 1);
            if (cls.blocks(x, t == 1 ? Provider::first : Provider::second)) {
                res.wait[ti] += pr;
                if (s.queue() >= buffer_cap) dropped[ti] += pr;
            }
            double waiting = 0.0;
            if (s.h == t) waiting += s.a;
            if (s.second) waiting += (3 - s.h == t ? 1.0 : 0.0) + ptype[t] * s.b;
            res.mean_in_system[ti] += pr * (s.busy(t) + s.shared(t) + waiting);
        }
    }
    for (std::size_t t = 0; t < 2; ++t) {
        res.throughput[t] = pp[t].lambda * (1.0 - dropped[t]);
        res.delay[t] = res.mean_in_system[t] / res.throughput[t];
    }
    return res;
}

} // namespace pooling::cos
