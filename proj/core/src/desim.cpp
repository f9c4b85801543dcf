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

#include "pooling/desim.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pooling/cos/assignment_rates.hpp"
#include "pooling/errors.hpp"

namespace pooling::sim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

private:
    std::mt19937_64 eng_;
};

struct Phase {
    SharingConfig config;
    std::uint64_t jobs = 0;
};

// Per-batch sums for one replication.
class Accumulator {
public:
    Accumulator(const SimScenario& scn)
        : warmup_(scn.warmup), measured_(scn.horizon - scn.warmup), batches_(scn.batches) {
        for (auto& c : cells_) c.assign(static_cast<std::size_t>(batches_), {0.0, 0.0, 0.0});
    }

    void record(int type, std::uint64_t index, bool waited, double response) {
        if (index < warmup_) return;
        const auto b = static_cast<std::size_t>((index - warmup_) * static_cast<std::uint64_t>(batches_) / measured_);
        auto& cell = cells_[static_cast<std::size_t>(type - 1)][b];
        cell[0] += 1.0;
        cell[1] += waited ? 1.0 : 0.0;
        cell[2] += response;
    }

    const std::vector<std::array<double, 3>>& cells(std::size_t provider) const { return cells_[provider]; }

private:
    std::uint64_t warmup_;
    std::uint64_t measured_;
    int batches_;
    std::array<std::vector<std::array<double, 3>>, 2> cells_;
};

int server_class(int label, const ProviderPair& pp, const SharingConfig& k) {
    const int d1 = pp[0].servers - k.k1_int();
    const int end_shared = pp[0].servers + k.k2_int();
    if (label < d1) return 0;
    if (label < end_shared) return 2;
    return 1;
}

struct Arrivals {
    double next = 0.0;
    std::uint64_t count = 0;
    std::uint64_t seq = 0;
};

class CosEngine {
public:
    CosEngine(const SimScenario& scn, std::vector<Phase> phases, std::uint64_t seed)
        : scn_(scn), pp_(scn.providers), phases_(std::move(phases)), rng_(seed), acc_(scn) {
        m_ = pp_[0].servers + pp_[1].servers;
        cls_.assign(static_cast<std::size_t>(m_), 0);
        serving_.assign(static_cast<std::size_t>(m_), 0);
        done_at_.assign(static_cast<std::size_t>(m_), kInf);
        done_seq_.assign(static_cast<std::size_t>(m_), 0);
        job_.assign(static_cast<std::size_t>(m_), 0);
        arrived_.assign(static_cast<std::size_t>(m_), 0.0);
        waited_.assign(static_cast<std::size_t>(m_), false);
    }

    Accumulator run() {
        const double total = pp_[0].lambda + pp_[1].lambda;
        const double p1 = pp_[0].lambda / total;
        std::size_t phase = 0;
        std::uint64_t remaining = phases_[0].jobs;
        configure(phases_[0].config);

        Arrivals arr;
        arr.next = rng_.exponential(total);
        arr.seq = seq_++;
        while (arr.count < scn_.horizon || busy_total() > 0) {
            int s = -1;
            for (int j = 0; j < m_; ++j) {
                const auto u = static_cast<std::size_t>(j);
                if (serving_[u] == 0) continue;
                if (s < 0 || done_at_[u] < done_at_[static_cast<std::size_t>(s)] ||
                    (done_at_[u] == done_at_[static_cast<std::size_t>(s)] &&
                     done_seq_[u] < done_seq_[static_cast<std::size_t>(s)])) {
                    s = j;
                }
            }
            const bool arrival_next =
                arr.count < scn_.horizon &&
                (s < 0 || arr.next < done_at_[static_cast<std::size_t>(s)] ||
                 (arr.next == done_at_[static_cast<std::size_t>(s)] && arr.seq < done_seq_[static_cast<std::size_t>(s)]));
            if (arrival_next) {
                now_ = arr.next;
                while (remaining == 0) {
                    phase = (phase + 1) % phases_.size();
                    remaining = phases_[phase].jobs;
                    if (remaining > 0) configure(phases_[phase].config);
                }
                --remaining;
                const int type = rng_.uniform() < p1 ? 1 : 2;
                arrive(type, arr.count++);
                arr.next = now_ + rng_.exponential(total);
                arr.seq = seq_++;
            } else {
                now_ = done_at_[static_cast<std::size_t>(s)];
                complete(s);
            }
            check_work_conserving();
        }
        return std::move(acc_);
    }

private:
    int busy_total() const { return busy_[0] + busy_[1] + busy_[2]; }

    void configure(const SharingConfig& k) {
        const auto key = std::make_pair(k.k1_int(), k.k2_int());
        auto it = tables_.find(key);
        if (it == tables_.end()) it = tables_.emplace(key, cos::solve_assignment_rates(pp_, k)).first;
        table_ = &it->second;
        busy_ = {0, 0, 0};
        for (int j = 0; j < m_; ++j) {
            const auto u = static_cast<std::size_t>(j);
            cls_[u] = server_class(j, pp_, k);
            if (serving_[u] != 0) ++busy_[static_cast<std::size_t>(cls_[u])];
        }
        for (int j = 0; j < m_; ++j) {
            if (serving_[static_cast<std::size_t>(j)] == 0) pick(j);
        }
    }

    void start(int s, int type, std::uint64_t index, double arrived, bool waited) {
        const auto u = static_cast<std::size_t>(s);
        serving_[u] = type;
        job_[u] = index;
        arrived_[u] = arrived;
        waited_[u] = waited;
        done_at_[u] = now_ + rng_.exponential(pp_[static_cast<std::size_t>(type - 1)].nu);
        done_seq_[u] = seq_++;
        ++busy_[static_cast<std::size_t>(cls_[u])];
    }

    void arrive(int type, std::uint64_t index) {
        const auto own = static_cast<std::size_t>(type - 1);
        const cos::Occupancy x{busy_[0], busy_[1], busy_[2]};
        const auto prov = type == 1 ? Provider::first : Provider::second;
        const auto dp = cos::dispatch_probabilities(*table_, x, prov, scn_.dispatch);
        if (dp.dedicated + dp.shared <= 0.0) {
            queue_[own].push_back({index, now_});
            return;
        }
        const int target = rng_.uniform() < dp.dedicated ? static_cast<int>(own) : 2;
        for (int j = 0; j < m_; ++j) {
            const auto u = static_cast<std::size_t>(j);
            if (serving_[u] == 0 && cls_[u] == target) {
                start(j, type, index, now_, false);
                return;
            }
        }
        throw std::logic_error("dispatch chose a class without idle servers");
    }

    void complete(int s) {
        const auto u = static_cast<std::size_t>(s);
        acc_.record(serving_[u], job_[u], waited_[u], now_ - arrived_[u]);
        --busy_[static_cast<std::size_t>(cls_[u])];
        serving_[u] = 0;
        done_at_[u] = kInf;
        pick(s);
    }

    void pick(int s) {
        const int c = cls_[static_cast<std::size_t>(s)];
        int from = -1;
        if (c == 0 || c == 1) {
            if (!queue_[static_cast<std::size_t>(c)].empty()) from = c;
        } else {
            const bool a = !queue_[0].empty();
            const bool b = !queue_[1].empty();
            if (a && b) from = queue_[0].front().index < queue_[1].front().index ? 0 : 1;
            else if (a) from = 0;
            else if (b) from = 1;
        }
        if (from < 0) return;
        auto& q = queue_[static_cast<std::size_t>(from)];
        const auto w = q.front();
        q.pop_front();
        start(s, from + 1, w.index, w.arrived, true);
    }

    void check_work_conserving() const {
        for (int j = 0; j < m_; ++j) {
            const auto u = static_cast<std::size_t>(j);
            if (serving_[u] != 0) continue;
            const int c = cls_[u];
            const bool eligible = (c != 1 && !queue_[0].empty()) || (c != 0 && !queue_[1].empty());
            if (eligible) throw std::logic_error("idle server with an eligible waiting job");
        }
    }

    struct Waiting {
        std::uint64_t index;
        double arrived;
    };

    const SimScenario& scn_;
    const ProviderPair& pp_;
    std::vector<Phase> phases_;
    Rng rng_;
    Accumulator acc_;
    int m_ = 0;
    double now_ = 0.0;
    std::uint64_t seq_ = 0;
    std::vector<int> cls_;
    std::vector<int> serving_;
    std::vector<double> done_at_;
    std::vector<std::uint64_t> done_seq_;
    std::vector<std::uint64_t> job_;
    std::vector<double> arrived_;
    std::vector<bool> waited_;
    std::array<int, 3> busy_{};
    std::array<std::deque<Waiting>, 2> queue_;
    std::map<std::pair<int, int>, cos::AssignmentRateTable> tables_;
    const cos::AssignmentRateTable* table_ = nullptr;
};

class CocEngine {
public:
    CocEngine(const SimScenario& scn, std::uint64_t seed) : scn_(scn), pp_(scn.providers), rng_(seed), acc_(scn) {
        m_ = pp_[0].servers + pp_[1].servers;
        serving_.assign(static_cast<std::size_t>(m_), kIdle);
        done_at_.assign(static_cast<std::size_t>(m_), kInf);
        done_seq_.assign(static_cast<std::size_t>(m_), 0);
        queue_.resize(static_cast<std::size_t>(m_));
        jobs_.reserve(static_cast<std::size_t>(scn.horizon));
        const auto& k = scn.config;
        first_end_ = pp_[0].servers + k.k2_int();
        second_begin_ = pp_[0].servers - k.k1_int();
    }

    Accumulator run() {
        const double total = pp_[0].lambda + pp_[1].lambda;
        const double p1 = pp_[0].lambda / total;
        Arrivals arr;
        arr.next = rng_.exponential(total);
        arr.seq = seq_++;
        while (arr.count < scn_.horizon || busy_ > 0) {
            int s = -1;
            for (int j = 0; j < m_; ++j) {
                const auto u = static_cast<std::size_t>(j);
                if (serving_[u] == kIdle) continue;
                if (s < 0 || done_at_[u] < done_at_[static_cast<std::size_t>(s)] ||
                    (done_at_[u] == done_at_[static_cast<std::size_t>(s)] &&
                     done_seq_[u] < done_seq_[static_cast<std::size_t>(s)])) {
                    s = j;
                }
            }
            const bool arrival_next =
                arr.count < scn_.horizon &&
                (s < 0 || arr.next < done_at_[static_cast<std::size_t>(s)] ||
                 (arr.next == done_at_[static_cast<std::size_t>(s)] && arr.seq < done_seq_[static_cast<std::size_t>(s)]));
            if (arrival_next) {
                now_ = arr.next;
                arrive(rng_.uniform() < p1 ? 1 : 2);
                ++arr.count;
                arr.next = now_ + rng_.exponential(total);
                arr.seq = seq_++;
            } else {
                now_ = done_at_[static_cast<std::size_t>(s)];
                complete(serving_[static_cast<std::size_t>(s)]);
            }
        }
        return std::move(acc_);
    }

private:
    static constexpr std::uint32_t kIdle = std::numeric_limits<std::uint32_t>::max();

    struct Job {
        double arrived;
        int type;
        bool waited;
        bool done;
    };

    void start(int s, std::uint32_t j) {
        const auto u = static_cast<std::size_t>(s);
        serving_[u] = j;
        done_at_[u] = now_ + rng_.exponential(pp_[static_cast<std::size_t>(jobs_[j].type - 1)].nu);
        done_seq_[u] = seq_++;
        ++busy_;
    }

    void arrive(int type) {
        const auto j = static_cast<std::uint32_t>(jobs_.size());
        jobs_.push_back({now_, type, true, false});
        const int lo = type == 1 ? 0 : second_begin_;
        const int hi = type == 1 ? first_end_ : m_;
        bool any_idle = false;
        for (int s = lo; s < hi; ++s) {
            if (serving_[static_cast<std::size_t>(s)] == kIdle) {
                start(s, j);
                any_idle = true;
            } else {
                queue_[static_cast<std::size_t>(s)].push_back(j);
            }
        }
        jobs_[j].waited = !any_idle;
    }

    void complete(std::uint32_t j) {
        auto& job = jobs_[j];
        for (int s = 0; s < m_; ++s) {
            const auto u = static_cast<std::size_t>(s);
            if (serving_[u] == j && done_at_[u] < now_) {
                throw std::logic_error("replica finished before the recorded completion");
            }
        }
        job.done = true;
        acc_.record(job.type, j, job.waited, now_ - job.arrived);
        for (int s = 0; s < m_; ++s) {
            const auto u = static_cast<std::size_t>(s);
            if (serving_[u] != j) continue;
            serving_[u] = kIdle;
            done_at_[u] = kInf;
            --busy_;
            auto& q = queue_[u];
            while (!q.empty() && jobs_[q.front()].done) q.pop_front();
            if (!q.empty()) {
                const auto next = q.front();
                q.pop_front();
                start(s, next);
            }
        }
    }

    const SimScenario& scn_;
    const ProviderPair& pp_;
    Rng rng_;
    Accumulator acc_;
    int m_ = 0;
    int first_end_ = 0;
    int second_begin_ = 0;
    int busy_ = 0;
    double now_ = 0.0;
    std::uint64_t seq_ = 0;
    std::vector<std::uint32_t> serving_;
    std::vector<double> done_at_;
    std::vector<std::uint64_t> done_seq_;
    std::vector<std::deque<std::uint32_t>> queue_;
    std::vector<Job> jobs_;
};

double t_quantile(int df) {
    boost::math::students_t dist(static_cast<double>(df));
    return boost::math::quantile(boost::math::complement(dist, 0.025));
}

Estimate from_samples(double value, const std::vector<double>& samples) {
    Estimate e;
    e.value = value;
    const auto n = samples.size();
    if (n < 2) {
        e.std_error = kInf;
        e.ci_low = -kInf;
        e.ci_high = kInf;
        return e;
    }
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    e.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    const double half = t_quantile(static_cast<int>(n) - 1) * e.std_error;
    e.ci_low = value - half;
    e.ci_high = value + half;
    return e;
}

struct RunSummary {
    std::array<double, 2> wait{};
    std::array<double, 2> delay{};
    std::array<std::uint64_t, 2> jobs{};
    std::array<std::vector<double>, 2> wait_batches;
    std::array<std::vector<double>, 2> delay_batches;
};

RunSummary summarize(const Accumulator& acc) {
    RunSummary r;
    for (std::size_t i = 0; i < 2; ++i) {
        double n = 0.0, w = 0.0, d = 0.0;
        for (const auto& c : acc.cells(i)) {
            n += c[0];
            w += c[1];
            d += c[2];
            if (c[0] > 0.0) {
                r.wait_batches[i].push_back(c[1] / c[0]);
                r.delay_batches[i].push_back(c[2] / c[0]);
            }
        }
        r.jobs[i] = static_cast<std::uint64_t>(n);
        r.wait[i] = n > 0.0 ? w / n : 0.0;
        r.delay[i] = n > 0.0 ? d / n : 0.0;
    }
    return r;
}

SimResult run_all(const SimScenario& scn, const std::vector<Phase>& phases, unsigned threads) {
    validate(scn);
    const auto reps = static_cast<std::size_t>(scn.replications);
    std::vector<RunSummary> runs(reps);
    std::vector<std::exception_ptr> errors(reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t r = next++; r < reps; r = next++) {
            try {
                const auto seed = derive_seed(scn.seed, r);
                if (scn.policy == Policy::cos) {
                    runs[r] = summarize(CosEngine(scn, phases, seed).run());
                } else {
                    runs[r] = summarize(CocEngine(scn, seed).run());
                }
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const unsigned n_threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    SimResult res;
    res.seed = scn.seed;
    res.replications = scn.replications;
    for (std::size_t i = 0; i < 2; ++i) {
        auto& out = res.providers[i];
        if (reps == 1) {
            const auto& r = runs[0];
            out.wait = from_samples(r.wait[i], r.wait_batches[i]);
            out.delay = from_samples(r.delay[i], r.delay_batches[i]);
            out.jobs = r.jobs[i];
        } else {
            std::vector<double> w, d;
            double wm = 0.0, dm = 0.0;
            for (const auto& r : runs) {
                w.push_back(r.wait[i]);
                d.push_back(r.delay[i]);
                wm += r.wait[i];
                dm += r.delay[i];
                out.jobs += r.jobs[i];
            }
            out.wait = from_samples(wm / static_cast<double>(reps), w);
            out.delay = from_samples(dm / static_cast<double>(reps), d);
        }
        res.jobs += out.jobs;
    }
    return res;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replication) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (replication + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void validate(const SimScenario& scn) {
    validate(scn.providers);
    if (!(scn.horizon > scn.warmup)) throw domain_error("simulation horizon must exceed warmup");
    if (scn.replications < 1) throw domain_error("replications must be at least 1");
    if (scn.batches < 2) throw domain_error("at least two batches are required");
    if (scn.horizon - scn.warmup < static_cast<std::uint64_t>(scn.batches)) {
        throw domain_error("fewer measured jobs than batches");
    }
    if (scn.horizon > std::numeric_limits<std::uint32_t>::max() - 1ULL) throw domain_error("horizon too large");
    validate(scn.config, scn.providers, true);
}

SimResult simulate(const SimScenario& scn, unsigned threads) {
    validate(scn);
    return run_all(scn, {Phase{scn.config, scn.horizon}}, threads);
}

SimResult simulate_mixed(const SimScenario& scn, double k1, double k2, int switch_epochs, unsigned threads) {
    validate(scn.providers);
    const SharingConfig k{k1, k2};
    validate(k, scn.providers, false);
    if (k.integral()) {
        SimScenario s = scn;
        s.config = k;
        return simulate(s, threads);
    }
    if (scn.policy != Policy::cos) throw config_error("mixed configurations are supported for cancel-on-start only");
    if (switch_epochs < 1) throw domain_error("switch_epochs must be positive");

    const int n1 = scn.providers[0].servers;
    const int n2 = scn.providers[1].servers;
    const int lo1 = std::min(static_cast<int>(std::floor(k1)), n1 - 1);
    const int lo2 = std::min(static_cast<int>(std::floor(k2)), n2 - 1);
    const double f1 = k1 - lo1;
    const double f2 = k2 - lo2;
    const std::uint64_t epoch = std::max<std::uint64_t>(1, scn.horizon / static_cast<std::uint64_t>(switch_epochs));

    std::vector<Phase> phases;
    const double weights[4] = {(1 - f1) * (1 - f2), f1 * (1 - f2), (1 - f1) * f2, f1 * f2};
    const int da[4] = {0, 1, 0, 1};
    const int db[4] = {0, 0, 1, 1};
    for (int c = 0; c < 4; ++c) {
        const auto jobs = static_cast<std::uint64_t>(std::llround(weights[c] * static_cast<double>(epoch)));
        if (jobs == 0) continue;
        phases.push_back({SharingConfig{static_cast<double>(lo1 + da[c]), static_cast<double>(lo2 + db[c])}, jobs});
    }
    if (phases.empty()) throw domain_error("epoch too short for the requested mixture");
    SimScenario s = scn;
    s.config = phases.front().config;
    return run_all(s, phases, threads);
}

} // namespace pooling::sim
