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

#include "pooling/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pooling/erlang.hpp"
#include "pooling/errors.hpp"

namespace pooling::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(std::string_view source, const std::string& where, const std::string& what) {
    throw config_error(std::string(source) + ": " + (where.empty() ? "/" : where) + ": " + what);
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

class Reader {
public:
    explicit Reader(std::string_view source) : source_(source) {}

    void only_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> keys) const {
        if (!obj.is_object()) fail(source_, where, "expected an object");
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool known = false;
            for (auto k : keys) known = known || it.key() == k;
            if (!known) fail(source_, where, "unknown key '" + it.key() + "'");
        }
    }

    double number(const json& v, const std::string& where) const {
        if (!v.is_number()) fail(source_, where, "expected a number");
        return v.get<double>();
    }

    double positive(const json& v, const std::string& where) const {
        const double x = number(v, where);
        if (!(x > 0.0) || !std::isfinite(x)) fail(source_, where, "must be positive and finite");
        return x;
    }

    std::int64_t integer(const json& v, const std::string& where, std::int64_t min) const {
        if (!v.is_number_integer()) fail(source_, where, "expected an integer");
        const auto x = v.get<std::int64_t>();
        if (x < min) fail(source_, where, "must be at least " + std::to_string(min));
        return x;
    }

    std::string string(const json& v, const std::string& where) const {
        if (!v.is_string()) fail(source_, where, "expected a string");
        return v.get<std::string>();
    }

    std::string_view source() const { return source_; }

private:
    std::string_view source_;
};

SharingConfig pair_of(const Reader& r, const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) fail(r.source(), where, "expected [k1, k2]");
    return {r.number(v[0], where + "/0"), r.number(v[1], where + "/1")};
}

} // namespace

StudyConfig parse_config(std::string_view text, std::string_view source) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte);
        std::string msg = e.what();
        if (const auto p = msg.find(": ", msg.find("parse error")); p != std::string::npos) msg = msg.substr(p + 2);
        throw config_error(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
    const Reader r(source);
    r.only_keys(root, "", {"providers", "policy", "metric", "k", "sim", "out", "format"});

    StudyConfig cfg;
    if (!root.contains("providers")) fail(source, "", "missing 'providers'");
    const auto& provs = root["providers"];
    if (!provs.is_array() || provs.size() != 2) fail(source, "/providers", "exactly two providers are required");
    for (std::size_t i = 0; i < 2; ++i) {
        const std::string where = "/providers/" + std::to_string(i);
        const auto& p = provs[i];
        r.only_keys(p, where, {"lambda", "nu", "n", "standalone_wait"});
        if (!p.contains("n")) fail(source, where, "missing 'n'");
        auto& out = cfg.providers[i];
        out.servers = static_cast<int>(r.integer(p["n"], where + "/n", 1));
        if (out.servers > 1000) fail(source, where + "/n", "too many servers");
        out.nu = p.contains("nu") ? r.positive(p["nu"], where + "/nu") : 1.0;
        const bool has_lambda = p.contains("lambda");
        const bool has_target = p.contains("standalone_wait");
        if (has_lambda == has_target) fail(source, where, "give exactly one of 'lambda' and 'standalone_wait'");
        if (has_lambda) {
            out.lambda = r.positive(p["lambda"], where + "/lambda");
        } else {
            const double t = r.number(p["standalone_wait"], where + "/standalone_wait");
            if (!(t > 0.0 && t < 1.0)) fail(source, where + "/standalone_wait", "must lie in (0, 1)");
            cfg.standalone_wait[i] = t;
            out.lambda = invert_erlang_c(t, out.servers) * out.nu;
        }
    }

    if (root.contains("policy")) {
        try {
            cfg.policy = parse_policy(r.string(root["policy"], "/policy"));
        } catch (const config_error& e) {
            fail(source, "/policy", e.what());
        }
    }
    if (root.contains("metric")) {
        try {
            cfg.metric = parse_metric(r.string(root["metric"], "/metric"));
        } catch (const config_error& e) {
            fail(source, "/metric", e.what());
        }
    } else if (cfg.policy == Policy::coc) {
        cfg.metric = Metric::delay;
    }

    if (root.contains("k")) {
        const auto& k = root["k"];
        if (k.is_object()) {
            r.only_keys(k, "/k", {"grid"});
            if (!k.contains("grid")) fail(source, "/k", "missing 'grid'");
            const double step = r.positive(k["grid"], "/k/grid");
            if (step > 1.0) fail(source, "/k/grid", "must lie in (0, 1]");
            cfg.grid_step = step;
        } else if (k.is_array() && !k.empty() && k[0].is_array()) {
            for (std::size_t j = 0; j < k.size(); ++j) cfg.configs.push_back(pair_of(r, k[j], "/k/" + std::to_string(j)));
        } else {
            cfg.configs.push_back(pair_of(r, k, "/k"));
        }
    }

    if (root.contains("sim")) {
        const auto& s = root["sim"];
        r.only_keys(s, "/sim", {"horizon", "warmup", "replications", "batches", "seed", "dispatch", "switch_epochs"});
        SimSettings sim;
        if (s.contains("horizon")) sim.horizon = static_cast<std::uint64_t>(r.integer(s["horizon"], "/sim/horizon", 1));
        if (s.contains("warmup")) sim.warmup = static_cast<std::uint64_t>(r.integer(s["warmup"], "/sim/warmup", 0));
        if (s.contains("replications")) {
            sim.replications = static_cast<int>(r.integer(s["replications"], "/sim/replications", 1));
        }
        if (s.contains("batches")) sim.batches = static_cast<int>(r.integer(s["batches"], "/sim/batches", 2));
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned()) fail(source, "/sim/seed", "expected a non-negative integer");
            sim.seed = s["seed"].get<std::uint64_t>();
        }
        if (s.contains("dispatch")) {
            try {
                sim.dispatch = cos::parse_dispatch_rule(r.string(s["dispatch"], "/sim/dispatch"));
            } catch (const config_error& e) {
                fail(source, "/sim/dispatch", e.what());
            }
        }
        if (s.contains("switch_epochs")) {
            sim.switch_epochs = static_cast<int>(r.integer(s["switch_epochs"], "/sim/switch_epochs", 1));
        }
        cfg.sim = sim;
    }
    if (root.contains("out")) cfg.out = r.string(root["out"], "/out");
    if (root.contains("format")) {
        try {
            cfg.format = parse_format(r.string(root["format"], "/format"));
        } catch (const config_error& e) {
            fail(source, "/format", e.what());
        }
    }

    validate(cfg.providers);
    for (std::size_t j = 0; j < cfg.configs.size(); ++j) {
        try {
            validate(cfg.configs[j], cfg.providers, false);
        } catch (const domain_error& e) {
            fail(source, cfg.configs.size() == 1 && !root["k"][0].is_array() ? "/k" : "/k/" + std::to_string(j),
                 e.what());
        }
    }
    return cfg;
}

StudyConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error(path.string() + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

} // namespace pooling::cli
