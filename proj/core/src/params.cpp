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

#include "pooling/params.hpp"

#include <cmath>
#include <sstream>

#include "pooling/errors.hpp"

namespace pooling {

namespace {

bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

std::string provider_label(std::size_t i) { return "provider " + std::to_string(i + 1); }

} // namespace

void validate(const ProviderParams& p) {
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
        throw domain_error("arrival rate must be positive and finite");
    }
    if (!(p.nu > 0.0) || !std::isfinite(p.nu)) {
        throw domain_error("service rate must be positive and finite");
    }
    if (p.servers < 1) {
        throw domain_error("server count must be at least 1");
    }
    if (!(p.load() < p.servers)) {
        std::ostringstream os;
        os << "unstable: load " << p.load() << " >= " << p.servers << " servers";
        throw instability_error(os.str());
    }
}

void validate(const ProviderPair& pp) {
    for (std::size_t i = 0; i < 2; ++i) {
        try {
            validate(pp[i]);
        } catch (const instability_error& e) {
            throw instability_error(provider_label(i) + ": " + e.what());
        } catch (const domain_error& e) {
            throw domain_error(provider_label(i) + ": " + e.what());
        }
    }
}

ProviderPair swapped(const ProviderPair& pp) noexcept { return {pp[1], pp[0]}; }

bool SharingConfig::integral() const noexcept { return is_integer(k1) && is_integer(k2); }

int SharingConfig::k1_int() const {
    if (!is_integer(k1)) throw domain_error("k1 is not an integer");
    return static_cast<int>(k1);
}

int SharingConfig::k2_int() const {
    if (!is_integer(k2)) throw domain_error("k2 is not an integer");
    return static_cast<int>(k2);
}

void validate(const SharingConfig& k, const ProviderPair& pp, bool require_integral) {
    for (std::size_t i = 0; i < 2; ++i) {
        const double v = k[i];
        if (!std::isfinite(v) || v < 0.0 || v > pp[i].servers) {
            std::ostringstream os;
            os << "k" << i + 1 << " = " << v << " outside [0, " << pp[i].servers << "]";
            throw domain_error(os.str());
        }
        if (require_integral && !is_integer(v)) {
            std::ostringstream os;
            os << "k" << i + 1 << " = " << v << " must be an integer";
            throw domain_error(os.str());
        }
    }
}

std::string_view to_string(Policy p) noexcept { return p == Policy::coc ? "coc" : "cos"; }

std::string_view to_string(Metric m) noexcept { return m == Metric::wait ? "wait" : "delay"; }

std::string_view to_string(Provenance p) noexcept {
    switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::ctmc: return "ctmc";
    case Provenance::simulation: return "simulation";
    }
    return "analytic";
}

Policy parse_policy(std::string_view s) {
    if (s == "coc") return Policy::coc;
    if (s == "cos") return Policy::cos;
    throw config_error("unknown policy '" + std::string(s) + "' (expected coc or cos)");
}

Metric parse_metric(std::string_view s) {
    if (s == "wait") return Metric::wait;
    if (s == "delay") return Metric::delay;
    throw config_error("unknown metric '" + std::string(s) + "' (expected wait or delay)");
}

} // namespace pooling
