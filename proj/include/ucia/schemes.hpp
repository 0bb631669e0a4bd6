// SPDX-License-Identifier: Apache-2.0
//
// ucia: user-cooperation interference alignment for two-cell MIMO broadcast channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef UCIA_SCHEMES_HPP
#define UCIA_SCHEMES_HPP

#include "ucia/align.hpp"
#include "ucia/baselines.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace ucia {

enum class Scheme { proposed, czf, subspace_proxy, percell_zf };

inline constexpr std::array<Scheme, 4> kAllSchemes{Scheme::proposed, Scheme::czf, Scheme::subspace_proxy,
                                                    Scheme::percell_zf};

inline std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::proposed:
        return "proposed";
    case Scheme::czf:
        return "czf";
    case Scheme::subspace_proxy:
        return "subspace_proxy";
    case Scheme::percell_zf:
        return "percell_zf";
    }
    return "unknown";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
    for (Scheme s : kAllSchemes)
        if (to_string(s) == name)
            return s;
    return std::nullopt;
}

inline Feasibility scheme_feasibility(Scheme s, int M, int N, int K) {
    switch (s) {
    case Scheme::proposed:
        return check_feasibility(M, N, K);
    case Scheme::czf:
        if (M < K + 1)
            return {false, "coordinated ZF needs M >= K+1"};
        return {true, "feasible"};
    case Scheme::subspace_proxy: {
        if (K < 2)
            return {false, "subspace IA proxy needs K >= 2"};
        auto f = check_feasibility(M, N, K - 1);
        if (!f)
            f.reason = "with K-1 users: " + f.reason;
        return f;
    }
    case Scheme::percell_zf:
        if (M < K)
            return {false, "per-cell ZF needs M >= K"};
        return {true, "feasible"};
    }
    return {false, "unknown scheme"};
}

inline BeamformerSet run_scheme(Scheme s, const ChannelSet& ch, const ScenarioConfig& cfg,
                                const ToleranceConfig& tol = {}) {
    switch (s) {
    case Scheme::proposed:
        return run_proposed_scheme(ch, cfg, tol);
    case Scheme::czf:
        return run_coordinated_zf(ch, cfg, tol);
    case Scheme::subspace_proxy:
        return run_subspace_ia_proxy(ch, cfg, tol);
    case Scheme::percell_zf:
        return run_percell_zf(ch, cfg, tol);
    }
    throw InvalidInput("unknown scheme");
}

} // namespace ucia

#endif
