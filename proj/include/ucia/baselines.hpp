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

#ifndef UCIA_BASELINES_HPP
#define UCIA_BASELINES_HPP

// Reference schemes.
//
// coordinated_zf     global-CSI transmit zero-forcing over K + 1 streams (all of cell 1,
//                    user 1 of cell 2) with dominant-singular-vector combiners; DoF K + 1
//                    at (K+1, K, K).
// subspace_ia_proxy  the cooperative alignment run with K - 1 users per cell; reaches the
//                    2(K - 1) DoF of subspace alignment, not its precoder cascade.
// percell_zf         each base station nulls its own inter-user interference only; the
//                    untreated inter-cell interference makes the sum rate saturate.

#include "ucia/align.hpp"
#include "ucia/beamformers.hpp"
#include "ucia/linalg.hpp"
#include "ucia/scenario.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace ucia {

enum class BaselineScheme { coordinated_zf, subspace_ia_proxy, percell_zf };

struct BaselineChoice {
    BaselineScheme scheme = BaselineScheme::coordinated_zf;
    std::array<std::vector<int>, kCells> active;  // served users per cell

    int active_streams(int cell) const { return static_cast<int>(active[cell].size()); }
    int total_streams() const { return active_streams(0) + active_streams(1); }
};

// min{2M, 2KN, max(M, N)}
inline int czf_dof(int M, int N, int K) {
    return std::min({2 * M, 2 * K * N, std::max(M, N)});
}

inline BaselineChoice baseline_choice(BaselineScheme scheme, int K) {
    BaselineChoice c;
    c.scheme = scheme;
    switch (scheme) {
    case BaselineScheme::coordinated_zf:
        c.active[0] = all_users(K);
        c.active[1] = {0};
        break;
    case BaselineScheme::subspace_ia_proxy:
        c.active[0] = all_users(K - 1);
        c.active[1] = all_users(K - 1);
        break;
    case BaselineScheme::percell_zf:
        c.active[0] = all_users(K);
        c.active[1] = all_users(K);
        break;
    }
    return c;
}

inline BeamformerSet run_coordinated_zf(const ChannelSet& ch, const ScenarioConfig& cfg,
                                        const ToleranceConfig& tol = {}) {
    if (cfg.M < cfg.K + 1)
        throw InvalidInput("coordinated ZF needs M >= K+1");
    const auto choice = baseline_choice(BaselineScheme::coordinated_zf, cfg.K);
    BeamformerSet bf = BeamformerSet::idle(cfg.M, cfg.N, cfg.K);

    struct Stream {
        int cell, user;
    };
    std::vector<Stream> streams;
    for (int i = 0; i < kCells; ++i)
        for (int k : choice.active[i]) {
            streams.push_back({i, k});
            bf.combiners[i][k] = dominant_left_singular_vector(ch.at(i, i, k));
        }

    // Stream s leaves BS streams[s].cell; it must vanish at every other active receiver.
    for (const Stream& s : streams) {
        const int bs = s.cell;
        CMatrix constraints(static_cast<Eigen::Index>(streams.size() - 1), cfg.M);
        Eigen::Index r = 0;
        for (const Stream& o : streams) {
            if (o.cell == s.cell && o.user == s.user)
                continue;
            constraints.row(r++) = bf.combiners[o.cell][o.user].adjoint() * ch.at(bs, o.cell, o.user);
        }
        const CMatrix basis = null_space_basis(constraints, tol);
        if (basis.cols() == 0)
            throw DegenerateRealization("coordinated ZF constraint stack has full rank");
        bf.precoders[s.cell][s.user] = basis.col(0);
    }
    bf.assign_equal_power(cfg.power_P, choice.active);
    return bf;
}

inline BeamformerSet run_subspace_ia_proxy(const ChannelSet& ch, const ScenarioConfig& cfg,
                                           const ToleranceConfig& tol = {}) {
    if (cfg.K < 2)
        throw InvalidInput("subspace IA proxy needs K >= 2");
    if (const auto f = check_feasibility(cfg.M, cfg.N, cfg.K - 1); !f)
        throw InvalidInput("subspace IA proxy infeasible with K-1 users: " + f.reason);
    const auto choice = baseline_choice(BaselineScheme::subspace_ia_proxy, cfg.K);
    return run_alignment_scheme(ch, choice.active, cfg.power_P, tol);
}

inline BeamformerSet run_percell_zf(const ChannelSet& ch, const ScenarioConfig& cfg,
                                    const ToleranceConfig& tol = {}) {
    if (cfg.M < cfg.K)
        throw InvalidInput("per-cell ZF needs M >= K");
    const auto choice = baseline_choice(BaselineScheme::percell_zf, cfg.K);
    BeamformerSet bf = BeamformerSet::idle(cfg.M, cfg.N, cfg.K);
    for (int i = 0; i < kCells; ++i) {
        for (int k = 0; k < cfg.K; ++k)
            bf.combiners[i][k] = dominant_left_singular_vector(ch.at(i, i, k));
        for (int k = 0; k < cfg.K; ++k) {
            if (cfg.K == 1) {
                bf.precoders[i][k] = ch.at(i, i, k).adjoint() * bf.combiners[i][k];
                bf.precoders[i][k].normalize();
                continue;
            }
            CMatrix constraints(cfg.K - 1, cfg.M);
            Eigen::Index r = 0;
            for (int o = 0; o < cfg.K; ++o)
                if (o != k)
                    constraints.row(r++) = bf.combiners[i][o].adjoint() * ch.at(i, i, o);
            const CMatrix basis = null_space_basis(constraints, tol);
            if (basis.cols() == 0)
                throw DegenerateRealization("per-cell ZF constraint stack has full rank");
            // Strongest direction of the desired effective channel inside the null space.
            const CVector desired = ch.at(i, i, k).adjoint() * bf.combiners[i][k];
            CVector v = basis * (basis.adjoint() * desired);
            if (v.norm() < 1e-12)
                v = basis.col(0);
            v.normalize();
            bf.precoders[i][k] = v;
        }
    }
    bf.assign_equal_power(cfg.power_P, choice.active);
    return bf;
}

} // namespace ucia

#endif
