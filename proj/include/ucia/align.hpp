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

#ifndef UCIA_ALIGN_HPP
#define UCIA_ALIGN_HPP

// Interference alignment through user cooperation.
//
// The users of one cell share the channels they see from the neighbouring base station and
// jointly pick receive combiners w[k] such that every effective interfering channel
// H[k]^H w[k] points along one common direction h_ici. The neighbouring base station then
// only has to avoid that single direction, leaving K - 1 dimensions for zero-forcing its own
// inter-user interference, so M = K + 1 antennas serve K users per cell with no leakage.

#include "ucia/beamformers.hpp"
#include "ucia/linalg.hpp"
#include "ucia/scenario.hpp"

#include <array>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace ucia {

struct Feasibility {
    bool feasible = false;
    std::string reason;

    explicit operator bool() const { return feasible; }
};

/// Antenna-count feasibility of the alignment construction.
///
/// Requires M >= K + 1 (one free dimension after nulling K - 1 co-cell rows and the aligned
/// direction) and (M + KN) - KM >= 1 (the stacked alignment system has a null vector).
inline Feasibility check_feasibility(int M, int N, int K) {
    if (M < 1 || N < 1 || K < 1)
        return {false, "M, N and K must be at least 1"};
    if (M < K + 1)
        return {false, "M < K+1"};
    if ((M + K * N) - K * M < 1)
        return {false, "M > (KN-1)/(K-1)"};
    return {true, "feasible"};
}

struct AlignmentSolution {
    int interfering_bs = 0;          // base station whose outgoing interference is aligned
    CVector h_ici;                   // unit-norm aligned direction, length M
    std::vector<CVector> combiners;  // unit-norm receive combiners of the victim users, length N each
};

/// Stacked system [I_M, -H_1^H, 0, ...; I_M, 0, -H_2^H, ...; ...] of size KM x (M + KN).
inline CMatrix alignment_system(std::span<const CMatrix> interfering) {
    if (interfering.empty())
        throw InvalidInput("alignment_system: no channels");
    const Eigen::Index n = interfering.front().rows();
    const Eigen::Index m = interfering.front().cols();
    const auto k_count = static_cast<Eigen::Index>(interfering.size());
    CMatrix sys = CMatrix::Zero(k_count * m, m + k_count * n);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const CMatrix& h = interfering[static_cast<std::size_t>(k)];
        if (h.rows() != n || h.cols() != m)
            throw InvalidInput("alignment_system: channel dimensions differ");
        sys.block(k * m, 0, m, m).setIdentity();
        sys.block(k * m, m + k * n, m, n) = -h.adjoint();
    }
    return sys;
}

/// Aligns the effective interfering channels seen by a group of cooperating users.
///
/// `interfering[k]` is the N x M channel from the interfering base station to user k. Only
/// shared CSI is read, so each cooperating user can run this locally and obtain the same
/// bit-identical answer.
inline AlignmentSolution align_interfering_channels(std::span<const CMatrix> interfering, int interfering_bs,
                                                    const ToleranceConfig& tol = {}) {
    const CMatrix sys = alignment_system(interfering);
    const CMatrix basis = null_space_basis(sys, tol);
    if (basis.cols() == 0)
        throw InfeasibleRealization("alignment system has an empty null space");

    const Eigen::Index m = interfering.front().cols();
    const Eigen::Index n = interfering.front().rows();
    const CVector x = basis.col(0);

    AlignmentSolution sol;
    sol.interfering_bs = interfering_bs;
    sol.h_ici = x.head(m);
    if (sol.h_ici.norm() < 1e-12)
        throw DegenerateRealization("aligned direction vanished");
    sol.h_ici.normalize();
    canonicalize_phase(sol.h_ici);

    for (std::size_t k = 0; k < interfering.size(); ++k) {
        CVector w = x.segment(m + static_cast<Eigen::Index>(k) * n, n);
        if (w.norm() < 1e-12)
            throw DegenerateRealization("combiner segment vanished");
        w.normalize();
        canonicalize_phase(w);
        const CVector effective = interfering[k].adjoint() * w;
        if (effective.norm() < 1e-12 || collinearity_angle(effective, sol.h_ici) > tol.align_tol)
            throw DegenerateRealization("effective interfering channels failed to align");
        sol.combiners.push_back(std::move(w));
    }
    return sol;
}

// Interfering channels from `interfering_bs` to the listed users of the other cell.
inline std::vector<CMatrix> interfering_channels(const ChannelSet& ch, int interfering_bs, std::span<const int> users) {
    std::vector<CMatrix> out;
    out.reserve(users.size());
    for (int k : users)
        out.push_back(ch.at(interfering_bs, other_cell(interfering_bs), k));
    return out;
}

inline std::vector<int> all_users(int K) {
    std::vector<int> u(static_cast<std::size_t>(K));
    std::iota(u.begin(), u.end(), 0);
    return u;
}

inline AlignmentSolution solve_alignment(const ChannelSet& ch, int interfering_bs, std::span<const int> users,
                                         const ToleranceConfig& tol = {}) {
    const auto hs = interfering_channels(ch, interfering_bs, users);
    return align_interfering_channels(hs, interfering_bs, tol);
}

inline AlignmentSolution solve_alignment(const ChannelSet& ch, int interfering_bs, const ToleranceConfig& tol = {}) {
    const auto users = all_users(ch.K());
    return solve_alignment(ch, interfering_bs, users, tol);
}

/// Zero-forcing precoders for one base station.
///
/// `effective[k]` is (w[k]^H H[k])^H for the k-th served user. Precoder k lies in the null
/// space of the other users' effective rows stacked with h_ici^H.
inline std::vector<CVector> zero_forcing_precoders(std::span<const CVector> effective, const CVector& h_ici,
                                                   const ToleranceConfig& tol = {}) {
    const auto count = static_cast<Eigen::Index>(effective.size());
    const Eigen::Index m = h_ici.size();
    std::vector<CVector> out;
    out.reserve(effective.size());
    for (Eigen::Index k = 0; k < count; ++k) {
        CMatrix constraints(count, m);
        Eigen::Index r = 0;
        for (Eigen::Index o = 0; o < count; ++o)
            if (o != k)
                constraints.row(r++) = effective[static_cast<std::size_t>(o)].adjoint();
        constraints.row(r) = h_ici.adjoint();
        const CMatrix basis = null_space_basis(constraints, tol);
        if (basis.cols() == 0)
            throw DegenerateRealization("precoder constraint stack has full rank");
        out.emplace_back(basis.col(0));
    }
    return out;
}

// Serving-cell effective channel H_i^[k,i]^H w^[k,i] of each listed user.
inline std::vector<CVector> effective_serving_channels(const ChannelSet& ch, int cell, std::span<const int> users,
                                                       std::span<const CVector> combiners) {
    if (users.size() != combiners.size())
        throw InvalidInput("effective_serving_channels: one combiner per user required");
    std::vector<CVector> out;
    out.reserve(users.size());
    for (std::size_t n = 0; n < users.size(); ++n)
        out.push_back(ch.at(cell, cell, users[n]).adjoint() * combiners[n]);
    return out;
}

/// Precoders of base station `own_cell` for the listed users.
///
/// `h_ici` is the aligned direction of this base station's own outgoing interference, i.e.
/// the one produced by solve_alignment(ch, own_cell).
inline std::vector<CVector> design_precoders(const ChannelSet& ch, int own_cell, std::span<const int> users,
                                             std::span<const CVector> own_combiners, const CVector& h_ici,
                                             const ToleranceConfig& tol = {}) {
    const auto rows = effective_serving_channels(ch, own_cell, users, own_combiners);
    return zero_forcing_precoders(rows, h_ici, tol);
}

inline std::vector<CVector> design_precoders(const ChannelSet& ch, int own_cell, std::span<const CVector> own_combiners,
                                             const CVector& h_ici, const ToleranceConfig& tol = {}) {
    const auto users = all_users(ch.K());
    return design_precoders(ch, own_cell, users, own_combiners, h_ici, tol);
}

/// Runs alignment and precoding for a subset of users in each cell.
///
/// `served[i]` lists the users of cell i that receive a stream; power_P is split equally
/// among them. Users outside the subset stay idle.
inline BeamformerSet run_alignment_scheme(const ChannelSet& ch, const std::array<std::vector<int>, kCells>& served,
                                          double power_P, const ToleranceConfig& tol = {}) {
    BeamformerSet bf = BeamformerSet::idle(ch.M(), ch.N(), ch.K());
    std::array<AlignmentSolution, kCells> aligned;
    // aligned[j] fixes the combiners of cell other_cell(j) and the direction BS j must avoid.
    for (int j = 0; j < kCells; ++j)
        aligned[j] = solve_alignment(ch, j, served[other_cell(j)], tol);
    for (int i = 0; i < kCells; ++i) {
        const auto& own_combiners = aligned[other_cell(i)].combiners;
        const auto precoders = design_precoders(ch, i, served[i], own_combiners, aligned[i].h_ici, tol);
        for (std::size_t n = 0; n < served[i].size(); ++n) {
            bf.combiners[i][served[i][n]] = own_combiners[n];
            bf.precoders[i][served[i][n]] = precoders[n];
        }
    }
    bf.assign_equal_power(power_P, served);
    return bf;
}

/// The full cooperative alignment scheme: every user of both cells gets one stream.
///
/// For K = 1 this reduces to two-cell zero-forcing against the single cross link.
inline BeamformerSet run_proposed_scheme(const ChannelSet& ch, const ScenarioConfig& cfg,
                                         const ToleranceConfig& tol = {}) {
    if (const auto f = check_feasibility(cfg.M, cfg.N, cfg.K); !f)
        throw InvalidInput("infeasible configuration: " + f.reason);
    if (ch.M() != cfg.M || ch.N() != cfg.N || ch.K() != cfg.K)
        throw InvalidInput("channel dimensions do not match the scenario");
    const auto users = all_users(cfg.K);
    return run_alignment_scheme(ch, {users, users}, cfg.power_P, tol);
}

} // namespace ucia

#endif
