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

#include "oracles.hpp"
#include "ucia/align.hpp"
#include "ucia/metrics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ucia;

namespace {

ScenarioConfig symmetric(int K, std::uint64_t seed = 1) {
    ScenarioConfig c;
    c.M = K + 1;
    c.N = K;
    c.K = K;
    c.seed = seed;
    return c;
}

} // namespace

TEST(Feasibility, BoundaryExamples) {
    EXPECT_TRUE(check_feasibility(3, 2, 2).feasible);
    const auto low = check_feasibility(2, 2, 2);
    EXPECT_FALSE(low.feasible);
    EXPECT_EQ(low.reason, "M < K+1");
    const auto high = check_feasibility(6, 4, 4);
    EXPECT_FALSE(high.feasible);
    EXPECT_EQ(high.reason, "M > (KN-1)/(K-1)");
}

TEST(Feasibility, MatchesBruteForceOverGrid) {
    for (int M = 1; M <= 12; ++M)
        for (int N = 1; N <= 10; ++N)
            for (int K = 1; K <= 9; ++K)
                EXPECT_EQ(check_feasibility(M, N, K).feasible, oracle::feasible_brute_force(M, N, K))
                    << M << "," << N << "," << K;
}

TEST(AlignmentSystem, BlockLayout) {
    std::mt19937_64 rng(4);
    std::vector<CMatrix> hs{oracle::random_matrix(rng, 2, 3), oracle::random_matrix(rng, 2, 3)};
    const CMatrix sys = alignment_system(hs);
    ASSERT_EQ(sys.rows(), 6);
    ASSERT_EQ(sys.cols(), 7);
    EXPECT_TRUE(sys.block(0, 0, 3, 3).isIdentity());
    EXPECT_TRUE(sys.block(3, 0, 3, 3).isIdentity());
    EXPECT_EQ(sys.block(0, 3, 3, 2), CMatrix(-hs[0].adjoint()));
    EXPECT_TRUE(sys.block(0, 5, 3, 2).isZero());
    EXPECT_TRUE(sys.block(3, 3, 3, 2).isZero());
    EXPECT_EQ(sys.block(3, 5, 3, 2), CMatrix(-hs[1].adjoint()));
    EXPECT_EQ(null_space_basis(sys).cols(), 1);
}

TEST(SolveAlignment, Aligns322) {
    const auto cfg = symmetric(2, 3);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const auto ch = generate_channels(cfg, t);
        for (int bs = 0; bs < kCells; ++bs) {
            const auto sol = solve_alignment(ch, bs);
            EXPECT_EQ(sol.interfering_bs, bs);
            EXPECT_NEAR(sol.h_ici.norm(), 1.0, 1e-10);
            ASSERT_EQ(sol.combiners.size(), 2u);
            for (int k = 0; k < 2; ++k) {
                EXPECT_NEAR(sol.combiners[k].norm(), 1.0, 1e-10);
                const CVector eff = ch.at(bs, other_cell(bs), k).adjoint() * sol.combiners[k];
                EXPECT_LT(collinearity_angle(eff, sol.h_ici), 1e-8);
            }
        }
    }
}

TEST(SolveAlignment, SystemShape544) {
    const auto ch = generate_channels(symmetric(4), 0);
    const auto hs = interfering_channels(ch, 0, all_users(4));
    const CMatrix sys = alignment_system(hs);
    EXPECT_EQ(sys.rows(), 20);
    EXPECT_EQ(sys.cols(), 21);
    EXPECT_EQ(null_space_basis(sys).cols(), 1);
}

TEST(SolveAlignment, NullityIsOneAcrossK) {
    for (int K = 2; K <= 8; ++K) {
        const auto cfg = symmetric(K, 100 + K);
        for (std::uint64_t t = 0; t < 5; ++t) {
            const auto ch = generate_channels(cfg, t);
            for (int bs = 0; bs < kCells; ++bs) {
                const CMatrix sys = alignment_system(interfering_channels(ch, bs, all_users(K)));
                EXPECT_EQ(sys.rows(), K * (K + 1));
                EXPECT_EQ(sys.cols(), (K + 1) + K * K);
                EXPECT_EQ(null_space_basis(sys).cols(), 1) << "K=" << K;
            }
        }
    }
}

TEST(SolveAlignment, IdenticalChannelsGiveEqualCombiners) {
    auto ch = generate_channels(symmetric(3), 2);
    for (int k = 1; k < 3; ++k)
        ch.at(0, 1, k) = ch.at(0, 1, 0);
    const auto sol = solve_alignment(ch, 0);
    for (int k = 1; k < 3; ++k)
        EXPECT_LT((sol.combiners[k] - sol.combiners[0]).norm(), 1e-10);
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(sol.combiners[k].norm(), 1.0, 1e-10);
        EXPECT_LT(collinearity_angle(ch.at(0, 1, k).adjoint() * sol.combiners[k], sol.h_ici), 1e-8);
    }
}

TEST(SolveAlignment, EmptyNullSpaceIsInfeasible) {
    // M = 4 > (2*2-1)/1 = 3 for two users with two antennas: 8 x 8 generic system.
    std::mt19937_64 rng(6);
    std::vector<CMatrix> hs{oracle::random_matrix(rng, 2, 4), oracle::random_matrix(rng, 2, 4)};
    EXPECT_THROW(align_interfering_channels(hs, 0), InfeasibleRealization);
}

TEST(SolveAlignment, VanishingCombinerIsDegenerate) {
    // A zero channel lets w[k] = 0 carry the whole null vector for the others.
    std::mt19937_64 rng(12);
    std::vector<CMatrix> hs{CMatrix::Zero(2, 3), oracle::random_matrix(rng, 2, 3)};
    EXPECT_THROW(align_interfering_channels(hs, 0), DegenerateRealization);
}

TEST(DesignPrecoders, ZeroForces322) {
    const auto cfg = symmetric(2, 8);
    const auto ch = generate_channels(cfg, 0);
    const auto towards_cell2 = solve_alignment(ch, 0);  // h_ici that BS 1 avoids, combiners of cell 2
    const auto towards_cell1 = solve_alignment(ch, 1);  // combiners of cell 1
    const auto v = design_precoders(ch, 0, towards_cell1.combiners, towards_cell2.h_ici);
    ASSERT_EQ(v.size(), 2u);
    for (int k = 0; k < 2; ++k) {
        EXPECT_NEAR(v[k].norm(), 1.0, 1e-12);
        EXPECT_LT(std::abs(towards_cell2.h_ici.dot(v[k])), 1e-8);
        const int o = 1 - k;
        EXPECT_LT(std::abs((towards_cell1.combiners[o].adjoint() * ch.at(0, 0, o) * v[k]).value()), 1e-8);
        for (int victim = 0; victim < 2; ++victim)
            EXPECT_LT(std::abs((towards_cell2.combiners[victim].adjoint() * ch.at(0, 1, victim) * v[k]).value()),
                      1e-8);
    }
}

TEST(DesignPrecoders, ZeroEffectiveRowsOnlyAvoidAlignedDirection) {
    std::mt19937_64 rng(21);
    const CVector h = oracle::random_unit(rng, 4);
    const std::vector<CVector> rows(3, CVector::Zero(4));
    const auto v = zero_forcing_precoders(rows, h);
    for (const auto& x : v) {
        EXPECT_NEAR(x.norm(), 1.0, 1e-12);
        EXPECT_LE(std::abs(h.dot(x)), 1e-8);
    }
}

TEST(DesignPrecoders, CompressedStackMatchesFullStack544) {
    const int K = 4;
    const auto cfg = symmetric(K, 31);
    for (std::uint64_t t = 0; t < 10; ++t) {
        const auto ch = generate_channels(cfg, t);
        const auto own = solve_alignment(ch, 1);    // combiners of cell 1
        const auto victim = solve_alignment(ch, 0); // combiners of cell 2, h_ici of BS 1
        const auto v = design_precoders(ch, 0, own.combiners, victim.h_ici);
        for (int k = 0; k < K; ++k) {
            CMatrix full(2 * K - 1, K + 1);
            int r = 0;
            for (int o = 0; o < K; ++o)
                if (o != k)
                    full.row(r++) = own.combiners[o].adjoint() * ch.at(0, 0, o);
            for (int o = 0; o < K; ++o)
                full.row(r++) = victim.combiners[o].adjoint() * ch.at(0, 1, o);
            const CMatrix basis = null_space_basis(full);
            ASSERT_EQ(basis.cols(), 1);
            EXPECT_LT(collinearity_angle(basis.col(0), v[k]), 1e-8);
        }
    }
}

TEST(ProposedScheme, ZeroLeakage322) {
    const auto cfg = symmetric(2, 5);
    for (std::uint64_t t = 0; t < 100; ++t) {
        const auto ch = generate_channels(cfg, t);
        const auto bf = run_proposed_scheme(ch, cfg);
        EXPECT_LT(interference_leakage(ch, bf), 1e-8);
        EXPECT_LT(max_ici_alignment_angle(ch, bf), 1e-8);
        EXPECT_TRUE(bf.satisfies_constraints(cfg.power_P));
        EXPECT_EQ(bf.active_streams(), 4);
    }
}

TEST(ProposedScheme, LargestFigureConfiguration) {
    const auto cfg = symmetric(8, 6);
    const auto ch = generate_channels(cfg, 0);
    const auto bf = run_proposed_scheme(ch, cfg);
    int count = 0;
    for (int i = 0; i < kCells; ++i)
        for (int k = 0; k < 8; ++k) {
            EXPECT_NEAR(bf.precoders[i][k].norm(), 1.0, 1e-10);
            EXPECT_NEAR(bf.combiners[i][k].norm(), 1.0, 1e-10);
            EXPECT_NEAR(bf.stream_power[i][k], cfg.power_P / 8, 1e-15);
            ++count;
        }
    EXPECT_EQ(count, 16);
    EXPECT_LT(interference_leakage(ch, bf), 1e-8);
}

TEST(ProposedScheme, RejectsInfeasibleBeforeComputing) {
    ScenarioConfig cfg;
    cfg.M = 2;
    cfg.N = 2;
    cfg.K = 2;
    // Deliberately mismatched channels: the feasibility guard must fire first.
    const ChannelSet ch(7, 7, 3);
    EXPECT_THROW(run_proposed_scheme(ch, cfg), InvalidInput);
}

TEST(ProposedScheme, SingleUserIsTwoCellZeroForcing) {
    ScenarioConfig cfg;
    cfg.M = 2;
    cfg.N = 1;
    cfg.K = 1;
    const auto ch = generate_channels(cfg, 0);
    const auto bf = run_proposed_scheme(ch, cfg);
    EXPECT_LT(interference_leakage(ch, bf), 1e-8);
    EXPECT_EQ(bf.active_streams(), 2);
}

TEST(ProposedScheme, MoreAntennasThanNeeded) {
    // (5, 4, 3): alignment nullity 2, precoder nullity 2; construction still leak-free.
    ScenarioConfig cfg;
    cfg.M = 5;
    cfg.N = 4;
    cfg.K = 3;
    ASSERT_TRUE(check_feasibility(5, 4, 3).feasible);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const auto ch = generate_channels(cfg, t);
        const auto bf = run_proposed_scheme(ch, cfg);
        EXPECT_LT(interference_leakage(ch, bf), 1e-8);
    }
}
